#pragma once

#include "noma/analytic.hpp"
#include "noma/fading.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace noma::montecarlo {

/// One realization of every link power in scenario 1.
struct ChannelDraw {
    std::vector<double> h_sd;  ///< ascending BS->user gains, rank m at index m-1
    double h_sr = 0.0;
    double h_rd_f = 0.0;
    double h_rd_n = 0.0;
};

/// Trials are cut into fixed blocks of kBlockSize, and block b always draws
/// from RandomStream(seed, b). `chunks` only controls how blocks are shared
/// out between workers, so results do not depend on it.
struct TrialBatch {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    unsigned chunks = 1;
};

inline constexpr std::uint64_t kBlockSize = 1u << 14;

struct Estimate {
    double p_hat = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t events = 0;

    static Estimate from_counts(std::uint64_t events, std::uint64_t trials);
};

struct Slot1Sinr {
    double far = 0.0;          ///< d_f decoding x_f
    double far_at_near = 0.0;  ///< d_n decoding x_f before SIC
    double near = 0.0;         ///< d_n decoding x_n after SIC
};

struct Slot2Sinr {
    double far = 0.0;
    double far_at_near = 0.0;
    double near = 0.0;
};

/// Direct-link SINRs of the first slot.
Slot1Sinr sinr_slot1(const ChannelDraw& draw, const analytic::Scenario1Config& cfg, double rho);
/// Relayed SINRs of the second slot with fixed-gain constant C = 1/kappa^2.
Slot2Sinr sinr_slot2(const ChannelDraw& draw, const analytic::Scenario1Config& cfg, double rho, double C);

/// SINR at served user m when decoding user i's message (1 <= i <= m).
double sinr_s2(double gain, const analytic::Scenario2Config& cfg, double rho, int i, int m);

ChannelDraw draw_scenario1(const analytic::Scenario1Config& cfg, fading::RandomStream& rng);
void draw_scenario1(const analytic::Scenario1Config& cfg, fading::RandomStream& rng, ChannelDraw& out);

/// Outage indicators straight from the SINR expressions: the far user fails
/// when both copies miss its threshold; the near user fails unless some
/// slot lets it decode both messages.
bool far_outage_event(const ChannelDraw& draw, const analytic::Scenario1Config& cfg, double rho, double C);
bool near_outage_event(const ChannelDraw& draw, const analytic::Scenario1Config& cfg, double rho, double C);

struct Scenario1Estimates {
    Estimate far;
    Estimate near;
};

Scenario1Estimates estimate_scenario1(const analytic::Scenario1Config& cfg, double rho, const TrialBatch& batch);
Estimate estimate_outage_far(const analytic::Scenario1Config& cfg, double rho, const TrialBatch& batch);
Estimate estimate_outage_near(const analytic::Scenario1Config& cfg, double rho, const TrialBatch& batch);

/// One estimate per served user from shared draws. User k's gain is the
/// rank_k order statistic of M unit-mean draws, scaled by omega_k.
std::vector<Estimate> estimate_scenario2(const analytic::Scenario2Config& cfg, double rho, const TrialBatch& batch);
Estimate estimate_outage_s2(const analytic::Scenario2Config& cfg, double rho, int user, const TrialBatch& batch);

/// Counts events over blocks. `block` receives the block's stream, the
/// number of trials in the block and a zeroed counter array to increment.
using BlockKernel = std::function<void(fading::RandomStream&, std::uint64_t, std::span<std::uint64_t>)>;
std::vector<std::uint64_t> run_blocks(const TrialBatch& batch, std::size_t counters, const BlockKernel& block);

/// Worker count for `chunks` partitions, capped by NOMA_PERF_THREADS and
/// the hardware.
unsigned worker_threads(unsigned chunks);

}  // namespace noma::montecarlo
