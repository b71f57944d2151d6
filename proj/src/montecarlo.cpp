#include "noma/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

namespace noma::montecarlo {

using analytic::Scenario1Config;
using analytic::Scenario2Config;

Estimate Estimate::from_counts(std::uint64_t events, std::uint64_t trials) {
    Estimate e;
    e.trials = trials;
    e.events = events;
    if (trials == 0) return e;
    e.p_hat = static_cast<double>(events) / static_cast<double>(trials);
    e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(trials));
    return e;
}

Slot1Sinr sinr_slot1(const ChannelDraw& draw, const Scenario1Config& cfg, double rho) {
    const double h_f = draw.h_sd.at(static_cast<std::size_t>(cfg.f - 1));
    const double h_n = draw.h_sd.at(static_cast<std::size_t>(cfg.n - 1));
    Slot1Sinr s;
    s.far = h_f * cfg.a_f * rho / (h_f * cfg.a_n * rho + 1.0);
    s.far_at_near = h_n * cfg.a_f * rho / (h_n * cfg.a_n * rho + 1.0);
    s.near = h_n * cfg.a_n * rho;
    return s;
}

Slot2Sinr sinr_slot2(const ChannelDraw& draw, const Scenario1Config& cfg, double rho, double C) {
    const double g_f = draw.h_sr * draw.h_rd_f;
    const double g_n = draw.h_sr * draw.h_rd_n;
    Slot2Sinr s;
    s.far = g_f * cfg.a_f * rho / (g_f * cfg.a_n * rho + draw.h_rd_f + C);
    s.far_at_near = g_n * cfg.a_f * rho / (g_n * cfg.a_n * rho + draw.h_rd_n + C);
    s.near = g_n * cfg.a_n * rho / (draw.h_rd_n + C);
    return s;
}

double sinr_s2(double gain, const Scenario2Config& cfg, double rho, int i, int m) {
    const int K = cfg.users();
    if (i < 1 || i > m || m > K) throw std::out_of_range("sinr_s2: need 1 <= i <= m <= users");
    const auto ui = static_cast<std::size_t>(i - 1);
    if (i == K) return gain * cfg.a[ui] * rho;
    double rest = 0.0;
    for (std::size_t j = ui + 1; j < cfg.a.size(); ++j) rest += cfg.a[j];
    return gain * cfg.a[ui] * rho / (rho * gain * rest + 1.0);
}

ChannelDraw draw_scenario1(const Scenario1Config& cfg, fading::RandomStream& rng) {
    ChannelDraw d;
    draw_scenario1(cfg, rng, d);
    return d;
}

void draw_scenario1(const Scenario1Config& cfg, fading::RandomStream& rng, ChannelDraw& d) {
    d.h_sd.resize(static_cast<std::size_t>(cfg.M));
    fading::sample_sorted_gains({cfg.mu, 1.0}, d.h_sd, rng);
    // Unit-mean order statistics scaled per user; with one shared omega_sd
    // this is exactly a sorted draw at that power.
    for (std::size_t k = 0; k < d.h_sd.size(); ++k) {
        d.h_sd[k] *= k == static_cast<std::size_t>(cfg.n - 1) ? cfg.omega_sd_n : cfg.omega_sd_f;
    }
    d.h_sr = fading::sample_gain({cfg.mu, cfg.omega_sr}, rng);
    d.h_rd_f = fading::sample_gain({cfg.mu, cfg.omega_rd_f}, rng);
    d.h_rd_n = fading::sample_gain({cfg.mu, cfg.omega_rd_n}, rng);
}

namespace {

bool far_outage(const ChannelDraw& draw, const Scenario1Config& cfg, double rho, double C, double gamma_f) {
    return sinr_slot1(draw, cfg, rho).far < gamma_f && sinr_slot2(draw, cfg, rho, C).far < gamma_f;
}

bool near_outage(const ChannelDraw& draw, const Scenario1Config& cfg, double rho, double C, double gamma_f,
                 double gamma_n) {
    const auto s1 = sinr_slot1(draw, cfg, rho);
    const auto s2 = sinr_slot2(draw, cfg, rho, C);
    const bool direct_ok = s1.far_at_near >= gamma_f && s1.near >= gamma_n;
    const bool relay_ok = s2.far_at_near >= gamma_f && s2.near >= gamma_n;
    return !(direct_ok || relay_ok);
}

}  // namespace

bool far_outage_event(const ChannelDraw& draw, const Scenario1Config& cfg, double rho, double C) {
    return far_outage(draw, cfg, rho, C, analytic::threshold_snr(cfg.R_f, 2));
}

bool near_outage_event(const ChannelDraw& draw, const Scenario1Config& cfg, double rho, double C) {
    return near_outage(draw, cfg, rho, C, analytic::threshold_snr(cfg.R_f, 2), analytic::threshold_snr(cfg.R_n, 2));
}

unsigned worker_threads(unsigned chunks) {
    unsigned cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NOMA_PERF_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) cap = std::min(cap, static_cast<unsigned>(v));
    }
    return std::max(1u, std::min(cap, std::max(1u, chunks)));
}

std::vector<std::uint64_t> run_blocks(const TrialBatch& batch, std::size_t counters, const BlockKernel& block) {
    if (batch.chunks == 0) throw std::invalid_argument("TrialBatch: chunks must be positive");
    std::vector<std::uint64_t> total(counters, 0);
    if (batch.trials == 0) return total;
    const std::uint64_t blocks = (batch.trials + kBlockSize - 1) / kBlockSize;
    const std::uint64_t chunks = std::min<std::uint64_t>(batch.chunks, blocks);

    std::vector<std::vector<std::uint64_t>> per_chunk(chunks, std::vector<std::uint64_t>(counters, 0));
    auto run_chunk = [&](std::uint64_t c) {
        const std::uint64_t first = blocks * c / chunks;
        const std::uint64_t last = blocks * (c + 1) / chunks;
        std::vector<std::uint64_t> local(counters);
        for (std::uint64_t b = first; b < last; ++b) {
            const std::uint64_t begin = b * kBlockSize;
            const std::uint64_t count = std::min(kBlockSize, batch.trials - begin);
            fading::RandomStream rng(batch.seed, b);
            std::fill(local.begin(), local.end(), 0);
            block(rng, count, local);
            for (std::size_t k = 0; k < counters; ++k) per_chunk[c][k] += local[k];
        }
    };

    const unsigned workers = worker_threads(static_cast<unsigned>(chunks));
    if (workers <= 1) {
        for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::uint64_t c = next++; c < chunks; c = next++) run_chunk(c);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& local : per_chunk) {
        for (std::size_t k = 0; k < counters; ++k) total[k] += local[k];
    }
    return total;
}

Scenario1Estimates estimate_scenario1(const Scenario1Config& cfg, double rho, const TrialBatch& batch) {
    cfg.validate();
    if (!(rho > 0.0)) throw std::domain_error("SNR rho must be positive");
    const double C = analytic::relay_constant(cfg, rho);
    const double gamma_f = analytic::threshold_snr(cfg.R_f, 2);
    const double gamma_n = analytic::threshold_snr(cfg.R_n, 2);
    const auto counts = run_blocks(batch, 2, [&](fading::RandomStream& rng, std::uint64_t n, std::span<std::uint64_t> out) {
        ChannelDraw draw;
        for (std::uint64_t t = 0; t < n; ++t) {
            draw_scenario1(cfg, rng, draw);
            out[0] += far_outage(draw, cfg, rho, C, gamma_f) ? 1 : 0;
            out[1] += near_outage(draw, cfg, rho, C, gamma_f, gamma_n) ? 1 : 0;
        }
    });
    return {Estimate::from_counts(counts[0], batch.trials), Estimate::from_counts(counts[1], batch.trials)};
}

Estimate estimate_outage_far(const Scenario1Config& cfg, double rho, const TrialBatch& batch) {
    return estimate_scenario1(cfg, rho, batch).far;
}

Estimate estimate_outage_near(const Scenario1Config& cfg, double rho, const TrialBatch& batch) {
    return estimate_scenario1(cfg, rho, batch).near;
}

std::vector<Estimate> estimate_scenario2(const Scenario2Config& cfg, double rho, const TrialBatch& batch) {
    cfg.validate();
    if (!(rho > 0.0)) throw std::domain_error("SNR rho must be positive");
    const int K = cfg.users();
    std::vector<double> thresholds;
    for (double r : cfg.R) thresholds.push_back(analytic::threshold_snr(r, 1));

    const auto counts = run_blocks(batch, static_cast<std::size_t>(K),
                                   [&](fading::RandomStream& rng, std::uint64_t n, std::span<std::uint64_t> out) {
        std::vector<double> sorted(static_cast<std::size_t>(cfg.M));
        for (std::uint64_t t = 0; t < n; ++t) {
            fading::sample_sorted_gains({cfg.mu, 1.0}, sorted, rng);
            for (int m = 1; m <= K; ++m) {
                const auto um = static_cast<std::size_t>(m - 1);
                const double gain = sorted[static_cast<std::size_t>(cfg.rank_of(m) - 1)] * cfg.omega[um];
                bool outage = false;
                for (int i = 1; i <= m && !outage; ++i) {
                    outage = sinr_s2(gain, cfg, rho, i, m) < thresholds[static_cast<std::size_t>(i - 1)];
                }
                out[um] += outage ? 1 : 0;
            }
        }
    });
    std::vector<Estimate> out;
    for (auto c : counts) out.push_back(Estimate::from_counts(c, batch.trials));
    return out;
}

Estimate estimate_outage_s2(const Scenario2Config& cfg, double rho, int user, const TrialBatch& batch) {
    const auto all = estimate_scenario2(cfg, rho, batch);
    if (user < 1 || user > static_cast<int>(all.size())) throw std::out_of_range("user index out of range");
    return all[static_cast<std::size_t>(user - 1)];
}

}  // namespace noma::montecarlo
