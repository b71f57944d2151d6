#pragma once

#include "noma/fading.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace noma::analytic {

/// Raised when a configuration breaks one of its invariants. The message
/// names the violated invariant.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exact results below this are reported as 0 with `below_floor` set.
inline constexpr double kProbabilityFloor = 1e-300;

enum class GainMode {
    literal_kappa,     ///< C = 1 / kappa^2
    power_normalized,  ///< C = omega_sr + 1 / rho (kappa from P_s = P_r)
};

/// Two-user cooperative NOMA with a fixed-gain AF relay and direct links.
/// Defaults are the reference setup: M = 5, f = 1, n = 5, a = 0.8/0.2,
/// R = 1/1.5, kappa = 0.9, relay halfway with path-loss exponent 2.
struct Scenario1Config {
    int M = 5;
    int f = 1;
    int n = 5;
    double a_f = 0.8;
    double a_n = 0.2;
    double R_f = 1.0;
    double R_n = 1.5;
    double kappa = 0.9;
    GainMode gain_mode = GainMode::literal_kappa;
    double omega_sd_f = 1.0;
    double omega_sd_n = 1.0;
    double omega_sr = 4.0;
    double omega_rd_f = 4.0;
    double omega_rd_n = 4.0;
    int mu = 1;

    void validate() const;
    /// Non-fatal remarks, e.g. distinct per-user direct-link powers, which
    /// break the i.i.d. assumption behind the order statistics.
    std::vector<std::string> warnings() const;
};

/// Relay placement on the unit BS-user segment.
struct RelayGeometry {
    double d_sr = 0.5;
    double alpha = 2.0;

    double omega_sr() const;
    double omega_rd() const;
};

/// Non-cooperative M-user downlink NOMA.
///
/// `a`, `R` and `omega` are indexed by served user in SIC order (largest
/// power first). `ranks[k]` is the order-statistic rank of served user k
/// among `M` sorted gains; when empty, user k has rank k + 1 and the number
/// of served users must equal M.
struct Scenario2Config {
    int M = 3;
    std::vector<int> ranks;
    std::vector<double> a{0.5, 0.4, 0.1};
    std::vector<double> R{0.2, 1.0, 2.0};
    std::vector<double> omega{0.3, 1.5, 5.0};
    int mu = 1;

    int users() const { return static_cast<int>(a.size()); }
    /// Order-statistic rank of 1-based served user `user`.
    int rank_of(int user) const;
    void validate() const;
};

struct Scenario1Thresholds {
    double gamma_th_f = 0.0;
    double gamma_th_n = 0.0;
    double epsilon = 0.0;  ///< +inf when a_f <= a_n * gamma_th_f
    double beta = 0.0;
    double Omega = 0.0;    ///< max(epsilon, beta)
    double C = 0.0;
    bool far_decodable = true;
};

struct Scenario2Thresholds {
    std::vector<double> gamma_th;
    std::vector<double> phi;  ///< +inf where the SIC condition fails
    double phi_star = 0.0;    ///< max of phi over users 1..m
    bool decodable = true;
};

/// 2^{slots * R} - 1. Scenario 1 spends two slots per message.
double threshold_snr(double R, int slots);

double fixed_gain_constant(const Scenario1Config& cfg, double rho, GainMode mode);
/// fixed_gain_constant with the config's own mode.
double relay_constant(const Scenario1Config& cfg, double rho);

Scenario1Thresholds scenario1_thresholds(const Scenario1Config& cfg, double rho);
Scenario2Thresholds scenario2_thresholds(const Scenario2Config& cfg, double rho, int user);

/// BS -> relay -> user branch as seen by one destination.
struct RelayBranch {
    int mu = 1;
    double omega_sr = 1.0;
    double omega_rd = 1.0;
    double C = 1.0;
};

RelayBranch far_branch(const Scenario1Config& cfg, double rho);
RelayBranch near_branch(const Scenario1Config& cfg, double rho);

/// P(|h_sr|^2 |h_rd|^2 < z (|h_rd|^2 + C)): outage of the relayed copy at
/// normalized threshold z. Serves both the far user (z = epsilon) and the
/// near user (z = Omega).
///
/// The Bessel-K closed form is 1 - S with S -> 1 as z -> 0, so once it drops
/// below kTheta2CancellationGuard the value comes from theta2_positive instead.
double theta2_closed(const RelayBranch& branch, double z);

inline constexpr double kTheta2CancellationGuard = 1e-6;

/// The Bessel-K closed form alone. Absolute error ~1e-16.
double theta2_bessel(const RelayBranch& branch, double z);

/// Same probability by quadrature over positive terms only; keeps relative
/// precision for arbitrarily small z.
double theta2_positive(const RelayBranch& branch, double z);

/// Direct-link factor times relay-link factor. For the far user these are
/// Theta1 and Theta2; for the near user Theta3 and Theta4.
struct OutageBreakdown {
    double direct = 1.0;
    double relay = 1.0;
    double probability = 1.0;
    double threshold = 0.0;  ///< epsilon or Omega
    bool below_floor = false;
};

OutageBreakdown outage_far_breakdown(const Scenario1Config& cfg, double rho);
OutageBreakdown outage_near_breakdown(const Scenario1Config& cfg, double rho);
double outage_far_exact(const Scenario1Config& cfg, double rho);
double outage_near_exact(const Scenario1Config& cfg, double rho);

/// The order-statistic CDF expanded term by term: binomial sum over i,
/// binomial sum over q, and the multinomial sum over compositions of q
/// into mu parts. Accumulated with sign tracking; exact in exact arithmetic
/// but subject to cancellation once the result drops far below the terms.
double ordered_cdf_expansion(const fading::FadingParams& p, const fading::OrderedIndex& idx, double x);

/// Far-user outage with the direct factor taken from ordered_cdf_expansion.
double outage_far_expansion(const Scenario1Config& cfg, double rho);

double outage_user_exact_s2(const Scenario2Config& cfg, double rho, int user);

/// High-SNR outage: small-argument direct factor times the exact relay
/// factor. Not clamped to 1, so it overshoots at low SNR.
double outage_far_asymptotic(const Scenario1Config& cfg, double rho);
double outage_near_asymptotic(const Scenario1Config& cfg, double rho);
double outage_user_asymptotic_s2(const Scenario2Config& cfg, double rho, int user);

struct CurvePoint {
    double rho = 0.0;
    double probability = 0.0;
};

struct DiversityFit {
    double order = 0.0;
    std::size_t points_used = 0;
    std::vector<std::string> warnings;
};

/// Negated least-squares slope of log10 P against log10 rho. Points with
/// P below kProbabilityFloor are dropped with a warning; negative or NaN P
/// throws std::domain_error, as does having fewer than two usable points.
DiversityFit diversity_order_fit(std::span<const CurvePoint> curve);

double throughput_s1(const Scenario1Config& cfg, double rho);
double throughput_s2(const Scenario2Config& cfg, double rho);

/// Orthogonal baseline: the strongest user alone, full power, target rate
/// equal to the sum of the NOMA rates. In scenario 1 it keeps the two-slot
/// relay structure with selection combining.
double outage_oma_baseline(const Scenario1Config& cfg, double rho);
double outage_oma_baseline(const Scenario2Config& cfg, double rho);
double throughput_oma(const Scenario1Config& cfg, double rho);
double throughput_oma(const Scenario2Config& cfg, double rho);

/// Linear SNR from dB.
double db_to_linear(double db);

}  // namespace noma::analytic
