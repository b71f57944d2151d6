#include "noma/analytic.hpp"

#include "noma/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace noma::analytic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSumTolerance = 1e-9;

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

void require_rho(double rho) {
    if (!(rho > 0.0)) throw std::domain_error("SNR rho must be positive");
}

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double finalize(double p, bool& below_floor) {
    below_floor = p > 0.0 && p < kProbabilityFloor;
    return below_floor ? 0.0 : std::clamp(p, 0.0, 1.0);
}

}  // namespace

void Scenario1Config::validate() const {
    require(mu >= 1, "mu >= 1 violated (mu=" + std::to_string(mu) + ")");
    require(M >= 2, "M >= 2 violated (M=" + std::to_string(M) + ")");
    require(f >= 1 && f < n && n <= M,
            "1 <= f < n <= M violated (f=" + std::to_string(f) + ", n=" + std::to_string(n) +
                ", M=" + std::to_string(M) + ")");
    require(std::fabs(a_f + a_n - 1.0) <= kSumTolerance, "a_f + a_n = 1 violated (sum=" + fmt(a_f + a_n) + ")");
    require(a_f > a_n && a_n > 0.0, "a_f > a_n > 0 violated (a_f=" + fmt(a_f) + ", a_n=" + fmt(a_n) + ")");
    require(R_f >= 0.0 && R_n >= 0.0, "target rates must be non-negative");
    require(kappa > 0.0 && std::isfinite(kappa), "kappa > 0 violated (kappa=" + fmt(kappa) + ")");
    for (double w : {omega_sd_f, omega_sd_n, omega_sr, omega_rd_f, omega_rd_n}) {
        require(w > 0.0 && std::isfinite(w), "average link powers must be positive (got " + fmt(w) + ")");
    }
}

std::vector<std::string> Scenario1Config::warnings() const {
    std::vector<std::string> out;
    if (omega_sd_f != omega_sd_n) {
        out.push_back("omega_sd differs between far (" + fmt(omega_sd_f) + ") and near (" + fmt(omega_sd_n) +
                      ") users; order statistics assume i.i.d. direct links, each user's own omega is used");
    }
    return out;
}

double RelayGeometry::omega_sr() const { return 1.0 / std::pow(d_sr, alpha); }
double RelayGeometry::omega_rd() const { return 1.0 / std::pow(1.0 - d_sr, alpha); }

int Scenario2Config::rank_of(int user) const {
    if (user < 1 || user > users()) {
        throw std::out_of_range("user index " + std::to_string(user) + " outside 1.." + std::to_string(users()));
    }
    return ranks.empty() ? user : ranks[static_cast<std::size_t>(user - 1)];
}

void Scenario2Config::validate() const {
    require(mu >= 1, "mu >= 1 violated (mu=" + std::to_string(mu) + ")");
    require(M >= 1, "M >= 1 violated");
    const auto K = a.size();
    require(K >= 1, "at least one served user required");
    require(R.size() == K && omega.size() == K, "a, R and omega must have the same length");
    if (ranks.empty()) {
        require(static_cast<int>(K) == M, "without explicit ranks the number of users must equal M");
    } else {
        require(ranks.size() == K, "ranks must have one entry per served user");
        for (std::size_t k = 0; k < K; ++k) {
            require(ranks[k] >= 1 && ranks[k] <= M, "ranks must lie in 1..M");
            require(k == 0 || ranks[k] > ranks[k - 1], "ranks must be strictly increasing");
        }
    }
    const double sum = std::accumulate(a.begin(), a.end(), 0.0);
    require(std::fabs(sum - 1.0) <= kSumTolerance, "sum of a_j = 1 violated (sum=" + fmt(sum) + ")");
    for (std::size_t k = 0; k < K; ++k) {
        require(k == 0 || a[k] <= a[k - 1], "a_1 >= a_2 >= ... >= a_M violated");
        require(omega[k] > 0.0 && std::isfinite(omega[k]), "omega_m > 0 violated");
        require(R[k] >= 0.0, "target rates must be non-negative");
    }
    require(a.back() > 0.0, "a_M > 0 violated");
}

double threshold_snr(double R, int slots) {
    if (!(R >= 0.0)) throw std::domain_error("threshold_snr: target rate must be non-negative");
    if (slots != 1 && slots != 2) throw std::domain_error("threshold_snr: slots must be 1 or 2");
    return std::exp2(slots * R) - 1.0;
}

double fixed_gain_constant(const Scenario1Config& cfg, double rho, GainMode mode) {
    if (mode == GainMode::literal_kappa) return 1.0 / (cfg.kappa * cfg.kappa);
    require_rho(rho);
    return cfg.omega_sr + 1.0 / rho;
}

double relay_constant(const Scenario1Config& cfg, double rho) { return fixed_gain_constant(cfg, rho, cfg.gain_mode); }

Scenario1Thresholds scenario1_thresholds(const Scenario1Config& cfg, double rho) {
    require_rho(rho);
    Scenario1Thresholds t;
    t.gamma_th_f = threshold_snr(cfg.R_f, 2);
    t.gamma_th_n = threshold_snr(cfg.R_n, 2);
    const double margin = cfg.a_f - cfg.a_n * t.gamma_th_f;
    t.far_decodable = margin > 0.0;
    t.epsilon = t.far_decodable ? t.gamma_th_f / (rho * margin) : kInf;
    t.beta = t.gamma_th_n / (cfg.a_n * rho);
    t.Omega = std::max(t.epsilon, t.beta);
    t.C = relay_constant(cfg, rho);
    return t;
}

Scenario2Thresholds scenario2_thresholds(const Scenario2Config& cfg, double rho, int user) {
    require_rho(rho);
    const int K = cfg.users();
    if (user < 1 || user > K) throw std::out_of_range("user index out of range");
    Scenario2Thresholds t;
    t.gamma_th.resize(static_cast<std::size_t>(K));
    t.phi.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const double g = threshold_snr(cfg.R[ui], 1);
        t.gamma_th[ui] = g;
        if (i == K - 1) {
            t.phi[ui] = g / (rho * cfg.a[ui]);
        } else {
            const double rest = std::accumulate(cfg.a.begin() + i + 1, cfg.a.end(), 0.0);
            const double margin = cfg.a[ui] - g * rest;
            t.phi[ui] = margin > 0.0 ? g / (rho * margin) : kInf;
        }
    }
    t.phi_star = *std::max_element(t.phi.begin(), t.phi.begin() + user);
    t.decodable = std::isfinite(t.phi_star);
    return t;
}

RelayBranch far_branch(const Scenario1Config& cfg, double rho) {
    return {cfg.mu, cfg.omega_sr, cfg.omega_rd_f, relay_constant(cfg, rho)};
}

RelayBranch near_branch(const Scenario1Config& cfg, double rho) {
    return {cfg.mu, cfg.omega_sr, cfg.omega_rd_n, relay_constant(cfg, rho)};
}

double theta2_bessel(const RelayBranch& b, double z) {
    if (z < 0.0 || std::isnan(z)) throw std::domain_error("theta2_bessel: threshold must be non-negative");
    if (z == 0.0) return 0.0;
    if (z == kInf) return 1.0;
    const int mu = b.mu;
    const double log_prefactor = std::log(2.0) + mu * std::log(mu / b.omega_sr) - mu * z / b.omega_sr -
                                 numerics::log_gamma(mu);
    const double bessel_arg = 2.0 * mu * std::sqrt(z * b.C / (b.omega_sr * b.omega_rd));
    const double log_ratio = std::log(z * b.C * b.omega_sr / b.omega_rd);
    numerics::CompensatedSum survival;
    for (int k = 0; k < mu; ++k) {
        const double log_k_part = k * std::log(z * b.C * mu / b.omega_rd) - numerics::log_factorial(k);
        for (int i = 0; i < mu; ++i) {
            const int order = i - k + 1;
            const double log_term = log_prefactor + log_k_part + numerics::log_binomial(mu - 1, i) +
                                    (mu - 1 - i) * std::log(z) + 0.5 * order * log_ratio +
                                    numerics::log_bessel_k(order, bessel_arg);
            survival.add(std::exp(log_term));
        }
    }
    return std::clamp(1.0 - survival.value(), 0.0, 1.0);
}

// F_sr(z) + int_0^inf f_sr(z + t) F_rd(zC / t) dt with t = e^s. Every term is
// positive, so small results keep their relative precision.
double theta2_positive(const RelayBranch& b, double z) {
    if (z < 0.0 || std::isnan(z)) throw std::domain_error("theta2_positive: threshold must be non-negative");
    if (z == 0.0) return 0.0;
    if (z == kInf) return 1.0;
    const fading::FadingParams sr(b.mu, b.omega_sr);
    const fading::FadingParams rd(b.mu, b.omega_rd);
    const double zc = z * b.C;
    auto integrand = [&](double s) {
        const double t = std::exp(s);
        return fading::gamma_pdf(sr, z + t) * fading::gamma_cdf(rd, zc / t) * t;
    };
    numerics::QuadratureOptions opts;
    opts.abs_tol = 0.0;
    opts.rel_tol = 1e-12;
    const double lo = std::log(zc) - 40.0;
    const double hi = std::log(b.omega_sr / b.mu * 800.0);
    const double mid = std::clamp(std::log(zc), lo, hi);
    const auto left = numerics::integrate_finite(integrand, lo, mid, opts);
    const auto right = numerics::integrate_finite(integrand, mid, hi, opts);
    return std::clamp(fading::gamma_cdf(sr, z) + left.value + right.value, 0.0, 1.0);
}

double theta2_closed(const RelayBranch& b, double z) {
    const double closed = theta2_bessel(b, z);
    return closed < kTheta2CancellationGuard ? theta2_positive(b, z) : closed;
}

OutageBreakdown outage_far_breakdown(const Scenario1Config& cfg, double rho) {
    cfg.validate();
    const auto t = scenario1_thresholds(cfg, rho);
    OutageBreakdown out;
    out.threshold = t.epsilon;
    if (!t.far_decodable) return out;
    out.direct = fading::ordered_cdf({cfg.mu, cfg.omega_sd_f}, {cfg.f, cfg.M}, t.epsilon);
    out.relay = theta2_closed(far_branch(cfg, rho), t.epsilon);
    out.probability = finalize(out.direct * out.relay, out.below_floor);
    return out;
}

OutageBreakdown outage_near_breakdown(const Scenario1Config& cfg, double rho) {
    cfg.validate();
    const auto t = scenario1_thresholds(cfg, rho);
    OutageBreakdown out;
    out.threshold = t.Omega;
    if (!t.far_decodable) return out;
    out.direct = fading::ordered_cdf({cfg.mu, cfg.omega_sd_n}, {cfg.n, cfg.M}, t.Omega);
    out.relay = theta2_closed(near_branch(cfg, rho), t.Omega);
    out.probability = finalize(out.direct * out.relay, out.below_floor);
    return out;
}

double outage_far_exact(const Scenario1Config& cfg, double rho) { return outage_far_breakdown(cfg, rho).probability; }

double outage_near_exact(const Scenario1Config& cfg, double rho) {
    return outage_near_breakdown(cfg, rho).probability;
}

double ordered_cdf_expansion(const fading::FadingParams& p, const fading::OrderedIndex& idx, double x) {
    if (!(x >= 0.0)) throw std::domain_error("ordered_cdf_expansion: argument must be non-negative");
    if (x == kInf) return 1.0;
    const int mu = p.mu;
    const int m = idx.m;
    const int M = idx.M;
    const double psi = mu * x / p.omega;
    const double log_psi = std::log(psi);
    const double log_prefactor =
        numerics::log_factorial(M) - numerics::log_factorial(m - 1) - numerics::log_factorial(M - m);

    numerics::SignedLogSum acc;
    for (int i = 0; i <= M - m; ++i) {
        const double log_outer = log_prefactor + numerics::log_binomial(M - m, i) - std::log(m + i);
        for (int q = 0; q <= m + i; ++q) {
            const int sign = (q + i) % 2 == 0 ? 1 : -1;
            const double log_mid = log_outer + numerics::log_binomial(m + i, q) - q * psi;
            for (const auto& c : numerics::compositions(q, mu)) {
                double log_product = 0.0;
                bool vanishes = false;
                for (int k = 0; k < mu; ++k) {
                    const int pk = c.parts[static_cast<std::size_t>(k)];
                    if (pk == 0) continue;
                    if (k > 0 && psi == 0.0) {
                        vanishes = true;
                        break;
                    }
                    log_product += pk * ((k > 0 ? k * log_psi : 0.0) - numerics::log_factorial(k));
                }
                if (!vanishes) acc.add(sign, log_mid + numerics::log_multinomial(q, c) + log_product);
            }
        }
    }
    return std::clamp(acc.result().value(), 0.0, 1.0);
}

double outage_far_expansion(const Scenario1Config& cfg, double rho) {
    cfg.validate();
    const auto t = scenario1_thresholds(cfg, rho);
    if (!t.far_decodable) return 1.0;
    return ordered_cdf_expansion({cfg.mu, cfg.omega_sd_f}, {cfg.f, cfg.M}, t.epsilon) *
           theta2_closed(far_branch(cfg, rho), t.epsilon);
}

double outage_user_exact_s2(const Scenario2Config& cfg, double rho, int user) {
    cfg.validate();
    const auto t = scenario2_thresholds(cfg, rho, user);
    if (!t.decodable) return 1.0;
    const auto u = static_cast<std::size_t>(user - 1);
    bool below_floor = false;
    return finalize(fading::ordered_cdf({cfg.mu, cfg.omega[u]}, {cfg.rank_of(user), cfg.M}, t.phi_star), below_floor);
}

double outage_far_asymptotic(const Scenario1Config& cfg, double rho) {
    cfg.validate();
    const auto t = scenario1_thresholds(cfg, rho);
    if (!t.far_decodable) return 1.0;
    return fading::ordered_cdf_small_arg({cfg.mu, cfg.omega_sd_f}, {cfg.f, cfg.M}, t.epsilon) *
           theta2_closed(far_branch(cfg, rho), t.epsilon);
}

double outage_near_asymptotic(const Scenario1Config& cfg, double rho) {
    cfg.validate();
    const auto t = scenario1_thresholds(cfg, rho);
    if (!t.far_decodable) return 1.0;
    return fading::ordered_cdf_small_arg({cfg.mu, cfg.omega_sd_n}, {cfg.n, cfg.M}, t.Omega) *
           theta2_closed(near_branch(cfg, rho), t.Omega);
}

double outage_user_asymptotic_s2(const Scenario2Config& cfg, double rho, int user) {
    cfg.validate();
    const auto t = scenario2_thresholds(cfg, rho, user);
    if (!t.decodable) return 1.0;
    const auto u = static_cast<std::size_t>(user - 1);
    return fading::ordered_cdf_small_arg({cfg.mu, cfg.omega[u]}, {cfg.rank_of(user), cfg.M}, t.phi_star);
}

DiversityFit diversity_order_fit(std::span<const CurvePoint> curve) {
    DiversityFit fit;
    std::vector<double> xs, ys;
    for (const auto& pt : curve) {
        if (!(pt.rho > 0.0)) throw std::domain_error("diversity_order_fit: rho must be positive");
        if (std::isnan(pt.probability) || pt.probability < 0.0) {
            throw std::domain_error("diversity_order_fit: probability must be non-negative");
        }
        if (pt.probability < kProbabilityFloor) {
            fit.warnings.push_back("point at rho=" + fmt(pt.rho) + " excluded (P=" + fmt(pt.probability) +
                                   " below floor)");
            continue;
        }
        xs.push_back(std::log10(pt.rho));
        ys.push_back(std::log10(pt.probability));
    }
    if (xs.size() < 2) throw std::domain_error("diversity_order_fit: need at least two usable points");
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw std::domain_error("diversity_order_fit: rho values must differ");
    fit.order = -sxy / sxx;
    fit.points_used = xs.size();
    return fit;
}

double throughput_s1(const Scenario1Config& cfg, double rho) {
    return (1.0 - outage_far_exact(cfg, rho)) * cfg.R_f + (1.0 - outage_near_exact(cfg, rho)) * cfg.R_n;
}

double throughput_s2(const Scenario2Config& cfg, double rho) {
    double total = 0.0;
    for (int user = 1; user <= cfg.users(); ++user) {
        total += (1.0 - outage_user_exact_s2(cfg, rho, user)) * cfg.R[static_cast<std::size_t>(user - 1)];
    }
    return total;
}

double outage_oma_baseline(const Scenario1Config& cfg, double rho) {
    cfg.validate();
    require_rho(rho);
    const double z = threshold_snr(cfg.R_f + cfg.R_n, 2) / rho;
    const double direct = fading::ordered_cdf({cfg.mu, cfg.omega_sd_n}, {cfg.M, cfg.M}, z);
    return direct * theta2_closed(near_branch(cfg, rho), z);
}

double outage_oma_baseline(const Scenario2Config& cfg, double rho) {
    cfg.validate();
    require_rho(rho);
    const double total_rate = std::accumulate(cfg.R.begin(), cfg.R.end(), 0.0);
    const double z = threshold_snr(total_rate, 1) / rho;
    return fading::ordered_cdf({cfg.mu, cfg.omega.back()}, {cfg.M, cfg.M}, z);
}

double throughput_oma(const Scenario1Config& cfg, double rho) {
    return (1.0 - outage_oma_baseline(cfg, rho)) * (cfg.R_f + cfg.R_n);
}

double throughput_oma(const Scenario2Config& cfg, double rho) {
    return (1.0 - outage_oma_baseline(cfg, rho)) * std::accumulate(cfg.R.begin(), cfg.R.end(), 0.0);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace noma::analytic
