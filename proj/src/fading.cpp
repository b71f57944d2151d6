#include "noma/fading.hpp"

#include "noma/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace noma::fading {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double scaled_arg(const FadingParams& p, double lambda) { return p.mu * lambda / p.omega; }

void require_non_negative(double x, const char* what) {
    if (!(x >= 0.0)) throw std::domain_error(std::string(what) + ": argument must be non-negative");
}

// ln P(mu, t), the regularized lower incomplete gamma for integer mu.
double log_lower_regularized(int mu, double t) {
    if (t <= 0.0) return -kInf;
    if (t == kInf) return 0.0;
    if (mu == 1) return std::log(-std::expm1(-t));
    if (t < mu) {
        // P = e^{-t} t^mu / mu! * sum_j t^j / ((mu+1)...(mu+j))
        double term = 1.0, sum = 1.0;
        for (int j = 1; j < 1000; ++j) {
            term *= t / (mu + j);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return mu * std::log(t) - t - numerics::log_factorial(mu) + std::log(sum);
    }
    // Upper tail is at most ~1/2 here, so 1 - Q loses nothing.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < mu; ++k) {
        term *= t / k;
        sum += term;
    }
    return std::log1p(-std::exp(-t) * sum);
}

// ln Q(mu, t) = ln(1 - P(mu, t)).
double log_upper_regularized(int mu, double t) {
    if (t <= 0.0) return 0.0;
    if (t == kInf) return -kInf;
    if (t < mu) return std::log1p(-std::exp(log_lower_regularized(mu, t)));
    std::vector<double> logs;
    logs.reserve(static_cast<std::size_t>(mu));
    for (int k = 0; k < mu; ++k) logs.push_back(k * std::log(t) - numerics::log_factorial(k));
    return numerics::log_sum_exp(logs) - t;
}

double clamp_probability(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

FadingParams::FadingParams(int mu_, double omega_) : mu(mu_), omega(omega_) {
    if (mu < 1) throw std::invalid_argument("FadingParams: mu must be a positive integer, got " + std::to_string(mu));
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("FadingParams: omega must be positive, got " + std::to_string(omega));
}

OrderedIndex::OrderedIndex(int m_, int M_) : m(m_), M(M_) {
    if (M < 1 || m < 1 || m > M) {
        throw std::invalid_argument("OrderedIndex: need 1 <= m <= M, got m=" + std::to_string(m) +
                                    " M=" + std::to_string(M));
    }
}

double gamma_pdf(const FadingParams& p, double lambda) {
    require_non_negative(lambda, "gamma_pdf");
    if (lambda == 0.0) return p.mu == 1 ? 1.0 / p.omega : 0.0;
    const double t = scaled_arg(p, lambda);
    const double log_pdf = p.mu * std::log(p.mu / p.omega) + (p.mu - 1) * std::log(lambda) - t -
                           numerics::log_gamma(p.mu);
    return std::exp(log_pdf);
}

double gamma_cdf(const FadingParams& p, double lambda) {
    require_non_negative(lambda, "gamma_cdf");
    if (p.mu == 1) return clamp_probability(-std::expm1(-lambda / p.omega));
    return clamp_probability(std::exp(log_lower_regularized(p.mu, scaled_arg(p, lambda))));
}

double gamma_sf(const FadingParams& p, double lambda) {
    require_non_negative(lambda, "gamma_sf");
    return clamp_probability(std::exp(log_upper_regularized(p.mu, scaled_arg(p, lambda))));
}

double nakagami_amplitude_pdf(const FadingParams& p, double x) {
    require_non_negative(x, "nakagami_amplitude_pdf");
    if (x == 0.0) return 0.0;
    const double log_pdf = std::log(2.0) + p.mu * std::log(p.mu / p.omega) + (2 * p.mu - 1) * std::log(x) -
                           p.mu * x * x / p.omega - numerics::log_gamma(p.mu);
    return std::exp(log_pdf);
}

namespace {

// ln of sum_{j=lo}^{hi} C(M,j) F^j Q^{M-j}; every term is non-negative.
double log_binomial_band(int M, int lo, int hi, double log_f, double log_q) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
    for (int j = lo; j <= hi; ++j) {
        double term = numerics::log_binomial(M, j);
        if (j > 0) term += j * log_f;
        if (M - j > 0) term += (M - j) * log_q;
        terms.push_back(term);
    }
    return numerics::log_sum_exp(terms);
}

}  // namespace

// Upper tail while it is the smaller side, otherwise one minus the lower
// tail, so the result is accurate (and monotone) at both ends.
double log_ordered_cdf(const FadingParams& p, const OrderedIndex& idx, double x) {
    require_non_negative(x, "ordered_cdf");
    const double t = scaled_arg(p, x);
    const double log_f = log_lower_regularized(p.mu, t);
    const double log_q = log_upper_regularized(p.mu, t);
    const double upper = log_binomial_band(idx.M, idx.m, idx.M, log_f, log_q);
    if (upper < -std::numbers::ln2) return upper;
    const double lower = log_binomial_band(idx.M, 0, idx.m - 1, log_f, log_q);
    return std::min(0.0, std::log1p(-std::exp(lower)));
}

double ordered_cdf(const FadingParams& p, const OrderedIndex& idx, double x) {
    require_non_negative(x, "ordered_cdf");
    const double t = scaled_arg(p, x);
    const double log_f = log_lower_regularized(p.mu, t);
    const double log_q = log_upper_regularized(p.mu, t);
    const double upper = log_binomial_band(idx.M, idx.m, idx.M, log_f, log_q);
    if (upper < -std::numbers::ln2) return clamp_probability(std::exp(upper));
    return clamp_probability(-std::expm1(log_binomial_band(idx.M, 0, idx.m - 1, log_f, log_q)));
}

double ordered_cdf_alternating(const FadingParams& p, const OrderedIndex& idx, double x) {
    require_non_negative(x, "ordered_cdf_alternating");
    const double log_f = std::log(gamma_cdf(p, x));
    const int m = idx.m;
    const int M = idx.M;
    const double log_prefactor =
        numerics::log_factorial(M) - numerics::log_factorial(m - 1) - numerics::log_factorial(M - m);
    numerics::SignedLogSum acc;
    for (int i = 0; i <= M - m; ++i) {
        acc.add(i % 2 == 0 ? 1 : -1,
                log_prefactor + numerics::log_binomial(M - m, i) - std::log(m + i) + (m + i) * log_f);
    }
    return clamp_probability(acc.result().value());
}

double ordered_pdf(const FadingParams& p, const OrderedIndex& idx, double x) {
    require_non_negative(x, "ordered_pdf");
    const double density = gamma_pdf(p, x);
    if (density == 0.0) return 0.0;
    const double t = scaled_arg(p, x);
    double log_pdf = numerics::log_factorial(idx.M) - numerics::log_factorial(idx.m - 1) -
                     numerics::log_factorial(idx.M - idx.m) + std::log(density);
    if (idx.m > 1) log_pdf += (idx.m - 1) * log_lower_regularized(p.mu, t);
    if (idx.M > idx.m) log_pdf += (idx.M - idx.m) * log_upper_regularized(p.mu, t);
    return std::exp(log_pdf);
}

double cdf_small_arg(const FadingParams& p, double x) {
    require_non_negative(x, "cdf_small_arg");
    if (x == 0.0) return 0.0;
    return std::exp(p.mu * std::log(scaled_arg(p, x)) - numerics::log_factorial(p.mu));
}

double ordered_cdf_small_arg(const FadingParams& p, const OrderedIndex& idx, double x) {
    require_non_negative(x, "ordered_cdf_small_arg");
    if (x == 0.0) return 0.0;
    const int m = idx.m;
    const double log_value = numerics::log_factorial(idx.M) - numerics::log_factorial(idx.M - m) -
                             numerics::log_factorial(m) + p.mu * m * std::log(scaled_arg(p, x)) -
                             m * numerics::log_factorial(p.mu);
    return std::exp(log_value);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double RandomStream::uniform() {
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * scale;
}

double RandomStream::standard_exponential() { return -std::log(uniform()); }

double sample_gain(const FadingParams& p, RandomStream& rng) {
    double sum = 0.0;
    for (int k = 0; k < p.mu; ++k) sum += rng.standard_exponential();
    return sum * (p.omega / p.mu);
}

void sample_sorted_gains(const FadingParams& p, std::span<double> out, RandomStream& rng) {
    for (double& g : out) g = sample_gain(p, rng);
    std::sort(out.begin(), out.end());
}

std::vector<double> sample_sorted_gains(const FadingParams& p, int M, RandomStream& rng) {
    if (M < 1) throw std::invalid_argument("sample_sorted_gains: M must be positive");
    std::vector<double> out(static_cast<std::size_t>(M));
    sample_sorted_gains(p, out, rng);
    return out;
}

}  // namespace noma::fading
