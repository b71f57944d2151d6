#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace noma::fading {

/// Gamma-distributed channel power gain: integer Nakagami shape `mu` and
/// mean power `omega`. Throws std::invalid_argument on construction if
/// mu < 1 or omega <= 0.
struct FadingParams {
    int mu = 1;
    double omega = 1.0;

    FadingParams() = default;
    FadingParams(int mu, double omega);
};

/// Rank m (1-based, ascending) among M sorted i.i.d. gains.
struct OrderedIndex {
    int m = 1;
    int M = 1;

    OrderedIndex() = default;
    OrderedIndex(int m, int M);
};

double gamma_pdf(const FadingParams& p, double lambda);
double gamma_cdf(const FadingParams& p, double lambda);
/// 1 - gamma_cdf, evaluated without cancellation.
double gamma_sf(const FadingParams& p, double lambda);

/// Density of the amplitude x = sqrt(lambda). Only used to check the
/// change of variables against gamma_pdf.
double nakagami_amplitude_pdf(const FadingParams& p, double x);

/// CDF of the m-th smallest of M i.i.d. gains.
///
/// Evaluated as the upper binomial tail sum_{j=m}^{M} C(M,j) F^j (1-F)^{M-j}
/// in log space. Every term is non-negative, so the result keeps full
/// relative precision however small F is.
double ordered_cdf(const FadingParams& p, const OrderedIndex& idx, double x);
double log_ordered_cdf(const FadingParams& p, const OrderedIndex& idx, double x);

/// The alternating-sign form sum_i C(M-m,i) (-1)^i/(m+i) F^{m+i}, accumulated
/// with sign tracking. Agrees with ordered_cdf until cancellation sets in.
double ordered_cdf_alternating(const FadingParams& p, const OrderedIndex& idx, double x);

double ordered_pdf(const FadingParams& p, const OrderedIndex& idx, double x);

/// Leading term of gamma_cdf as x -> 0: (mu x / omega)^mu / mu!.
double cdf_small_arg(const FadingParams& p, double x);

/// Leading term of ordered_cdf as x -> 0.
double ordered_cdf_small_arg(const FadingParams& p, const OrderedIndex& idx, double x);

/// Deterministic uniform/exponential source. A stream is identified by
/// (seed, stream id); the same pair always replays the same sequence.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    /// Exponential with mean 1.
    double standard_exponential();

private:
    std::mt19937_64 engine_;
};

/// lambda ~ Gamma(shape mu, mean omega), drawn as a sum of mu exponentials.
double sample_gain(const FadingParams& p, RandomStream& rng);

/// M i.i.d. draws sorted ascending; element m-1 realizes rank m.
std::vector<double> sample_sorted_gains(const FadingParams& p, int M, RandomStream& rng);
void sample_sorted_gains(const FadingParams& p, std::span<double> out, RandomStream& rng);

}  // namespace noma::fading
