#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace noma::numerics {

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// ln n! for n >= 0.
double log_factorial(int n);

/// ln C(n, k); -inf when k is outside [0, n].
double log_binomial(int n, int k);

/// Modified Bessel function of the second kind, integer order.
/// Negative orders are folded onto |order| since K_{-v} = K_v.
/// Underflows to 0 for very large x. Throws std::domain_error for x <= 0.
double bessel_k(int order, double x);

/// ln K_order(x), finite well beyond the range where bessel_k underflows.
double log_bessel_k(int order, double x);

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_levels = 30;
    std::size_t max_intervals = 20000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    std::size_t evaluations = 0;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b].
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureOptions& opts = {});

/// Integral over (a, inf) after the substitution x = a + t / (1 - t).
/// A non-converged result still carries the best available estimate.
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureOptions& opts = {});

/// Weak composition of `total` into `parts.size()` non-negative parts.
struct Composition {
    std::vector<int> parts;
    int total = 0;
};

/// Every length-`parts` non-negative vector summing to q, in reverse
/// lexicographic order. Count is C(q + parts - 1, parts - 1).
std::vector<Composition> compositions(int q, int parts);

/// ln(q! / (p_0! ... p_{k-1}!)). Throws std::domain_error if the parts do not sum to q.
double log_multinomial(int q, const Composition& c);

/// Neumaier-compensated sum of doubles.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Accumulates signed terms given as (sign, ln|term|) and returns the total
/// in the same representation. Terms are rescaled by the largest magnitude
/// before a compensated sum, so huge or tiny magnitudes neither overflow nor
/// flush to zero individually.
class SignedLogSum {
public:
    void add(int sign, double log_magnitude);
    void add_value(double x);

    struct Result {
        int sign = 0;
        double log_magnitude = 0.0;
        double value() const;
    };
    Result result() const;
    bool empty() const { return terms_.empty(); }

private:
    struct Term {
        int sign;
        double log_magnitude;
    };
    std::vector<Term> terms_;
};

/// ln(sum exp(x_i)) over the given values; -inf for an empty range.
double log_sum_exp(std::span<const double> values);

}  // namespace noma::numerics
