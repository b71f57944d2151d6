#include "noma/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <string>

namespace noma::numerics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Series for K0 and K1 about the origin; valid and accurate for 0 < x <= 2.
void bessel_k01_series(double x, double& k0, double& k1) {
    const double y = 0.25 * x * x;
    const double log_half_x = std::log(0.5 * x);
    const double euler = std::numbers::egamma;

    // term_k = y^k / (k!)^2, term1_k = y^k / (k! (k+1)!)
    double term = 1.0;
    double term1 = 1.0;
    double harmonic = 0.0;  // H_k
    double i0 = 0.0, i1_over = 0.0;
    double sum_k0 = 0.0, sum_k1 = 0.0;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            term *= y / (static_cast<double>(k) * k);
            term1 *= y / (static_cast<double>(k) * (k + 1));
            harmonic += 1.0 / k;
        }
        const double psi1 = -euler + harmonic;                 // psi(k+1)
        const double psi2 = -euler + harmonic + 1.0 / (k + 1);  // psi(k+2)
        i0 += term;
        i1_over += term1;
        sum_k0 += harmonic * term;
        sum_k1 += (psi1 + psi2) * term1;
        if (term < 1e-18 * i0 && term1 < 1e-18 * i1_over) break;
    }
    const double i1 = 0.5 * x * i1_over;
    k0 = -(log_half_x + euler) * i0 + sum_k0;
    k1 = 1.0 / x + log_half_x * i1 - 0.25 * x * sum_k1;
}

// Steed's continued fraction for exp(x) K0(x) and exp(x) K1(x), x > 2.
void bessel_k01_scaled_cf(double x, double& k0s, double& k1s) {
    constexpr double eps = 1e-17;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d;
    double delh = d;
    double q1 = 0.0;
    double q2 = 1.0;
    const double a1 = 0.25;
    double q = a1;
    double c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= 100000; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < eps) break;
    }
    h = a1 * h;
    k0s = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
    k1s = k0s * (x + 0.5 - h) / x;
}

// ln K_v(x) via exp-scaled values and upward recurrence (stable for K).
double log_bessel_k_impl(int order, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: argument must be positive, got " + std::to_string(x));
    const int v = std::abs(order);
    double k0s, k1s;
    if (x <= 2.0) {
        double k0, k1;
        bessel_k01_series(x, k0, k1);
        const double ex = std::exp(x);
        k0s = k0 * ex;
        k1s = k1 * ex;
    } else {
        bessel_k01_scaled_cf(x, k0s, k1s);
    }
    if (v == 0) return std::log(k0s) - x;
    // Rescale on the fly so high orders at tiny x do not overflow.
    double log_scale = 0.0;
    double prev = k0s, cur = k1s;
    for (int j = 1; j < v; ++j) {
        const double next = prev + (2.0 * j / x) * cur;
        prev = cur;
        cur = next;
        if (cur > 1e250) {
            prev /= cur;
            log_scale += std::log(cur);
            cur = 1.0;
        }
    }
    return std::log(cur) + log_scale - x;
}

// Gauss-Kronrod 7/15 nodes and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    int level;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Integrand& f, double a, double b, int level) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    kronrod *= half;
    gauss *= half;
    double err = std::fabs(kronrod - gauss);
    if (!std::isfinite(kronrod)) err = kInf;
    return {a, b, kronrod, err, level};
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive, got " + std::to_string(x));
    return std::lgamma(x);
}

double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial(int n, int k) {
    if (k < 0 || k > n) return -kInf;
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double bessel_k(int order, double x) { return std::exp(log_bessel_k_impl(order, x)); }

double log_bessel_k(int order, double x) { return log_bessel_k_impl(order, x); }

QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadratureOptions& opts) {
    QuadratureResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    const double sign = a < b ? 1.0 : -1.0;
    if (a > b) std::swap(a, b);

    std::priority_queue<Segment> heap;
    heap.push(gk15(f, a, b, 0));
    out.evaluations = 15;

    auto totals = [&heap]() {
        // priority_queue hides its container; copy is fine at these sizes.
        auto copy = heap;
        CompensatedSum value, error;
        while (!copy.empty()) {
            value.add(copy.top().value);
            error.add(copy.top().error);
            copy.pop();
        }
        return std::pair{value.value(), error.value()};
    };

    double value = heap.top().value;
    double error = heap.top().error;
    for (;;) {
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::fabs(value));
        if (error <= tol) {
            std::tie(value, error) = totals();
            if (error <= std::max(opts.abs_tol, opts.rel_tol * std::fabs(value))) {
                out.converged = true;
                break;
            }
        }
        const Segment worst = heap.top();
        if (worst.level >= opts.max_levels || heap.size() >= opts.max_intervals) break;
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gk15(f, worst.a, mid, worst.level + 1);
        const Segment right = gk15(f, mid, worst.b, worst.level + 1);
        out.evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    std::tie(value, error) = totals();
    out.value = sign * value;
    out.error = error;
    return out;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadratureOptions& opts) {
    auto mapped = [&f, a](double t) {
        const double one_minus = 1.0 - t;
        if (one_minus <= 0.0) return 0.0;
        const double x = a + t / one_minus;
        if (!std::isfinite(x)) return 0.0;
        const double fx = f(x);
        if (fx == 0.0) return 0.0;
        return fx / (one_minus * one_minus);
    };
    return integrate_finite(mapped, 0.0, 1.0, opts);
}

std::vector<Composition> compositions(int q, int parts) {
    if (q < 0) throw std::domain_error("compositions: total must be non-negative");
    if (parts < 1) throw std::domain_error("compositions: need at least one part");
    std::vector<Composition> out;
    std::vector<int> current(static_cast<std::size_t>(parts), 0);
    auto fill = [&](auto&& self, int index, int remaining) -> void {
        if (index == parts - 1) {
            current[static_cast<std::size_t>(index)] = remaining;
            out.push_back({current, q});
            return;
        }
        for (int take = remaining; take >= 0; --take) {
            current[static_cast<std::size_t>(index)] = take;
            self(self, index + 1, remaining - take);
        }
    };
    fill(fill, 0, q);
    return out;
}

double log_multinomial(int q, const Composition& c) {
    int sum = 0;
    double log_denominator = 0.0;
    for (int p : c.parts) {
        if (p < 0) throw std::domain_error("log_multinomial: negative part");
        sum += p;
        log_denominator += log_factorial(p);
    }
    if (sum != q) {
        throw std::domain_error("log_multinomial: parts sum to " + std::to_string(sum) +
                                " but q = " + std::to_string(q));
    }
    return log_factorial(q) - log_denominator;
}

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

void SignedLogSum::add(int sign, double log_magnitude) {
    if (sign == 0 || log_magnitude == -kInf) return;
    terms_.push_back({sign > 0 ? 1 : -1, log_magnitude});
}

void SignedLogSum::add_value(double x) {
    if (x == 0.0) return;
    add(x > 0 ? 1 : -1, std::log(std::fabs(x)));
}

double SignedLogSum::Result::value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_magnitude);
}

SignedLogSum::Result SignedLogSum::result() const {
    if (terms_.empty()) return {0, -kInf};
    double peak = -kInf;
    for (const auto& t : terms_) peak = std::max(peak, t.log_magnitude);
    CompensatedSum acc;
    for (const auto& t : terms_) acc.add(t.sign * std::exp(t.log_magnitude - peak));
    const double scaled = acc.value();
    if (scaled == 0.0) return {0, -kInf};
    return {scaled > 0 ? 1 : -1, peak + std::log(std::fabs(scaled))};
}

double log_sum_exp(std::span<const double> values) {
    double peak = -kInf;
    for (double v : values) peak = std::max(peak, v);
    if (peak == -kInf) return -kInf;
    if (peak == kInf) return kInf;
    CompensatedSum acc;
    for (double v : values) acc.add(std::exp(v - peak));
    return peak + std::log(acc.value());
}

}  // namespace noma::numerics
