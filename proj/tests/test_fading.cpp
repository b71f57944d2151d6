#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "noma/fading.hpp"
#include "noma/numerics.hpp"

#include <algorithm>
#include <cmath>

using namespace noma::fading;
using noma::numerics::integrate_finite;
using noma::numerics::integrate_semi_infinite;
using noma::numerics::QuadratureOptions;

namespace {

double rel_err(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

QuadratureOptions tight() {
    QuadratureOptions o;
    o.abs_tol = 0.0;
    o.rel_tol = 1e-12;
    return o;
}

}  // namespace

TEST_CASE("parameter invariants") {
    CHECK_THROWS_AS(FadingParams(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingParams(1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(FadingParams(1, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(OrderedIndex(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(OrderedIndex(4, 3), std::invalid_argument);
    CHECK_NOTHROW(OrderedIndex(3, 3));
}

TEST_CASE("gamma_pdf") {
    CHECK(gamma_pdf({1, 1.0}, 0.0) == 1.0);
    CHECK(gamma_pdf({2, 1.0}, 0.0) == 0.0);
    CHECK(rel_err(gamma_pdf({2, 1.0}, 1.0), 4.0 * std::exp(-2.0)) < 1e-14);
    for (int mu = 1; mu <= 4; ++mu) {
        for (double omega : {0.3, 1.0, 5.0}) {
            const FadingParams p(mu, omega);
            auto r = integrate_semi_infinite([&](double x) { return gamma_pdf(p, x); }, 0.0, tight());
            CHECK(rel_err(r.value, 1.0) < 1e-10);
        }
    }
}

TEST_CASE("gamma_cdf") {
    CHECK(gamma_cdf({3, 2.0}, 0.0) == 0.0);
    CHECK(rel_err(gamma_cdf({1, 1.0}, std::log(2.0)), 0.5) < 1e-15);
    CHECK(rel_err(gamma_cdf({2, 1.0}, 1.0), 1.0 - 3.0 * std::exp(-2.0)) < 1e-14);
    for (double x : {1e-9, 1e-4, 0.3, 1.0, 7.0, 40.0}) {
        CHECK(gamma_cdf({1, 2.0}, x) == -std::expm1(-x / 2.0));
    }
    for (int mu = 1; mu <= 4; ++mu) {
        const FadingParams p(mu, 1.7);
        for (double x : {1e-6, 0.05, 0.5, 2.0, 6.0}) {
            auto r = integrate_finite([&](double t) { return gamma_pdf(p, t); }, 0.0, x, tight());
            CAPTURE(mu);
            CAPTURE(x);
            CHECK(rel_err(gamma_cdf(p, x), r.value) < 1e-10);
            CHECK(std::fabs(gamma_cdf(p, x) + gamma_sf(p, x) - 1.0) < 1e-15);
        }
    }
    // The survival function stays accurate deep in the tail.
    CHECK(rel_err(gamma_sf({1, 1.0}, 700.0), std::exp(-700.0)) < 1e-12);
}

TEST_CASE("amplitude density is the power density after the change of variables") {
    for (int mu = 1; mu <= 3; ++mu) {
        const FadingParams p(mu, 1.3);
        for (double x : {0.1, 0.7, 1.5}) {
            CHECK(rel_err(nakagami_amplitude_pdf(p, x), 2.0 * x * gamma_pdf(p, x * x)) < 1e-13);
        }
    }
}

TEST_CASE("ordered_cdf special cases") {
    const FadingParams p(2, 1.5);
    for (double x : {0.01, 0.4, 1.0, 3.0}) {
        CHECK(rel_err(ordered_cdf(p, {1, 1}, x), gamma_cdf(p, x)) < 1e-14);
        CHECK(rel_err(ordered_cdf(p, {2, 2}, x), std::pow(gamma_cdf(p, x), 2)) < 1e-14);
        CHECK(rel_err(ordered_pdf(p, {1, 1}, x), gamma_pdf(p, x)) < 1e-13);
    }
    CHECK(ordered_cdf(p, {2, 4}, 0.0) == 0.0);
}

TEST_CASE("mixture identity over a uniformly random rank") {
    for (int mu = 1; mu <= 3; ++mu) {
        const FadingParams p(mu, 0.8);
        for (int M = 1; M <= 6; ++M) {
            for (double x = 0.0; x <= 5.0; x += 0.25) {
                double mix = 0.0;
                for (int m = 1; m <= M; ++m) mix += ordered_cdf(p, {m, M}, x);
                CHECK(std::fabs(mix / M - gamma_cdf(p, x)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("ordered_cdf monotonicity and range") {
    const FadingParams p(2, 1.0);
    const int M = 5;
    for (int m = 1; m <= M; ++m) {
        double prev = 0.0;
        for (double x = 0.0; x <= 8.0; x += 0.1) {
            const double v = ordered_cdf(p, {m, M}, x);
            CHECK(v >= prev);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            if (m > 1) CHECK(v <= ordered_cdf(p, {m - 1, M}, x) + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("stable and alternating forms agree until cancellation") {
    for (int mu = 1; mu <= 3; ++mu) {
        const FadingParams p(mu, 1.0);
        for (int m = 1; m <= 5; ++m) {
            for (double x : {0.05, 0.3, 1.0, 4.0}) {
                CHECK(rel_err(ordered_cdf_alternating(p, {m, 5}, x), ordered_cdf(p, {m, 5}, x)) < 1e-9);
            }
        }
    }
    // Far below the terms the stable form keeps full relative precision.
    const FadingParams p(1, 1.0);
    const double x = 1e-8;
    CHECK(rel_err(ordered_cdf(p, {5, 5}, x), std::pow(-std::expm1(-x), 5)) < 1e-13);
    CHECK(rel_err(std::exp(log_ordered_cdf(p, {5, 5}, x)), ordered_cdf(p, {5, 5}, x)) < 1e-13);
}

TEST_CASE("ordered_pdf") {
    for (int mu = 1; mu <= 3; ++mu) {
        const FadingParams p(mu, 1.2);
        for (int m = 1; m <= 4; ++m) {
            const OrderedIndex idx(m, 4);
            auto norm = integrate_semi_infinite([&](double x) { return ordered_pdf(p, idx, x); }, 0.0, tight());
            CHECK(rel_err(norm.value, 1.0) < 1e-10);
            for (double x : {0.1, 0.5, 2.0}) {
                const double h = 1e-5;
                const double fd = (ordered_cdf(p, idx, x + h) - ordered_cdf(p, idx, x - h)) / (2 * h);
                CHECK(std::fabs(fd - ordered_pdf(p, idx, x)) < 1e-6);
            }
        }
    }
}

TEST_CASE("small-argument expansions") {
    CHECK(cdf_small_arg({2, 1.0}, 0.0) == 0.0);
    CHECK(std::fabs(cdf_small_arg({1, 1.0}, 1e-6) / gamma_cdf({1, 1.0}, 1e-6) - 1.0) < 1e-5);
    CHECK(rel_err(cdf_small_arg({3, 2.0}, 1e-3), std::pow(1.5e-3, 3) / 6.0) < 1e-14);
    // cross-check against the gamma_cdf series: next term is -mu/(mu+1) t of the leading one
    const double t = 1.5e-3;
    CHECK(rel_err(cdf_small_arg({3, 2.0}, 1e-3), gamma_cdf({3, 2.0}, 1e-3)) < 1.0 * t);
    CHECK(rel_err(ordered_cdf_small_arg({1, 1.0}, {1, 1}, 0.01), cdf_small_arg({1, 1.0}, 0.01)) < 1e-15);
    CHECK(std::fabs(ordered_cdf_small_arg({2, 1.0}, {2, 3}, 1e-4) / ordered_cdf({2, 1.0}, {2, 3}, 1e-4) - 1.0) <
          1e-3);
    CHECK(ordered_cdf_small_arg({2, 1.0}, {2, 3}, 0.0) == 0.0);
}

TEST_CASE("random streams are deterministic") {
    RandomStream a(42, 3), b(42, 3), c(42, 4);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        differs = differs || u != c.uniform();
    }
    CHECK(differs);
}

TEST_CASE("sample_gain mean") {
    const int n = 10'000'000;
    for (int mu : {1, 3}) {
        const FadingParams p(mu, 2.0);
        RandomStream rng(11, static_cast<std::uint64_t>(mu));
        noma::numerics::CompensatedSum sum;
        for (int i = 0; i < n; ++i) sum.add(sample_gain(p, rng));
        const double mean = sum.value() / n;
        CHECK(std::fabs(mean - p.omega) < 4.0 * p.omega / std::sqrt(mu * static_cast<double>(n)));
    }
}

TEST_CASE("sample_gain passes a Kolmogorov-Smirnov test") {
    const int n = 1'000'000;
    const double critical = 1.94947 / std::sqrt(static_cast<double>(n));  // 99.9%
    for (int mu : {1, 2, 4}) {
        const FadingParams p(mu, 0.7);
        RandomStream rng(5, static_cast<std::uint64_t>(mu));
        std::vector<double> x(n);
        for (auto& v : x) v = sample_gain(p, rng);
        std::sort(x.begin(), x.end());
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            const double F = gamma_cdf(p, x[static_cast<std::size_t>(i)]);
            d = std::max({d, F - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - F});
        }
        CAPTURE(mu);
        CHECK(d < critical);
    }
}

TEST_CASE("sorted gains") {
    const FadingParams p(1, 1.0);
    RandomStream a(9), b(9);
    auto one = sample_sorted_gains(p, 1, a);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == sample_gain(p, b));

    RandomStream rng(17);
    auto v = sample_sorted_gains(p, 7, rng);
    CHECK(std::is_sorted(v.begin(), v.end()));

    // Minimum of five exponentials against the closed-form order statistic.
    const int trials = 10'000'000;
    const double x = 0.2;
    std::vector<double> buf(5);
    std::uint64_t hits = 0;
    for (int t = 0; t < trials; ++t) {
        sample_sorted_gains(p, buf, rng);
        hits += buf[0] < x ? 1 : 0;
    }
    const double p_hat = static_cast<double>(hits) / trials;
    const double se = std::sqrt(p_hat * (1 - p_hat) / trials);
    CHECK(std::fabs(p_hat - ordered_cdf(p, {1, 5}, x)) < 3.0 * se);
}
