#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "noma/cli.hpp"
#include "noma/validation.hpp"

#include <cmath>
#include <sstream>

using namespace noma;
using namespace noma::validation;

namespace {

double rel_err(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    for (double x = lo; x <= hi + 1e-9; x += step) g.push_back(x);
    return g;
}

}  // namespace

TEST_CASE("oracles vanish with the threshold") {
    const analytic::RelayBranch b{2, 4.0, 4.0, 1.2};
    CHECK(theta2_oracle(b, 0.0).value == 0.0);
    CHECK(theta4_oracle(b, 0.0).value == 0.0);
    CHECK(theta2_oracle(b, 1e-9).value < 1e-12);
    CHECK(theta4_oracle(b, 1e-9).value < 1e-12);
    CHECK_THROWS_AS(theta2_oracle(b, -1.0), std::domain_error);
}

TEST_CASE("theta2 oracle partitions agree") {
    const analytic::RelayBranch unit{1, 1.0, 1.0, 1.0};
    const auto whole = theta2_oracle(unit, 0.1);
    const auto cut = theta2_oracle(unit, 0.1, 0.5);
    const auto cut2 = theta2_oracle(unit, 0.1, 3.0);
    REQUIRE(whole.converged);
    REQUIRE(cut.converged);
    CHECK(rel_err(cut.value, whole.value) <= 1e-9);
    CHECK(rel_err(cut2.value, whole.value) <= 1e-9);
    // 1 - e^{-0.1} I with I the remaining survival integral
    const double I = (1.0 - whole.value) / std::exp(-0.1);
    CHECK(I > 0.0);
    CHECK(I < 1.0);
}

TEST_CASE("theta4 oracle agrees with a direct simulation of the two-gain event") {
    const auto c = cli::reference_scenario1(1);
    const double rho = analytic::db_to_linear(10.0);
    const auto t = analytic::scenario1_thresholds(c, rho);
    const auto branch = analytic::near_branch(c, rho);
    const auto oracle = theta4_oracle(branch, t.Omega);
    REQUIRE(oracle.converged);
    const fading::FadingParams sr(c.mu, c.omega_sr), rd(c.mu, c.omega_rd_n);
    const std::uint64_t trials = 10'000'000;
    const auto counts = montecarlo::run_blocks({trials, 21, 1}, 1,
                                               [&](fading::RandomStream& rng, std::uint64_t n, std::span<std::uint64_t> out) {
        for (std::uint64_t i = 0; i < n; ++i) {
            const double y = fading::sample_gain(sr, rng);
            const double w = fading::sample_gain(rd, rng);
            out[0] += y * w < t.Omega * (w + branch.C) ? 1 : 0;
        }
    });
    const auto e = montecarlo::Estimate::from_counts(counts[0], trials);
    CHECK(std::fabs(e.p_hat - oracle.value) <= 3.0 * e.std_error);
}

TEST_CASE("ordered_cdf oracle") {
    const fading::FadingParams p(2, 1.5);
    for (int m = 1; m <= 5; ++m) {
        for (double x : {1e-4, 0.1, 1.0, 4.0}) {
            const auto o = ordered_cdf_oracle(p, {m, 5}, x);
            CHECK(o.converged);
            CHECK(rel_err(fading::ordered_cdf(p, {m, 5}, x), o.value) <= 1e-8);
        }
    }
}

TEST_CASE("row verdicts follow the stored numbers") {
    ComparisonRow row;
    row.exact = 0.5;
    row.oracle = 0.5 * (1 + 5e-7);
    CHECK(row_passes(row));
    row.oracle = 0.5 * (1 + 2e-6);
    CHECK_FALSE(row_passes(row));
    row.oracle = 0.5;
    row.oracle_converged = false;
    CHECK_FALSE(row_passes(row));
    row.oracle_converged = true;
    row.mc_checked = true;
    row.mc = 0.51;
    row.mc_stderr = 0.004;
    CHECK(row_passes(row));
    row.mc_stderr = 0.003;
    CHECK_FALSE(row_passes(row));
    row.mc = NAN;
    CHECK_FALSE(row_passes(row));
    row.mc_checked = false;
    CHECK(row_passes(row));
}

TEST_CASE("empty configuration gives an empty passing report") {
    const auto g = grid(0, 40, 5);
    const auto r = run_validation_suite({}, g, {1000, 1, 1});
    CHECK(r.rows.empty());
    CHECK(r.passed);
}

TEST_CASE("reference scenario-1 setup passes at mu=1") {
    ValidationConfigs cfgs;
    cfgs.scenario1.push_back(cli::reference_scenario1(1));
    const auto g = grid(0, 40, 5);
    const auto r = run_validation_suite(cfgs, g, {1'000'000, 7, 1});
    CHECK(r.rows.size() == 2 * g.size());
    for (const auto& row : r.rows) {
        CAPTURE(row.rho_db);
        CAPTURE(row.quantity);
        CHECK(row.pass);
        CHECK(row.pass == row_passes(row));
    }
    CHECK(r.passed);
    const bool any_mc = std::any_of(r.rows.begin(), r.rows.end(), [](const auto& x) { return x.mc_checked; });
    CHECK(any_mc);

    // deterministic
    const auto again = run_validation_suite(cfgs, g, {1'000'000, 7, 1});
    std::ostringstream a, b;
    write_report_csv(a, r);
    write_report_csv(b, again);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("rho_db,scenario,mu,user,quantity,exact,oracle,mc,mc_stderr,verdict,criterion\n", 0) == 0);
}

TEST_CASE("violated decoding condition: exact and simulation both give 1") {
    ValidationConfigs cfgs;
    auto c = cli::reference_scenario1(1);
    c.a_f = 0.55;
    c.a_n = 0.45;  // a_f < a_n * 3
    cfgs.scenario1.push_back(c);
    auto s = cli::reference_scenario2(1);
    s.R[0] = 1.1;
    cfgs.scenario2.push_back(s);
    const auto g = grid(10, 30, 10);
    const auto r = run_validation_suite(cfgs, g, {100'000, 3, 1});
    REQUIRE(!r.rows.empty());
    for (const auto& row : r.rows) {
        CHECK(row.exact == 1.0);
        CHECK(row.mc == 1.0);
        CHECK(row.mc_stderr == 0.0);
        CHECK(row.pass);
    }
    CHECK(r.passed);
}

TEST_CASE("trials = 0 gives an oracle-only report") {
    ValidationConfigs cfgs;
    cfgs.scenario2.push_back(cli::reference_scenario2(2));
    const auto r = run_validation_suite(cfgs, grid(0, 40, 10), {0, 1, 1});
    CHECK(r.rows.size() == 15);
    for (const auto& row : r.rows) {
        CHECK_FALSE(row.mc_checked);
        CHECK(std::isnan(row.mc));
    }
    CHECK(r.passed);
}
