#pragma once

#include "noma/analytic.hpp"
#include "noma/montecarlo.hpp"
#include "noma/numerics.hpp"

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace noma::validation {

/// Closed form vs quadrature oracle, relative.
inline constexpr double kOracleRelTol = 1e-6;
/// Closed form vs Monte Carlo, in standard errors.
inline constexpr double kMcSigmas = 3.0;
/// Below this the Monte Carlo leg is not checked.
inline constexpr double kMcMinProbability = 1e-4;

/// Pure-relative quadrature settings used by every oracle.
numerics::QuadratureOptions oracle_quadrature();

/// Relay-branch outage by one-dimensional quadrature:
/// F_sr(z) + int_z^inf f_sr(y) F_rd(zC/(y-z)) dy.
/// With `split`, the integral is cut at z + split into a finite and a
/// semi-infinite piece.
numerics::QuadratureResult theta2_oracle(const analytic::RelayBranch& branch, double z,
                                         std::optional<double> split = std::nullopt);

/// Near-user relay-branch outage as a nested double integral of the two
/// densities over the outage region {h_sr < z} U {h_sr > z, h_rd < zC/(h_sr - z)}.
/// Independent of theta2_oracle: no closed-form CDF is used.
numerics::QuadratureResult theta4_oracle(const analytic::RelayBranch& branch, double z);

/// Order-statistic CDF as the integral of its density over [0, x].
numerics::QuadratureResult ordered_cdf_oracle(const fading::FadingParams& p, const fading::OrderedIndex& idx,
                                              double x);

struct ComparisonRow {
    double rho_db = 0.0;
    std::string scenario;  ///< "coop" or "direct"
    int mu = 1;
    int user = 0;          ///< order-statistic rank
    std::string quantity;  ///< "far", "near" or "user"
    double exact = 0.0;
    double oracle = 0.0;
    bool oracle_converged = true;
    double mc = 0.0;
    double mc_stderr = 0.0;
    bool mc_checked = false;
    bool pass = false;
    std::string criterion;
};

/// Recomputes the verdict from the stored numbers.
bool row_passes(const ComparisonRow& row);

struct ValidationConfigs {
    std::vector<analytic::Scenario1Config> scenario1;
    std::vector<analytic::Scenario2Config> scenario2;
};

struct ValidationReport {
    std::vector<ComparisonRow> rows;
    bool passed = true;
};

/// Exact, oracle and (for trials > 0) Monte Carlo for every user of every
/// config at every grid point. Oracle failures fail their row only.
ValidationReport run_validation_suite(const ValidationConfigs& configs, std::span<const double> snr_db,
                                      const montecarlo::TrialBatch& batch);

void write_report_csv(std::ostream& os, const ValidationReport& report);

}  // namespace noma::validation
