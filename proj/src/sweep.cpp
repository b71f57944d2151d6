#include "noma/cli.hpp"

#include "noma/csv.hpp"
#include "noma/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace noma::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t point_seed(std::uint64_t seed, int mu, ScenarioKind kind, std::size_t point) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(point) + 1);
    x ^= 0xD1B54A32D192ED03ULL * static_cast<std::uint64_t>(mu);
    x ^= static_cast<std::uint64_t>(kind) << 56;
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDULL;
    x ^= x >> 33;
    return x;
}

bool wanted(const SweepSpec& spec, int user) {
    return spec.users.empty() || std::find(spec.users.begin(), spec.users.end(), user) != spec.users.end();
}

void coop_rows(const SweepSpec& spec, const analytic::Scenario1Config& cfg, const std::vector<double>& grid,
               std::vector<SweepRow>& out) {
    const bool mc = spec.include_mc && spec.trials > 0;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const double rho = analytic::db_to_linear(grid[s]);
        montecarlo::Scenario1Estimates est;
        if (mc) {
            montecarlo::TrialBatch batch{spec.trials, point_seed(spec.seed, cfg.mu, ScenarioKind::coop, s),
                                         spec.chunks};
            est = montecarlo::estimate_scenario1(cfg, rho, batch);
        }
        const double oma = spec.include_oma ? analytic::outage_oma_baseline(cfg, rho) : kNaN;
        const double tput = spec.include_throughput ? analytic::throughput_s1(cfg, rho) : kNaN;
        for (int u = 0; u < 2; ++u) {
            SweepRow row;
            row.snr_db = grid[s];
            row.scenario = ScenarioKind::coop;
            row.mu = cfg.mu;
            row.user = u == 0 ? cfg.f : cfg.n;
            if (!wanted(spec, row.user)) continue;
            row.p_exact = u == 0 ? analytic::outage_far_exact(cfg, rho) : analytic::outage_near_exact(cfg, rho);
            row.p_asymptotic = !spec.include_asymptotic ? kNaN
                               : u == 0                 ? analytic::outage_far_asymptotic(cfg, rho)
                                                        : analytic::outage_near_asymptotic(cfg, rho);
            row.p_mc = mc ? (u == 0 ? est.far.p_hat : est.near.p_hat) : kNaN;
            row.mc_stderr = mc ? (u == 0 ? est.far.std_error : est.near.std_error) : kNaN;
            row.p_oma = oma;
            row.throughput = tput;
            out.push_back(row);
        }
    }
}

void direct_rows(const SweepSpec& spec, const analytic::Scenario2Config& cfg, const std::vector<double>& grid,
                 std::vector<SweepRow>& out) {
    const bool mc = spec.include_mc && spec.trials > 0;
    for (std::size_t s = 0; s < grid.size(); ++s) {
        const double rho = analytic::db_to_linear(grid[s]);
        std::vector<montecarlo::Estimate> est;
        if (mc) {
            montecarlo::TrialBatch batch{spec.trials, point_seed(spec.seed, cfg.mu, ScenarioKind::direct, s),
                                         spec.chunks};
            est = montecarlo::estimate_scenario2(cfg, rho, batch);
        }
        const double oma = spec.include_oma ? analytic::outage_oma_baseline(cfg, rho) : kNaN;
        const double tput = spec.include_throughput ? analytic::throughput_s2(cfg, rho) : kNaN;
        for (int m = 1; m <= cfg.users(); ++m) {
            SweepRow row;
            row.snr_db = grid[s];
            row.scenario = ScenarioKind::direct;
            row.mu = cfg.mu;
            row.user = cfg.rank_of(m);
            if (!wanted(spec, row.user)) continue;
            row.p_exact = analytic::outage_user_exact_s2(cfg, rho, m);
            row.p_asymptotic = spec.include_asymptotic ? analytic::outage_user_asymptotic_s2(cfg, rho, m) : kNaN;
            row.p_mc = mc ? est[static_cast<std::size_t>(m - 1)].p_hat : kNaN;
            row.mc_stderr = mc ? est[static_cast<std::size_t>(m - 1)].std_error : kNaN;
            row.p_oma = oma;
            row.throughput = tput;
            out.push_back(row);
        }
    }
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::coop: return "coop";
        case ScenarioKind::direct: return "direct";
        case ScenarioKind::compare: return "compare";
    }
    return "coop";
}

ScenarioKind parse_scenario(std::string_view text) {
    if (text == "coop") return ScenarioKind::coop;
    if (text == "direct") return ScenarioKind::direct;
    if (text == "compare") return ScenarioKind::compare;
    throw std::invalid_argument("unknown scenario '" + std::string(text) + "' (expected coop, direct or compare)");
}

void SweepSpec::validate() const {
    if (!std::isfinite(snr_start) || !std::isfinite(snr_stop)) throw analytic::ConfigError("SNR bounds must be finite");
    if (snr_start > snr_stop) throw analytic::ConfigError("snr start <= stop violated");
    if (!(snr_step > 0.0)) throw analytic::ConfigError("snr step > 0 violated");
    if (chunks == 0) throw analytic::ConfigError("chunks >= 1 violated");
    for (int mu : mu_list) {
        if (mu < 1) throw analytic::ConfigError("mu >= 1 violated (mu=" + std::to_string(mu) + ")");
    }
}

std::vector<double> SweepSpec::grid() const {
    validate();
    const auto points = static_cast<std::size_t>(std::floor((snr_stop - snr_start) / snr_step + 1e-9)) + 1;
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) out[i] = snr_start + static_cast<double>(i) * snr_step;
    return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ScenarioSet& scenarios) {
    const auto grid = spec.grid();
    std::vector<SweepRow> rows;
    const bool coop = spec.scenario != ScenarioKind::direct;
    const bool direct = spec.scenario != ScenarioKind::coop;
    const std::vector<int> mus = spec.mu_list.empty() ? std::vector<int>{} : spec.mu_list;

    auto with_mu = [](auto cfg, std::optional<int> mu) {
        if (mu) cfg.mu = *mu;
        cfg.validate();
        return cfg;
    };
    auto run_for = [&](std::optional<int> mu) {
        if (coop) coop_rows(spec, with_mu(scenarios.scenario1, mu), grid, rows);
        if (direct) direct_rows(spec, with_mu(scenarios.scenario2, mu), grid, rows);
    };
    if (mus.empty()) {
        run_for(std::nullopt);
    } else {
        for (int mu : mus) run_for(mu);
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "snr_db,scenario,mu,user,p_exact,p_asymptotic,p_mc,mc_stderr,p_oma,throughput\n";
    for (const auto& r : rows) {
        os << csv::join({csv::number(r.snr_db), std::string(to_string(r.scenario)), std::to_string(r.mu),
                         std::to_string(r.user), csv::number(r.p_exact), csv::number(r.p_asymptotic),
                         csv::number(r.p_mc), csv::number(r.mc_stderr), csv::number(r.p_oma),
                         csv::number(r.throughput)})
           << '\n';
    }
}

}  // namespace noma::cli
