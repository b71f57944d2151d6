#include "noma/cli.hpp"

#include "noma/montecarlo.hpp"

namespace noma::cli {

namespace {

void report_warnings(const ScenarioSet& s, const SweepSpec& spec, std::ostream& err) {
    if (spec.scenario == ScenarioKind::direct) return;
    for (const auto& w : s.scenario1.warnings()) err << "warning: " << w << '\n';
}

}  // namespace

int cmd_sweep(const SweepSpec& spec, const ScenarioSet& scenarios, std::ostream& out, std::ostream& err) {
    std::vector<SweepRow> rows;
    try {
        spec.validate();
        rows = run_sweep(spec, scenarios);
    } catch (const analytic::ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    report_warnings(scenarios, spec, err);
    write_sweep_csv(out, rows);
    return kOk;
}

int cmd_figure(std::string_view id, const std::optional<SweepSpec>& overrides, std::ostream& out,
               std::ostream& err) {
    FigurePreset preset;
    try {
        preset = figure_preset(id);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "; known ids:";
        for (const auto& known : figure_ids()) err << ' ' << known;
        err << '\n';
        return kUsageError;
    }
    if (overrides) preset.spec = *overrides;
    std::vector<SweepRow> rows;
    try {
        preset.spec.validate();
        rows = run_sweep(preset.spec, preset.scenarios);
    } catch (const analytic::ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    for (const auto& line : preset.header) out << "# " << line << '\n';
    write_sweep_csv(out, rows);
    return kOk;
}

int cmd_validate(const validation::ValidationConfigs& configs, const SweepSpec& spec, std::ostream& out,
                 std::ostream& err) {
    std::vector<double> grid;
    try {
        grid = spec.grid();
        for (const auto& c : configs.scenario1) c.validate();
        for (const auto& c : configs.scenario2) c.validate();
    } catch (const analytic::ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    const montecarlo::TrialBatch batch{spec.include_mc ? spec.trials : 0, spec.seed, spec.chunks};
    const auto report = validation::run_validation_suite(configs, grid, batch);
    validation::write_report_csv(out, report);
    std::size_t failed = 0;
    for (const auto& row : report.rows) failed += row.pass ? 0 : 1;
    err << report.rows.size() << " rows, " << failed << " failed\n";
    return report.passed ? kOk : kValidationFailed;
}

validation::ValidationConfigs validation_configs(const ConfigFile* file, const std::vector<int>& mu_list) {
    validation::ValidationConfigs base;
    const bool any = file && (file->scenario1 || file->scenario2);
    if (!any || file->scenario1) base.scenario1.push_back(any ? *file->scenario1 : reference_scenario1());
    if (!any || file->scenario2) base.scenario2.push_back(any ? *file->scenario2 : reference_scenario2());
    if (mu_list.empty()) return base;
    validation::ValidationConfigs out;
    for (int mu : mu_list) {
        for (auto c : base.scenario1) {
            c.mu = mu;
            out.scenario1.push_back(c);
        }
        for (auto c : base.scenario2) {
            c.mu = mu;
            out.scenario2.push_back(c);
        }
    }
    return out;
}

}  // namespace noma::cli
