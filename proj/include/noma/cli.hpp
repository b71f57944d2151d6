#pragma once

#include "noma/analytic.hpp"
#include "noma/validation.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace noma::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsageError = 2 };

enum class ScenarioKind { coop, direct, compare };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario(std::string_view text);

struct SweepSpec {
    ScenarioKind scenario = ScenarioKind::coop;
    double snr_start = 0.0;
    double snr_stop = 40.0;
    double snr_step = 5.0;
    std::vector<int> mu_list;  ///< empty: use the configs' own mu
    std::vector<int> users;    ///< ranks to report; empty: all
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 1;
    unsigned chunks = 1;
    bool include_asymptotic = true;
    bool include_mc = true;
    bool include_oma = false;
    bool include_throughput = true;

    void validate() const;
    /// Grid points start, start + step, ... up to stop inclusive.
    std::vector<double> grid() const;
};

struct ScenarioSet {
    analytic::Scenario1Config scenario1;
    analytic::Scenario2Config scenario2;
};

struct SweepRow {
    double snr_db = 0.0;
    ScenarioKind scenario = ScenarioKind::coop;
    int mu = 1;
    int user = 0;  ///< order-statistic rank
    double p_exact = 0.0;
    double p_asymptotic = 0.0;
    double p_mc = 0.0;
    double mc_stderr = 0.0;
    double p_oma = 0.0;
    double throughput = 0.0;
};

/// One row per (snr, user), for each mu and (for `compare`) each scenario.
/// Columns not requested hold NaN and are written as empty fields.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const ScenarioSet& scenarios);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Config-file problem located at `line` (0 when not tied to a line).
class ConfigParseError : public std::runtime_error {
public:
    ConfigParseError(const std::string& source, int line, const std::string& field, const std::string& message);
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

/// INI-style file with optional [scenario1], [scenario2] and [sweep]
/// sections of `key = value` lines; '#' and ';' start comments. Lists are
/// comma separated.
struct ConfigFile {
    std::optional<analytic::Scenario1Config> scenario1;
    std::optional<analytic::Scenario2Config> scenario2;
    SweepSpec sweep;
    bool has_sweep = false;
};

ConfigFile parse_config(std::istream& in, const std::string& source = "<config>");
ConfigFile load_config(const std::string& path);

struct FigurePreset {
    std::string id;
    std::string title;
    SweepSpec spec;
    ScenarioSet scenarios;
    /// `key = value` lines echoed as '#' comments above the CSV.
    std::vector<std::string> header;
};

/// fig2 ... fig8. Throws std::invalid_argument for an unknown id.
FigurePreset figure_preset(std::string_view id);
std::vector<std::string> figure_ids();

/// Reference setups with the given fading shape.
analytic::Scenario1Config reference_scenario1(int mu = 1);
analytic::Scenario2Config reference_scenario2(int mu = 1);
ScenarioSet pairing_comparison(int mu = 1);

/// Subcommand bodies; the executable only parses flags. Each returns an
/// ExitCode and reports problems on `err`.
int cmd_sweep(const SweepSpec& spec, const ScenarioSet& scenarios, std::ostream& out, std::ostream& err);
int cmd_figure(std::string_view id, const std::optional<SweepSpec>& overrides, std::ostream& out, std::ostream& err);
int cmd_validate(const validation::ValidationConfigs& configs, const SweepSpec& spec, std::ostream& out,
                 std::ostream& err);

/// Validation inputs: the file's scenarios (or both reference setups when
/// absent), replicated across `mu_list` when it is non-empty.
validation::ValidationConfigs validation_configs(const ConfigFile* file, const std::vector<int>& mu_list);

}  // namespace noma::cli
