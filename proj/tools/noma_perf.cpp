// noma_perf: outage and throughput sweeps for cooperative / non-cooperative
// NOMA over Nakagami-m fading.
#include "noma/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using noma::cli::SweepSpec;

struct Flags {
    std::string scenario;
    std::optional<double> snr_start, snr_stop, snr_step;
    std::vector<int> mu;
    std::vector<int> users;
    std::optional<std::uint64_t> trials, seed;
    std::optional<unsigned> chunks;
    std::string out;
    std::string config;
    bool no_mc = false;
    bool oma = false;

    bool touches_sweep() const {
        return !scenario.empty() || snr_start || snr_stop || snr_step || !mu.empty() || !users.empty() || trials ||
               seed || chunks || no_mc || oma;
    }

    void apply(SweepSpec& s) const {
        if (!scenario.empty()) s.scenario = noma::cli::parse_scenario(scenario);
        if (snr_start) s.snr_start = *snr_start;
        if (snr_stop) s.snr_stop = *snr_stop;
        if (snr_step) s.snr_step = *snr_step;
        if (!mu.empty()) s.mu_list = mu;
        if (!users.empty()) s.users = users;
        if (trials) s.trials = *trials;
        if (seed) s.seed = *seed;
        if (chunks) s.chunks = *chunks;
        if (no_mc) s.include_mc = false;
        if (oma) s.include_oma = true;
    }
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--scenario", f.scenario, "coop, direct or compare");
    cmd->add_option("--snr-start", f.snr_start, "first SNR point in dB");
    cmd->add_option("--snr-stop", f.snr_stop, "last SNR point in dB");
    cmd->add_option("--snr-step", f.snr_step, "SNR step in dB");
    cmd->add_option("--mu", f.mu, "Nakagami shape(s)")->delimiter(',');
    cmd->add_option("--users", f.users, "ranks to report")->delimiter(',');
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per point (0 disables)");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed");
    cmd->add_option("--chunks", f.chunks, "work chunks per point")->check(CLI::PositiveNumber);
    cmd->add_option("--out", f.out, "output file (default stdout)");
    cmd->add_option("--config", f.config, "INI config file");
    cmd->add_flag("--no-mc", f.no_mc, "skip Monte Carlo");
    cmd->add_flag("--oma", f.oma, "include the OMA baseline");
}

int run(int argc, char** argv) {
    CLI::App app{"Outage and throughput of NOMA with fixed-gain AF relaying over Nakagami-m fading"};
    app.require_subcommand(1);
    Flags f;
    std::string figure_id;
    auto* sweep = app.add_subcommand("sweep", "SNR sweep written as CSV");
    auto* figure = app.add_subcommand("figure", "reproduce a figure preset (fig2 ... fig8)");
    auto* validate = app.add_subcommand("validate", "compare closed forms against oracles and simulation");
    add_common(sweep, f);
    add_common(figure, f);
    add_common(validate, f);
    figure->add_option("id", figure_id, "figure id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? noma::cli::kOk : noma::cli::kUsageError;
    }

    try {
        std::optional<noma::cli::ConfigFile> file;
        if (!f.config.empty()) file = noma::cli::load_config(f.config);

        std::ofstream file_out;
        std::ostream* out = &std::cout;
        if (!f.out.empty()) {
            file_out.open(f.out);
            if (!file_out) {
                std::cerr << "error: cannot write " << f.out << '\n';
                return noma::cli::kUsageError;
            }
            out = &file_out;
        }

        int code = noma::cli::kOk;
        if (sweep->parsed()) {
            SweepSpec spec = file && file->has_sweep ? file->sweep : SweepSpec{};
            f.apply(spec);
            noma::cli::ScenarioSet set{noma::cli::reference_scenario1(), noma::cli::reference_scenario2()};
            if (file && file->scenario1) set.scenario1 = *file->scenario1;
            if (file && file->scenario2) set.scenario2 = *file->scenario2;
            code = noma::cli::cmd_sweep(spec, set, *out, std::cerr);
        } else if (figure->parsed()) {
            std::optional<SweepSpec> overrides;
            if (f.touches_sweep()) {
                try {
                    SweepSpec spec = noma::cli::figure_preset(figure_id).spec;
                    f.apply(spec);
                    overrides = spec;
                } catch (const std::invalid_argument&) {
                    // reported by cmd_figure
                }
            }
            code = noma::cli::cmd_figure(figure_id, overrides, *out, std::cerr);
        } else {
            SweepSpec spec = file && file->has_sweep ? file->sweep : SweepSpec{};
            if (!(file && file->has_sweep)) spec.trials = 1'000'000;
            f.apply(spec);
            const auto configs = noma::cli::validation_configs(file ? &*file : nullptr,
                                                               spec.mu_list.empty() ? std::vector<int>{1, 2, 3}
                                                                                    : spec.mu_list);
            code = noma::cli::cmd_validate(configs, spec, *out, std::cerr);
        }
        if (out == &file_out) {
            file_out.close();
            if (!file_out) {
                std::cerr << "error: failed writing " << f.out << '\n';
                return noma::cli::kUsageError;
            }
        }
        return code;
    } catch (const noma::cli::ConfigParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return noma::cli::kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return noma::cli::kUsageError;
    }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
