#include "noma/cli.hpp"

#include "noma/csv.hpp"

#include <stdexcept>

namespace noma::cli {

namespace {

std::string list(const std::vector<double>& v) {
    std::vector<std::string> parts;
    for (double x : v) parts.push_back(csv::number(x));
    return csv::join(parts);
}

std::string list(const std::vector<int>& v) {
    std::vector<std::string> parts;
    for (int x : v) parts.push_back(std::to_string(x));
    return csv::join(parts);
}

void echo_scenario1(const analytic::Scenario1Config& c, std::vector<std::string>& h) {
    auto kv = [&](const std::string& key, const std::string& value) { h.push_back("scenario1." + key + " = " + value); };
    kv("M", std::to_string(c.M));
    kv("f", std::to_string(c.f));
    kv("n", std::to_string(c.n));
    kv("a_f", csv::number(c.a_f));
    kv("a_n", csv::number(c.a_n));
    kv("R_f", csv::number(c.R_f));
    kv("R_n", csv::number(c.R_n));
    kv("kappa", csv::number(c.kappa));
    kv("gain_mode", c.gain_mode == analytic::GainMode::literal_kappa ? "literal-kappa" : "power-normalized");
    kv("omega_sd_f", csv::number(c.omega_sd_f));
    kv("omega_sd_n", csv::number(c.omega_sd_n));
    kv("omega_sr", csv::number(c.omega_sr));
    kv("omega_rd_f", csv::number(c.omega_rd_f));
    kv("omega_rd_n", csv::number(c.omega_rd_n));
}

void echo_scenario2(const analytic::Scenario2Config& c, std::vector<std::string>& h) {
    auto kv = [&](const std::string& key, const std::string& value) { h.push_back("scenario2." + key + " = " + value); };
    kv("M", std::to_string(c.M));
    if (!c.ranks.empty()) kv("ranks", list(c.ranks));
    kv("a", list(c.a));
    kv("R", list(c.R));
    kv("omega", list(c.omega));
}

void echo_sweep(const SweepSpec& s, std::vector<std::string>& h) {
    auto kv = [&](const std::string& key, const std::string& value) { h.push_back("sweep." + key + " = " + value); };
    kv("scenario", std::string(to_string(s.scenario)));
    kv("snr_start", csv::number(s.snr_start));
    kv("snr_stop", csv::number(s.snr_stop));
    kv("snr_step", csv::number(s.snr_step));
    kv("mu", list(s.mu_list));
    kv("trials", std::to_string(s.trials));
    kv("seed", std::to_string(s.seed));
    kv("mc", s.include_mc ? "true" : "false");
    kv("oma", s.include_oma ? "true" : "false");
}

SweepSpec figure_spec(ScenarioKind kind, std::vector<int> mus, bool mc, bool oma) {
    SweepSpec s;
    s.scenario = kind;
    s.snr_start = 0.0;
    s.snr_stop = 40.0;
    s.snr_step = 2.0;
    s.mu_list = std::move(mus);
    s.include_mc = mc;
    s.include_oma = oma;
    return s;
}

}  // namespace

analytic::Scenario1Config reference_scenario1(int mu) {
    analytic::Scenario1Config c;
    const analytic::RelayGeometry g;
    c.omega_sr = g.omega_sr();
    c.omega_rd_f = c.omega_rd_n = g.omega_rd();
    c.mu = mu;
    c.validate();
    return c;
}

analytic::Scenario2Config reference_scenario2(int mu) {
    analytic::Scenario2Config c;
    c.mu = mu;
    c.validate();
    return c;
}

// Users 1 and 3 of three, served with and without the relay.
ScenarioSet pairing_comparison(int mu) {
    ScenarioSet set;
    set.scenario1 = reference_scenario1(mu);
    set.scenario1.M = 3;
    set.scenario1.n = 3;
    set.scenario1.R_f = 0.5;
    set.scenario1.R_n = 1.0;
    set.scenario1.validate();

    set.scenario2.M = 3;
    set.scenario2.ranks = {1, 3};
    set.scenario2.a = {0.8, 0.2};
    set.scenario2.R = {0.5, 1.0};
    set.scenario2.omega = {1.0, 1.0};
    set.scenario2.mu = mu;
    set.scenario2.validate();
    return set;
}

std::vector<std::string> figure_ids() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"}; }

FigurePreset figure_preset(std::string_view id) {
    FigurePreset p;
    p.id = std::string(id);
    p.scenarios = {reference_scenario1(1), reference_scenario2(1)};
    if (id == "fig2") {
        p.title = "Cooperative NOMA outage versus SNR, f=1, n=5, mu=1";
        p.spec = figure_spec(ScenarioKind::coop, {1}, true, true);
    } else if (id == "fig3") {
        p.title = "Cooperative NOMA outage versus SNR, f=1, n=5, mu=2,3";
        p.spec = figure_spec(ScenarioKind::coop, {2, 3}, false, false);
    } else if (id == "fig4") {
        p.title = "Non-cooperative NOMA outage versus SNR, mu=1";
        p.spec = figure_spec(ScenarioKind::direct, {1}, true, true);
    } else if (id == "fig5") {
        p.title = "Non-cooperative NOMA outage versus SNR, mu=2,3";
        p.spec = figure_spec(ScenarioKind::direct, {2, 3}, false, false);
    } else if (id == "fig6") {
        p.title = "Cooperative NOMA delay-limited throughput";
        p.spec = figure_spec(ScenarioKind::coop, {1, 2, 3}, false, true);
    } else if (id == "fig7") {
        p.title = "Non-cooperative NOMA delay-limited throughput";
        p.spec = figure_spec(ScenarioKind::direct, {1, 2, 3}, false, true);
    } else if (id == "fig8") {
        p.title = "Outage of users 1 and 3 with and without the relay, f=1, n=3";
        p.spec = figure_spec(ScenarioKind::compare, {1}, false, false);
        p.scenarios = pairing_comparison(1);
    } else {
        throw std::invalid_argument("unknown figure id '" + std::string(id) + "'");
    }
    p.header.push_back("figure = " + p.id);
    p.header.push_back("title = " + p.title);
    if (p.spec.scenario != ScenarioKind::direct) echo_scenario1(p.scenarios.scenario1, p.header);
    if (p.spec.scenario != ScenarioKind::coop) echo_scenario2(p.scenarios.scenario2, p.header);
    echo_sweep(p.spec, p.header);
    return p;
}

}  // namespace noma::cli
