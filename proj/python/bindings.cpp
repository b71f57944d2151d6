// Python bindings for the outage-analysis library.
#include "noma/analytic.hpp"
#include "noma/cli.hpp"
#include "noma/fading.hpp"
#include "noma/montecarlo.hpp"
#include "noma/validation.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace noma;

namespace {

montecarlo::TrialBatch make_batch(std::uint64_t trials, std::uint64_t seed, unsigned chunks) {
    return {trials, seed, chunks};
}

py::dict estimate_dict(const montecarlo::Estimate& e) {
    py::dict d;
    d["p_hat"] = e.p_hat;
    d["std_error"] = e.std_error;
    d["trials"] = e.trials;
    d["events"] = e.events;
    return d;
}

std::string sweep_csv(const cli::SweepSpec& spec, const cli::ScenarioSet& set) {
    std::ostringstream out, err;
    if (cli::cmd_sweep(spec, set, out, err) != cli::kOk) throw std::invalid_argument(err.str());
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_noma_perf, m) {
    m.doc() = "Outage analysis of NOMA with fixed-gain AF relaying over Nakagami-m fading";

    py::register_exception<analytic::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<cli::ConfigParseError>(m, "ConfigParseError", PyExc_ValueError);

    py::enum_<analytic::GainMode>(m, "GainMode")
        .value("literal_kappa", analytic::GainMode::literal_kappa)
        .value("power_normalized", analytic::GainMode::power_normalized);

    py::class_<analytic::Scenario1Config>(m, "Scenario1Config")
        .def(py::init<>())
        .def_readwrite("M", &analytic::Scenario1Config::M)
        .def_readwrite("f", &analytic::Scenario1Config::f)
        .def_readwrite("n", &analytic::Scenario1Config::n)
        .def_readwrite("a_f", &analytic::Scenario1Config::a_f)
        .def_readwrite("a_n", &analytic::Scenario1Config::a_n)
        .def_readwrite("R_f", &analytic::Scenario1Config::R_f)
        .def_readwrite("R_n", &analytic::Scenario1Config::R_n)
        .def_readwrite("kappa", &analytic::Scenario1Config::kappa)
        .def_readwrite("gain_mode", &analytic::Scenario1Config::gain_mode)
        .def_readwrite("omega_sd_f", &analytic::Scenario1Config::omega_sd_f)
        .def_readwrite("omega_sd_n", &analytic::Scenario1Config::omega_sd_n)
        .def_readwrite("omega_sr", &analytic::Scenario1Config::omega_sr)
        .def_readwrite("omega_rd_f", &analytic::Scenario1Config::omega_rd_f)
        .def_readwrite("omega_rd_n", &analytic::Scenario1Config::omega_rd_n)
        .def_readwrite("mu", &analytic::Scenario1Config::mu)
        .def("validate", &analytic::Scenario1Config::validate)
        .def("warnings", &analytic::Scenario1Config::warnings);

    py::class_<analytic::Scenario2Config>(m, "Scenario2Config")
        .def(py::init<>())
        .def_readwrite("M", &analytic::Scenario2Config::M)
        .def_readwrite("ranks", &analytic::Scenario2Config::ranks)
        .def_readwrite("a", &analytic::Scenario2Config::a)
        .def_readwrite("R", &analytic::Scenario2Config::R)
        .def_readwrite("omega", &analytic::Scenario2Config::omega)
        .def_readwrite("mu", &analytic::Scenario2Config::mu)
        .def("users", &analytic::Scenario2Config::users)
        .def("validate", &analytic::Scenario2Config::validate);

    py::class_<analytic::Scenario1Thresholds>(m, "Scenario1Thresholds")
        .def_readonly("gamma_th_f", &analytic::Scenario1Thresholds::gamma_th_f)
        .def_readonly("gamma_th_n", &analytic::Scenario1Thresholds::gamma_th_n)
        .def_readonly("epsilon", &analytic::Scenario1Thresholds::epsilon)
        .def_readonly("beta", &analytic::Scenario1Thresholds::beta)
        .def_readonly("Omega", &analytic::Scenario1Thresholds::Omega)
        .def_readonly("C", &analytic::Scenario1Thresholds::C)
        .def_readonly("far_decodable", &analytic::Scenario1Thresholds::far_decodable);

    py::class_<analytic::Scenario2Thresholds>(m, "Scenario2Thresholds")
        .def_readonly("gamma_th", &analytic::Scenario2Thresholds::gamma_th)
        .def_readonly("phi", &analytic::Scenario2Thresholds::phi)
        .def_readonly("phi_star", &analytic::Scenario2Thresholds::phi_star)
        .def_readonly("decodable", &analytic::Scenario2Thresholds::decodable);

    py::class_<analytic::RelayBranch>(m, "RelayBranch")
        .def_readonly("mu", &analytic::RelayBranch::mu)
        .def_readonly("omega_sr", &analytic::RelayBranch::omega_sr)
        .def_readonly("omega_rd", &analytic::RelayBranch::omega_rd)
        .def_readonly("C", &analytic::RelayBranch::C);

    m.def("reference_scenario1", &cli::reference_scenario1, py::arg("mu") = 1);
    m.def("reference_scenario2", &cli::reference_scenario2, py::arg("mu") = 1);
    m.def("db_to_linear", &analytic::db_to_linear);
    m.def("threshold_snr", &analytic::threshold_snr, py::arg("R"), py::arg("slots"));
    m.def("scenario1_thresholds", &analytic::scenario1_thresholds);
    m.def("scenario2_thresholds", &analytic::scenario2_thresholds, py::arg("cfg"), py::arg("rho"), py::arg("user"));
    m.def("far_branch", &analytic::far_branch);
    m.def("near_branch", &analytic::near_branch);
    m.def("theta2", &analytic::theta2_closed, py::arg("branch"), py::arg("z"));

    m.def("gamma_cdf", [](int mu, double omega, double x) { return fading::gamma_cdf({mu, omega}, x); });
    m.def("gamma_pdf", [](int mu, double omega, double x) { return fading::gamma_pdf({mu, omega}, x); });
    m.def("ordered_cdf", [](int mu, double omega, int m_rank, int M, double x) {
        return fading::ordered_cdf({mu, omega}, {m_rank, M}, x);
    }, py::arg("mu"), py::arg("omega"), py::arg("m"), py::arg("M"), py::arg("x"));

    m.def("outage_far", &analytic::outage_far_exact);
    m.def("outage_near", &analytic::outage_near_exact);
    m.def("outage_far_asymptotic", &analytic::outage_far_asymptotic);
    m.def("outage_near_asymptotic", &analytic::outage_near_asymptotic);
    m.def("outage_user", &analytic::outage_user_exact_s2, py::arg("cfg"), py::arg("rho"), py::arg("user"));
    m.def("outage_user_asymptotic", &analytic::outage_user_asymptotic_s2, py::arg("cfg"), py::arg("rho"),
          py::arg("user"));
    m.def("throughput_s1", &analytic::throughput_s1);
    m.def("throughput_s2", &analytic::throughput_s2);
    m.def("outage_oma", py::overload_cast<const analytic::Scenario1Config&, double>(&analytic::outage_oma_baseline));
    m.def("outage_oma", py::overload_cast<const analytic::Scenario2Config&, double>(&analytic::outage_oma_baseline));
    m.def("diversity_order", [](const std::vector<double>& rho, const std::vector<double>& p) {
        if (rho.size() != p.size()) throw std::invalid_argument("rho and p must have equal length");
        std::vector<analytic::CurvePoint> curve;
        for (std::size_t i = 0; i < rho.size(); ++i) curve.push_back({rho[i], p[i]});
        return analytic::diversity_order_fit(curve).order;
    });

    m.def("simulate_scenario1", [](const analytic::Scenario1Config& cfg, double rho, std::uint64_t trials,
                                   std::uint64_t seed, unsigned chunks) {
        montecarlo::Scenario1Estimates e;
        {
            py::gil_scoped_release release;
            e = montecarlo::estimate_scenario1(cfg, rho, make_batch(trials, seed, chunks));
        }
        py::dict d;
        d["far"] = estimate_dict(e.far);
        d["near"] = estimate_dict(e.near);
        return d;
    }, py::arg("cfg"), py::arg("rho"), py::arg("trials") = 1'000'000, py::arg("seed") = 1, py::arg("chunks") = 1);
    m.def("simulate_scenario2", [](const analytic::Scenario2Config& cfg, double rho, std::uint64_t trials,
                                   std::uint64_t seed, unsigned chunks) {
        std::vector<montecarlo::Estimate> e;
        {
            py::gil_scoped_release release;
            e = montecarlo::estimate_scenario2(cfg, rho, make_batch(trials, seed, chunks));
        }
        py::list out;
        for (const auto& x : e) out.append(estimate_dict(x));
        return out;
    }, py::arg("cfg"), py::arg("rho"), py::arg("trials") = 1'000'000, py::arg("seed") = 1, py::arg("chunks") = 1);

    m.def("theta2_oracle", [](const analytic::RelayBranch& b, double z) {
        return validation::theta2_oracle(b, z).value;
    });
    m.def("theta4_oracle", [](const analytic::RelayBranch& b, double z) {
        return validation::theta4_oracle(b, z).value;
    });

    m.def("sweep_csv", [](const std::string& scenario, double snr_start, double snr_stop, double snr_step,
                          const std::vector<int>& mu, std::uint64_t trials, std::uint64_t seed, bool mc, bool oma,
                          const std::optional<analytic::Scenario1Config>& s1,
                          const std::optional<analytic::Scenario2Config>& s2) {
        cli::SweepSpec spec;
        spec.scenario = cli::parse_scenario(scenario);
        spec.snr_start = snr_start;
        spec.snr_stop = snr_stop;
        spec.snr_step = snr_step;
        spec.mu_list = mu;
        spec.trials = trials;
        spec.seed = seed;
        spec.include_mc = mc;
        spec.include_oma = oma;
        const cli::ScenarioSet set{s1.value_or(cli::reference_scenario1()), s2.value_or(cli::reference_scenario2())};
        py::gil_scoped_release release;
        return sweep_csv(spec, set);
    }, py::arg("scenario") = "coop", py::arg("snr_start") = 0.0, py::arg("snr_stop") = 40.0, py::arg("snr_step") = 5.0,
       py::arg("mu") = std::vector<int>{}, py::arg("trials") = 100'000, py::arg("seed") = 1, py::arg("mc") = true,
       py::arg("oma") = false, py::arg("scenario1") = py::none(), py::arg("scenario2") = py::none());

    m.def("figure_ids", &cli::figure_ids);
    m.def("figure_csv", [](const std::string& id) {
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = cli::cmd_figure(id, std::nullopt, out, err);
        }
        if (code != cli::kOk) throw std::invalid_argument(err.str());
        return out.str();
    });

    m.def("validate", [](const std::vector<int>& mu, double snr_start, double snr_stop, double snr_step,
                         std::uint64_t trials, std::uint64_t seed) {
        cli::SweepSpec spec;
        spec.snr_start = snr_start;
        spec.snr_stop = snr_stop;
        spec.snr_step = snr_step;
        spec.trials = trials;
        spec.seed = seed;
        spec.include_mc = trials > 0;
        const auto configs = cli::validation_configs(nullptr, mu);
        std::ostringstream out, err;
        int code;
        {
            py::gil_scoped_release release;
            code = cli::cmd_validate(configs, spec, out, err);
        }
        if (code == cli::kUsageError) throw std::invalid_argument(err.str());
        return py::make_tuple(code == cli::kOk, out.str());
    }, py::arg("mu") = std::vector<int>{1}, py::arg("snr_start") = 0.0, py::arg("snr_stop") = 40.0,
       py::arg("snr_step") = 5.0, py::arg("trials") = 100'000, py::arg("seed") = 1);
}
