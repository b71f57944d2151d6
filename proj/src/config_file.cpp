#include "noma/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>

namespace noma::cli {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

struct Section {
    int line = 0;
    std::map<std::string, Entry> entries;
};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

class Reader {
public:
    Reader(std::string source, std::string section, const Section& sec)
        : source_(std::move(source)), section_(std::move(section)), sec_(sec) {}

    bool has(const std::string& key) const { return sec_.entries.count(key) > 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const {
        const auto it = sec_.entries.find(key);
        const int line = it == sec_.entries.end() ? sec_.line : it->second.line;
        throw ConfigParseError(source_, line, section_ + "." + key, message);
    }

    double number(const std::string& key) const { return parse_number(key, sec_.entries.at(key).value); }

    long long integer(const std::string& key) const { return parse_integer(key, sec_.entries.at(key).value); }

    bool boolean(const std::string& key) const {
        const auto& v = sec_.entries.at(key).value;
        if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
        if (v == "false" || v == "no" || v == "0" || v == "off") return false;
        fail(key, "expected a boolean, got '" + v + "'");
    }

    std::string text(const std::string& key) const { return sec_.entries.at(key).value; }

    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : split(key)) out.push_back(parse_number(key, item));
        return out;
    }

    std::vector<int> integers(const std::string& key) const {
        std::vector<int> out;
        for (const auto& item : split(key)) out.push_back(static_cast<int>(parse_integer(key, item)));
        return out;
    }

    void reject_unknown(const std::set<std::string>& allowed) const {
        for (const auto& [key, entry] : sec_.entries) {
            if (!allowed.count(key)) fail(key, "unknown field");
        }
    }

    [[noreturn]] void fail_section(const std::string& message) const {
        throw ConfigParseError(source_, sec_.line, section_, message);
    }

private:
    std::vector<std::string> split(const std::string& key) const {
        std::vector<std::string> out;
        std::string_view rest = sec_.entries.at(key).value;
        while (true) {
            const auto comma = rest.find(',');
            const auto item = trim(rest.substr(0, comma));
            if (item.empty()) fail(key, "empty list element");
            out.push_back(item);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        return out;
    }

    double parse_number(const std::string& key, const std::string& text) const {
        double v = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
            fail(key, "expected a number, got '" + text + "'");
        }
        return v;
    }

    long long parse_integer(const std::string& key, const std::string& text) const {
        long long v = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
            fail(key, "expected an integer, got '" + text + "'");
        }
        return v;
    }

    std::string source_;
    std::string section_;
    const Section& sec_;
};

analytic::Scenario1Config read_scenario1(const Reader& r) {
    r.reject_unknown({"M", "f", "n", "a_f", "a_n", "R_f", "R_n", "kappa", "gain_mode", "omega_sd", "omega_sd_f",
                      "omega_sd_n", "omega_sr", "omega_rd", "omega_rd_f", "omega_rd_n", "d_sr", "alpha", "mu"});
    analytic::Scenario1Config c;
    if (r.has("d_sr") || r.has("alpha")) {
        analytic::RelayGeometry g;
        if (r.has("d_sr")) g.d_sr = r.number("d_sr");
        if (r.has("alpha")) g.alpha = r.number("alpha");
        if (!(g.d_sr > 0.0 && g.d_sr < 1.0)) r.fail("d_sr", "0 < d_sr < 1 violated");
        c.omega_sr = g.omega_sr();
        c.omega_rd_f = c.omega_rd_n = g.omega_rd();
    }
    auto int_field = [&](const char* key, int& dst) {
        if (r.has(key)) dst = static_cast<int>(r.integer(key));
    };
    auto num_field = [&](const char* key, double& dst) {
        if (r.has(key)) dst = r.number(key);
    };
    int_field("M", c.M);
    int_field("f", c.f);
    int_field("n", c.n);
    int_field("mu", c.mu);
    num_field("a_f", c.a_f);
    num_field("a_n", c.a_n);
    num_field("R_f", c.R_f);
    num_field("R_n", c.R_n);
    num_field("kappa", c.kappa);
    if (r.has("omega_sd")) c.omega_sd_f = c.omega_sd_n = r.number("omega_sd");
    num_field("omega_sd_f", c.omega_sd_f);
    num_field("omega_sd_n", c.omega_sd_n);
    num_field("omega_sr", c.omega_sr);
    if (r.has("omega_rd")) c.omega_rd_f = c.omega_rd_n = r.number("omega_rd");
    num_field("omega_rd_f", c.omega_rd_f);
    num_field("omega_rd_n", c.omega_rd_n);
    if (r.has("gain_mode")) {
        const auto mode = r.text("gain_mode");
        if (mode == "literal-kappa") {
            c.gain_mode = analytic::GainMode::literal_kappa;
        } else if (mode == "power-normalized") {
            c.gain_mode = analytic::GainMode::power_normalized;
        } else {
            r.fail("gain_mode", "expected literal-kappa or power-normalized, got '" + mode + "'");
        }
    }
    try {
        c.validate();
    } catch (const analytic::ConfigError& e) {
        r.fail_section(e.what());
    }
    return c;
}

analytic::Scenario2Config read_scenario2(const Reader& r) {
    r.reject_unknown({"M", "ranks", "a", "R", "omega", "mu"});
    analytic::Scenario2Config c;
    if (r.has("a")) c.a = r.numbers("a");
    if (r.has("R")) c.R = r.numbers("R");
    if (r.has("omega")) c.omega = r.numbers("omega");
    if (r.has("ranks")) c.ranks = r.integers("ranks");
    if (r.has("mu")) c.mu = static_cast<int>(r.integer("mu"));
    if (r.has("M")) {
        c.M = static_cast<int>(r.integer("M"));
    } else if (c.ranks.empty()) {
        c.M = c.users();
    } else {
        c.M = c.ranks.back();
    }
    try {
        c.validate();
    } catch (const analytic::ConfigError& e) {
        r.fail_section(e.what());
    }
    return c;
}

SweepSpec read_sweep(const Reader& r) {
    r.reject_unknown({"scenario", "snr_start", "snr_stop", "snr_step", "mu", "users", "trials", "seed", "chunks", "mc",
                      "oma", "asymptotic", "throughput"});
    SweepSpec s;
    if (r.has("scenario")) {
        try {
            s.scenario = parse_scenario(r.text("scenario"));
        } catch (const std::invalid_argument& e) {
            r.fail("scenario", e.what());
        }
    }
    if (r.has("snr_start")) s.snr_start = r.number("snr_start");
    if (r.has("snr_stop")) s.snr_stop = r.number("snr_stop");
    if (r.has("snr_step")) s.snr_step = r.number("snr_step");
    if (r.has("mu")) s.mu_list = r.integers("mu");
    if (r.has("users")) s.users = r.integers("users");
    if (r.has("trials")) {
        const auto t = r.integer("trials");
        if (t < 0) r.fail("trials", "trials >= 0 violated");
        s.trials = static_cast<std::uint64_t>(t);
    }
    if (r.has("seed")) s.seed = static_cast<std::uint64_t>(r.integer("seed"));
    if (r.has("chunks")) {
        const auto c = r.integer("chunks");
        if (c < 1) r.fail("chunks", "chunks >= 1 violated");
        s.chunks = static_cast<unsigned>(c);
    }
    if (r.has("mc")) s.include_mc = r.boolean("mc");
    if (r.has("oma")) s.include_oma = r.boolean("oma");
    if (r.has("asymptotic")) s.include_asymptotic = r.boolean("asymptotic");
    if (r.has("throughput")) s.include_throughput = r.boolean("throughput");
    try {
        s.validate();
    } catch (const analytic::ConfigError& e) {
        r.fail_section(e.what());
    }
    return s;
}

}  // namespace

ConfigParseError::ConfigParseError(const std::string& source, int line, const std::string& field,
                                   const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + field + ": " + message),
      line_(line),
      field_(field) {}

ConfigFile parse_config(std::istream& in, const std::string& source) {
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto comment = raw.find_first_of("#;");
        const auto line = trim(std::string_view(raw).substr(0, comment));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigParseError(source, line_no, line, "malformed section header");
            const auto name = trim(std::string_view(line).substr(1, line.size() - 2));
            if (name != "scenario1" && name != "scenario2" && name != "sweep") {
                throw ConfigParseError(source, line_no, name, "unknown section");
            }
            if (sections.count(name)) throw ConfigParseError(source, line_no, name, "duplicate section");
            current = &sections[name];
            current->line = line_no;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigParseError(source, line_no, line, "expected 'key = value'");
        const auto key = trim(std::string_view(line).substr(0, eq));
        const auto value = trim(std::string_view(line).substr(eq + 1));
        if (!current) throw ConfigParseError(source, line_no, key, "field outside of any section");
        if (key.empty()) throw ConfigParseError(source, line_no, "", "missing field name");
        if (value.empty()) throw ConfigParseError(source, line_no, key, "missing value");
        if (current->entries.count(key)) throw ConfigParseError(source, line_no, key, "duplicate field");
        current->entries[key] = {value, line_no};
    }

    ConfigFile file;
    if (auto it = sections.find("scenario1"); it != sections.end()) {
        file.scenario1 = read_scenario1(Reader(source, "scenario1", it->second));
    }
    if (auto it = sections.find("scenario2"); it != sections.end()) {
        file.scenario2 = read_scenario2(Reader(source, "scenario2", it->second));
    }
    if (auto it = sections.find("sweep"); it != sections.end()) {
        file.sweep = read_sweep(Reader(source, "sweep", it->second));
        file.has_sweep = true;
    }
    return file;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError(path, 0, "", "cannot open file");
    return parse_config(in, path);
}

}  // namespace noma::cli
