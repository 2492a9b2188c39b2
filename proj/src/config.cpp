#include "moskalloc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace moskalloc {

ConfigError::ConfigError(int line_, const std::string& msg)
    : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + msg : msg),
      line(line_) {}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& value, int line) {
    double out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError(line, "cannot parse number '" + value + "'");
    if (!std::isfinite(out)) throw ConfigError(line, "number '" + value + "' is not finite");
    return out;
}

std::int64_t parse_integer(const std::string& value, int line) {
    const double d = parse_number(value, line);
    if (d != std::floor(d) || std::abs(d) > 9.007199254740992e15)
        throw ConfigError(line, "expected an integer, got '" + value + "'");
    return static_cast<std::int64_t>(d);
}

std::uint64_t parse_seed(const std::string& value, int line) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ConfigError(line, "cannot parse seed '" + value + "' (unsigned decimal expected)");
    return out;
}

struct UserAccum {
    std::optional<double> n_low, n_high, c_init, n_release;
    int first_line = 0;
};

} // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::map<std::string, int> seen; // key -> line, duplicate rejection
    std::map<int, UserAccum> users;
    bool sweep_touched = false;
    SweepSpec sw;
    int sweep_line = 0;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (value.empty()) throw ConfigError(line_no, "empty value for key '" + key + "'");
        if (const auto [it, fresh] = seen.emplace(key, line_no); !fresh)
            throw ConfigError(line_no,
                              "duplicate key '" + key + "' (first set on line " +
                                  std::to_string(it->second) + ")");

        if (key == "energy_budget") {
            cfg.energy_budget = parse_number(value, line_no);
        } else if (key == "ber_threshold") {
            cfg.ber_threshold = parse_number(value, line_no);
        } else if (key == "trials") {
            cfg.trials = parse_integer(value, line_no);
        } else if (key == "seed") {
            cfg.seed = parse_seed(value, line_no);
        } else if (key == "env.boltzmann_constant") {
            cfg.env.boltzmann_constant = parse_number(value, line_no);
        } else if (key == "env.temperature") {
            cfg.env.temperature = parse_number(value, line_no);
        } else if (key.rfind("users.", 0) == 0) {
            const auto rest = key.substr(6);
            const auto dot = rest.find('.');
            if (dot == std::string::npos)
                throw ConfigError(line_no, "user key must look like users.<index>.<field>");
            int idx = 0;
            const auto res = std::from_chars(rest.data(), rest.data() + dot, idx);
            if (res.ec != std::errc{} || res.ptr != rest.data() + dot || idx < 1)
                throw ConfigError(line_no, "bad user index in '" + key + "'");
            UserAccum& ua = users[idx];
            if (ua.first_line == 0) ua.first_line = line_no;
            const std::string field = rest.substr(dot + 1);
            const double num = parse_number(value, line_no);
            if (field == "n_low")
                ua.n_low = num;
            else if (field == "n_high")
                ua.n_high = num;
            else if (field == "c_init")
                ua.c_init = num;
            else if (field == "n_release")
                ua.n_release = num;
            else
                throw ConfigError(line_no, "unknown user field '" + field + "'");
        } else if (key.rfind("sweep.", 0) == 0) {
            sweep_touched = true;
            if (sweep_line == 0) sweep_line = line_no;
            const std::string field = key.substr(6);
            if (field == "variable") {
                if (value != "rho" && value != "energy")
                    throw ConfigError(line_no, "sweep.variable must be 'rho' or 'energy'");
                sw.variable = value;
            } else if (field == "start")
                sw.start = parse_number(value, line_no);
            else if (field == "stop")
                sw.stop = parse_number(value, line_no);
            else if (field == "step")
                sw.step = parse_number(value, line_no);
            else
                throw ConfigError(line_no, "unknown sweep field '" + field + "'");
        } else if (key == "ga.population_size") {
            cfg.ga.population_size = static_cast<int>(parse_integer(value, line_no));
        } else if (key == "ga.generations") {
            cfg.ga.generations = static_cast<int>(parse_integer(value, line_no));
        } else if (key == "ga.crossover_rate") {
            cfg.ga.crossover_rate = parse_number(value, line_no);
        } else if (key == "ga.mutation_rate") {
            cfg.ga.mutation_rate = parse_number(value, line_no);
        } else if (key == "ga.mutation_sigma") {
            cfg.ga.mutation_sigma = parse_number(value, line_no);
        } else if (key == "ga.elite_count") {
            cfg.ga.elite_count = static_cast<int>(parse_integer(value, line_no));
        } else if (key == "ga.tournament_size") {
            cfg.ga.tournament_size = static_cast<int>(parse_integer(value, line_no));
        } else if (key == "ga.stagnation_window") {
            cfg.ga.stagnation_window = static_cast<int>(parse_integer(value, line_no));
        } else if (key == "ga.penalty_weight") {
            cfg.ga.penalty_weight = parse_number(value, line_no);
        } else {
            throw ConfigError(line_no, "unknown key '" + key + "'");
        }
    }

    for (std::size_t k = 1; k <= users.size(); ++k) {
        const auto it = users.find(static_cast<int>(k));
        if (it == users.end())
            throw ConfigError(0, "user indices must be contiguous from 1; users." +
                                     std::to_string(k) + " is missing");
        const UserAccum& ua = it->second;
        if (!ua.n_low || !ua.n_high || !ua.c_init || !ua.n_release)
            throw ConfigError(ua.first_line, "users." + std::to_string(k) +
                                                 " needs n_low, n_high, c_init and n_release");
        TransmitterConfig tc;
        tc.n_low = *ua.n_low;
        tc.n_high = *ua.n_high;
        tc.c_init = *ua.c_init;
        tc.n_release = *ua.n_release;
        cfg.users.push_back(tc);
    }

    if (sweep_touched) {
        if (sw.variable.empty())
            throw ConfigError(sweep_line, "sweep needs sweep.variable");
        if (!(sw.step > 0)) throw ConfigError(sweep_line, "sweep.step must be positive");
        if (!(sw.stop >= sw.start))
            throw ConfigError(sweep_line, "sweep.stop must be >= sweep.start");
        cfg.sweep = sw;
    }

    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    env.validate();
    if (users.empty()) throw ConfigError(0, "at least one user is required");
    for (std::size_t k = 0; k < users.size(); ++k) {
        try {
            users[k].validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(0, "users." + std::to_string(k + 1) + ": " + e.what());
        }
    }
    if (!(energy_budget > 0) || !std::isfinite(energy_budget))
        throw ConfigError(0, "energy_budget must be positive");
    if (!(ber_threshold > 0 && ber_threshold <= 1))
        throw ConfigError(0, "ber_threshold must lie in (0, 1]");
    if (trials < 1) throw ConfigError(0, "trials must be >= 1");
    if (sweep) {
        if (sweep->variable == "rho") {
            if (!(sweep->start > 0 && sweep->stop < 1))
                throw ConfigError(0, "rho sweep must stay strictly inside (0, 1)");
        } else if (sweep->variable == "energy") {
            if (!(sweep->start >= 0)) throw ConfigError(0, "energy sweep must start at >= 0");
        }
    }
    try {
        ga.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, std::string("ga settings: ") + e.what());
    }
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    return parse_config(in);
}

namespace {

TransmitterConfig user(double n_low, double n_high, double n_release) {
    TransmitterConfig t;
    t.n_low = n_low;
    t.n_high = n_high;
    t.c_init = 0.5;
    t.n_release = n_release;
    return t;
}

} // namespace

ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg;
    cfg.energy_budget = 4e-16;
    if (name == "fig3") {
        cfg.users = {user(6e8, 6e8, 4e4), user(6e8, 6e8, 4e4)};
        cfg.sweep = SweepSpec{"rho", 0.001, 0.999, 0.001};
    } else if (name == "fig4") {
        cfg.users = {user(6e8, 6e8, 4e4), user(8e8, 8e8, 4e4)};
        cfg.sweep = SweepSpec{"rho", 0.001, 0.999, 0.001};
    } else if (name == "fig5") {
        cfg.users = {user(3e8, 3e8, 5e4), user(6e8, 6e8, 5e4), user(9e8, 9e8, 5e4)};
    } else if (name == "fig6") {
        cfg.users = {user(3e8, 3e8, 2e4), user(3e8, 3e8, 4e4), user(3e8, 3e8, 6e4)};
    } else {
        throw ConfigError(0, "unknown preset '" + name + "' (expected fig3, fig4, fig5 or fig6)");
    }
    cfg.validate();
    return cfg;
}

std::vector<std::string> preset_names() { return {"fig3", "fig4", "fig5", "fig6"}; }

} // namespace moskalloc
