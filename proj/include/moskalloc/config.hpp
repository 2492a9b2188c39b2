#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moskalloc/allocator.hpp"
#include "moskalloc/thermo.hpp"

// Experiment configuration: flat key=value text with dotted prefixes
// (users.1.n_low = 6e8), plus the built-in presets fig3..fig6.

namespace moskalloc {

struct ConfigError : std::runtime_error {
    int line; // 1-based; 0 when the error is not tied to a single line
    ConfigError(int line_, const std::string& msg);
};

struct SweepSpec {
    std::string variable; // "rho" or "energy"
    double start = 0;
    double stop = 0;
    double step = 0;
};

struct ExperimentConfig {
    Environment env;
    std::vector<TransmitterConfig> users;
    double energy_budget = 0;
    double ber_threshold = 1.0;
    std::optional<SweepSpec> sweep;
    GaSettings ga;
    std::optional<std::uint64_t> seed; // file-level seed, may be overridden
    std::int64_t trials = 1000000;

    void validate() const; // re-validates every referenced invariant
};

// Parse a config stream. Unknown keys, malformed values, missing user fields
// and non-contiguous user indices are all ConfigErrors carrying the offending
// line number where one exists.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config_file(const std::string& path);

// Built-in parameter sets. fig3: two identical users (reservoirs 6e8+6e8,
// release 4e4) sweeping rho. fig4: same but the second user holds 8e8+8e8.
// fig5: three users with reservoir totals 6e8/12e8/18e8 at release 5e4.
// fig6: three users with equal reservoirs and release sizes 2e4/4e4/6e4.
// All share k = 1.3807e-23 J/K, T = 298.15 K, c_init = 0.5, budget 4e-16 J.
ExperimentConfig preset(const std::string& name);
std::vector<std::string> preset_names();

} // namespace moskalloc
