#pragma once

#include "config.hpp"
#include "output.hpp"

#include <cstdint>
#include <string>

namespace laxkit::tools {

struct RunOptions {
    std::string out_path;       // empty: stdout
    std::string format = "csv"; // csv | json
    bool seed_override = false;
    std::uint64_t seed = 0;
    int jobs = 1;
};

/// Each runner returns the process exit code: 0 pass, 1 tolerance/check
/// failure.  Config and usage problems throw ConfigError (mapped to exit 2
/// by the driver).
int run_verify(const std::string& check, const RunConfig& cfg, const RunOptions& opt);
int run_charges(const RunConfig& cfg, const RunOptions& opt);
int run_simulate(const RunConfig& cfg, const RunOptions& opt);
int run_monodromy(const RunConfig& cfg, const RunOptions& opt);
int run_climit(const RunConfig& cfg, const RunOptions& opt);

}  // namespace laxkit::tools
