#pragma once

// Scenario configuration and execution: a scenario names a model, a method,
// the initial data and the time stepping; running one writes a CSV time
// series and a JSON report into an output directory.  Everything is
// deterministic for a fixed configuration, so repeated runs produce
// byte-identical CSV bodies.

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace varq::scenario {

// Malformed or incomplete configuration; the message names the offending
// field.  The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Scenario {
    std::string name;    // output file stem
    std::string model;   // free|harmonic|anharmonic|radcliffe|bosonic|
                         // f-oscillator|fermi2|cat|grassmann|gkls
    std::string method;  // restricted|lagrangian|grid|compare
    nlohmann::json params = nlohmann::json::object();
    double dt = 1e-3;
    double t_end = 1.0;
    int stride = 10;
};

// Validates the model/method pair, the stepping and the completeness of the
// parameter set; throws ConfigError naming the first offending field.
Scenario parse_scenario(const nlohmann::json& config);

// Reads and parses a JSON config file; file and syntax errors also surface
// as ConfigError.
Scenario load_scenario(const std::string& path);

struct RunOutputs {
    std::string csv_path;
    std::string report_path;
};

// Executes the scenario and writes <name>.csv and <name>.report.json under
// out_dir (created if needed).  Configuration problems throw ConfigError;
// numerical failures propagate the underlying module exceptions.
RunOutputs run_scenario(const Scenario& s, const std::string& out_dir);

}  // namespace varq::scenario
