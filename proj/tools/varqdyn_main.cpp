// varqdyn: reduce wavefunction dynamics to parameter-manifold flows,
// compare them against grid propagation, and run the built-in check suite.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "varq/acceptance.hpp"
#include "varq/scenario.hpp"

namespace {

std::string resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("VARQDYN_OUT_DIR")) {
        if (*env != '\0') return env;
    }
    return ".";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"varqdyn: reduced dynamics on immersed parameter manifolds"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir_flag;
    double dt_override = 0.0;
    double t_end_override = -1.0;
    bool have_dt = false, have_t_end = false;

    CLI::App* run = app.add_subcommand(
        "run", "run a scenario described by a JSON config file");
    run->add_option("config", config_path, "path to the scenario config (JSON)")
        ->required();
    run->add_option("--out-dir", out_dir_flag,
                    "directory for the CSV and report (default: "
                    "$VARQDYN_OUT_DIR or the current directory)");
    run->add_option("--dt", dt_override, "override the config's time step")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { have_dt = true; });
    run->add_option("--t-end", t_end_override,
                    "override the config's final time")
        ->check(CLI::NonNegativeNumber)
        ->each([&](const std::string&) { have_t_end = true; });

    CLI::App* list =
        app.add_subcommand("list", "list the built-in check catalog");

    CLI::App* check = app.add_subcommand(
        "check", "run every built-in check and report pass/fail");
    check->add_option("--out-dir", out_dir_flag,
                      "directory for check artifacts (default: "
                      "$VARQDYN_OUT_DIR or the current directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) {
            varq::scenario::Scenario s = varq::scenario::load_scenario(config_path);
            if (have_dt) s.dt = dt_override;
            if (have_t_end) s.t_end = t_end_override;
            const varq::scenario::RunOutputs outs =
                varq::scenario::run_scenario(s, resolve_out_dir(out_dir_flag));
            std::cout << "wrote " << outs.csv_path << "\n"
                      << "wrote " << outs.report_path << "\n";
            return 0;
        }
        if (list->parsed()) {
            for (const auto& entry : varq::acceptance::catalog()) {
                std::cout << entry.index << "  " << entry.name << "  —  "
                          << entry.topic << "\n";
            }
            return 0;
        }
        if (check->parsed()) {
            const bool ok = varq::acceptance::run_all(
                resolve_out_dir(out_dir_flag), std::cout);
            return ok ? 0 : 1;
        }
    } catch (const varq::scenario::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
