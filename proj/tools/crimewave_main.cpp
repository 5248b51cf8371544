// Command-line driver: one subcommand per experiment, each reading a flat
// key=value scenario config. Exit codes: 0 success, 2 configuration
// error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "crimewave/experiments.hpp"
#include "crimewave/scenario.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw crimewave::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reaction-diffusion crime-wave toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string chosen;
    for (const auto& name : crimewave::experiment_names()) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", config_path, "scenario config file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config's 'out')");
        sub->callback([&chosen, name]() { chosen = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        crimewave::Scenario sc = crimewave::parse_config(read_file(config_path));
        sc.experiment = chosen;  // the subcommand wins over the config key
        if (!out_dir.empty()) sc.out_dir = out_dir;
        return crimewave::run_experiment(sc);
    } catch (const crimewave::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
