#include <string>

#include "CLI11.hpp"
#include "lmc/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lmc: solver and estimate-verification laboratory for the two-dimensional "
                 "Lagrangian mean curvature equation"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "execute a run configuration");
    std::string config_path;
    std::string seed_override, out_override, only;
    run->add_option("config", config_path, "path to the run configuration file")->required();
    run->add_option("--seed", seed_override, "override the random seed");
    run->add_option("--out", out_override, "override the output directory");
    run->add_option("--only", only, "run a single check by name");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return lmc::cli::run(config_path, seed_override, out_override, only);
    return 1;
}
