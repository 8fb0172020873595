#include "CLI11.hpp"

#include "dynbc/driver.hpp"

int main(int argc, char** argv) {
    CLI::App app{"dynbc: parabolic problems with dynamical boundary and interface conditions"};
    app.require_subcommand(1);

    std::string run_config;
    CLI::App* run = app.add_subcommand("run", "solve the configured problem");
    run->add_option("config", run_config, "configuration file")->required();

    std::string check_config;
    std::string suite = "all";
    CLI::App* check = app.add_subcommand("check", "run an invariant suite");
    check->add_option("config", check_config, "configuration file")->required();
    check->add_option("--suite", suite, "sector|markov|contraction|fractional|balance|all");

    std::string conv_config;
    int levels = 3;
    CLI::App* conv = app.add_subcommand("converge", "manufactured-solution order study");
    conv->add_option("config", conv_config, "configuration file")->required();
    conv->add_option("--levels", levels, "refinement levels (>= 2)");

    std::string mesh_spec;
    std::string mesh_out;
    CLI::App* meshgen = app.add_subcommand("meshgen", "generate a mesh file");
    meshgen->add_option("spec", mesh_spec, "mesh spec file")->required();
    meshgen->add_option("-o,--output", mesh_out, "output mesh path")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return dynbc::cmd_run(run_config);
    if (check->parsed())
        return dynbc::cmd_check(check_config, suite);
    if (conv->parsed())
        return dynbc::cmd_converge(conv_config, levels);
    if (meshgen->parsed())
        return dynbc::cmd_meshgen(mesh_spec, mesh_out);
    return 1;
}
