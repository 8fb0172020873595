#pragma once

#include <memory>
#include <string>

#include "dynbc/balance.hpp"
#include "dynbc/config.hpp"
#include "dynbc/kirchhoff.hpp"
#include "dynbc/manufactured.hpp"

namespace dynbc {

// Everything a run needs, built from a config. The operator holds pointers
// into mesh/dofmap, so both live on the heap and the setup moves as a unit.
struct RunSetup {
    std::unique_ptr<Mesh> mesh;
    std::unique_ptr<DofMap> dofmap;
    CoefficientField coeffs;
    DiscreteOperator op;
    unsigned seed = 1;
    std::string output_dir = "out";
};

RunSetup build_setup(const ConfigFile& cfg);

Mesh mesh_from_config(const ConfigFile& cfg);
ScalarField named_initial(const std::string& spec);
ReactionSpec named_reaction(const std::string& spec);
Nonlinearity named_nonlinearity(const std::string& spec);

// Subcommand entry points. Each parses the config at `config_path`, performs
// the work, writes artifacts, and returns the process exit code
// (0 success, 1 config/usage error, 2 early exit of a quasilinear run).
int cmd_run(const std::string& config_path);
int cmd_check(const std::string& config_path, const std::string& suite);
int cmd_converge(const std::string& config_path, int levels);
int cmd_meshgen(const std::string& spec_path, const std::string& out_path);

} // namespace dynbc
