#pragma once

// Batch driver: parses a run configuration, builds the instance corpus, runs
// the solver and every enabled checker, and emits a delimited check table, a
// machine-readable JSON aggregate, and plain-text field dumps.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lmc/estimates.hpp"
#include "lmc/grid.hpp"
#include "lmc/phase.hpp"
#include "lmc/solver.hpp"

namespace lmc::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InstanceSpec {
    std::string name;
    // phase: constant | cubic | manufactured
    std::string phase = "constant";
    double value = 0.0;                      // constant phase
    double amplitude = 0.0;                  // cubic phase theta = amplitude*(c0+cx x+cy y)^3
    double c0 = 0.0, cx = 1.0, cy = 0.0;
    std::string potential;                   // manufactured: u* preset; else boundary preset
    double p1 = 1.0, p2 = 0.0;               // preset parameters
    // grid
    double domain_half = 2.0;                // grid over [-domain_half, domain_half]^2
    int n = 65;
    int refinements = 1;                     // levels n, 2n-1, ...
    // check geometry (balls centered at the origin)
    double ball_R = 0.5;                     // volume bound inner radius (needs 2R inside)
    double grad_R = 1.0;
    double doubling_r = 1.0;
    double test_r = 1.0;
};

struct RunSettings {
    std::uint64_t seed = 42;
    std::string out_dir = "out";
    double newton_tol = 1e-10;
    int max_newton = 50;
    double damping = 0.5;
    int flow_steps_max = 20000;
    double jacobi_K = 8.0;
    double ledger_gamma = 0.5;
    int identity_samples = 20000;
    std::vector<std::string> checks;  // empty = all
    std::string only;                 // --only filter (one check name)
};

struct RunConfig {
    RunSettings settings;
    std::vector<InstanceSpec> instances;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);
void validate_config(const RunConfig& cfg);

struct BuiltInstance {
    Grid grid;
    PhaseField theta;
    ScalarField boundary;
    ScalarField u_exact;
    bool has_exact = false;
};

// level 0 uses the instance's n; level l uses (n-1)*2^l + 1 nodes.
BuiltInstance build_instance(const InstanceSpec& spec, int level);

// The standard 8-instance verification corpus: constant phases
// 0, +-pi/4, +-pi/2, +-3pi/4 with matching quadratic boundaries, plus one
// sign-changing cubic phase.
std::vector<InstanceSpec> corpus_instances(int n = 65, int refinements = 1);

struct CheckRow {
    std::string instance;  // "<name>/n<gridsize>"
    EstimateReport report;
};

struct ConvergenceRow {
    std::string instance;
    int n = 0;
    double h = 0.0;
    double error = 0.0;
    double order = 0.0;     // vs previous level; 0 on the first level
    bool meaningful = false;  // errors above solver noise floor
};

struct InstanceOutcome {
    std::string name;
    int n = 0;
    bool solved = false;
    double residual_sup = 0.0;
    int iterations = 0;
    std::string path;  // "newton-only" | "flow-then-newton"
    std::vector<double> history;
};

// Finest-level fields of one instance, written out as plain-text grids.
struct FieldDump {
    std::string instance;
    ScalarField u, theta, V, b, jacobi_defect;
};

struct RunReport {
    std::vector<InstanceOutcome> instances;
    std::vector<CheckRow> checks;
    std::vector<ConvergenceRow> convergence;
    std::vector<FieldDump> dumps;
    int identity_samples = 0;
    double identity_max_rel_defect = 0.0;
    int identity_failures = 0;
    bool solver_failed = false;
    bool overall_pass = false;
};

// Executes the run; returns the report (exit-status mapping handled by run()).
RunReport execute(const RunConfig& cfg);

void emit_reports(const RunReport& rep, const RunConfig& cfg, const std::string& dir);

// Full pipeline: exit 0 on pass, 1 on config errors, 2 on solver failure,
// 3 on checker failure.
int run(const std::string& config_path, const std::string& seed_override,
        const std::string& out_override, const std::string& only);

}  // namespace lmc::cli
