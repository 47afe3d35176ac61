#pragma once

#include "empathic/solver/program.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace empathic::solver {

enum class SolveStatus { Optimal, Infeasible, Unbounded, LocalOptimum, IterationLimit };

std::string to_string(SolveStatus s);

struct StartRecord {
    std::string origin;  // "vertex:j" or "random:k"
    double initial = 0.0;
    double final = 0.0;
    int iterations = 0;
    bool ok = false;
};

struct SolveMetadata {
    int iterations = 0;
    long nodes = 0;
    double bound = 0.0;  // MILP: best bound at termination
    int starts = 0;
    std::uint64_t seed = 0;
    double stationarity = 0.0;  // entropy IPM residual
    std::vector<StartRecord> trace;
    std::string message;
};

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> values;
    std::vector<double> duals;  // LP row duals when available
    SolveMetadata meta;

    bool ok() const { return status == SolveStatus::Optimal || status == SolveStatus::LocalOptimum; }
};

struct LpOptions {
    int max_iterations = 0;  // 0: automatic
    bool compute_duals = false;
};

SolveResult solve_lp(const MathProgram& p, const LpOptions& opt = {});

struct MilpOptions {
    long node_limit = 200000;
};

SolveResult solve_milp(const MathProgram& p, const MilpOptions& opt = {});

struct EntropyOptions {
    int max_iterations = 300;
    double tolerance = 1e-9;
};

SolveResult maximize_entropy(const MathProgram& p, const EntropyOptions& opt = {});

SolveResult minimize_entropy(const MathProgram& p, int starts, std::uint64_t seed);

// Gradient of the entropy objective with respect to x.
std::vector<double> entropy_gradient(const EntropyObjective& e, const std::vector<double>& x, int num_vars);

}  // namespace empathic::solver
