#pragma once

#include "empathic/constraints/system.hpp"
#include "empathic/core/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace empathic::selection {

enum class TargetKind {
    MostDiscriminating,
    Sparse,
    Central,
    Distributed,
    ResilientLocal,
    ResilientGlobalForward,
    ResilientGlobalReverse,
    Star,
    Bus,
    Tree,
};

enum class Direction { Forward, Reverse };

// parent[v] = -1 for the root.
struct RootedTree {
    std::vector<int> parent;
    int root() const;
    std::vector<int> children(int v) const;
    // Throws ValidationError unless this is a single rooted tree spanning all n nodes.
    void validate(int n) const;
};

struct TargetSpec {
    TargetKind kind = TargetKind::MostDiscriminating;
    std::optional<int> center;  // star; empty: search all centers
    Direction direction = Direction::Forward;
    RootedTree tree;
};

std::string to_string(TargetKind k);
TargetKind target_kind_from(const std::string& s);  // CLI names: discriminating, sparse, ...
std::string label(const TargetSpec& t);

struct Certificate {
    std::string status;
    std::string message;
    std::vector<solver::StartRecord> trace;
    std::vector<double> max_omega;  // central: per-node max attainable centrality
    std::vector<std::string> notes;
    long nodes = 0;
    int iterations = 0;
    double stationarity = 0.0;
    double recheck_violation = 0.0;
};

struct SelectionResult {
    TargetSpec target;
    core::EmpathicMatrix w;
    std::optional<core::EmpathicMatrix> g;  // resilient-global
    double objective = 0.0;
    bool objective_unbounded = false;
    double eps = 0.0;
    core::NetworkDiagnostics diagnostics;
    std::optional<core::NetworkDiagnostics> global_diagnostics;  // of G
    Certificate certificate;
    std::optional<int> center;  // star
};

SelectionResult most_discriminating(const constraints::ConstraintSystem& sys);
SelectionResult sparsest(const constraints::ConstraintSystem& sys);
SelectionResult central(const constraints::ConstraintSystem& sys);
SelectionResult distributed(const constraints::ConstraintSystem& sys);
SelectionResult resilient_local(const constraints::ConstraintSystem& sys);
SelectionResult resilient_global(const constraints::ConstraintSystem& sys, Direction d);
SelectionResult star(const constraints::ConstraintSystem& sys, std::optional<int> center);
SelectionResult bus(const constraints::ConstraintSystem& sys, Direction d);
SelectionResult tree(const constraints::ConstraintSystem& sys, const RootedTree& layers);

SelectionResult select(const constraints::ConstraintSystem& sys, const TargetSpec& target);

// Base-block variants used by the structural targets.
std::vector<constraints::BaseRow> all_arcs_base(int n, double eps_prime);
std::vector<constraints::BaseRow> cycle_base(int n, double eps_prime, Direction d);
std::vector<constraints::BaseRow> star_base(int n, double eps_prime, int center);
std::vector<constraints::BaseRow> bus_base(int n, double eps_prime, Direction d);
std::vector<constraints::BaseRow> tree_base(int n, double eps_prime, const RootedTree& t);

}  // namespace empathic::selection
