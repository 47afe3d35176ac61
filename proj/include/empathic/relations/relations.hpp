#pragma once

#include "empathic/constraints/system.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace empathic::relations {

enum class RelationClass { SelfAlways, Necessary, PossibleOnly, Impossible };

std::string to_string(RelationClass c);
RelationClass relation_class_from(const std::string& s);

struct Probe {
    solver::SolveStatus status = solver::SolveStatus::Infeasible;
    double eps_star = 0.0;
};

struct Cell {
    RelationClass cls = RelationClass::SelfAlways;
    Probe model2;  // w_ij = 0
    Probe model3;  // w_ij >= eps'
    bool borderline = false;  // zero-arc probe eps* within 1e-9 of 0
};

struct RelationMatrix {
    int n = 0;
    std::vector<Cell> cells;  // row-major
    const Cell& at(int i, int j) const { return cells[static_cast<std::size_t>(i) * n + j]; }
    Cell& at(int i, int j) { return cells[static_cast<std::size_t>(i) * n + j]; }
};

Probe model2(const constraints::ConstraintSystem& sys, int i, int j);
Probe model3(const constraints::ConstraintSystem& sys, int i, int j);

bool necessary(const constraints::ConstraintSystem& sys, int i, int j);
bool possible(const constraints::ConstraintSystem& sys, int i, int j);

Cell classify(const constraints::ConstraintSystem& sys, int i, int j);

// Throws PreconditionError when the system itself is not consistent.
RelationMatrix relation_matrix(const constraints::ConstraintSystem& sys, int workers = 0);

// Thread-safe memo keyed by (system hash, i, j).
class ProbeCache {
public:
    Cell get(const constraints::ConstraintSystem& sys, int i, int j);
    std::size_t size() const;
    void clear();

private:
    mutable std::mutex mu_;
    std::map<std::tuple<std::uint64_t, int, int>, Cell> cells_;
};

RelationMatrix relation_matrix(const constraints::ConstraintSystem& sys, ProbeCache& cache, int workers = 0);

// i,j,class,eps_model2,eps_model3 (1-based, 4 decimals).
std::string to_csv(const RelationMatrix& r);

}  // namespace empathic::relations
