#pragma once

#include "empathic/constraints/system.hpp"

#include <set>
#include <string>
#include <vector>

namespace empathic::inconsistency {

struct InconsistencyReport {
    std::vector<std::vector<std::string>> sets;  // statement ids, sorted
    int cardinality = 0;
    bool exhausted = true;
};

// Big-M relaxation MILP with eps pinned to eps_min. Throws PreconditionError when the
// system is already consistent.
std::vector<std::string> min_inconsistent_set(const constraints::ConstraintSystem& sys);

InconsistencyReport enumerate_sets(const constraints::ConstraintSystem& sys, int limit = 32);

struct Resolution {
    constraints::ConstraintSystem system;
    constraints::FeasibilityResult feasibility;
    bool restored = false;  // eps* > 0 (or unbounded) after removal
};

Resolution apply_resolution(const constraints::ConstraintSystem& sys, const std::set<std::string>& chosen);

}  // namespace empathic::inconsistency
