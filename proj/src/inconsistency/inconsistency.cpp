#include "empathic/inconsistency/inconsistency.hpp"

#include "empathic/error.hpp"

#include <algorithm>
#include <cmath>

namespace empathic::inconsistency {

namespace {

using solver::SolveStatus;

struct Relaxed {
    constraints::BuiltProgram bp;
};

Relaxed relaxed_program(const constraints::ConstraintSystem& sys) {
    const auto& t = sys.thresholds();
    Relaxed r{sys.build(constraints::EpsSpec::fixed(t.eps_min), {}, t.m_for(sys.n()))};
    std::vector<solver::Term> obj;
    for (int v : r.bp.nu) obj.push_back({v, 1.0});
    r.bp.program.set_linear_objective(std::move(obj), solver::ObjectiveSense::Minimize);
    return r;
}

void require_inconsistent(const constraints::ConstraintSystem& sys) {
    if (constraints::feasible(sys).consistent())
        throw PreconditionError("constraint system is consistent; there is nothing to repair");
}

std::vector<std::string> chosen_ids(const constraints::ConstraintSystem& sys, const Relaxed& r,
                                    const std::vector<double>& x, std::vector<solver::Term>* cut) {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < r.bp.nu.size(); ++k) {
        if (x[r.bp.nu[k]] > 0.5) {
            ids.push_back(sys.groups()[k].id);
            if (cut) cut->push_back({r.bp.nu[k], 1.0});
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

std::vector<std::string> min_inconsistent_set(const constraints::ConstraintSystem& sys) {
    require_inconsistent(sys);
    Relaxed r = relaxed_program(sys);
    const auto sol = solver::solve_milp(r.bp.program);
    if (sol.status != SolveStatus::Optimal)
        throw SolverError("relaxed program is " + solver::to_string(sol.status) +
                          "; the base block itself cannot be satisfied");
    return chosen_ids(sys, r, sol.values, nullptr);
}

InconsistencyReport enumerate_sets(const constraints::ConstraintSystem& sys, int limit) {
    require_inconsistent(sys);
    Relaxed r = relaxed_program(sys);
    InconsistencyReport rep;
    double first = -1.0;
    for (;;) {
        if (static_cast<int>(rep.sets.size()) >= limit) {
            rep.exhausted = false;
            // Check whether another set of the same size exists.
            const auto sol = solver::solve_milp(r.bp.program);
            rep.exhausted = !(sol.status == SolveStatus::Optimal && std::round(sol.objective) <= first + 0.5);
            break;
        }
        const auto sol = solver::solve_milp(r.bp.program);
        if (sol.status != SolveStatus::Optimal) {
            if (rep.sets.empty())
                throw SolverError("relaxed program is " + solver::to_string(sol.status) +
                                  "; the base block itself cannot be satisfied");
            break;
        }
        const double val = std::round(sol.objective);
        if (first < 0) first = val;
        if (val > first + 0.5) break;
        std::vector<solver::Term> cut;
        auto ids = chosen_ids(sys, r, sol.values, &cut);
        if (ids.empty()) break;
        rep.sets.push_back(std::move(ids));
        r.bp.program.add_constraint(cut, solver::Sense::LessEqual, static_cast<double>(cut.size()) - 1.0,
                                    "exclusion_" + std::to_string(rep.sets.size()));
    }
    rep.cardinality = first < 0 ? 0 : static_cast<int>(first);
    return rep;
}

Resolution apply_resolution(const constraints::ConstraintSystem& sys, const std::set<std::string>& chosen) {
    Resolution res{sys.without(chosen), {}, false};
    res.feasibility = constraints::feasible(res.system);
    res.restored = res.feasibility.consistent();
    return res;
}

}  // namespace empathic::inconsistency
