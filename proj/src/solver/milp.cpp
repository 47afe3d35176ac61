// Depth-first branch and bound over binary variables.
#include "empathic/solver/solve.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace empathic::solver {

namespace {

struct Node {
    std::vector<std::pair<int, double>> fixings;
    double parent_bound;
};

bool integral_objective(const MathProgram& p) {
    if (std::abs(p.objective_constant() - std::round(p.objective_constant())) > 1e-12) return false;
    for (const auto& t : p.objective()) {
        if (!p.variables()[t.var].binary) return false;
        if (std::abs(t.coef - std::round(t.coef)) > 1e-12) return false;
    }
    return true;
}

}  // namespace

SolveResult solve_milp(const MathProgram& p, const MilpOptions& opt) {
    p.validate();
    if (!p.has_binaries()) return solve_lp(p);

    const double dir = p.sense() == ObjectiveSense::Maximize ? -1.0 : 1.0;
    const bool integral = integral_objective(p);
    MathProgram work = p;
    std::vector<int> binaries;
    for (int j = 0; j < p.num_variables(); ++j)
        if (p.variables()[j].binary) binaries.push_back(j);

    SolveResult best;
    best.status = SolveStatus::Infeasible;
    double incumbent = kInf;  // in minimization form
    std::vector<Node> stack{Node{{}, -kInf}};
    long nodes = 0;
    int lp_iterations = 0;
    bool limit_hit = false;
    std::string failure;

    while (!stack.empty()) {
        if (nodes >= opt.node_limit) {
            limit_hit = true;
            break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        if (node.parent_bound >= incumbent - (integral ? 0.5 : 1e-9)) continue;
        ++nodes;

        for (int j : binaries) {
            work.variables()[j].lower = p.variables()[j].lower;
            work.variables()[j].upper = p.variables()[j].upper;
        }
        for (auto [j, v] : node.fixings) work.variables()[j].lower = work.variables()[j].upper = v;

        SolveResult r = solve_lp(work);
        lp_iterations += r.meta.iterations;
        if (r.status == SolveStatus::Infeasible) continue;
        if (r.status == SolveStatus::Unbounded) {
            best.status = SolveStatus::Unbounded;
            best.meta.nodes = nodes;
            return best;
        }
        if (r.status != SolveStatus::Optimal) {
            failure = "LP relaxation stopped with " + to_string(r.status);
            continue;
        }
        const double val = dir * r.objective;
        const double bound = integral ? std::ceil(val - 1e-6) : val;
        if (bound >= incumbent - (integral ? 0.5 : 1e-9)) continue;

        int branch = -1;
        double worst = Tolerances::integrality;
        for (int j : binaries) {
            const double f = std::abs(r.values[j] - std::round(r.values[j]));
            if (f > worst) {
                worst = f;
                branch = j;
            }
        }
        if (branch < 0) {
            for (int j : binaries) r.values[j] = std::round(r.values[j]);
            incumbent = integral ? std::round(val) : val;
            best.values = std::move(r.values);
            best.status = SolveStatus::Optimal;
            continue;
        }
        const double up_first = r.values[branch] >= 0.5 ? 1.0 : 0.0;
        Node later = node, first = std::move(node);
        later.fixings.push_back({branch, 1.0 - up_first});
        later.parent_bound = bound;
        first.fixings.push_back({branch, up_first});
        first.parent_bound = bound;
        stack.push_back(std::move(later));
        stack.push_back(std::move(first));
    }

    best.meta.nodes = nodes;
    best.meta.iterations = lp_iterations;
    best.meta.message = failure;
    if (!best.values.empty()) best.objective = p.evaluate_linear(best.values);
    if (limit_hit) {
        double open = incumbent;
        for (const auto& n : stack) open = std::min(open, n.parent_bound);
        best.meta.bound = dir * open;
        best.status = SolveStatus::IterationLimit;
        best.meta.message = "node limit reached";
        return best;
    }
    best.meta.bound = best.values.empty() ? 0.0 : best.objective;
    return best;
}

}  // namespace empathic::solver
