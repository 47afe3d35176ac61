#include "empathic/selection/selection.hpp"

#include "empathic/error.hpp"
#include "empathic/inconsistency/inconsistency.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace empathic::selection {

namespace {

using constraints::BaseRow;
using constraints::ConstraintSystem;
using constraints::EpsSpec;
using constraints::LinearRelation;
using solver::Sense;
using solver::SolveStatus;

constexpr double kRecheckTol = 1e-6;

std::string node_pair(int i, int j) { return std::to_string(i + 1) + "_" + std::to_string(j + 1); }

BaseRow row_sum(int n, int i) {
    LinearRelation r;
    for (int j = 0; j < n; ++j) r.terms.push_back({i, j, 1.0});
    r.sense = Sense::Equal;
    r.rhs = 1.0;
    return {"row_sum_" + std::to_string(i + 1), r};
}

BaseRow bound(const std::string& label, int i, int j, Sense s, double v) {
    return {label + "_" + node_pair(i, j), LinearRelation{{{i, j, 1.0}}, 0.0, s, v}};
}

// Row sums, diagonal floors, and a fixed off-diagonal support pattern.
std::vector<BaseRow> pattern_base(int n, double eps_prime, const std::vector<std::pair<int, int>>& arcs) {
    std::vector<BaseRow> base;
    for (int i = 0; i < n; ++i) base.push_back(row_sum(n, i));
    std::vector<char> on(static_cast<std::size_t>(n) * n, 0);
    for (auto [i, j] : arcs) on[static_cast<std::size_t>(i) * n + j] = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (on[static_cast<std::size_t>(i) * n + j]) base.push_back(bound("arc", i, j, Sense::GreaterEqual, eps_prime));
            else base.push_back(bound("zero", i, j, Sense::Equal, 0.0));
        }
    for (int j = 0; j < n; ++j) base.push_back(bound("diag_floor", j, j, Sense::GreaterEqual, eps_prime));
    return base;
}

core::EmpathicMatrix extract(const constraints::BuiltProgram& bp, const std::vector<double>& x) {
    const int n = bp.n;
    Eigen::MatrixXd w(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double v = x[bp.w(i, j)];
            if (v < 1e-12) v = 0.0;
            w(i, j) = v;
        }
        w.row(i) /= w.row(i).sum();
    }
    return core::EmpathicMatrix(std::move(w));
}

void finish(SelectionResult& r, const ConstraintSystem& sys, double eps_for_check) {
    r.diagnostics = core::classify_network(r.w, sys.thresholds());
    r.certificate.recheck_violation = sys.max_violation(r.w.matrix(), eps_for_check);
    if (r.certificate.recheck_violation > kRecheckTol) {
        std::ostringstream os;
        os << "selected network violates the constraint system by " << r.certificate.recheck_violation;
        throw SolverError(os.str());
    }
}

std::string infeasible_message(const ConstraintSystem& variant, const std::string& what) {
    std::string msg = what + " is infeasible";
    try {
        const auto ids = inconsistency::min_inconsistent_set(variant);
        if (!ids.empty()) {
            msg += "; conflicting statements:";
            for (const auto& id : ids) msg += " " + id + " (" + constraints::describe(variant.statement(id)) + ")";
        }
    } catch (const Error&) {
    }
    return msg;
}

// Maximize eps; Unbounded keeps the sentinel and pins eps to eps_min for a witness.
SelectionResult max_eps(const ConstraintSystem& variant, const std::string& what) {
    SelectionResult r;
    auto bp = variant.build(EpsSpec::free());
    bp.program.set_linear_objective({{bp.eps, 1.0}}, solver::ObjectiveSense::Maximize);
    auto sol = solver::solve_lp(bp.program);
    if (sol.status == SolveStatus::Unbounded) {
        bp = variant.build(EpsSpec::fixed(variant.thresholds().eps_min));
        bp.program.set_linear_objective({}, solver::ObjectiveSense::Minimize);
        sol = solver::solve_lp(bp.program);
        if (sol.status != SolveStatus::Optimal) throw InfeasibleError(what + " is infeasible");
        r.objective_unbounded = true;
        r.objective = solver::kInf;
        r.eps = variant.thresholds().eps_min;
        r.certificate.status = "Unbounded";
        r.certificate.notes.push_back("no constraint bears eps; objective unbounded, witness taken at eps = eps_min");
    } else if (sol.status == SolveStatus::Optimal) {
        r.objective = sol.objective;
        r.eps = sol.objective;
        r.certificate.status = "Optimal";
        if (!(sol.objective > 1e-9)) r.certificate.notes.push_back("eps* <= 0: strict statements are not all satisfiable");
    } else if (sol.status == SolveStatus::Infeasible) {
        throw InfeasibleError(infeasible_message(variant, what));
    } else {
        throw SolverError(what + ": LP stopped with " + solver::to_string(sol.status));
    }
    r.certificate.iterations = sol.meta.iterations;
    r.w = extract(bp, sol.values);
    return r;
}

std::vector<solver::AffineForm> centralities(const constraints::BuiltProgram& bp) {
    std::vector<solver::AffineForm> out(bp.n);
    for (int j = 0; j < bp.n; ++j)
        for (int k = 0; k < bp.n; ++k) out[j].terms.push_back({bp.w(k, j), 1.0});
    return out;
}

void require_feasible_witness(const ConstraintSystem& sys, const std::string& what) {
    const auto f = constraints::feasible(sys);
    if (f.infeasible()) throw InfeasibleError(infeasible_message(sys, what));
}

}  // namespace

int RootedTree::root() const {
    for (std::size_t v = 0; v < parent.size(); ++v)
        if (parent[v] < 0) return static_cast<int>(v);
    return -1;
}

std::vector<int> RootedTree::children(int v) const {
    std::vector<int> out;
    for (std::size_t c = 0; c < parent.size(); ++c)
        if (parent[c] == v) out.push_back(static_cast<int>(c));
    return out;
}

void RootedTree::validate(int n) const {
    if (static_cast<int>(parent.size()) != n) throw ValidationError("tree must cover all nodes", "tree");
    int roots = 0;
    for (int v = 0; v < n; ++v) {
        if (parent[v] < 0) ++roots;
        else if (parent[v] >= n || parent[v] == v) throw ValidationError("tree has an invalid parent", "tree");
    }
    if (roots != 1) throw ValidationError("tree must have exactly one root", "tree");
    for (int v = 0; v < n; ++v) {
        int u = v, steps = 0;
        while (parent[u] >= 0) {
            u = parent[u];
            if (++steps > n) throw ValidationError("tree contains a cycle", "tree");
        }
    }
}

std::string to_string(TargetKind k) {
    switch (k) {
        case TargetKind::MostDiscriminating: return "discriminating";
        case TargetKind::Sparse: return "sparse";
        case TargetKind::Central: return "central";
        case TargetKind::Distributed: return "distributed";
        case TargetKind::ResilientLocal: return "resilient-local";
        case TargetKind::ResilientGlobalForward: return "resilient-global";
        case TargetKind::ResilientGlobalReverse: return "resilient-global-reverse";
        case TargetKind::Star: return "star";
        case TargetKind::Bus: return "bus";
        case TargetKind::Tree: return "tree";
    }
    return "discriminating";
}

TargetKind target_kind_from(const std::string& s) {
    for (auto k : {TargetKind::MostDiscriminating, TargetKind::Sparse, TargetKind::Central, TargetKind::Distributed,
                   TargetKind::ResilientLocal, TargetKind::ResilientGlobalForward, TargetKind::ResilientGlobalReverse,
                   TargetKind::Star, TargetKind::Bus, TargetKind::Tree})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown target '" + s + "'", "target");
}

std::string label(const TargetSpec& t) {
    std::string s = to_string(t.kind);
    if (t.kind == TargetKind::Star && t.center) s += "-" + std::to_string(*t.center + 1);
    if (t.kind == TargetKind::Bus && t.direction == Direction::Reverse) s += "-reverse";
    return s;
}

std::vector<BaseRow> all_arcs_base(int n, double eps_prime) {
    std::vector<BaseRow> base;
    for (int i = 0; i < n; ++i) base.push_back(row_sum(n, i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) base.push_back(bound("floor", i, j, Sense::GreaterEqual, eps_prime));
    return base;
}

std::vector<BaseRow> cycle_base(int n, double eps_prime, Direction d) {
    std::vector<BaseRow> base;
    for (int i = 0; i < n; ++i) base.push_back(row_sum(n, i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) base.push_back(bound("diag_pin", i, i, Sense::Equal, eps_prime));
            else base.push_back(bound("nonneg", i, j, Sense::GreaterEqual, 0.0));
        }
    for (int k = 0; k < n; ++k) {
        const int next = (k + 1) % n;
        if (next == k) continue;
        if (d == Direction::Forward) base.push_back(bound("cycle", k, next, Sense::GreaterEqual, eps_prime));
        else base.push_back(bound("cycle", next, k, Sense::GreaterEqual, eps_prime));
    }
    return base;
}

std::vector<BaseRow> star_base(int n, double eps_prime, int center) {
    std::vector<std::pair<int, int>> arcs;
    for (int i = 0; i < n; ++i)
        if (i != center) arcs.push_back({i, center});
    return pattern_base(n, eps_prime, arcs);
}

std::vector<BaseRow> bus_base(int n, double eps_prime, Direction d) {
    std::vector<std::pair<int, int>> arcs;
    for (int k = 0; k + 1 < n; ++k) {
        if (d == Direction::Forward) arcs.push_back({k, k + 1});
        else arcs.push_back({k + 1, k});
    }
    return pattern_base(n, eps_prime, arcs);
}

std::vector<BaseRow> tree_base(int n, double eps_prime, const RootedTree& t) {
    t.validate(n);
    std::vector<BaseRow> base;
    for (int i = 0; i < n; ++i) base.push_back(row_sum(n, i));
    for (int p = 0; p < n; ++p) {
        const auto kids = t.children(p);
        if (kids.empty()) {
            base.push_back(bound("diag_floor", p, p, Sense::GreaterEqual, eps_prime));
        } else {
            LinearRelation mass;
            for (int c : kids) mass.terms.push_back({p, c, 1.0});
            mass.sense = Sense::Equal;
            mass.rhs = 1.0;
            base.push_back({"children_mass_" + std::to_string(p + 1), mass});
            base.push_back(bound("nonneg", p, p, Sense::GreaterEqual, 0.0));
        }
        for (int j = 0; j < n; ++j) {
            if (j == p) continue;
            if (t.parent[j] == p) base.push_back(bound("arc", p, j, Sense::GreaterEqual, eps_prime));
            else base.push_back(bound("zero", p, j, Sense::Equal, 0.0));
        }
    }
    return base;
}

SelectionResult most_discriminating(const ConstraintSystem& sys) {
    SelectionResult r = max_eps(sys, "most discriminating network");
    r.target.kind = TargetKind::MostDiscriminating;
    finish(r, sys, r.eps);
    return r;
}

SelectionResult sparsest(const ConstraintSystem& sys) {
    const auto& t = sys.thresholds();
    const int n = sys.n();
    require_feasible_witness(sys, "sparse network");
    auto bp = sys.build(EpsSpec::at_least(t.eps_min));
    auto& p = bp.program;
    const double m = std::min(t.m_for(n), 1.0);  // w_ij <= 1 is implied by row sums
    std::vector<solver::Term> obj;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int g = p.add_binary("gamma_" + node_pair(i, j));
            if (i == j) p.variables()[g].lower = 1.0;  // forced by w_jj >= eps'
            p.add_constraint({{bp.w(i, j), 1.0}, {g, -m}}, Sense::LessEqual, 0.0, "upper_" + node_pair(i, j));
            p.add_constraint({{bp.w(i, j), 1.0}, {g, -t.eps_prime}}, Sense::GreaterEqual, 0.0,
                             "lower_" + node_pair(i, j));
            obj.push_back({g, 1.0});
        }
    p.set_linear_objective(std::move(obj), solver::ObjectiveSense::Minimize);
    const auto sol = solver::solve_milp(p);
    if (sol.status == SolveStatus::Infeasible) throw InfeasibleError(infeasible_message(sys, "sparse network"));
    if (sol.values.empty()) throw SolverError("sparse network: " + solver::to_string(sol.status) + " without incumbent");
    SelectionResult r;
    r.target.kind = TargetKind::Sparse;
    r.objective = sol.objective;
    r.eps = sol.values[bp.eps];
    r.certificate.status = solver::to_string(sol.status);
    r.certificate.message = sol.meta.message;
    r.certificate.nodes = sol.meta.nodes;
    r.certificate.iterations = sol.meta.iterations;
    r.w = extract(bp, sol.values);
    finish(r, sys, r.eps);
    return r;
}

SelectionResult central(const ConstraintSystem& sys) {
    const auto& t = sys.thresholds();
    const int n = sys.n();
    require_feasible_witness(sys, "central network");
    auto bp = sys.build(EpsSpec::at_least(t.eps_min));
    bp.program.set_entropy_objective({centralities(bp), static_cast<double>(n)}, solver::ObjectiveSense::Minimize);
    const auto sol = solver::minimize_entropy(bp.program, t.starts, t.seed);
    if (!sol.ok()) throw InfeasibleError(infeasible_message(sys, "central network"));
    SelectionResult r;
    r.target.kind = TargetKind::Central;
    r.objective = sol.objective;
    r.eps = sol.values[bp.eps];
    r.certificate.status = solver::to_string(sol.status);
    r.certificate.trace = sol.meta.trace;
    r.certificate.iterations = sol.meta.iterations;
    r.w = extract(bp, sol.values);
    finish(r, sys, r.eps);

    // Exact check of whether any compatible network is central.
    bool attainable = false;
    const auto forms = centralities(bp);
    for (int j = 0; j < n; ++j) {
        auto q = bp.program;
        q.set_linear_objective(forms[j].terms, solver::ObjectiveSense::Maximize);
        const auto best = solver::solve_lp(q);
        const double v = best.status == SolveStatus::Optimal ? best.objective : 0.0;
        r.certificate.max_omega.push_back(v);
        if (v >= n / 2.0 - 1e-9) attainable = true;
    }
    if (!attainable) r.certificate.notes.push_back("no central network compatible");
    else if (!r.diagnostics.is_central)
        r.certificate.notes.push_back("a central network is compatible but the best local minimum is not central");
    return r;
}

SelectionResult distributed(const ConstraintSystem& sys) {
    const auto& t = sys.thresholds();
    require_feasible_witness(sys, "distributed network");
    auto bp = sys.build(EpsSpec::at_least(t.eps_min));
    bp.program.set_entropy_objective({centralities(bp), static_cast<double>(sys.n())},
                                     solver::ObjectiveSense::Maximize);
    const auto sol = solver::maximize_entropy(bp.program);
    if (sol.status == SolveStatus::Infeasible) throw InfeasibleError(infeasible_message(sys, "distributed network"));
    if (sol.status != SolveStatus::Optimal) throw SolverError("distributed network: " + sol.meta.message);
    SelectionResult r;
    r.target.kind = TargetKind::Distributed;
    r.objective = sol.objective;
    r.eps = sol.values[bp.eps];
    r.certificate.status = solver::to_string(sol.status);
    r.certificate.message = sol.meta.message;
    r.certificate.iterations = sol.meta.iterations;
    r.certificate.stationarity = sol.meta.stationarity;
    r.w = extract(bp, sol.values);
    finish(r, sys, r.eps);
    return r;
}

SelectionResult resilient_local(const ConstraintSystem& sys) {
    const auto& t = sys.thresholds();
    const auto variant = sys.with_base(all_arcs_base(sys.n(), t.eps_prime), "all-arcs");
    auto bp = variant.build(EpsSpec::at_least(t.eps_min));
    bp.program.set_entropy_objective({centralities(bp), static_cast<double>(sys.n())},
                                     solver::ObjectiveSense::Maximize);
    const auto sol = solver::maximize_entropy(bp.program);
    if (sol.status == SolveStatus::Infeasible)
        throw InfeasibleError(infeasible_message(variant, "resilient local network (all arcs >= eps')"));
    if (sol.status != SolveStatus::Optimal) throw SolverError("resilient local network: " + sol.meta.message);
    SelectionResult r;
    r.target.kind = TargetKind::ResilientLocal;
    r.objective = sol.objective;
    r.eps = sol.values[bp.eps];
    r.certificate.status = solver::to_string(sol.status);
    r.certificate.message = sol.meta.message;
    r.certificate.iterations = sol.meta.iterations;
    r.certificate.stationarity = sol.meta.stationarity;
    r.w = extract(bp, sol.values);
    finish(r, variant, r.eps);
    finish(r, sys, r.eps);
    return r;
}

SelectionResult resilient_global(const ConstraintSystem& sys, Direction d) {
    const auto& t = sys.thresholds();
    const int n = sys.n();
    const auto variant = sys.with_base(cycle_base(n, t.eps_prime, d), d == Direction::Forward ? "cycle" : "cycle-reverse");
    SelectionResult first = max_eps(variant, "resilient global network");

    // Among eps-optimal networks, take the one with the most even centralities.
    auto bp = first.objective_unbounded ? variant.build(EpsSpec::fixed(t.eps_min))
                                        : variant.build(EpsSpec::at_least(first.eps - 1e-7 * std::max(1.0, std::abs(first.eps))));
    auto& p = bp.program;
    const int spread = p.add_variable("spread", 0.0, solver::kInf);
    for (int j = 0; j < n; ++j) {
        std::vector<solver::Term> col;
        for (int k = 0; k < n; ++k) col.push_back({bp.w(k, j), 1.0});
        auto hi = col;
        hi.push_back({spread, -1.0});
        p.add_constraint(std::move(hi), Sense::LessEqual, 1.0, "spread_hi_" + std::to_string(j + 1));
        col.push_back({spread, 1.0});
        p.add_constraint(std::move(col), Sense::GreaterEqual, 1.0, "spread_lo_" + std::to_string(j + 1));
    }
    p.set_linear_objective({{spread, 1.0}}, solver::ObjectiveSense::Minimize);
    const auto sol = solver::solve_lp(p);
    SelectionResult r = first;
    if (sol.status == SolveStatus::Optimal) {
        r.w = extract(bp, sol.values);
        if (!first.objective_unbounded) r.eps = sol.values[bp.eps];
        r.certificate.notes.push_back("tie-break: minimized max |omega_j - 1| among eps-optimal networks");
    } else {
        r.certificate.notes.push_back("tie-break stage returned " + solver::to_string(sol.status) + "; first-stage optimum kept");
    }
    r.target.kind = d == Direction::Forward ? TargetKind::ResilientGlobalForward : TargetKind::ResilientGlobalReverse;
    r.target.direction = d;
    finish(r, variant, r.eps);
    finish(r, sys, r.eps);
    r.g = core::global_weight_matrix(r.w);
    r.global_diagnostics = core::classify_network(*r.g, t);
    if (!(r.g->matrix().minCoeff() > 0.0)) r.certificate.notes.push_back("global matrix is not entrywise positive");
    return r;
}

SelectionResult star(const ConstraintSystem& sys, std::optional<int> center) {
    const auto& t = sys.thresholds();
    const int n = sys.n();
    auto solve_center = [&](int c) {
        const auto variant = sys.with_base(star_base(n, t.eps_prime, c), "star-" + std::to_string(c + 1));
        SelectionResult r = max_eps(variant, "star network with center " + std::to_string(c + 1));
        r.target.kind = TargetKind::Star;
        r.target.center = c;
        r.center = c;
        finish(r, variant, r.eps);
        return r;
    };
    if (center) {
        if (*center < 0 || *center >= n) throw ValidationError("star center out of range", "center");
        return solve_center(*center);
    }
    std::optional<SelectionResult> best;
    std::vector<std::string> skipped;
    for (int c = 0; c < n; ++c) {
        try {
            SelectionResult r = solve_center(c);
            const double v = r.objective_unbounded ? solver::kInf : r.objective;
            const double bv = !best ? -solver::kInf : best->objective_unbounded ? solver::kInf : best->objective;
            if (v > bv + 1e-12) best = std::move(r);
        } catch (const InfeasibleError&) {
            skipped.push_back(std::to_string(c + 1));
        }
    }
    if (!best) throw InfeasibleError("no feasible star center");
    if (!skipped.empty()) {
        std::string s = "infeasible centers:";
        for (const auto& c : skipped) s += " " + c;
        best->certificate.notes.push_back(s);
    }
    best->target.center.reset();
    return *best;
}

SelectionResult bus(const ConstraintSystem& sys, Direction d) {
    const auto& t = sys.thresholds();
    const auto variant = sys.with_base(bus_base(sys.n(), t.eps_prime, d), d == Direction::Forward ? "bus" : "bus-reverse");
    SelectionResult r = max_eps(variant, d == Direction::Forward ? "forward bus" : "reverse bus");
    r.target.kind = TargetKind::Bus;
    r.target.direction = d;
    finish(r, variant, r.eps);
    return r;
}

SelectionResult tree(const ConstraintSystem& sys, const RootedTree& layers) {
    const auto& t = sys.thresholds();
    const int n = sys.n();
    layers.validate(n);
    const auto variant = sys.with_base(tree_base(n, t.eps_prime, layers), "tree");
    SelectionResult r = max_eps(variant, "tree network");
    r.target.kind = TargetKind::Tree;
    r.target.tree = layers;
    std::string dropped = "diagonal floor dropped for internal nodes:";
    for (int p = 0; p < n; ++p)
        if (!layers.children(p).empty()) dropped += " " + std::to_string(p + 1);
    r.certificate.notes.push_back(dropped);
    finish(r, variant, r.eps);
    return r;
}

SelectionResult select(const ConstraintSystem& sys, const TargetSpec& target) {
    switch (target.kind) {
        case TargetKind::MostDiscriminating: return most_discriminating(sys);
        case TargetKind::Sparse: return sparsest(sys);
        case TargetKind::Central: return central(sys);
        case TargetKind::Distributed: return distributed(sys);
        case TargetKind::ResilientLocal: return resilient_local(sys);
        case TargetKind::ResilientGlobalForward: return resilient_global(sys, Direction::Forward);
        case TargetKind::ResilientGlobalReverse: return resilient_global(sys, Direction::Reverse);
        case TargetKind::Star: return star(sys, target.center);
        case TargetKind::Bus: return bus(sys, target.direction);
        case TargetKind::Tree: return tree(sys, target.tree);
    }
    throw ValidationError("unknown target", "target");
}

}  // namespace empathic::selection
