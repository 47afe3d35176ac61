#include "empathic/judgment/completion.hpp"

#include "empathic/error.hpp"
#include "empathic/solver/solve.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace empathic::judgment {

namespace {

using solver::MathProgram;
using solver::Sense;
using solver::Term;

// r_st as an affine form over upper-triangle variables.
struct Entry {
    std::vector<Term> terms;
    double constant = 0.0;
};

struct Model {
    MathProgram program;
    std::vector<std::vector<int>> var;  // var[s][t] for s < t
    int eps = -1;
    std::vector<int> nu;                // per statement, when relaxed
    bool eps_used = false;
};

Entry entry(const Model& md, int s, int t) {
    if (s == t) return {{}, 0.5};
    if (s < t) return {{{md.var[s][t], 1.0}}, 0.0};
    return {{{md.var[t][s], -1.0}}, 1.0};
}

void check_indices(const IntrinsicStatement& st, int m) {
    auto ok = [m](int a) { return a >= 0 && a < m; };
    bool valid = ok(st.s) && ok(st.t);
    if (st.kind == IntrinsicKind::Intensity) valid = valid && ok(st.p) && ok(st.q);
    if (!valid) throw ValidationError("statement " + st.id + " references an unknown alternative", "statements");
}

// eps_fixed < 0: eps free and maximized; otherwise eps is pinned to that value.
Model build(const FuzzyJudgmentMatrix& r, const std::vector<IntrinsicStatement>& stmts, double eps_fixed,
            double big_m) {
    const auto violations = validate(r);
    if (!violations.empty()) throw ValidationError("invalid judgment matrix: " + violations.front().message, "rows");
    Model md;
    const int m = r.m();
    md.var.assign(m, std::vector<int>(m, -1));
    for (int s = 0; s < m; ++s) {
        for (int t = s + 1; t < m; ++t) {
            std::ostringstream name;
            name << "r_" << s + 1 << "_" << t + 1;
            const auto& c = r.at(s, t);
            md.var[s][t] = c ? md.program.add_variable(name.str(), *c, *c) : md.program.add_variable(name.str(), 0.0, 1.0);
        }
    }
    md.eps = eps_fixed < 0 ? md.program.add_variable("eps", -solver::kInf, solver::kInf)
                           : md.program.add_variable("eps", eps_fixed, eps_fixed);
    for (int s = 0; s < m; ++s)
        for (int t = s + 1; t < m; ++t)
            for (int p = t + 1; p < m; ++p) {
                std::ostringstream name;
                name << "consistency_" << s + 1 << "_" << t + 1 << "_" << p + 1;
                md.program.add_constraint({{md.var[s][p], 1.0}, {md.var[t][p], -1.0}, {md.var[s][t], -1.0}},
                                          Sense::Equal, -0.5, name.str());
            }
    for (std::size_t k = 0; k < stmts.size(); ++k) {
        const auto& st = stmts[k];
        check_indices(st, m);
        Entry lhs = entry(md, st.s, st.t);
        double rhs = 0.5;
        if (st.kind == IntrinsicKind::Intensity) {
            const Entry other = entry(md, st.p, st.q);
            for (auto t : other.terms) lhs.terms.push_back({t.var, -t.coef});
            lhs.constant -= other.constant;
            rhs = 0.0;
        }
        rhs -= lhs.constant;
        if (st.strict) {
            lhs.terms.push_back({md.eps, -1.0});
            md.eps_used = true;
        }
        if (big_m > 0) {
            const int nu = md.program.add_binary("nu_" + std::to_string(k + 1));
            md.nu.push_back(nu);
            lhs.terms.push_back({nu, big_m});
        }
        md.program.add_constraint(std::move(lhs.terms), Sense::GreaterEqual, rhs, st.id.empty() ? describe(st) : st.id);
    }
    return md;
}

FuzzyJudgmentMatrix read_back(const FuzzyJudgmentMatrix& r, const Model& md, const std::vector<double>& x,
                              std::vector<bool>& inferred) {
    FuzzyJudgmentMatrix out = r;
    const int m = r.m();
    inferred.assign(static_cast<std::size_t>(m) * m, false);
    for (int s = 0; s < m; ++s)
        for (int t = s + 1; t < m; ++t) {
            if (r.at(s, t)) continue;
            double v = std::clamp(x[md.var[s][t]], 0.0, 1.0);
            if (std::abs(v) < 1e-12) v = 0.0;
            out.set(s, t, v);
            inferred[static_cast<std::size_t>(s) * m + t] = inferred[static_cast<std::size_t>(t) * m + s] = true;
        }
    return out;
}

}  // namespace

CompletionResult complete(const FuzzyJudgmentMatrix& r, const std::vector<IntrinsicStatement>& stmts) {
    Model md = build(r, stmts, -1.0, 0.0);
    md.program.set_linear_objective({{md.eps, 1.0}}, solver::ObjectiveSense::Maximize);
    CompletionResult res;
    auto sol = solver::solve_lp(md.program);
    if (sol.status == solver::SolveStatus::Unbounded) {
        // No strict statement: any consistent completion will do.
        Model fixed = build(r, stmts, 0.0, 0.0);
        fixed.program.set_linear_objective({}, solver::ObjectiveSense::Minimize);
        sol = solver::solve_lp(fixed.program);
        if (sol.status != solver::SolveStatus::Optimal) {
            res.completed = r;
            res.status = CompletionStatus::Inconsistent;
            return res;
        }
        res.completed = read_back(r, fixed, sol.values, res.inferred);
        res.eps_star = solver::kInf;
        res.status = CompletionStatus::Completed;
        return res;
    }
    if (sol.status != solver::SolveStatus::Optimal) {
        if (sol.status == solver::SolveStatus::IterationLimit) throw SolverError("judgment completion: " + sol.meta.message);
        res.completed = r;
        res.status = CompletionStatus::Inconsistent;
        return res;
    }
    res.eps_star = sol.objective;
    res.completed = read_back(r, md, sol.values, res.inferred);
    res.status = res.eps_star > 1e-9 ? CompletionStatus::Completed : CompletionStatus::Inconsistent;
    return res;
}

JudgmentInconsistency judgment_inconsistency(const FuzzyJudgmentMatrix& r,
                                             const std::vector<IntrinsicStatement>& stmts,
                                             const core::Thresholds& t, int limit) {
    JudgmentInconsistency out;
    // Entries live in [0,1], so no row can be violated by more than 2 + eps.
    const double big_m = 3.0;
    Model md = build(r, stmts, t.eps_min, big_m);
    std::vector<Term> obj;
    for (int v : md.nu) obj.push_back({v, 1.0});
    md.program.set_linear_objective(obj, solver::ObjectiveSense::Minimize);
    double first = -1.0;
    for (;;) {
        if (static_cast<int>(out.sets.size()) >= limit) {
            out.exhausted = false;
            break;
        }
        const auto sol = solver::solve_milp(md.program);
        if (sol.status != solver::SolveStatus::Optimal) {
            if (out.sets.empty()) out.structural = true;
            break;
        }
        const double val = std::round(sol.objective);
        if (first < 0) first = val;
        if (val > first + 0.5) break;
        std::vector<std::string> set;
        std::vector<Term> cut;
        for (std::size_t k = 0; k < md.nu.size(); ++k) {
            if (sol.values[md.nu[k]] > 0.5) {
                set.push_back(stmts[k].id.empty() ? describe(stmts[k]) : stmts[k].id);
                cut.push_back({md.nu[k], 1.0});
            }
        }
        if (set.empty()) break;  // consistent; nothing to report
        out.sets.push_back(set);
        md.program.add_constraint(cut, Sense::LessEqual, static_cast<double>(cut.size()) - 1.0, "exclusion");
    }
    return out;
}

Eigenpair principal_eigenvector(const FuzzyJudgmentMatrix& r) {
    if (!r.complete()) throw PreconditionError("principal_eigenvector needs a complete matrix");
    const Eigen::MatrixXd a = r.dense();
    const int m = r.m();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(m, 1.0 / m);
    Eigenpair ep;
    double step = 1.0;
    for (int it = 1; it <= 10000; ++it) {
        Eigen::VectorXd y = a * x;
        const double s = y.sum();
        if (!(s > 0.0)) throw SolverError("power iteration collapsed to zero");
        y /= s;
        step = (y - x).lpNorm<Eigen::Infinity>();
        x = y;
        if (step <= 1e-10) {
            ep.iterations = it;
            ep.lambda_max = (a * x).sum();
            ep.u.assign(x.data(), x.data() + m);
            return ep;
        }
    }
    // Stalls on reducible matrices with a defective top eigenvalue (0/1 judgments);
    // fall back to a dense eigensolve.
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() == Eigen::Success) {
        Eigen::Index top = 0;
        for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k)
            if (es.eigenvalues()(k).real() > es.eigenvalues()(top).real()) top = k;
        Eigen::VectorXd v = es.eigenvectors().col(top).real();
        if (v.sum() < 0.0) v = -v;
        if ((v.array() >= -1e-9).all() && v.sum() > 0.0) {
            v = v.cwiseMax(0.0) / v.cwiseMax(0.0).sum();
            ep.iterations = 10000;
            ep.lambda_max = (a * v).sum();
            ep.u.assign(v.data(), v.data() + m);
            return ep;
        }
    }
    std::ostringstream os;
    os << "power iteration did not converge in 10000 steps (last step " << step << ")";
    throw SolverError(os.str());
}

core::UtilityMatrix intrinsic_matrix(const std::vector<FuzzyJudgmentMatrix>& matrices) {
    if (matrices.empty()) throw ValidationError("no judgment matrices", "matrices");
    const int m = matrices.front().m();
    Eigen::MatrixXd u(static_cast<Eigen::Index>(matrices.size()), m);
    for (std::size_t j = 0; j < matrices.size(); ++j) {
        if (matrices[j].m() != m) throw ValidationError("judgment matrices differ in size", "matrices");
        try {
            const auto ep = principal_eigenvector(matrices[j]);
            for (int s = 0; s < m; ++s) u(static_cast<Eigen::Index>(j), s) = ep.u[s];
        } catch (const Error& e) {
            throw SolverError("expert " + std::to_string(j + 1) + ": " + e.what());
        }
    }
    return core::UtilityMatrix(u, core::UtilityKind::Intrinsic);
}

std::string completion_csv(const CompletionResult& r) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "s,t,value,source\n";
    const int m = r.completed.m();
    for (int s = 0; s < m; ++s)
        for (int t = s + 1; t < m; ++t) {
            const bool inf = !r.inferred.empty() && r.inferred[static_cast<std::size_t>(s) * m + t];
            os << s + 1 << ',' << t + 1 << ',' << r.completed.value(s, t) << ',' << (inf ? "inferred" : "fixed") << '\n';
        }
    return os.str();
}

}  // namespace empathic::judgment
