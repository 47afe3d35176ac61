#include "empathic/constraints/system.hpp"

#include "empathic/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace empathic::constraints {

namespace {

using solver::Sense;

std::string wname(int i, int j) { return "w_" + std::to_string(i + 1) + "_" + std::to_string(j + 1); }

void require(bool ok, const std::string& what, const std::string& field) {
    if (!ok) throw ValidationError(what, field);
}

LinearRelation gap_row(std::vector<WTerm> terms, Relation rel) {
    LinearRelation r;
    r.terms = std::move(terms);
    r.sense = rel == Relation::Indifferent ? Sense::Equal : Sense::GreaterEqual;
    r.eps_coef = rel == Relation::Strict ? -1.0 : 0.0;
    return r;
}

// Compresses duplicates and drops zero coefficients.
std::vector<WTerm> merged(const std::vector<WTerm>& terms) {
    std::map<std::pair<int, int>, double> acc;
    for (const auto& t : terms) acc[{t.i, t.j}] += t.coef;
    std::vector<WTerm> out;
    for (const auto& [key, c] : acc)
        if (c != 0.0) out.push_back({key.first, key.second, c});
    return out;
}

std::vector<WTerm> column(int n, int j, double coef) {
    std::vector<WTerm> out;
    for (int k = 0; k < n; ++k) out.push_back({k, j, coef});
    return out;
}

void write_relation(std::ostream& os, const LinearRelation& r) {
    bool first = true;
    for (const auto& t : r.terms) {
        if (first) os << (t.coef < 0 ? "- " : "");
        else os << (t.coef < 0 ? " - " : " + ");
        os << std::abs(t.coef) << " " << wname(t.i, t.j);
        first = false;
    }
    if (r.eps_coef != 0.0) {
        os << (first ? (r.eps_coef < 0 ? "- " : "") : (r.eps_coef < 0 ? " - " : " + ")) << std::abs(r.eps_coef)
           << " eps";
        first = false;
    }
    if (first) os << "0";
    os << (r.sense == Sense::LessEqual ? " <= " : r.sense == Sense::GreaterEqual ? " >= " : " = ") << r.rhs;
}

double relation_violation(const LinearRelation& r, const Eigen::MatrixXd& w, double eps) {
    double lhs = r.eps_coef * eps;
    for (const auto& t : r.terms) lhs += t.coef * w(t.i, t.j);
    switch (r.sense) {
        case Sense::LessEqual: return std::max(0.0, lhs - r.rhs);
        case Sense::GreaterEqual: return std::max(0.0, r.rhs - lhs);
        case Sense::Equal: return std::abs(lhs - r.rhs);
    }
    return 0.0;
}

}  // namespace

bool FeasibilityResult::consistent() const {
    return status == solver::SolveStatus::Unbounded || (status == solver::SolveStatus::Optimal && eps_star > 1e-9);
}

std::vector<BaseRow> standard_base(int n, double eps_prime) {
    std::vector<BaseRow> base;
    for (int i = 0; i < n; ++i) {
        LinearRelation r;
        for (int j = 0; j < n; ++j) r.terms.push_back({i, j, 1.0});
        r.sense = Sense::Equal;
        r.rhs = 1.0;
        base.push_back({"row_sum_" + std::to_string(i + 1), r});
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            base.push_back({"nonneg_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                            LinearRelation{{{i, j, 1.0}}, 0.0, Sense::GreaterEqual, 0.0}});
        }
    for (int j = 0; j < n; ++j)
        base.push_back({"diag_floor_" + std::to_string(j + 1),
                        LinearRelation{{{j, j, 1.0}}, 0.0, Sense::GreaterEqual, eps_prime}});
    return base;
}

std::vector<LinearRelation> compile(const EmpathicStatement& st, const core::UtilityMatrix& u,
                                    const core::Thresholds& t) {
    const int n = u.n(), m = u.m();
    const std::string tag = "statement " + st.id + ": ";
    auto in_range = [&](int v, int hi, const char* what, const char* field) {
        require(v >= 0 && v < hi,
                tag + "unknown " + what + " index " + field + "=" + std::to_string(v + 1) + " (expected 1.." +
                    std::to_string(hi) + ")",
                field);
    };
    auto node = [&](int v, const char* field) { in_range(v, n, "node", field); };
    auto alt = [&](int v, const char* field) { in_range(v, m, "alternative", field); };
    std::vector<LinearRelation> rows;
    switch (st.kind) {
        case StatementKind::Preference:
        case StatementKind::Intensity: {
            in_range(st.dm, n, "expert", "dm");
            alt(st.s, "s");
            alt(st.t, "t");
            const bool inten = st.kind == StatementKind::Intensity;
            if (inten) {
                alt(st.p, "p");
                alt(st.q, "q");
            }
            std::vector<WTerm> terms;
            for (int k = 0; k < n; ++k) {
                double c = u(k, st.s) - u(k, st.t);
                if (inten) c -= u(k, st.p) - u(k, st.q);
                terms.push_back({st.dm, k, c});
            }
            rows.push_back(gap_row(merged(terms), st.relation));
            break;
        }
        case StatementKind::ZeroWeight:
            node(st.i, "i");
            node(st.j, "j");
            rows.push_back(LinearRelation{{{st.i, st.j, 1.0}}, 0.0, Sense::LessEqual, 0.0});
            break;
        case StatementKind::ArcPresent:
            node(st.i, "i");
            node(st.j, "j");
            rows.push_back(LinearRelation{{{st.i, st.j, 1.0}}, 0.0, Sense::GreaterEqual, t.eps_prime});
            break;
        case StatementKind::WeightDominance:
            for (auto [v, f] : {std::pair{st.i, "i"}, {st.j, "j"}, {st.k, "k"}, {st.h, "h"}})
                node(v, f);
            require(std::isfinite(st.factor) && st.factor >= 0.0, tag + "factor must be nonnegative", "factor");
            rows.push_back(gap_row(merged({{st.i, st.j, 1.0}, {st.k, st.h, -st.factor}}), st.relation));
            break;
        case StatementKind::HalfShare: {
            node(st.i, "i");
            node(st.j, "j");
            auto terms = column(n, st.j, -1.0);
            terms.push_back({st.i, st.j, 2.0});
            rows.push_back(LinearRelation{merged(terms), 0.0, Sense::GreaterEqual, 0.0});
            break;
        }
        case StatementKind::CentralityGap: {
            for (auto [v, f] : {std::pair{st.i, "i"}, {st.j, "j"}, {st.k, "k"}, {st.h, "h"}})
                node(v, f);
            std::vector<WTerm> terms;
            for (auto [col, c] : {std::pair{st.i, 1.0}, {st.j, -1.0}, {st.k, -1.0}, {st.h, 1.0}}) {
                auto part = column(n, col, c);
                terms.insert(terms.end(), part.begin(), part.end());
            }
            rows.push_back(gap_row(merged(terms), st.relation));
            break;
        }
    }
    return rows;
}

ConstraintSystem assemble(const core::UtilityMatrix& u_i, const std::vector<EmpathicStatement>& stmts,
                          const core::Thresholds& t) {
    ConstraintSystem sys;
    sys.n_ = u_i.n();
    t.validate(sys.n_);
    sys.t_ = t;
    sys.u_ = u_i;
    sys.base_ = standard_base(sys.n_, t.eps_prime);
    std::set<std::string> seen;
    for (const auto& st : stmts) {
        require(!st.id.empty(), "statement without id", "id");
        require(seen.insert(st.id).second, "duplicate statement id " + st.id, "id");
        sys.groups_.push_back({st.id, compile(st, u_i, t)});
        sys.stmts_.push_back(st);
    }
    return sys;
}

const TaggedGroup& ConstraintSystem::group(const std::string& id) const {
    for (const auto& g : groups_)
        if (g.id == id) return g;
    throw NotFoundError("unknown statement id " + id);
}

const EmpathicStatement& ConstraintSystem::statement(const std::string& id) const {
    for (const auto& s : stmts_)
        if (s.id == id) return s;
    throw NotFoundError("unknown statement id " + id);
}

ConstraintSystem ConstraintSystem::without(const std::set<std::string>& ids) const {
    for (const auto& id : ids) group(id);
    ConstraintSystem out = *this;
    out.stmts_.clear();
    out.groups_.clear();
    for (std::size_t k = 0; k < stmts_.size(); ++k) {
        if (ids.count(stmts_[k].id)) continue;
        out.stmts_.push_back(stmts_[k]);
        out.groups_.push_back(groups_[k]);
    }
    return out;
}

ConstraintSystem ConstraintSystem::with_base(std::vector<BaseRow> base, std::string label) const {
    ConstraintSystem out = *this;
    out.base_ = std::move(base);
    out.base_label_ = std::move(label);
    return out;
}

ConstraintSystem ConstraintSystem::with_statement(const EmpathicStatement& st) const {
    for (const auto& s : stmts_) require(s.id != st.id, "duplicate statement id " + st.id, "id");
    ConstraintSystem out = *this;
    out.groups_.push_back({st.id, compile(st, u_, t_)});
    out.stmts_.push_back(st);
    return out;
}

BuiltProgram ConstraintSystem::build(EpsSpec eps, const std::vector<LinearRelation>& extra, double relax_big_m) const {
    BuiltProgram bp;
    bp.n = n_;
    auto& p = bp.program;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) p.add_variable(wname(i, j), -solver::kInf, solver::kInf);
    switch (eps.mode) {
        case EpsMode::Free: bp.eps = p.add_variable("eps", -solver::kInf, solver::kInf); break;
        case EpsMode::AtLeast: bp.eps = p.add_variable("eps", eps.value, solver::kInf); break;
        case EpsMode::Fixed: bp.eps = p.add_variable("eps", eps.value, eps.value); break;
    }

    auto& vars = p.variables();
    // Single-variable rows without eps become bounds.
    auto as_bound = [&](const LinearRelation& r) {
        if (r.terms.size() != 1 || r.eps_coef != 0.0 || r.terms[0].coef == 0.0) return false;
        const auto& t = r.terms[0];
        auto& v = vars[bp.w(t.i, t.j)];
        const double val = r.rhs / t.coef;
        Sense s = r.sense;
        if (t.coef < 0 && s != Sense::Equal) s = s == Sense::LessEqual ? Sense::GreaterEqual : Sense::LessEqual;
        if (s != Sense::LessEqual) v.lower = std::max(v.lower, val);
        if (s != Sense::GreaterEqual) v.upper = std::min(v.upper, val);
        return true;
    };
    auto add_row = [&](const LinearRelation& r, const std::string& name, int nu, double m) {
        std::vector<solver::Term> terms;
        for (const auto& t : r.terms) terms.push_back({bp.w(t.i, t.j), t.coef});
        if (r.eps_coef != 0.0) terms.push_back({bp.eps, r.eps_coef});
        if (nu < 0) {
            p.add_constraint(std::move(terms), r.sense, r.rhs, name);
            return;
        }
        if (r.sense != Sense::LessEqual) {
            auto ge = terms;
            ge.push_back({nu, m});
            p.add_constraint(std::move(ge), Sense::GreaterEqual, r.rhs, name);
        }
        if (r.sense != Sense::GreaterEqual) {
            terms.push_back({nu, -m});
            p.add_constraint(std::move(terms), Sense::LessEqual, r.rhs, name);
        }
    };

    for (const auto& b : base_)
        if (!as_bound(b.rel)) add_row(b.rel, b.label, -1, 0.0);
    for (std::size_t k = 0; k < extra.size(); ++k)
        if (!as_bound(extra[k])) add_row(extra[k], "extra_" + std::to_string(k + 1), -1, 0.0);
    for (const auto& g : groups_) {
        int nu = -1;
        if (relax_big_m > 0.0) {
            nu = p.add_binary("nu_" + g.id);
            bp.nu.push_back(nu);
        }
        for (const auto& r : g.rows)
            if (nu >= 0 || !as_bound(r)) add_row(r, g.id, nu, relax_big_m);
    }
    return bp;
}

double ConstraintSystem::max_violation(const Eigen::MatrixXd& w, double eps) const {
    return max_violation(w, eps, {});
}

double ConstraintSystem::max_violation(const Eigen::MatrixXd& w, double eps,
                                       const std::vector<LinearRelation>& extra) const {
    double v = 0.0;
    for (const auto& b : base_) v = std::max(v, relation_violation(b.rel, w, eps));
    for (const auto& g : groups_)
        for (const auto& r : g.rows) v = std::max(v, relation_violation(r, w, eps));
    for (const auto& r : extra) v = std::max(v, relation_violation(r, w, eps));
    return v;
}

std::string format_relation(const LinearRelation& r) {
    std::ostringstream os;
    os.precision(6);
    write_relation(os, r);
    return os.str();
}

std::string ConstraintSystem::dump() const {
    std::ostringstream os;
    os.precision(6);
    os << "# n = " << n_ << ", eps' = " << t_.eps_prime << ", base = " << base_label_ << "\n";
    for (const auto& b : base_) {
        os << "[base:" << b.label << "] ";
        write_relation(os, b.rel);
        os << "\n";
    }
    for (std::size_t k = 0; k < groups_.size(); ++k) {
        for (const auto& r : groups_[k].rows) {
            os << "[" << groups_[k].id << "] ";
            write_relation(os, r);
            os << "    # " << describe(stmts_[k]) << "\n";
        }
    }
    return os.str();
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t ConstraintSystem::hash() const {
    std::ostringstream os;
    os.precision(17);
    auto put = [&os](const LinearRelation& r) {
        for (const auto& t : r.terms) os << t.i << ',' << t.j << ',' << t.coef << ';';
        os << r.eps_coef << '|' << static_cast<int>(r.sense) << '|' << r.rhs << '\n';
    };
    os << n_ << ' ' << t_.eps_prime << ' ' << base_label_ << '\n';
    for (const auto& b : base_) put(b.rel);
    for (const auto& g : groups_) {
        os << g.id << '\n';
        for (const auto& r : g.rows) put(r);
    }
    return fnv1a(os.str());
}

FeasibilityResult feasible(const ConstraintSystem& sys, const std::vector<LinearRelation>& extra) {
    auto bp = sys.build(EpsSpec::free(), extra);
    bp.program.set_linear_objective({{bp.eps, 1.0}}, solver::ObjectiveSense::Maximize);
    const auto r = solver::solve_lp(bp.program);
    if (r.status == solver::SolveStatus::IterationLimit)
        throw SolverError("feasibility probe hit the iteration limit; program:\n" + solver::to_lp_format(bp.program));
    FeasibilityResult f;
    f.status = r.status;
    if (r.status == solver::SolveStatus::Optimal) f.eps_star = r.objective;
    return f;
}

}  // namespace empathic::constraints
