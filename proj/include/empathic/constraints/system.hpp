#pragma once

#include "empathic/constraints/statement.hpp"
#include "empathic/core/matrix.hpp"
#include "empathic/core/thresholds.hpp"
#include "empathic/solver/program.hpp"
#include "empathic/solver/solve.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace empathic::constraints {

struct WTerm {
    int i, j;
    double coef;
};

// sum coef * w_ij + eps_coef * eps  (sense)  rhs
struct LinearRelation {
    std::vector<WTerm> terms;
    double eps_coef = 0.0;
    solver::Sense sense = solver::Sense::GreaterEqual;
    double rhs = 0.0;
};

struct BaseRow {
    std::string label;
    LinearRelation rel;
};

struct TaggedGroup {
    std::string id;
    std::vector<LinearRelation> rows;
};

// W^base generators.
std::vector<BaseRow> standard_base(int n, double eps_prime);

enum class EpsMode { Free, AtLeast, Fixed };

struct EpsSpec {
    EpsMode mode = EpsMode::Free;
    double value = 0.0;
    static EpsSpec free() { return {}; }
    static EpsSpec at_least(double v) { return {EpsMode::AtLeast, v}; }
    static EpsSpec fixed(double v) { return {EpsMode::Fixed, v}; }
};

struct BuiltProgram {
    solver::MathProgram program;
    int n = 0;
    int eps = -1;
    std::vector<int> nu;  // per group when relaxed
    int w(int i, int j) const { return i * n + j; }
};

struct FeasibilityResult {
    solver::SolveStatus status = solver::SolveStatus::Infeasible;
    double eps_star = 0.0;  // meaningful when status is Optimal
    bool unbounded() const { return status == solver::SolveStatus::Unbounded; }
    bool infeasible() const { return status == solver::SolveStatus::Infeasible; }
    // eps* > 0 or unbounded
    bool consistent() const;
};

class ConstraintSystem {
public:
    ConstraintSystem() = default;

    int n() const { return n_; }
    const core::Thresholds& thresholds() const { return t_; }
    const core::UtilityMatrix& intrinsic() const { return u_; }
    const std::vector<EmpathicStatement>& statements() const { return stmts_; }
    const std::vector<TaggedGroup>& groups() const { return groups_; }
    const std::vector<BaseRow>& base() const { return base_; }
    const std::string& base_label() const { return base_label_; }

    const TaggedGroup& group(const std::string& id) const;
    const EmpathicStatement& statement(const std::string& id) const;

    // New system with the given statements dropped (unknown ids throw).
    ConstraintSystem without(const std::set<std::string>& ids) const;
    ConstraintSystem with_base(std::vector<BaseRow> base, std::string label) const;
    ConstraintSystem with_statement(const EmpathicStatement& st) const;

    // relax_big_m > 0 adds one binary per tagged group.
    BuiltProgram build(EpsSpec eps, const std::vector<LinearRelation>& extra = {}, double relax_big_m = 0.0) const;

    // Largest violation of every base and tagged row by (W, eps), by direct substitution.
    double max_violation(const Eigen::MatrixXd& w, double eps) const;
    double max_violation(const Eigen::MatrixXd& w, double eps, const std::vector<LinearRelation>& extra) const;

    std::string dump() const;
    std::uint64_t hash() const;

    friend ConstraintSystem assemble(const core::UtilityMatrix& u_i, const std::vector<EmpathicStatement>& stmts,
                                     const core::Thresholds& t);

private:
    int n_ = 0;
    core::Thresholds t_;
    core::UtilityMatrix u_;
    std::vector<EmpathicStatement> stmts_;
    std::vector<TaggedGroup> groups_;
    std::vector<BaseRow> base_;
    std::string base_label_ = "standard";
};

ConstraintSystem assemble(const core::UtilityMatrix& u_i, const std::vector<EmpathicStatement>& stmts,
                          const core::Thresholds& t);

// Rows one statement compiles to (validates indices).
std::vector<LinearRelation> compile(const EmpathicStatement& st, const core::UtilityMatrix& u_i,
                                    const core::Thresholds& t);

// Maximizes eps over the system (plus extra rows).
FeasibilityResult feasible(const ConstraintSystem& sys, const std::vector<LinearRelation>& extra = {});

std::string format_relation(const LinearRelation& r);

std::uint64_t fnv1a(const std::string& s);

}  // namespace empathic::constraints
