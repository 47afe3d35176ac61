#pragma once

#include "empathic/core/matrix.hpp"
#include "empathic/core/thresholds.hpp"
#include "empathic/judgment/fuzzy.hpp"

#include <string>
#include <vector>

namespace empathic::judgment {

enum class CompletionStatus { Completed, Inconsistent };

struct CompletionResult {
    FuzzyJudgmentMatrix completed;
    double eps_star = 0.0;       // +inf when no statement bears eps
    CompletionStatus status = CompletionStatus::Inconsistent;
    std::vector<bool> inferred;  // row-major m*m, true when filled by the program
};

// Statements with dm other than the matrix owner are the caller's concern;
// all given statements are applied.
CompletionResult complete(const FuzzyJudgmentMatrix& r, const std::vector<IntrinsicStatement>& stmts);

struct JudgmentInconsistency {
    std::vector<std::vector<std::string>> sets;
    bool exhausted = true;
    bool structural = false;  // infeasible even with every statement relaxed
};

JudgmentInconsistency judgment_inconsistency(const FuzzyJudgmentMatrix& r,
                                             const std::vector<IntrinsicStatement>& stmts,
                                             const core::Thresholds& t = {}, int limit = 16);

struct Eigenpair {
    double lambda_max = 0.0;
    std::vector<double> u;
    int iterations = 0;
};

Eigenpair principal_eigenvector(const FuzzyJudgmentMatrix& r);

core::UtilityMatrix intrinsic_matrix(const std::vector<FuzzyJudgmentMatrix>& matrices);

// CSV: s,t,value,fixed|inferred over the upper triangle (1-based).
std::string completion_csv(const CompletionResult& r);

}  // namespace empathic::judgment
