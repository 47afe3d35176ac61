#include "empathic/error.hpp"
#include "empathic/judgment/completion.hpp"
#include "fixtures/worked.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

using namespace empathic;
using namespace empathic::judgment;

namespace {

IntrinsicStatement pref(std::string id, int s, int t, bool strict = true) {
    return {std::move(id), 0, IntrinsicKind::Preference, s, t, 0, 0, strict};
}

IntrinsicStatement intensity(std::string id, int s, int t, int p, int q) {
    return {std::move(id), 0, IntrinsicKind::Intensity, s, t, p, q, true};
}

// Margin of a statement on a complete matrix; positive when it holds strictly.
double margin(const FuzzyJudgmentMatrix& r, const IntrinsicStatement& st) {
    if (st.kind == IntrinsicKind::Preference) return r.value(st.s, st.t) - 0.5;
    return r.value(st.s, st.t) - r.value(st.p, st.q);
}

std::set<std::set<std::string>> as_sets(const std::vector<std::vector<std::string>>& v) {
    std::set<std::set<std::string>> out;
    for (const auto& s : v) out.insert(std::set<std::string>(s.begin(), s.end()));
    return out;
}

// Smallest statement subsets whose removal leaves a system with eps* >= eps_min.
std::set<std::set<std::string>> brute_force_sets(const FuzzyJudgmentMatrix& r, const std::vector<IntrinsicStatement>& stmts,
                                                 double eps_min) {
    const int k = static_cast<int>(stmts.size());
    std::set<std::set<std::string>> out;
    int best = k + 1;
    for (int mask = 0; mask < (1 << k); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size > best) continue;
        std::vector<IntrinsicStatement> kept;
        std::set<std::string> removed;
        for (int i = 0; i < k; ++i) {
            if (mask >> i & 1) removed.insert(stmts[i].id);
            else kept.push_back(stmts[i]);
        }
        const auto c = complete(r, kept);
        const bool ok = c.status == CompletionStatus::Completed && c.eps_star >= eps_min;
        if (!ok) continue;
        if (size < best) {
            best = size;
            out.clear();
        }
        out.insert(removed);
    }
    if (best == 0) out.clear();
    return out;
}

}  // namespace

TEST(Validate, ReportsEachViolationKind) {
    auto cells = std::vector<std::vector<Cell>>{{0.5, 0.7, 0.2}, {0.4, 0.5, std::nullopt}, {0.8, 0.6, 0.4}};
    const auto v = validate(FuzzyJudgmentMatrix::from_cells(cells));
    std::set<ViolationKind> kinds;
    for (const auto& x : v) kinds.insert(x.kind);
    EXPECT_TRUE(kinds.count(ViolationKind::Reciprocity));
    EXPECT_TRUE(kinds.count(ViolationKind::Pairing));
    EXPECT_TRUE(kinds.count(ViolationKind::Diagonal));
    cells = {{0.5, 1.2}, {-0.2, 0.5}};
    const auto range = validate(FuzzyJudgmentMatrix::from_cells(cells));
    ASSERT_FALSE(range.empty());
    EXPECT_EQ(range.front().kind, ViolationKind::Range);
    EXPECT_TRUE(validate(worked::incomplete_matrices().front()).empty());
}

TEST(Completion, ForcedEntryFromConsistency) {
    FuzzyJudgmentMatrix r(3);
    r.set(0, 1, 0.7);
    r.set(1, 2, 0.6);
    const auto c = complete(r, {pref("x", 0, 2)});
    ASSERT_EQ(c.status, CompletionStatus::Completed);
    EXPECT_NEAR(c.completed.value(0, 2), 0.8, 1e-9);
    EXPECT_NEAR(c.completed.value(2, 0), 0.2, 1e-9);
    EXPECT_NEAR(c.eps_star, 0.3, 1e-9);
    EXPECT_TRUE(c.inferred[2]);
    EXPECT_FALSE(c.inferred[1]);
}

TEST(Completion, NoStrictStatementGivesInfiniteEps) {
    FuzzyJudgmentMatrix r(3);
    r.set(0, 1, 0.6);
    const auto c = complete(r, {pref("w", 1, 2, false)});
    ASSERT_EQ(c.status, CompletionStatus::Completed);
    EXPECT_TRUE(std::isinf(c.eps_star));
    EXPECT_LE(consistency_error(c.completed), 1e-7);
}

TEST(Completion, RejectsInvalidInput) {
    auto cells = std::vector<std::vector<Cell>>{{0.5, 0.7}, {0.7, 0.5}};
    EXPECT_THROW(complete(FuzzyJudgmentMatrix::from_cells(cells), {}), ValidationError);
    EXPECT_THROW(complete(FuzzyJudgmentMatrix(2), {pref("bad", 0, 5)}), ValidationError);
}

TEST(Completion, FirstExpertOfWorkedExample) {
    const auto r = worked::incomplete_matrices()[0];
    const auto c = complete(r, worked::intrinsic_statements()[0]);
    ASSERT_EQ(c.status, CompletionStatus::Completed);
    const auto expected = worked::completed_matrices()[0];
    for (int s = 0; s < 5; ++s)
        for (int t = 0; t < 5; ++t) EXPECT_NEAR(c.completed.value(s, t), expected.value(s, t), 2e-3) << s << "," << t;
}

TEST(Completion, PrintedCompletionsAreConsistentAndSatisfyStatements) {
    const auto completed = worked::completed_matrices();
    for (std::size_t j = 0; j < completed.size(); ++j) {
        EXPECT_TRUE(validate(completed[j]).empty()) << "expert " << j + 1;
        EXPECT_LE(consistency_error(completed[j]), 2e-3) << "expert " << j + 1;
        for (const auto& st : worked::intrinsic_statements()[j]) EXPECT_GT(margin(completed[j], st), 0.0) << st.id;
    }
}

TEST(Completion, EveryExpertCompletesConsistently) {
    const auto incomplete = worked::incomplete_matrices();
    for (std::size_t j = 0; j < incomplete.size(); ++j) {
        const auto& stmts = worked::intrinsic_statements()[j];
        const auto c = complete(incomplete[j], stmts);
        ASSERT_EQ(c.status, CompletionStatus::Completed) << "expert " << j + 1;
        EXPECT_GT(c.eps_star, 0.0);
        EXPECT_LE(consistency_error(c.completed), 1e-7);
        EXPECT_TRUE(validate(c.completed).empty());
        for (const auto& st : stmts) EXPECT_GE(margin(c.completed, st), c.eps_star - 1e-7) << st.id;
        for (int s = 0; s < 5; ++s)
            for (int t = 0; t < 5; ++t)
                if (incomplete[j].at(s, t)) EXPECT_DOUBLE_EQ(c.completed.value(s, t), *incomplete[j].at(s, t));
    }
}

TEST(Completion, RandomProblemsKeepInvariants) {
    std::mt19937_64 rng(61);
    std::uniform_int_distribution<int> alt(0, 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int completed = 0;
    for (int trial = 0; trial < 150; ++trial) {
        const int m = 3 + trial % 3;
        // Start from a consistent matrix built from random scores so some data is feasible.
        std::vector<double> score(m);
        for (auto& x : score) x = u(rng);
        FuzzyJudgmentMatrix r(m);
        for (int s = 0; s < m; ++s)
            for (int t = s + 1; t < m; ++t)
                if (u(rng) < 0.3) r.set(s, t, std::clamp(0.5 + 0.5 * (score[s] - score[t]), 0.0, 1.0));
        std::vector<IntrinsicStatement> stmts;
        for (int k = 0; k < 3; ++k) {
            int s = alt(rng) % m, t = alt(rng) % m;
            if (s == t) continue;
            if (score[s] < score[t]) std::swap(s, t);
            stmts.push_back(pref("p" + std::to_string(k), s, t));
        }
        const auto c = complete(r, stmts);
        if (c.status != CompletionStatus::Completed) continue;
        ++completed;
        EXPECT_LE(consistency_error(c.completed), 1e-7);
        for (int s = 0; s < m; ++s)
            for (int t = 0; t < m; ++t) EXPECT_NEAR(c.completed.value(s, t) + c.completed.value(t, s), 1.0, 1e-12);
        for (const auto& st : stmts)
            if (!std::isinf(c.eps_star)) EXPECT_GE(margin(c.completed, st), c.eps_star - 1e-7);
        // Completing a complete matrix leaves it unchanged.
        const auto again = complete(c.completed, stmts);
        EXPECT_EQ(again.completed, c.completed);
    }
    EXPECT_GT(completed, 100);
}

TEST(JudgmentInconsistency, ContradictoryPairGivesSingletons) {
    FuzzyJudgmentMatrix r(2);
    const auto res = judgment_inconsistency(r, {pref("x", 0, 1), pref("y", 1, 0)});
    EXPECT_EQ(as_sets(res.sets), (std::set<std::set<std::string>>{{"x"}, {"y"}}));
    EXPECT_TRUE(res.exhausted);
    EXPECT_EQ(complete(r, {pref("x", 0, 1), pref("y", 1, 0)}).status, CompletionStatus::Inconsistent);
}

TEST(JudgmentInconsistency, PreferenceCycleMatchesBruteForce) {
    const FuzzyJudgmentMatrix r(3);
    const std::vector<IntrinsicStatement> cyc = {pref("a", 0, 1), pref("b", 1, 2), pref("c", 2, 0)};
    const auto res = judgment_inconsistency(r, cyc);
    EXPECT_EQ(as_sets(res.sets), brute_force_sets(r, cyc, core::Thresholds{}.eps_min));
    EXPECT_EQ(res.sets.size(), 3u);
    const auto one = judgment_inconsistency(r, cyc, {}, 1);
    EXPECT_EQ(one.sets.size(), 1u);
    EXPECT_FALSE(one.exhausted);
}

TEST(JudgmentInconsistency, FixedDataConflictIsStructuralOrReported) {
    FuzzyJudgmentMatrix r(2);
    r.set(0, 1, 0.3);
    const auto res = judgment_inconsistency(r, {pref("x", 0, 1)});
    EXPECT_EQ(as_sets(res.sets), (std::set<std::set<std::string>>{{"x"}}));
}

TEST(JudgmentInconsistency, RandomSystemsMatchBruteForce) {
    std::mt19937_64 rng(67);
    std::uniform_int_distribution<int> alt(0, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int inconsistent = 0;
    for (int trial = 0; trial < 60; ++trial) {
        FuzzyJudgmentMatrix r(4);
        if (u(rng) < 0.5) r.set(0, 1, 0.2 + 0.6 * u(rng));
        std::vector<IntrinsicStatement> stmts;
        for (int k = 0; k < 5; ++k) {
            const int s = alt(rng), t = alt(rng), p = alt(rng), q = alt(rng);
            if (s == t) continue;
            const std::string id = "s" + std::to_string(k);
            stmts.push_back(k % 2 || p == q ? pref(id, s, t) : intensity(id, s, t, p, q));
        }
        const auto res = judgment_inconsistency(r, stmts);
        const auto oracle = brute_force_sets(r, stmts, core::Thresholds{}.eps_min);
        EXPECT_EQ(as_sets(res.sets), oracle) << "trial " << trial;
        if (!oracle.empty()) ++inconsistent;
    }
    EXPECT_GT(inconsistent, 5);
}

TEST(Eigenvector, TwoByTwoClosedForm) {
    for (double r12 : {0.5, 0.6, 0.75, 0.9, 1.0}) {
        FuzzyJudgmentMatrix r(2);
        r.set(0, 1, r12);
        const auto ep = principal_eigenvector(r);
        const double a = std::sqrt(r12), b = std::sqrt(1.0 - r12);
        EXPECT_NEAR(ep.lambda_max, 0.5 + std::sqrt(r12 * (1.0 - r12)), 1e-8);
        EXPECT_NEAR(ep.u[0], a / (a + b), 1e-8);
        EXPECT_NEAR(ep.u[1], b / (a + b), 1e-8);
    }
}

TEST(Eigenvector, FirstExpertPrincipalValue) {
    const auto ep = principal_eigenvector(worked::completed_matrices()[0]);
    EXPECT_NEAR(ep.lambda_max, 2.2, 1e-3);
    const auto& row = worked::intrinsic_rows()[0];
    for (int s = 0; s < 5; ++s) EXPECT_NEAR(ep.u[s], row[s], 2e-3);
}

TEST(Eigenvector, RequiresCompleteMatrix) {
    EXPECT_THROW(principal_eigenvector(FuzzyJudgmentMatrix(3)), PreconditionError);
}

TEST(Eigenvector, PerronVectorIsPositiveAndNormalized) {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 2 + trial % 6;
        FuzzyJudgmentMatrix r(m);
        for (int s = 0; s < m; ++s)
            for (int t = s + 1; t < m; ++t) r.set(s, t, u(rng));
        const auto ep = principal_eigenvector(r);
        double sum = 0.0;
        for (double x : ep.u) {
            EXPECT_GT(x, 0.0);
            sum += x;
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(ep.u.data(), m);
        EXPECT_LT((r.dense() * x - ep.lambda_max * x).lpNorm<Eigen::Infinity>(), 1e-7);
        // Perron root dominates every eigenvalue modulus.
        const Eigen::EigenSolver<Eigen::MatrixXd> es(r.dense());
        EXPECT_NEAR(es.eigenvalues().cwiseAbs().maxCoeff(), ep.lambda_max, 1e-7);
    }
}

TEST(IntrinsicMatrix, PrintedCompletionsReproducePrintedUtilities) {
    const auto u = intrinsic_matrix(worked::completed_matrices());
    const auto expected = worked::intrinsic();
    EXPECT_LT((u.matrix() - expected.matrix()).cwiseAbs().maxCoeff(), 2e-3);
    for (int j = 0; j < u.n(); ++j) EXPECT_NEAR(u.matrix().row(j).sum(), 1.0, 1e-12);
}

TEST(IntrinsicMatrix, IndifferenceIsUniformAndSizesMustAgree) {
    const auto u = intrinsic_matrix({FuzzyJudgmentMatrix::from_upper({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}})});
    for (int s = 0; s < 3; ++s) EXPECT_NEAR(u(0, s), 1.0 / 3.0, 1e-12);
    FuzzyJudgmentMatrix a(2), b(3);
    a.set(0, 1, 0.5);
    EXPECT_THROW(intrinsic_matrix({a, b}), Error);
    EXPECT_THROW(intrinsic_matrix({}), ValidationError);
}

TEST(CompletionCsv, MarksInferredCells) {
    FuzzyJudgmentMatrix r(3);
    r.set(0, 1, 0.7);
    r.set(1, 2, 0.6);
    const auto csv = completion_csv(complete(r, {}));
    EXPECT_EQ(csv, "s,t,value,source\n1,2,0.700000,fixed\n1,3,0.800000,inferred\n2,3,0.600000,fixed\n");
}
