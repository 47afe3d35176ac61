#include "empathic/error.hpp"
#include "empathic/relations/relations.hpp"
#include "fixtures/worked.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace empathic;
using namespace empathic::constraints;
using relations::RelationClass;
using solver::SolveStatus;

namespace {

constexpr double kInfEps = std::numeric_limits<double>::infinity();

EmpathicStatement dominance(std::string id, int i, int j, int k, int h, double factor, Relation rel) {
    EmpathicStatement st;
    st.id = std::move(id);
    st.kind = StatementKind::WeightDominance;
    st.relation = rel;
    st.i = i;
    st.j = j;
    st.k = k;
    st.h = h;
    st.factor = factor;
    return st;
}

// Random system whose statements each touch one row of W only.
ConstraintSystem row_local_system(std::mt19937_64& rng, int count) {
    std::uniform_int_distribution<int> node(0, 2);
    std::uniform_real_distribution<double> factor(0.3, 2.0);
    const core::UtilityMatrix u(testutil::random_utilities(rng, 3, 3), core::UtilityKind::Intrinsic);
    std::vector<EmpathicStatement> stmts;
    for (int k = 0; k < count; ++k) {
        const std::string id = "s" + std::to_string(k);
        if (k % 3 == 2) {
            EmpathicStatement p;
            p.id = id;
            p.dm = node(rng);
            p.s = node(rng);
            p.t = (p.s + 1 + node(rng) % 2) % 3;
            stmts.push_back(p);
        } else {
            const int i = node(rng);
            int j = node(rng), h = node(rng);
            if (j == h) h = (h + 1) % 3;
            stmts.push_back(dominance(id, i, j, i, h, factor(rng), Relation::Strict));
        }
    }
    return assemble(u, stmts, {});
}

// Best attainable eps for row i over a 0.01 simplex grid, optionally with w_i,zero = 0.
double row_eps_on_grid(const ConstraintSystem& sys, int i, int zero) {
    std::vector<const LinearRelation*> rows;
    for (const auto& g : sys.groups())
        for (const auto& r : g.rows)
            if (!r.terms.empty() && r.terms[0].i == i) rows.push_back(&r);
    if (rows.empty()) return kInfEps;
    double best = -kInfEps;
    for (int a = 0; a <= 100; ++a)
        for (int b = 0; a + b <= 100; ++b) {
            const double w[3] = {a / 100.0, b / 100.0, (100 - a - b) / 100.0};
            if (w[i] < 0.01) continue;
            if (zero >= 0 && w[zero] != 0.0) continue;
            double eps = kInfEps;
            for (const auto* r : rows) {
                double v = 0.0;
                for (const auto& t : r->terms) v += t.coef * w[t.j];
                eps = std::min(eps, v);
            }
            best = std::max(best, eps);
        }
    return best;
}

double system_eps_on_grid(const ConstraintSystem& sys, int zi, int zj) {
    double eps = kInfEps;
    for (int i = 0; i < 3; ++i) eps = std::min(eps, row_eps_on_grid(sys, i, i == zi ? zj : -1));
    return eps;
}

}  // namespace

TEST(Relations, WorkedExampleCells) {
    const auto sys = worked::system();
    const auto c12 = relations::classify(sys, 0, 1);
    EXPECT_EQ(c12.cls, RelationClass::PossibleOnly);
    ASSERT_EQ(c12.model2.status, SolveStatus::Optimal);
    ASSERT_EQ(c12.model3.status, SolveStatus::Optimal);
    EXPECT_NEAR(c12.model2.eps_star, 0.1840, 1e-3);
    EXPECT_NEAR(c12.model3.eps_star, 0.1840, 1e-3);
    EXPECT_FALSE(c12.borderline);

    const auto c23 = relations::classify(sys, 1, 2);
    EXPECT_EQ(c23.cls, RelationClass::Necessary);
    EXPECT_EQ(c23.model2.status, SolveStatus::Infeasible);
    EXPECT_NEAR(c23.model3.eps_star, 0.1840, 1e-3);
    EXPECT_TRUE(relations::necessary(sys, 1, 2));
    EXPECT_TRUE(relations::possible(sys, 1, 2));
}

TEST(Relations, BaseOnlySystemMakesEveryArcPossible) {
    const auto sys = assemble(worked::intrinsic(), {}, {});
    const auto rm = relations::relation_matrix(sys, 2);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j)
            EXPECT_EQ(rm.at(i, j).cls, i == j ? RelationClass::SelfAlways : RelationClass::PossibleOnly);
}

TEST(Relations, ZeroWeightStatementMakesArcImpossible) {
    EmpathicStatement z;
    z.id = "z";
    z.kind = StatementKind::ZeroWeight;
    z.i = 0;
    z.j = 2;
    const auto sys = worked::system().with_statement(z);
    EXPECT_EQ(relations::classify(sys, 0, 2).cls, RelationClass::Impossible);
    EXPECT_EQ(relations::model3(sys, 0, 2).status, SolveStatus::Infeasible);
}

TEST(Relations, ProbesRejectDiagonalAndOutOfRange) {
    const auto sys = worked::system();
    EXPECT_THROW(relations::model2(sys, 3, 3), PreconditionError);
    EXPECT_THROW(relations::model3(sys, 0, 10), ValidationError);
}

TEST(Relations, InconsistentSystemIsRejected) {
    const auto sys = assemble(worked::intrinsic(),
                              {dominance("x", 0, 1, 0, 2, 1.0, Relation::Strict), dominance("y", 0, 2, 0, 1, 1.0, Relation::Strict)},
                              {});
    EXPECT_THROW(relations::relation_matrix(sys), PreconditionError);
}

TEST(Relations, MatrixAgreesWithSingleProbesAndCache) {
    const auto sys = worked::system();
    relations::ProbeCache cache;
    const auto a = relations::relation_matrix(sys, cache, 3);
    EXPECT_EQ(cache.size(), 90u);
    const auto b = relations::relation_matrix(sys, cache, 1);
    EXPECT_EQ(cache.size(), 90u);
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            EXPECT_EQ(a.at(i, j).cls, b.at(i, j).cls);
            if (i != j) EXPECT_EQ(a.at(i, j).cls, relations::classify(sys, i, j).cls);
        }
    const auto csv = relations::to_csv(a);
    EXPECT_NE(csv.find("1,2,PossibleOnly,0.1840,0.1840"), std::string::npos) << csv;
    EXPECT_NE(csv.find("2,3,Necessary,infeasible,0.1840"), std::string::npos);
}

TEST(Relations, NecessaryImpliesPossibleOnRandomSystems) {
    std::mt19937_64 rng(79);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto sys = row_local_system(rng, 2 + trial % 4);
        if (!feasible(sys).consistent()) continue;
        ++checked;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const auto c = relations::classify(sys, i, j);
                if (c.cls == RelationClass::Necessary) EXPECT_TRUE(relations::possible(sys, i, j));
            }
    }
    EXPECT_GT(checked, 30);
}

TEST(Relations, AddingStatementsNeverWeakensNecessityOrRevivesArcs) {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 60; ++trial) {
        const auto full = row_local_system(rng, 4);
        const auto sub = full.without({full.statements().back().id});
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                if (relations::necessary(sub, i, j)) EXPECT_TRUE(relations::necessary(full, i, j));
                if (!relations::possible(sub, i, j)) EXPECT_FALSE(relations::possible(full, i, j));
                const auto m2s = relations::model2(sub, i, j), m2f = relations::model2(full, i, j);
                if (m2s.status == SolveStatus::Optimal && m2f.status == SolveStatus::Optimal)
                    EXPECT_LE(m2f.eps_star, m2s.eps_star + 1e-9);
            }
    }
}

TEST(Relations, ThreeNodeGridOracle) {
    std::mt19937_64 rng(89);
    int compared = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const auto sys = row_local_system(rng, 2 + trial % 4);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                const double g2 = system_eps_on_grid(sys, i, j);
                const auto p2 = relations::model2(sys, i, j);
                if (std::isinf(g2)) {
                    EXPECT_EQ(p2.status, SolveStatus::Unbounded);
                } else if (std::abs(g2) > 0.03) {
                    ASSERT_EQ(p2.status, SolveStatus::Optimal);
                    EXPECT_GE(p2.eps_star, g2 - 1e-9);
                    EXPECT_NEAR(p2.eps_star, g2, 0.03);
                    EXPECT_EQ(relations::necessary(sys, i, j), g2 < 0);
                    ++compared;
                }
            }
    }
    EXPECT_GT(compared, 50);
}
