#pragma once

// Worked example data: ten experts, five alternatives.

#include "empathic/constraints/system.hpp"
#include "empathic/core/matrix.hpp"
#include "empathic/judgment/fuzzy.hpp"
#include "empathic/selection/selection.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace worked {

using Rows = empathic::core::Rows;
using Cells = std::vector<std::vector<std::optional<double>>>;

// Upper triangles only; the lower triangle follows by reciprocity.
const std::vector<Cells>& incomplete_judgments();
const std::vector<Cells>& completed_judgments();
const std::vector<std::vector<empathic::judgment::IntrinsicStatement>>& intrinsic_statements();

std::vector<empathic::judgment::FuzzyJudgmentMatrix> incomplete_matrices();
std::vector<empathic::judgment::FuzzyJudgmentMatrix> completed_matrices();

// Printed matrices (4 decimals).
const Rows& intrinsic_rows();
const Rows& w1();
const Rows& w2();
const Rows& w3();
const Rows& w4();
const Rows& w5();
const Rows& w6();
const Rows& w7();
const Rows& g();
const Rows& g_prime();
const Rows& u1();
const Rows& u2();
const Rows& u3();
const Rows& u4();
const Rows& u5();
const Rows& u6();
const Rows& u7();
const Rows& u8();
const Rows& u9();

empathic::core::UtilityMatrix intrinsic();
empathic::core::EmpathicMatrix matrix(const Rows& rows);

struct WelfareLine {
    std::string label;
    std::array<double, 5> sw;
    int best;  // 0-based
};

// Baseline first, then the nine networks.
const std::vector<WelfareLine>& welfare_table();
// The nine printed utility matrices in table order.
std::vector<std::pair<std::string, empathic::core::UtilityMatrix>> network_utilities();

// Statements (a)-(f) of the empathic phase.
std::vector<empathic::constraints::EmpathicStatement> empathic_statements();
empathic::core::Thresholds thresholds();
empathic::constraints::ConstraintSystem system();
empathic::constraints::ConstraintSystem system(const empathic::core::UtilityMatrix& u_i);

// 1 -> {2, 4}, 2 -> {3, 5, 6}, 4 -> {7, 8, 9, 10}
empathic::selection::RootedTree tree();

}  // namespace worked
