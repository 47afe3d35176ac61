#pragma once

#include "empathic/core/matrix.hpp"

#include <string>
#include <utility>
#include <vector>

namespace empathic::welfare {

struct WelfareRow {
    std::string label;
    std::vector<double> sw;
    int best = 0;  // 0-based
};

struct WelfareReport {
    std::vector<WelfareRow> rows;
};

std::vector<double> social_welfare(const core::UtilityMatrix& u);

// Lowest index on ties.
int best_alternative(const core::UtilityMatrix& u);
int best_index(const std::vector<double>& sw);

inline const char* kBaselineLabel = "without network";

WelfareReport compare_networks(const core::UtilityMatrix& u_i,
                               const std::vector<std::pair<std::string, core::EmpathicMatrix>>& networks);

// Rows from already-mixed utility matrices (baseline first from u_i).
WelfareReport compare_utilities(const core::UtilityMatrix& u_i,
                                const std::vector<std::pair<std::string, core::UtilityMatrix>>& utilities);

// network,a1,...,am,best (4 decimals).
std::string to_csv(const WelfareReport& r);

}  // namespace empathic::welfare
