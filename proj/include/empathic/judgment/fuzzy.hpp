#pragma once

#include "empathic/core/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace empathic::judgment {

using Cell = std::optional<double>;

class FuzzyJudgmentMatrix {
public:
    FuzzyJudgmentMatrix() = default;
    // Diagonal set to 0.5, everything else missing.
    explicit FuzzyJudgmentMatrix(int m);
    static FuzzyJudgmentMatrix from_cells(const std::vector<std::vector<Cell>>& cells);
    // Upper triangle given; lower triangle filled by reciprocity.
    static FuzzyJudgmentMatrix from_upper(const std::vector<std::vector<Cell>>& cells);

    int m() const { return static_cast<int>(cells_.size()); }
    const Cell& at(int s, int t) const { return cells_[s][t]; }
    // Sets r_st and r_ts = 1 - r_st.
    void set(int s, int t, double v);
    void set_raw(int s, int t, Cell v) { cells_[s][t] = v; }
    bool complete() const;
    double value(int s, int t) const;  // throws when missing
    const std::vector<std::vector<Cell>>& cells() const { return cells_; }
    Eigen::MatrixXd dense() const;      // requires complete()

    bool operator==(const FuzzyJudgmentMatrix& o) const { return cells_ == o.cells_; }

private:
    std::vector<std::vector<Cell>> cells_;
};

enum class ViolationKind { Diagonal, Reciprocity, Pairing, Range };

struct Violation {
    ViolationKind kind;
    int s, t;  // 0-based
    std::string message;
};

std::vector<Violation> validate(const FuzzyJudgmentMatrix& r);

// Largest |r_ik + r_kj - r_ij - 0.5| over all triples.
double consistency_error(const FuzzyJudgmentMatrix& r);

enum class IntrinsicKind { Preference, Intensity };

// Preference: a_s >= a_t. Intensity: (a_s, a_t) >=* (a_p, a_q).
struct IntrinsicStatement {
    std::string id;
    int dm = 0;
    IntrinsicKind kind = IntrinsicKind::Preference;
    int s = 0, t = 0, p = 0, q = 0;
    bool strict = true;
};

std::string describe(const IntrinsicStatement& st);

}  // namespace empathic::judgment
