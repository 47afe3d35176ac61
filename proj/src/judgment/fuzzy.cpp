#include "empathic/judgment/fuzzy.hpp"

#include "empathic/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace empathic::judgment {

FuzzyJudgmentMatrix::FuzzyJudgmentMatrix(int m) : cells_(m, std::vector<Cell>(m)) {
    for (int s = 0; s < m; ++s) cells_[s][s] = 0.5;
}

FuzzyJudgmentMatrix FuzzyJudgmentMatrix::from_cells(const std::vector<std::vector<Cell>>& cells) {
    FuzzyJudgmentMatrix r;
    for (const auto& row : cells)
        if (row.size() != cells.size()) throw ValidationError("judgment matrix must be square", "rows");
    r.cells_ = cells;
    return r;
}

FuzzyJudgmentMatrix FuzzyJudgmentMatrix::from_upper(const std::vector<std::vector<Cell>>& cells) {
    const int m = static_cast<int>(cells.size());
    FuzzyJudgmentMatrix r(m);
    for (int s = 0; s < m; ++s) {
        if (static_cast<int>(cells[s].size()) != m) throw ValidationError("judgment matrix must be square", "rows");
        for (int t = s + 1; t < m; ++t)
            if (cells[s][t]) r.set(s, t, *cells[s][t]);
    }
    return r;
}

void FuzzyJudgmentMatrix::set(int s, int t, double v) {
    cells_[s][t] = v;
    cells_[t][s] = s == t ? v : 1.0 - v;
}

bool FuzzyJudgmentMatrix::complete() const {
    for (const auto& row : cells_)
        for (const auto& c : row)
            if (!c) return false;
    return true;
}

double FuzzyJudgmentMatrix::value(int s, int t) const {
    if (!cells_[s][t]) {
        std::ostringstream os;
        os << "judgment cell (" << s + 1 << "," << t + 1 << ") is missing";
        throw PreconditionError(os.str());
    }
    return *cells_[s][t];
}

Eigen::MatrixXd FuzzyJudgmentMatrix::dense() const {
    Eigen::MatrixXd d(m(), m());
    for (int s = 0; s < m(); ++s)
        for (int t = 0; t < m(); ++t) d(s, t) = value(s, t);
    return d;
}

std::vector<Violation> validate(const FuzzyJudgmentMatrix& r) {
    std::vector<Violation> out;
    auto add = [&](ViolationKind k, int s, int t, const std::string& what) {
        std::ostringstream os;
        os << what << " at (" << s + 1 << "," << t + 1 << ")";
        out.push_back({k, s, t, os.str()});
    };
    for (int s = 0; s < r.m(); ++s) {
        const auto& d = r.at(s, s);
        if (!d || std::abs(*d - 0.5) > 1e-9) add(ViolationKind::Diagonal, s, s, "diagonal must be 0.5");
        for (int t = 0; t < r.m(); ++t) {
            const auto& c = r.at(s, t);
            if (c && (*c < 0.0 || *c > 1.0 || !std::isfinite(*c))) add(ViolationKind::Range, s, t, "entry outside [0,1]");
            if (t <= s) continue;
            const auto& o = r.at(t, s);
            if (c.has_value() != o.has_value()) add(ViolationKind::Pairing, s, t, "missing cell without its reciprocal");
            else if (c && std::abs(*c + *o - 1.0) > 1e-9) add(ViolationKind::Reciprocity, s, t, "reciprocity violated");
        }
    }
    return out;
}

double consistency_error(const FuzzyJudgmentMatrix& r) {
    double e = 0.0;
    const int m = r.m();
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k)
            for (int j = 0; j < m; ++j)
                e = std::max(e, std::abs(r.value(i, k) + r.value(k, j) - r.value(i, j) - 0.5));
    return e;
}

std::string describe(const IntrinsicStatement& st) {
    std::ostringstream os;
    const char* rel = st.strict ? " > " : " >= ";
    if (st.kind == IntrinsicKind::Preference) {
        os << "a" << st.s + 1 << rel << "a" << st.t + 1;
    } else {
        os << "(a" << st.s + 1 << ",a" << st.t + 1 << ")" << (st.strict ? " >* " : " >=* ") << "(a" << st.p + 1
           << ",a" << st.q + 1 << ")";
    }
    os << " [d" << st.dm + 1 << "]";
    return os.str();
}

}  // namespace empathic::judgment
