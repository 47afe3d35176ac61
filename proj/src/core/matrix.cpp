#include "empathic/core/matrix.hpp"

#include "empathic/core/thresholds.hpp"
#include "empathic/error.hpp"

#include <cmath>
#include <sstream>

namespace empathic::core {

namespace {

Eigen::MatrixXd to_eigen(const Rows& rows, const char* what) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.front().size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c) {
            std::ostringstream os;
            os << what << ": row " << i + 1 << " has " << rows[i].size() << " entries, expected " << c;
            throw ValidationError(os.str(), "rows");
        }
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Rows to_rows(const Eigen::MatrixXd& m) {
    Rows out(m.rows(), std::vector<double>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
    return out;
}

}  // namespace

std::string to_string(MatrixKind k) { return k == MatrixKind::Local ? "local" : "global"; }

std::string to_string(UtilityKind k) {
    switch (k) {
        case UtilityKind::Intrinsic: return "intrinsic";
        case UtilityKind::LocalEmpathic: return "local-empathic";
        case UtilityKind::GlobalEmpathic: return "global-empathic";
    }
    return "intrinsic";
}

MatrixKind matrix_kind_from(const std::string& s) {
    if (s == "local") return MatrixKind::Local;
    if (s == "global") return MatrixKind::Global;
    throw ValidationError("unknown matrix kind '" + s + "'", "kind");
}

UtilityKind utility_kind_from(const std::string& s) {
    if (s == "intrinsic") return UtilityKind::Intrinsic;
    if (s == "local-empathic") return UtilityKind::LocalEmpathic;
    if (s == "global-empathic") return UtilityKind::GlobalEmpathic;
    throw ValidationError("unknown utility kind '" + s + "'", "kind");
}

void Thresholds::validate(int n) const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) throw ValidationError(std::string("threshold ") + name + " must be positive", name);
    };
    positive(eps_prime, "eps_prime");
    positive(delta, "delta");
    positive(rho0, "rho0");
    positive(eps_min, "eps_min");
    if (big_m) positive(*big_m, "big_m");
    if (starts < 1) throw ValidationError("starts must be at least 1", "starts");
    if (n > 0 && eps_prime >= 1.0 / n)
        throw ValidationError("eps_prime must be below 1/n", "eps_prime");
}

EmpathicMatrix::EmpathicMatrix(Eigen::MatrixXd w, MatrixKind kind) : w_(std::move(w)), kind_(kind) {
    if (w_.rows() != w_.cols()) throw ValidationError("empathic matrix must be square", "rows");
    for (Eigen::Index i = 0; i < w_.rows(); ++i) {
        for (Eigen::Index j = 0; j < w_.cols(); ++j) {
            if (!std::isfinite(w_(i, j)) || w_(i, j) < -kInvariantTol) {
                std::ostringstream os;
                os << "entry (" << i + 1 << "," << j + 1 << ") is negative or not finite";
                throw ValidationError(os.str(), "rows");
            }
        }
        const double s = w_.row(i).sum();
        if (std::abs(s - 1.0) > kInvariantTol) {
            std::ostringstream os;
            os.precision(12);
            os << "row " << i + 1 << " sums to " << s << ", expected 1";
            throw ValidationError(os.str(), "rows");
        }
    }
}

EmpathicMatrix EmpathicMatrix::from_rows(const Rows& rows, MatrixKind kind) {
    return EmpathicMatrix(to_eigen(rows, "empathic matrix"), kind);
}

EmpathicMatrix EmpathicMatrix::from_rounded(const Rows& rows, double tol, MatrixKind kind) {
    Eigen::MatrixXd m = to_eigen(rows, "empathic matrix");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double s = m.row(i).sum();
        if (std::abs(s - 1.0) <= tol && s > 0.0) m.row(i) /= s;
    }
    return EmpathicMatrix(std::move(m), kind);
}

EmpathicMatrix EmpathicMatrix::identity(int n) {
    return EmpathicMatrix(Eigen::MatrixXd::Identity(n, n));
}

Rows EmpathicMatrix::rows() const { return to_rows(w_); }

UtilityMatrix::UtilityMatrix(Eigen::MatrixXd u, UtilityKind kind) : u_(std::move(u)), kind_(kind) {
    for (Eigen::Index i = 0; i < u_.rows(); ++i) {
        for (Eigen::Index j = 0; j < u_.cols(); ++j) {
            if (!std::isfinite(u_(i, j))) throw ValidationError("utility entries must be finite", "rows");
        }
        if (kind_ == UtilityKind::Intrinsic && std::abs(u_.row(i).sum() - 1.0) > 1e-6) {
            std::ostringstream os;
            os << "intrinsic utility row " << i + 1 << " does not sum to 1";
            throw ValidationError(os.str(), "rows");
        }
    }
}

UtilityMatrix UtilityMatrix::from_rows(const Rows& rows, UtilityKind kind) {
    return UtilityMatrix(to_eigen(rows, "utility matrix"), kind);
}

UtilityMatrix UtilityMatrix::from_rounded(const Rows& rows, double tol) {
    Eigen::MatrixXd m = to_eigen(rows, "utility matrix");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double s = m.row(i).sum();
        if (std::abs(s - 1.0) <= tol && s > 0.0) m.row(i) /= s;
    }
    return UtilityMatrix(std::move(m), UtilityKind::Intrinsic);
}

Rows UtilityMatrix::rows() const { return to_rows(u_); }

}  // namespace empathic::core
