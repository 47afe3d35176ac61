#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace empathic::core {

inline constexpr double kInvariantTol = 1e-9;

enum class MatrixKind { Local, Global };
enum class UtilityKind { Intrinsic, LocalEmpathic, GlobalEmpathic };

std::string to_string(MatrixKind k);
std::string to_string(UtilityKind k);
MatrixKind matrix_kind_from(const std::string& s);
UtilityKind utility_kind_from(const std::string& s);

using Rows = std::vector<std::vector<double>>;

// Row-stochastic nonnegative n x n matrix. w(i, j) is i's empathy for j.
class EmpathicMatrix {
public:
    EmpathicMatrix() = default;
    // Validates squareness, nonnegativity and row sums (tol 1e-9).
    EmpathicMatrix(Eigen::MatrixXd w, MatrixKind kind = MatrixKind::Local);

    static EmpathicMatrix from_rows(const Rows& rows, MatrixKind kind = MatrixKind::Local);
    // For matrices printed to a few decimals: rows whose sums are within
    // `tol` of 1 are rescaled to sum to 1 before validation.
    static EmpathicMatrix from_rounded(const Rows& rows, double tol = 1e-3,
                                       MatrixKind kind = MatrixKind::Local);
    static EmpathicMatrix identity(int n);

    int n() const { return static_cast<int>(w_.rows()); }
    MatrixKind kind() const { return kind_; }
    double operator()(int i, int j) const { return w_(i, j); }
    const Eigen::MatrixXd& matrix() const { return w_; }
    Rows rows() const;

private:
    Eigen::MatrixXd w_;
    MatrixKind kind_ = MatrixKind::Local;
};

class UtilityMatrix {
public:
    UtilityMatrix() = default;
    UtilityMatrix(Eigen::MatrixXd u, UtilityKind kind);

    static UtilityMatrix from_rows(const Rows& rows, UtilityKind kind = UtilityKind::Intrinsic);
    // Intrinsic rows printed to a few decimals are rescaled to sum to 1.
    static UtilityMatrix from_rounded(const Rows& rows, double tol = 1e-3);

    int n() const { return static_cast<int>(u_.rows()); }
    int m() const { return static_cast<int>(u_.cols()); }
    UtilityKind kind() const { return kind_; }
    double operator()(int j, int s) const { return u_(j, s); }
    const Eigen::MatrixXd& matrix() const { return u_; }
    Rows rows() const;

private:
    Eigen::MatrixXd u_;
    UtilityKind kind_ = UtilityKind::Intrinsic;
};

struct CentralityVector {
    Eigen::VectorXd omega;
    Eigen::VectorXd normalized;  // omega / n
};

}  // namespace empathic::core
