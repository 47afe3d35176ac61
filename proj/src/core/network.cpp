#include "empathic/core/network.hpp"

#include "empathic/error.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace empathic::core {

namespace {

void require_dims(const EmpathicMatrix& w, const UtilityMatrix& u) {
    if (w.n() != u.n()) {
        std::ostringstream os;
        os << "dimension mismatch: W is " << w.n() << "x" << w.n() << " but U has " << u.n() << " rows";
        throw ValidationError(os.str(), "n");
    }
}

// Reachability from `start` following arcs (forward) or reversed arcs.
std::vector<char> reach(const EmpathicMatrix& w, double eps_prime, int start, bool reversed) {
    const int n = w.n();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n; ++u) {
            if (u == v || seen[u]) continue;
            const double a = reversed ? w(u, v) : w(v, u);
            if (a >= eps_prime) {
                seen[u] = 1;
                stack.push_back(u);
            }
        }
    }
    return seen;
}

}  // namespace

CentralityVector empathic_centrality(const EmpathicMatrix& w) {
    CentralityVector c;
    c.omega = w.matrix().colwise().sum().transpose();
    c.normalized = c.omega / static_cast<double>(w.n());
    return c;
}

UtilityMatrix local_utilities(const EmpathicMatrix& w, const UtilityMatrix& u_i) {
    require_dims(w, u_i);
    if (w.kind() != MatrixKind::Local) throw PreconditionError("local_utilities expects a local matrix");
    return UtilityMatrix(w.matrix() * u_i.matrix(), UtilityKind::LocalEmpathic);
}

EmpathicMatrix global_weight_matrix(const EmpathicMatrix& w) {
    if (w.kind() != MatrixKind::Local) throw PreconditionError("global_weight_matrix expects a local matrix");
    const int n = w.n();
    Eigen::VectorXd d = w.matrix().diagonal();
    for (int j = 0; j < n; ++j) {
        if (!(d(j) > 0.0)) {
            std::ostringstream os;
            os << "diagonal entry w_" << j + 1 << j + 1 << " is zero; I - W + D may be singular";
            throw PreconditionError(os.str());
        }
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - w.matrix();
    a.diagonal() += d;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    Eigen::MatrixXd g = lu.solve(Eigen::MatrixXd(d.asDiagonal()));
    // Remove rounding drift; exact G is row-stochastic.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (g(i, j) < 0.0 && g(i, j) > -1e-14) g(i, j) = 0.0;
        g.row(i) /= g.row(i).sum();
    }
    return EmpathicMatrix(std::move(g), MatrixKind::Global);
}

UtilityMatrix global_utilities(const EmpathicMatrix& w, const UtilityMatrix& u_i) {
    require_dims(w, u_i);
    const EmpathicMatrix g = global_weight_matrix(w);
    return UtilityMatrix(g.matrix() * u_i.matrix(), UtilityKind::GlobalEmpathic);
}

UtilityMatrix apply_network(const EmpathicMatrix& w, const UtilityMatrix& u_i) {
    require_dims(w, u_i);
    if (w.kind() == MatrixKind::Local) return local_utilities(w, u_i);
    return UtilityMatrix(w.matrix() * u_i.matrix(), UtilityKind::GlobalEmpathic);
}

double entropy_of(const Eigen::VectorXd& omega, bool* had_zero) {
    const double n = static_cast<double>(omega.size());
    double h = 0.0;
    bool zero = false;
    for (Eigen::Index j = 0; j < omega.size(); ++j) {
        const double p = omega(j) / n;
        if (p <= 0.0) {
            zero = true;
            continue;
        }
        h -= p * std::log(p);
    }
    if (had_zero) *had_zero = zero;
    return h;
}

double centrality_entropy(const EmpathicMatrix& w, bool* had_zero) {
    return entropy_of(empathic_centrality(w).omega, had_zero);
}

double network_density(const EmpathicMatrix& w, double eps_prime) {
    const int n = w.n();
    if (n < 2) throw PreconditionError("density needs at least two nodes");
    int edges = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && w(i, j) >= eps_prime) ++edges;
    return static_cast<double>(edges) / (static_cast<double>(n) * (n - 1));
}

bool is_irreducible(const EmpathicMatrix& w, double eps_prime) {
    if (w.n() < 2) return true;
    for (bool reversed : {false, true}) {
        const auto seen = reach(w, eps_prime, 0, reversed);
        for (char s : seen)
            if (!s) return false;
    }
    return true;
}

NetworkDiagnostics classify_network(const EmpathicMatrix& w, const Thresholds& t) {
    NetworkDiagnostics d;
    const int n = w.n();
    d.omega = empathic_centrality(w).omega;
    d.entropy = entropy_of(d.omega, &d.zero_centrality);
    d.density = n >= 2 ? network_density(w, t.eps_prime) : 0.0;
    d.is_irreducible = is_irreducible(w, t.eps_prime);
    d.is_central = false;
    d.is_distributed = true;
    for (int j = 0; j < n; ++j) {
        if (d.omega(j) >= n / 2.0) d.is_central = true;
        if (std::abs(d.omega(j) - 1.0) > t.delta) d.is_distributed = false;
    }
    d.is_highly_resilient = d.density >= t.rho0 && d.is_distributed;
    return d;
}

std::string to_dot(const EmpathicMatrix& w, double eps_prime, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (int i = 0; i < w.n(); ++i) os << "  d" << i + 1 << ";\n";
    char buf[32];
    for (int i = 0; i < w.n(); ++i) {
        for (int j = 0; j < w.n(); ++j) {
            if (i == j || w(i, j) < eps_prime) continue;
            std::snprintf(buf, sizeof buf, "%.4f", w(i, j));
            os << "  d" << i + 1 << " -> d" << j + 1 << " [label=\"" << buf << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace empathic::core
