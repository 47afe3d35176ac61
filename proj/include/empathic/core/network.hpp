#pragma once

#include "empathic/core/matrix.hpp"
#include "empathic/core/thresholds.hpp"

#include <string>

namespace empathic::core {

struct NetworkDiagnostics {
    Eigen::VectorXd omega;
    double density = 0.0;
    double entropy = 0.0;
    bool zero_centrality = false;  // some omega_j == 0, term taken as 0
    bool is_central = false;
    bool is_distributed = false;
    bool is_highly_resilient = false;
    bool is_irreducible = false;
};

CentralityVector empathic_centrality(const EmpathicMatrix& w);

UtilityMatrix local_utilities(const EmpathicMatrix& w, const UtilityMatrix& u_i);

// G = (I - W + D)^-1 D, D = diag(W).
EmpathicMatrix global_weight_matrix(const EmpathicMatrix& w);

UtilityMatrix global_utilities(const EmpathicMatrix& w, const UtilityMatrix& u_i);

// Applies W directly for local kinds and G for global kinds.
UtilityMatrix apply_network(const EmpathicMatrix& w, const UtilityMatrix& u_i);

double entropy_of(const Eigen::VectorXd& omega, bool* had_zero = nullptr);
double centrality_entropy(const EmpathicMatrix& w, bool* had_zero = nullptr);

double network_density(const EmpathicMatrix& w, double eps_prime);

bool is_irreducible(const EmpathicMatrix& w, double eps_prime);

NetworkDiagnostics classify_network(const EmpathicMatrix& w, const Thresholds& t);

// Nodes d1..dn, arcs i->j for w_ij >= eps', labels to 4 decimals.
std::string to_dot(const EmpathicMatrix& w, double eps_prime, const std::string& name = "W");

}  // namespace empathic::core
