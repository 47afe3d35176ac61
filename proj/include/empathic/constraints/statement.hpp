#pragma once

#include <string>

namespace empathic::constraints {

enum class StatementKind {
    Preference,       // (a)/(b): u_dm(a_s) vs u_dm(a_t)
    Intensity,        // (c)/(d): u_dm(a_s) - u_dm(a_t) vs u_dm(a_p) - u_dm(a_q)
    ZeroWeight,       // (e): w_ij = 0
    ArcPresent,       // w_ij >= eps'
    WeightDominance,  // (f): w_ij vs factor * w_kh
    HalfShare,        // (g): w_ij / omega_j >= 1/2
    CentralityGap,    // (h): omega_i - omega_j vs omega_k - omega_h
};

enum class Relation { Strict, Weak, Indifferent };

// Indices are 0-based. Alternatives: s, t, p, q. Nodes: i, j, k, h.
struct EmpathicStatement {
    std::string id;
    std::string source = "analyst";
    StatementKind kind = StatementKind::Preference;
    Relation relation = Relation::Strict;
    int dm = 0;
    int s = 0, t = 0, p = 0, q = 0;
    int i = 0, j = 0, k = 0, h = 0;
    double factor = 1.0;
};

std::string to_string(StatementKind k);
StatementKind statement_kind_from(const std::string& s);
std::string to_string(Relation r);
Relation relation_from(const std::string& s);

// Human readable, 1-based.
std::string describe(const EmpathicStatement& st);

}  // namespace empathic::constraints
