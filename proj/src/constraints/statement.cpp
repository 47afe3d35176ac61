#include "empathic/constraints/statement.hpp"

#include "empathic/error.hpp"

#include <sstream>

namespace empathic::constraints {

std::string to_string(StatementKind k) {
    switch (k) {
        case StatementKind::Preference: return "preference";
        case StatementKind::Intensity: return "intensity";
        case StatementKind::ZeroWeight: return "zero-weight";
        case StatementKind::ArcPresent: return "arc";
        case StatementKind::WeightDominance: return "weight-dominance";
        case StatementKind::HalfShare: return "half-share";
        case StatementKind::CentralityGap: return "centrality-gap";
    }
    return "preference";
}

StatementKind statement_kind_from(const std::string& s) {
    for (auto k : {StatementKind::Preference, StatementKind::Intensity, StatementKind::ZeroWeight,
                   StatementKind::ArcPresent, StatementKind::WeightDominance, StatementKind::HalfShare,
                   StatementKind::CentralityGap})
        if (to_string(k) == s) return k;
    throw ValidationError("unknown statement kind '" + s + "'", "kind");
}

std::string to_string(Relation r) {
    switch (r) {
        case Relation::Strict: return "strict";
        case Relation::Weak: return "weak";
        case Relation::Indifferent: return "indifferent";
    }
    return "strict";
}

Relation relation_from(const std::string& s) {
    if (s == "strict") return Relation::Strict;
    if (s == "weak") return Relation::Weak;
    if (s == "indifferent") return Relation::Indifferent;
    throw ValidationError("unknown relation '" + s + "'", "relation");
}

std::string describe(const EmpathicStatement& st) {
    std::ostringstream os;
    const char* rel = st.relation == Relation::Strict ? " > " : st.relation == Relation::Weak ? " >= " : " ~ ";
    auto a = [](int x) { return "a" + std::to_string(x + 1); };
    auto w = [](int i, int j) { return "w_" + std::to_string(i + 1) + "_" + std::to_string(j + 1); };
    auto om = [](int i) { return "omega_" + std::to_string(i + 1); };
    switch (st.kind) {
        case StatementKind::Preference:
            os << a(st.s) << rel << a(st.t) << " for d" << st.dm + 1;
            break;
        case StatementKind::Intensity:
            os << "(" << a(st.s) << "," << a(st.t) << ")" << rel << "(" << a(st.p) << "," << a(st.q) << ") for d"
               << st.dm + 1;
            break;
        case StatementKind::ZeroWeight: os << w(st.i, st.j) << " = 0"; break;
        case StatementKind::ArcPresent: os << w(st.i, st.j) << " >= eps'"; break;
        case StatementKind::WeightDominance:
            os << w(st.i, st.j) << rel;
            if (st.factor != 1.0) os << st.factor << " ";
            os << w(st.k, st.h);
            break;
        case StatementKind::HalfShare: os << w(st.i, st.j) << " / " << om(st.j) << " >= 1/2"; break;
        case StatementKind::CentralityGap:
            os << om(st.i) << " - " << om(st.j) << rel << om(st.k) << " - " << om(st.h);
            break;
    }
    return os.str();
}

}  // namespace empathic::constraints
