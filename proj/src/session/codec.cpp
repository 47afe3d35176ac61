#include "empathic/session/codec.hpp"

#include "empathic/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace empathic::session::codec {

namespace {

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw ValidationError(std::string("missing field '") + name + "'", name);
    return j.at(name);
}

int get_int(const json& j, const char* name) {
    const json& v = field(j, name);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d)) return static_cast<int>(d);
    }
    throw ValidationError(std::string("field '") + name + "' must be an integer", name);
}

int get_index(const json& j, const char* name) { return get_int(j, name) - 1; }

std::string get_string(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) throw ValidationError(std::string("field '") + name + "' must be a string", name);
    return v.get<std::string>();
}

json rows_to_json(const core::Rows& rows, FloatStyle st) {
    json out = json::array();
    for (const auto& r : rows) {
        json row = json::array();
        for (double v : r) row.push_back(num(v, st));
        out.push_back(row);
    }
    return out;
}

core::Rows rows_from_json(const json& j) {
    const json& rows = field(j, "rows");
    if (!rows.is_array()) throw ValidationError("rows must be an array", "rows");
    core::Rows out;
    for (const auto& r : rows) {
        if (!r.is_array()) throw ValidationError("each row must be an array", "rows");
        std::vector<double> row;
        for (const auto& v : r) row.push_back(get_num(v));
        out.push_back(std::move(row));
    }
    return out;
}

std::string status_name(solver::SolveStatus s) { return solver::to_string(s); }

solver::SolveStatus status_from(const std::string& s) {
    for (auto st : {solver::SolveStatus::Optimal, solver::SolveStatus::Infeasible, solver::SolveStatus::Unbounded,
                    solver::SolveStatus::LocalOptimum, solver::SolveStatus::IterationLimit})
        if (solver::to_string(st) == s) return st;
    throw ValidationError("unknown solver status '" + s + "'", "status");
}

json optional_num(const std::optional<int>& v) { return v ? json(*v + 1) : json(nullptr); }

}  // namespace

std::string format_float(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

json num(double v, FloatStyle st) {
    if (st == FloatStyle::String || !std::isfinite(v)) return format_float(v);
    return v;
}

double get_num(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() && *end == '\0') return v;
    }
    throw ValidationError("expected a number, got " + j.dump(), "value");
}

json thresholds_to_json(const core::Thresholds& t, FloatStyle st) {
    json j = {{"eps_prime", num(t.eps_prime, st)}, {"delta", num(t.delta, st)}, {"rho0", num(t.rho0, st)},
              {"eps_min", num(t.eps_min, st)}, {"starts", t.starts}, {"seed", std::to_string(t.seed)}};
    j["big_m"] = t.big_m ? num(*t.big_m, st) : json(nullptr);
    return j;
}

core::Thresholds thresholds_from_json(const json& j, core::Thresholds t) {
    if (j.is_null()) return t;
    if (!j.is_object()) throw ValidationError("thresholds must be an object", "thresholds");
    if (j.contains("eps_prime")) t.eps_prime = get_num(j["eps_prime"]);
    if (j.contains("delta")) t.delta = get_num(j["delta"]);
    if (j.contains("rho0")) t.rho0 = get_num(j["rho0"]);
    if (j.contains("eps_min")) t.eps_min = get_num(j["eps_min"]);
    if (j.contains("big_m")) {
        if (j["big_m"].is_null()) t.big_m.reset();
        else t.big_m = get_num(j["big_m"]);
    }
    if (j.contains("starts")) t.starts = get_int(j, "starts");
    if (j.contains("seed")) {
        const json& s = j["seed"];
        if (s.is_number_unsigned() || s.is_number_integer()) t.seed = s.get<std::uint64_t>();
        else if (s.is_string()) t.seed = std::strtoull(s.get<std::string>().c_str(), nullptr, 10);
        else throw ValidationError("seed must be an integer", "seed");
    }
    return t;
}

json panel_to_json(const Panel& p) {
    return {{"n", p.n}, {"m", p.m}, {"experts", p.experts}, {"alternatives", p.alternatives}};
}

Panel panel_from_json(const json& j) {
    Panel p;
    p.n = get_int(j, "n");
    p.m = get_int(j, "m");
    if (j.contains("experts")) p.experts = j["experts"].get<std::vector<std::string>>();
    if (j.contains("alternatives")) p.alternatives = j["alternatives"].get<std::vector<std::string>>();
    if (p.experts.empty())
        for (int k = 1; k <= p.n; ++k) p.experts.push_back("d" + std::to_string(k));
    if (p.alternatives.empty())
        for (int k = 1; k <= p.m; ++k) p.alternatives.push_back("a" + std::to_string(k));
    p.validate();
    return p;
}

json judgment_to_json(const judgment::FuzzyJudgmentMatrix& r, FloatStyle st) {
    json rows = json::array();
    for (const auto& row : r.cells()) {
        json jr = json::array();
        for (const auto& c : row) jr.push_back(c ? num(*c, st) : json(nullptr));
        rows.push_back(jr);
    }
    return {{"m", r.m()}, {"rows", rows}};
}

judgment::FuzzyJudgmentMatrix judgment_from_json(const json& j) {
    const json& rows = field(j, "rows");
    if (!rows.is_array()) throw ValidationError("rows must be an array", "rows");
    std::vector<std::vector<judgment::Cell>> cells;
    for (const auto& r : rows) {
        if (!r.is_array()) throw ValidationError("each row must be an array", "rows");
        std::vector<judgment::Cell> row;
        for (const auto& v : r) row.push_back(v.is_null() ? judgment::Cell{} : judgment::Cell{get_num(v)});
        cells.push_back(std::move(row));
    }
    if (j.contains("m") && get_int(j, "m") != static_cast<int>(cells.size()))
        throw ValidationError("m does not match the number of rows", "m");
    auto r = judgment::FuzzyJudgmentMatrix::from_cells(cells);
    const auto v = judgment::validate(r);
    if (!v.empty()) throw ValidationError("invalid judgment matrix: " + v.front().message, "rows");
    return r;
}

json intrinsic_statement_to_json(const judgment::IntrinsicStatement& s) {
    json j = {{"id", s.id}, {"dm", s.dm + 1}, {"s", s.s + 1}, {"t", s.t + 1}, {"strict", s.strict}};
    if (s.kind == judgment::IntrinsicKind::Intensity) {
        j["kind"] = "intensity";
        j["p"] = s.p + 1;
        j["q"] = s.q + 1;
    } else {
        j["kind"] = "preference";
    }
    return j;
}

judgment::IntrinsicStatement intrinsic_statement_from_json(const json& j) {
    judgment::IntrinsicStatement s;
    s.id = get_string(j, "id");
    s.dm = get_index(j, "dm");
    const std::string kind = j.contains("kind") ? get_string(j, "kind") : "preference";
    if (kind == "preference") s.kind = judgment::IntrinsicKind::Preference;
    else if (kind == "intensity") s.kind = judgment::IntrinsicKind::Intensity;
    else throw ValidationError("unknown intrinsic statement kind '" + kind + "'", "kind");
    s.s = get_index(j, "s");
    s.t = get_index(j, "t");
    if (s.kind == judgment::IntrinsicKind::Intensity) {
        s.p = get_index(j, "p");
        s.q = get_index(j, "q");
    }
    if (j.contains("strict")) {
        if (!j["strict"].is_boolean()) throw ValidationError("field 'strict' must be a boolean", "strict");
        s.strict = j["strict"].get<bool>();
    }
    return s;
}

json statement_to_json(const constraints::EmpathicStatement& s, FloatStyle st) {
    using constraints::StatementKind;
    json j = {{"id", s.id}, {"source", s.source}, {"kind", constraints::to_string(s.kind)}};
    switch (s.kind) {
        case StatementKind::Preference:
            j.update({{"dm", s.dm + 1}, {"s", s.s + 1}, {"t", s.t + 1}, {"relation", to_string(s.relation)}});
            break;
        case StatementKind::Intensity:
            j.update({{"dm", s.dm + 1}, {"s", s.s + 1}, {"t", s.t + 1}, {"p", s.p + 1}, {"q", s.q + 1},
                      {"relation", to_string(s.relation)}});
            break;
        case StatementKind::ZeroWeight:
        case StatementKind::ArcPresent:
        case StatementKind::HalfShare: j.update({{"i", s.i + 1}, {"j", s.j + 1}}); break;
        case StatementKind::WeightDominance:
            j.update({{"i", s.i + 1}, {"j", s.j + 1}, {"k", s.k + 1}, {"h", s.h + 1}, {"factor", num(s.factor, st)},
                      {"relation", to_string(s.relation)}});
            break;
        case StatementKind::CentralityGap:
            j.update({{"i", s.i + 1}, {"j", s.j + 1}, {"k", s.k + 1}, {"h", s.h + 1},
                      {"relation", to_string(s.relation)}});
            break;
    }
    return j;
}

constraints::EmpathicStatement statement_from_json(const json& j) {
    using constraints::StatementKind;
    if (!j.is_object()) throw ValidationError("statement must be an object", "statement");
    constraints::EmpathicStatement s;
    s.id = get_string(j, "id");
    if (s.id.empty()) throw ValidationError("statement id must not be empty", "id");
    if (j.contains("source")) s.source = get_string(j, "source");
    s.kind = constraints::statement_kind_from(get_string(j, "kind"));
    if (j.contains("relation")) s.relation = constraints::relation_from(get_string(j, "relation"));
    switch (s.kind) {
        case StatementKind::Preference:
        case StatementKind::Intensity:
            s.dm = get_index(j, "dm");
            s.s = get_index(j, "s");
            s.t = get_index(j, "t");
            if (s.kind == StatementKind::Intensity) {
                s.p = get_index(j, "p");
                s.q = get_index(j, "q");
            }
            if (j.contains("source") == false) s.source = "d" + std::to_string(s.dm + 1);
            break;
        case StatementKind::ZeroWeight:
        case StatementKind::ArcPresent:
        case StatementKind::HalfShare:
            s.i = get_index(j, "i");
            s.j = get_index(j, "j");
            break;
        case StatementKind::WeightDominance:
        case StatementKind::CentralityGap:
            s.i = get_index(j, "i");
            s.j = get_index(j, "j");
            s.k = get_index(j, "k");
            s.h = get_index(j, "h");
            if (s.kind == StatementKind::WeightDominance && j.contains("factor")) s.factor = get_num(j["factor"]);
            break;
    }
    return s;
}

json matrix_to_json(const core::EmpathicMatrix& w, FloatStyle st) {
    return {{"n", w.n()}, {"kind", core::to_string(w.kind())}, {"rows", rows_to_json(w.rows(), st)}};
}

core::EmpathicMatrix matrix_from_json(const json& j) {
    const auto kind = j.contains("kind") ? core::matrix_kind_from(get_string(j, "kind")) : core::MatrixKind::Local;
    auto rows = rows_from_json(j);
    if (j.contains("n") && get_int(j, "n") != static_cast<int>(rows.size()))
        throw ValidationError("n does not match the number of rows", "n");
    return core::EmpathicMatrix::from_rows(rows, kind);
}

json utility_to_json(const core::UtilityMatrix& u, FloatStyle st) {
    return {{"n", u.n()}, {"m", u.m()}, {"kind", core::to_string(u.kind())}, {"rows", rows_to_json(u.rows(), st)}};
}

core::UtilityMatrix utility_from_json(const json& j) {
    const auto kind = j.contains("kind") ? core::utility_kind_from(get_string(j, "kind")) : core::UtilityKind::Intrinsic;
    return core::UtilityMatrix::from_rows(rows_from_json(j), kind);
}

json feasibility_to_json(const constraints::FeasibilityResult& f, FloatStyle st) {
    json j = {{"status", status_name(f.status)}, {"consistent", f.consistent()}};
    j["eps_star"] = f.status == solver::SolveStatus::Optimal ? num(f.eps_star, st)
                    : f.unbounded()                          ? json("inf")
                                                             : json(nullptr);
    return j;
}

constraints::FeasibilityResult feasibility_from_json(const json& j) {
    constraints::FeasibilityResult f;
    f.status = status_from(get_string(j, "status"));
    if (f.status == solver::SolveStatus::Optimal) f.eps_star = get_num(field(j, "eps_star"));
    return f;
}

json report_to_json(const inconsistency::InconsistencyReport& r) {
    return {{"sets", r.sets}, {"cardinality", r.cardinality}, {"exhausted", r.exhausted}};
}

inconsistency::InconsistencyReport report_from_json(const json& j) {
    inconsistency::InconsistencyReport r;
    r.sets = field(j, "sets").get<std::vector<std::vector<std::string>>>();
    r.cardinality = get_int(j, "cardinality");
    r.exhausted = field(j, "exhausted").get<bool>();
    return r;
}

json judgment_report_to_json(const judgment::JudgmentInconsistency& r) {
    return {{"sets", r.sets}, {"exhausted", r.exhausted}, {"structural", r.structural}};
}

judgment::JudgmentInconsistency judgment_report_from_json(const json& j) {
    judgment::JudgmentInconsistency r;
    r.sets = field(j, "sets").get<std::vector<std::vector<std::string>>>();
    r.exhausted = field(j, "exhausted").get<bool>();
    r.structural = field(j, "structural").get<bool>();
    return r;
}

json completion_to_json(const CompletionRecord& c, FloatStyle st) {
    const auto& r = c.result;
    json inferred = json::array();
    const int m = r.completed.m();
    for (int s = 0; s < m; ++s)
        for (int t = s + 1; t < m; ++t)
            if (!r.inferred.empty() && r.inferred[static_cast<std::size_t>(s) * m + t]) inferred.push_back({s + 1, t + 1});
    json j = {{"status", r.status == judgment::CompletionStatus::Completed ? "completed" : "inconsistent"},
              {"eps_star", num(r.eps_star, st)},
              {"completed", judgment_to_json(r.completed, st)},
              {"inferred", inferred}};
    if (c.inconsistency) j["inconsistency"] = judgment_report_to_json(*c.inconsistency);
    return j;
}

CompletionRecord completion_from_json(const json& j) {
    CompletionRecord c;
    const std::string status = get_string(j, "status");
    c.result.status = status == "completed" ? judgment::CompletionStatus::Completed : judgment::CompletionStatus::Inconsistent;
    c.result.eps_star = get_num(field(j, "eps_star"));
    c.result.completed = judgment_from_json(field(j, "completed"));
    const int m = c.result.completed.m();
    c.result.inferred.assign(static_cast<std::size_t>(m) * m, false);
    for (const auto& p : field(j, "inferred")) {
        const int s = p.at(0).get<int>() - 1, t = p.at(1).get<int>() - 1;
        c.result.inferred[static_cast<std::size_t>(s) * m + t] = c.result.inferred[static_cast<std::size_t>(t) * m + s] = true;
    }
    if (j.contains("inconsistency")) c.inconsistency = judgment_report_from_json(j["inconsistency"]);
    return c;
}

json relations_to_json(const relations::RelationMatrix& r, FloatStyle st) {
    json cells = json::array();
    json classes = json::array();
    for (int i = 0; i < r.n; ++i) {
        json row = json::array();
        for (int j = 0; j < r.n; ++j) {
            const auto& c = r.at(i, j);
            row.push_back(relations::to_string(c.cls));
            if (i == j) continue;
            json cell = {{"i", i + 1},
                         {"j", j + 1},
                         {"class", relations::to_string(c.cls)},
                         {"status_model2", status_name(c.model2.status)},
                         {"status_model3", status_name(c.model3.status)},
                         {"borderline", c.borderline}};
            cell["eps_model2"] = c.model2.status == solver::SolveStatus::Optimal ? num(c.model2.eps_star, st) : json(nullptr);
            cell["eps_model3"] = c.model3.status == solver::SolveStatus::Optimal ? num(c.model3.eps_star, st) : json(nullptr);
            cells.push_back(cell);
        }
        classes.push_back(row);
    }
    return {{"n", r.n}, {"classes", classes}, {"cells", cells}};
}

relations::RelationMatrix relations_from_json(const json& j) {
    relations::RelationMatrix r;
    r.n = get_int(j, "n");
    r.cells.assign(static_cast<std::size_t>(r.n) * r.n, relations::Cell{});
    for (const auto& c : field(j, "cells")) {
        auto& cell = r.at(get_index(c, "i"), get_index(c, "j"));
        cell.cls = relations::relation_class_from(get_string(c, "class"));
        cell.model2.status = status_from(get_string(c, "status_model2"));
        cell.model3.status = status_from(get_string(c, "status_model3"));
        if (!c["eps_model2"].is_null()) cell.model2.eps_star = get_num(c["eps_model2"]);
        if (!c["eps_model3"].is_null()) cell.model3.eps_star = get_num(c["eps_model3"]);
        cell.borderline = c.value("borderline", false);
    }
    return r;
}

json tree_to_json(const selection::RootedTree& t) {
    json children = json::object();
    for (int p = 0; p < static_cast<int>(t.parent.size()); ++p) {
        const auto kids = t.children(p);
        if (kids.empty()) continue;
        json arr = json::array();
        for (int c : kids) arr.push_back(c + 1);
        children[std::to_string(p + 1)] = arr;
    }
    return {{"root", t.root() + 1}, {"children", children}};
}

selection::RootedTree tree_from_json(const json& j, int n) {
    selection::RootedTree t;
    t.parent.assign(n, -2);
    const int root = get_index(j, "root");
    if (root < 0 || root >= n) throw ValidationError("tree root out of range", "root");
    t.parent[root] = -1;
    const json& children = field(j, "children");
    if (!children.is_object()) throw ValidationError("children must be an object", "children");
    for (const auto& [key, arr] : children.items()) {
        const int p = std::atoi(key.c_str()) - 1;
        if (p < 0 || p >= n) throw ValidationError("tree parent out of range", "children");
        for (const auto& c : arr) {
            const int v = c.get<int>() - 1;
            if (v < 0 || v >= n) throw ValidationError("tree child out of range", "children");
            if (t.parent[v] != -2) throw ValidationError("node " + std::to_string(v + 1) + " has two parents", "children");
            t.parent[v] = p;
        }
    }
    for (int v = 0; v < n; ++v)
        if (t.parent[v] == -2) throw ValidationError("node " + std::to_string(v + 1) + " is not in the tree", "children");
    t.validate(n);
    return t;
}

json target_to_json(const selection::TargetSpec& t) {
    json j = {{"kind", selection::to_string(t.kind)}};
    if (t.kind == selection::TargetKind::Star) j["center"] = optional_num(t.center);
    if (t.kind == selection::TargetKind::Bus)
        j["direction"] = t.direction == selection::Direction::Forward ? "forward" : "reverse";
    if (t.kind == selection::TargetKind::Tree) j["tree"] = tree_to_json(t.tree);
    return j;
}

selection::TargetSpec target_from_json(const json& j, int n) {
    selection::TargetSpec t;
    t.kind = selection::target_kind_from(get_string(j, "kind"));
    if (j.contains("center") && !j["center"].is_null()) {
        t.center = get_index(j, "center");
        if (*t.center < 0 || *t.center >= n) throw ValidationError("center out of range", "center");
    }
    if (j.contains("direction")) {
        const std::string d = get_string(j, "direction");
        if (d == "forward" || d == "fwd") t.direction = selection::Direction::Forward;
        else if (d == "reverse" || d == "rev") t.direction = selection::Direction::Reverse;
        else throw ValidationError("direction must be forward or reverse", "direction");
    }
    if (t.kind == selection::TargetKind::ResilientGlobalForward && t.direction == selection::Direction::Reverse)
        t.kind = selection::TargetKind::ResilientGlobalReverse;
    if (t.kind == selection::TargetKind::Tree) t.tree = tree_from_json(field(j, "tree"), n);
    return t;
}

json diagnostics_to_json(const core::NetworkDiagnostics& d, FloatStyle st) {
    json omega = json::array();
    for (Eigen::Index k = 0; k < d.omega.size(); ++k) omega.push_back(num(d.omega(k), st));
    return {{"omega", omega},
            {"density", num(d.density, st)},
            {"entropy", num(d.entropy, st)},
            {"zero_centrality", d.zero_centrality},
            {"is_central", d.is_central},
            {"is_distributed", d.is_distributed},
            {"is_highly_resilient", d.is_highly_resilient},
            {"is_irreducible", d.is_irreducible}};
}

json network_to_json(const SelectedNetwork& n, const core::Thresholds& t, FloatStyle st) {
    json trace = json::array();
    for (const auto& r : n.trace)
        trace.push_back({{"origin", r.origin}, {"initial", num(r.initial, st)}, {"final", num(r.final, st)},
                         {"iterations", r.iterations}, {"ok", r.ok}});
    json max_omega = json::array();
    for (double v : n.max_omega) max_omega.push_back(num(v, st));
    json j = {{"label", n.label},
              {"target", n.target ? target_to_json(*n.target) : json(nullptr)},
              {"w", matrix_to_json(n.w, st)},
              {"objective", num(n.objective, st)},
              {"objective_unbounded", n.objective_unbounded},
              {"eps", num(n.eps, st)},
              {"center", optional_num(n.center)},
              {"status", n.status},
              {"notes", n.notes},
              {"trace", trace},
              {"max_omega", max_omega},
              {"nodes", n.nodes},
              {"recheck_violation", num(n.recheck_violation, st)}};
    j["g"] = n.g ? matrix_to_json(*n.g, st) : json(nullptr);
    if (st == FloatStyle::Number) {
        // Derived values for API/CLI consumers; not part of the stored state.
        j["diagnostics"] = diagnostics_to_json(core::classify_network(n.w, t), st);
        if (n.g) j["global_diagnostics"] = diagnostics_to_json(core::classify_network(*n.g, t), st);
    }
    return j;
}

SelectedNetwork network_from_json(const json& j) {
    SelectedNetwork n;
    n.label = get_string(j, "label");
    n.w = matrix_from_json(field(j, "w"));
    const int size = n.w.n();
    if (!field(j, "target").is_null()) n.target = target_from_json(j["target"], size);
    if (j.contains("g") && !j["g"].is_null()) n.g = matrix_from_json(j["g"]);
    n.objective = get_num(field(j, "objective"));
    n.objective_unbounded = field(j, "objective_unbounded").get<bool>();
    n.eps = get_num(field(j, "eps"));
    if (!field(j, "center").is_null()) n.center = get_index(j, "center");
    n.status = get_string(j, "status");
    n.notes = field(j, "notes").get<std::vector<std::string>>();
    for (const auto& r : field(j, "trace"))
        n.trace.push_back({get_string(r, "origin"), get_num(field(r, "initial")), get_num(field(r, "final")),
                           get_int(r, "iterations"), field(r, "ok").get<bool>()});
    for (const auto& v : field(j, "max_omega")) n.max_omega.push_back(get_num(v));
    n.nodes = field(j, "nodes").get<long>();
    n.recheck_violation = get_num(field(j, "recheck_violation"));
    return n;
}

SelectedNetwork network_from_result(const std::string& label, const selection::SelectionResult& r) {
    SelectedNetwork n;
    n.label = label;
    n.target = r.target;
    n.w = r.w;
    n.g = r.g;
    n.objective = r.objective;
    n.objective_unbounded = r.objective_unbounded;
    n.eps = r.eps;
    n.center = r.center;
    n.status = r.certificate.status;
    n.notes = r.certificate.notes;
    if (!r.certificate.message.empty()) n.notes.push_back(r.certificate.message);
    n.trace = r.certificate.trace;
    n.max_omega = r.certificate.max_omega;
    n.nodes = r.certificate.nodes;
    n.recheck_violation = r.certificate.recheck_violation;
    return n;
}

json welfare_to_json(const welfare::WelfareReport& r, FloatStyle st) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        json sw = json::array();
        for (double v : row.sw) sw.push_back(num(v, st));
        rows.push_back({{"label", row.label}, {"sw", sw}, {"best", row.best + 1}});
    }
    return {{"rows", rows}};
}

welfare::WelfareReport welfare_from_json(const json& j) {
    welfare::WelfareReport r;
    for (const auto& row : field(j, "rows")) {
        welfare::WelfareRow w;
        w.label = get_string(row, "label");
        for (const auto& v : field(row, "sw")) w.sw.push_back(get_num(v));
        w.best = get_index(row, "best");
        r.rows.push_back(std::move(w));
    }
    return r;
}

}  // namespace empathic::session::codec
