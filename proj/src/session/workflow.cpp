#include "empathic/session/workflow.hpp"

#include "empathic/error.hpp"
#include "empathic/session/codec.hpp"

#include <ctime>

namespace empathic::session {

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool CompletionOutcome::all_completed() const {
    for (const auto& r : records)
        if (r.result.status != judgment::CompletionStatus::Completed) return false;
    return !records.empty();
}

namespace {

std::string expert(int dm) { return "d" + std::to_string(dm + 1); }

void check_alt(int v, int m, const char* field) {
    if (v < 0 || v >= m)
        throw ValidationError(std::string("alternative index ") + field + "=" + std::to_string(v + 1) +
                                  " out of range 1.." + std::to_string(m),
                              field);
}

}  // namespace

json check_to_json(const CheckOutcome& c) {
    json j = {{"feasibility", codec::feasibility_to_json(c.feasibility, codec::FloatStyle::Number)}};
    j["inconsistencies"] = c.report ? codec::report_to_json(*c.report) : json(nullptr);
    return j;
}

json completion_outcome_to_json(const CompletionOutcome& c, const std::optional<core::UtilityMatrix>& intrinsic) {
    json arr = json::array();
    for (const auto& rec : c.records) arr.push_back(codec::completion_to_json(rec, codec::FloatStyle::Number));
    json j = {{"completions", arr}, {"all_completed", c.all_completed()}};
    j["intrinsic"] = intrinsic ? codec::utility_to_json(*intrinsic, codec::FloatStyle::Number) : json(nullptr);
    return j;
}

ExportFile render_export(const Session& s, const std::string& format, const std::string& network) {
    auto net = [&]() -> const SelectedNetwork& {
        if (network.empty()) throw ValidationError("a network label is required for format " + format, "network");
        const auto it = s.networks.find(network);
        if (it == s.networks.end()) throw NotFoundError("unknown network '" + network + "'");
        return it->second;
    };
    if (format == "dot") {
        const auto& n = net();
        return {n.label + ".dot", "text/vnd.graphviz", core::to_dot(n.w, s.thresholds.eps_prime, n.label)};
    }
    if (format == "json") {
        const auto& n = net();
        return {n.label + ".json", "application/json",
                codec::matrix_to_json(n.w, codec::FloatStyle::Number).dump(2) + "\n"};
    }
    if (format == "csv") {
        if (network == "relations") {
            if (!s.relations) throw ConflictError("relations have not been computed");
            return {"relations.csv", "text/csv", relations::to_csv(*s.relations)};
        }
        if (!s.welfare) throw ConflictError("welfare has not been computed");
        return {"welfare.csv", "text/csv", welfare::to_csv(*s.welfare)};
    }
    throw ValidationError("format must be dot, csv or json", "format");
}

Workflow::Workflow(Session& s, Clock clock, int workers) : s_(s), clock_(std::move(clock)), workers_(workers) {}

void Workflow::emit(const std::string& type, json payload) {
    Event e;
    e.seq = s_.events.empty() ? 1 : s_.events.back().seq + 1;
    e.time = clock_();
    e.type = type;
    e.payload = std::move(payload);
    apply(s_, e);
}

Session Workflow::create(const std::string& id, const Panel& panel, const core::Thresholds& t, Clock clock) {
    panel.validate();
    t.validate(panel.n);
    Session s;
    Workflow w(s, std::move(clock));
    w.emit("created", {{"id", id}, {"panel", codec::panel_to_json(panel)}, {"thresholds", codec::thresholds_to_json(t)}});
    return s;
}

Session Workflow::import_problem(const std::string& id, const json& problem, const core::Thresholds& base,
                                 Clock clock) {
    if (!problem.is_object()) throw ValidationError("problem must be a JSON object", "problem");
    if (!problem.contains("panel")) throw ValidationError("missing field 'panel'", "panel");
    const Panel panel = codec::panel_from_json(problem["panel"]);
    const auto t = codec::thresholds_from_json(problem.value("thresholds", json(nullptr)), base);
    Session s = create(id, panel, t, clock);
    Workflow w(s, clock);
    if (problem.contains("judgments")) {
        const auto& js = problem["judgments"];
        if (!js.is_array() || static_cast<int>(js.size()) != panel.n)
            throw ValidationError("judgments must list one matrix per expert", "judgments");
        for (int k = 0; k < panel.n; ++k) {
            if (js[k].is_null()) continue;
            const json& jm = js[k].is_array() ? json{{"rows", js[k]}} : js[k];
            w.set_judgment(k, codec::judgment_from_json(jm));
        }
    }
    if (problem.contains("intrinsic_statements")) {
        std::vector<judgment::IntrinsicStatement> v;
        for (const auto& st : problem["intrinsic_statements"]) v.push_back(codec::intrinsic_statement_from_json(st));
        w.add_intrinsic_statements(v);
    }
    if (problem.contains("intrinsic") && !problem["intrinsic"].is_null()) {
        // Hand-entered utilities are usually printed to a few decimals.
        const auto& ju = problem["intrinsic"];
        const json& rows = ju.is_array() ? ju : ju.at("rows");
        core::Rows r;
        for (const auto& row : rows) {
            std::vector<double> v;
            for (const auto& x : row) v.push_back(codec::get_num(x));
            r.push_back(std::move(v));
        }
        w.set_intrinsic(core::UtilityMatrix::from_rounded(r));
    }
    if (problem.contains("statements")) {
        std::vector<constraints::EmpathicStatement> v;
        for (const auto& st : problem["statements"]) v.push_back(codec::statement_from_json(st));
        w.add_statements(v);
    }
    return s;
}

void Workflow::set_judgment(int dm, const judgment::FuzzyJudgmentMatrix& r) {
    if (s_.phase != Phase::IntrinsicElicitation)
        throw ConflictError("judgments are closed once intrinsic utilities are set");
    if (dm < 0 || dm >= s_.panel.n) throw ValidationError("expert index out of range", "dm");
    if (r.m() != s_.panel.m)
        throw ValidationError("judgment matrix must be " + std::to_string(s_.panel.m) + "x" + std::to_string(s_.panel.m),
                              "rows");
    const auto v = judgment::validate(r);
    if (!v.empty()) throw ValidationError(v.front().message, "rows");
    emit("judgment_set", {{"dm", dm + 1}, {"judgment", codec::judgment_to_json(r)}});
}

void Workflow::add_intrinsic_statements(const std::vector<judgment::IntrinsicStatement>& stmts) {
    if (s_.phase != Phase::IntrinsicElicitation)
        throw ConflictError("intrinsic statements are closed once intrinsic utilities are set");
    std::set<std::string> ids;
    for (const auto& st : s_.intrinsic_statements) ids.insert(st.id);
    json arr = json::array();
    for (const auto& st : stmts) {
        if (st.id.empty()) throw ValidationError("statement id must not be empty", "id");
        if (!ids.insert(st.id).second) throw ValidationError("duplicate statement id '" + st.id + "'", "id");
        if (st.dm < 0 || st.dm >= s_.panel.n)
            throw ValidationError("expert index dm=" + std::to_string(st.dm + 1) + " out of range", "dm");
        check_alt(st.s, s_.panel.m, "s");
        check_alt(st.t, s_.panel.m, "t");
        if (st.kind == judgment::IntrinsicKind::Intensity) {
            check_alt(st.p, s_.panel.m, "p");
            check_alt(st.q, s_.panel.m, "q");
        }
        arr.push_back(codec::intrinsic_statement_to_json(st));
    }
    emit("intrinsic_statements_added", {{"statements", arr}});
}

void Workflow::remove_intrinsic_statements(const std::set<std::string>& ids) {
    if (s_.phase != Phase::IntrinsicElicitation)
        throw ConflictError("intrinsic statements are closed once intrinsic utilities are set");
    for (const auto& id : ids) {
        bool found = false;
        for (const auto& st : s_.intrinsic_statements) found = found || st.id == id;
        if (!found) throw NotFoundError("unknown intrinsic statement '" + id + "'");
    }
    emit("intrinsic_statements_removed", {{"ids", ids}});
}

CompletionOutcome Workflow::complete_judgments() {
    if (s_.phase != Phase::IntrinsicElicitation) throw ConflictError("intrinsic utilities are already set");
    CompletionOutcome out;
    json arr = json::array();
    for (int dm = 0; dm < s_.panel.n; ++dm) {
        if (!s_.judgments[dm]) throw ConflictError("judgment matrix for expert " + expert(dm) + " is missing");
        std::vector<judgment::IntrinsicStatement> own;
        for (const auto& st : s_.intrinsic_statements)
            if (st.dm == dm) own.push_back(st);
        CompletionRecord rec;
        rec.result = judgment::complete(*s_.judgments[dm], own);
        if (rec.result.status == judgment::CompletionStatus::Inconsistent)
            rec.inconsistency = judgment::judgment_inconsistency(*s_.judgments[dm], own, s_.thresholds);
        arr.push_back(codec::completion_to_json(rec));
    }
    emit("judgments_completed", {{"completions", arr}});
    for (const auto& c : s_.completions) out.records.push_back(*c);
    return out;
}

const core::UtilityMatrix& Workflow::compute_intrinsic() {
    if (s_.phase != Phase::IntrinsicElicitation) throw ConflictError("intrinsic utilities are already set");
    std::vector<judgment::FuzzyJudgmentMatrix> completed;
    std::string pending;
    for (int dm = 0; dm < s_.panel.n; ++dm) {
        const auto& c = s_.completions[dm];
        if (!c || c->result.status != judgment::CompletionStatus::Completed) {
            pending += (pending.empty() ? "" : ", ") + expert(dm);
            continue;
        }
        completed.push_back(c->result.completed);
    }
    if (!pending.empty()) throw ConflictError("judgments not completed consistently for " + pending);
    set_intrinsic(judgment::intrinsic_matrix(completed));
    return *s_.intrinsic;
}

void Workflow::set_intrinsic(const core::UtilityMatrix& u) {
    if (s_.phase != Phase::IntrinsicElicitation) throw ConflictError("intrinsic utilities are already set");
    if (u.n() != s_.panel.n || u.m() != s_.panel.m)
        throw ValidationError("intrinsic utilities must be " + std::to_string(s_.panel.n) + "x" +
                                  std::to_string(s_.panel.m),
                              "intrinsic");
    if (u.kind() != core::UtilityKind::Intrinsic) throw ValidationError("utilities must be intrinsic", "intrinsic");
    emit("intrinsic_set", {{"intrinsic", codec::utility_to_json(u)}});
}

void Workflow::add_statements(const std::vector<constraints::EmpathicStatement>& stmts) {
    if (stmts.empty()) throw ValidationError("no statements given", "statements");
    // Index ranges only depend on n and m, so statements can be checked
    // before the intrinsic utilities exist.
    const core::UtilityMatrix probe =
        s_.intrinsic ? *s_.intrinsic
                     : core::UtilityMatrix(Eigen::MatrixXd::Constant(s_.panel.n, s_.panel.m, 1.0 / s_.panel.m),
                                           core::UtilityKind::Intrinsic);
    std::set<std::string> ids;
    for (const auto& st : s_.statements) ids.insert(st.id);
    json arr = json::array();
    for (const auto& st : stmts) {
        if (st.id.empty()) throw ValidationError("statement id must not be empty", "id");
        if (!ids.insert(st.id).second) throw ValidationError("duplicate statement id '" + st.id + "'", "id");
        constraints::compile(st, probe, s_.thresholds);
        arr.push_back(codec::statement_to_json(st));
    }
    emit("statements_added", {{"statements", arr}});
}

void Workflow::set_thresholds(const core::Thresholds& t) {
    t.validate(s_.panel.n);
    emit("thresholds_set", {{"thresholds", codec::thresholds_to_json(t)}});
}

constraints::ConstraintSystem Workflow::system() const {
    if (!s_.intrinsic) throw ConflictError("intrinsic utilities are not set; complete the judgments first");
    return constraints::assemble(*s_.intrinsic, s_.statements, s_.thresholds);
}

CheckOutcome Workflow::check(int limit) {
    const auto sys = system();
    CheckOutcome out;
    out.feasibility = constraints::feasible(sys);
    if (!out.feasibility.consistent()) out.report = inconsistency::enumerate_sets(sys, limit);
    json payload = {{"feasibility", codec::feasibility_to_json(out.feasibility)}};
    payload["inconsistencies"] = out.report ? codec::report_to_json(*out.report) : json(nullptr);
    emit("checked", payload);
    out.feasibility = *s_.feasibility;
    return out;
}

CheckOutcome Workflow::resolve(int k, int limit) {
    if (!s_.inconsistencies) throw ConflictError("no inconsistency report; run check first");
    const auto& sets = s_.inconsistencies->sets;
    if (k < 1 || k > static_cast<int>(sets.size()))
        throw ValidationError("set index must be in 1.." + std::to_string(sets.size()), "set");
    const auto chosen = sets[k - 1];
    const auto res = inconsistency::apply_resolution(system(), std::set<std::string>(chosen.begin(), chosen.end()));
    CheckOutcome out;
    out.feasibility = res.feasibility;
    if (!res.restored) out.report = inconsistency::enumerate_sets(res.system, limit);
    json payload = {{"removed", chosen}, {"feasibility", codec::feasibility_to_json(out.feasibility)}};
    payload["inconsistencies"] = out.report ? codec::report_to_json(*out.report) : json(nullptr);
    emit("resolved", payload);
    out.feasibility = *s_.feasibility;
    return out;
}

void Workflow::require_feasible() const {
    if (!s_.feasibility) throw ConflictError("feasibility not established; run check first");
    if (!s_.feasible())
        throw ConflictError("statement system is inconsistent; choose a resolution from the inconsistencies report");
}

const relations::RelationMatrix& Workflow::relations() {
    require_feasible();
    const auto r = relations::relation_matrix(system(), workers_);
    emit("relations_computed", {{"relations", codec::relations_to_json(r)}});
    return *s_.relations;
}

const SelectedNetwork& Workflow::select(const selection::TargetSpec& target, const std::string& label) {
    require_feasible();
    const auto r = selection::select(system(), target);
    const std::string name = label.empty() ? selection::label(target) : label;
    emit("network_selected", {{"network", codec::network_to_json(codec::network_from_result(name, r), s_.thresholds)}});
    return s_.networks.at(name);
}

const SelectedNetwork& Workflow::import_network(const std::string& label, const core::EmpathicMatrix& w, bool global) {
    if (label.empty()) throw ValidationError("network label must not be empty", "label");
    if (w.n() != s_.panel.n)
        throw ValidationError("network must be " + std::to_string(s_.panel.n) + "x" + std::to_string(s_.panel.n), "rows");
    SelectedNetwork net;
    net.label = label;
    net.w = w;
    if (global) net.g = core::global_weight_matrix(w);
    net.status = "imported";
    if (s_.intrinsic) {
        const auto sys = system();
        net.recheck_violation = sys.max_violation(w.matrix(), 0.0);
        if (net.recheck_violation > 1e-6) net.notes.push_back("violates the current statement system");
    }
    emit("network_imported", {{"network", codec::network_to_json(net, s_.thresholds)}});
    return s_.networks.at(label);
}

const welfare::WelfareReport& Workflow::welfare(const std::vector<std::string>& labels) {
    if (!s_.intrinsic) throw ConflictError("intrinsic utilities are not set");
    std::vector<std::pair<std::string, core::EmpathicMatrix>> nets;
    auto add = [&](const std::string& label) {
        const auto it = s_.networks.find(label);
        if (it == s_.networks.end()) throw NotFoundError("unknown network '" + label + "'");
        // Global networks act through their G matrix.
        nets.emplace_back(label, it->second.g ? *it->second.g : it->second.w);
    };
    if (labels.empty())
        for (const auto& [label, net] : s_.networks) add(label);
    else
        for (const auto& label : labels) add(label);
    const auto report = welfare::compare_networks(*s_.intrinsic, nets);
    emit("welfare_computed", {{"welfare", codec::welfare_to_json(report)}});
    return *s_.welfare;
}

}  // namespace empathic::session
