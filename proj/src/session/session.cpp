#include "empathic/session/session.hpp"

#include "empathic/error.hpp"
#include "empathic/session/codec.hpp"

#include <algorithm>
#include <set>

namespace empathic::session {

using codec::FloatStyle;

std::string to_string(Phase p) {
    switch (p) {
        case Phase::IntrinsicElicitation: return "IntrinsicElicitation";
        case Phase::EmpathicElicitation: return "EmpathicElicitation";
        case Phase::Resolved: return "Resolved";
    }
    return "IntrinsicElicitation";
}

Phase phase_from(const std::string& s) {
    for (auto p : {Phase::IntrinsicElicitation, Phase::EmpathicElicitation, Phase::Resolved})
        if (to_string(p) == s) return p;
    throw ValidationError("unknown phase '" + s + "'", "phase");
}

void Panel::validate() const {
    if (n < 2) throw ValidationError("panel needs at least two decision-makers", "n");
    if (m < 2) throw ValidationError("panel needs at least two alternatives", "m");
    if (static_cast<int>(experts.size()) != n) throw ValidationError("expert labels do not match n", "experts");
    if (static_cast<int>(alternatives.size()) != m)
        throw ValidationError("alternative labels do not match m", "alternatives");
}

namespace {

template <class T, class F>
json optional_json(const std::optional<T>& v, F f) {
    return v ? f(*v) : json(nullptr);
}

void advance(Session& s, Phase p) {
    if (static_cast<int>(p) > static_cast<int>(s.phase)) s.phase = p;
}

void clear_derived(Session& s) {
    s.feasibility.reset();
    s.inconsistencies.reset();
    s.relations.reset();
}

void set_feasibility(Session& s, const json& p) {
    s.feasibility = codec::feasibility_from_json(p.at("feasibility"));
    if (p.contains("inconsistencies") && !p["inconsistencies"].is_null())
        s.inconsistencies = codec::report_from_json(p["inconsistencies"]);
    else
        s.inconsistencies.reset();
    s.relations.reset();
    if (s.feasible()) advance(s, Phase::Resolved);
}

}  // namespace

json state_to_json(const Session& s) {
    json j;
    j["id"] = s.id;
    j["panel"] = codec::panel_to_json(s.panel);
    j["phase"] = to_string(s.phase);
    j["thresholds"] = codec::thresholds_to_json(s.thresholds);
    json judgments = json::array();
    for (const auto& r : s.judgments)
        judgments.push_back(optional_json(r, [](const auto& v) { return codec::judgment_to_json(v); }));
    j["judgments"] = judgments;
    json istmts = json::array();
    for (const auto& st : s.intrinsic_statements) istmts.push_back(codec::intrinsic_statement_to_json(st));
    j["intrinsic_statements"] = istmts;
    json completions = json::array();
    for (const auto& c : s.completions)
        completions.push_back(optional_json(c, [](const auto& v) { return codec::completion_to_json(v); }));
    j["completions"] = completions;
    j["intrinsic"] = optional_json(s.intrinsic, [](const auto& v) { return codec::utility_to_json(v); });
    json stmts = json::array();
    for (const auto& st : s.statements) stmts.push_back(codec::statement_to_json(st));
    j["statements"] = stmts;
    j["feasibility"] = optional_json(s.feasibility, [](const auto& v) { return codec::feasibility_to_json(v); });
    j["inconsistencies"] = optional_json(s.inconsistencies, [](const auto& v) { return codec::report_to_json(v); });
    j["resolutions"] = s.resolutions;
    j["relations"] = optional_json(s.relations, [](const auto& v) { return codec::relations_to_json(v); });
    json networks = json::object();
    for (const auto& [label, net] : s.networks) networks[label] = codec::network_to_json(net, s.thresholds);
    j["networks"] = networks;
    j["welfare"] = optional_json(s.welfare, [](const auto& v) { return codec::welfare_to_json(v); });
    return j;
}

Session state_from_json(const json& j) {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.panel = codec::panel_from_json(j.at("panel"));
    s.phase = phase_from(j.at("phase").get<std::string>());
    s.thresholds = codec::thresholds_from_json(j.at("thresholds"));
    for (const auto& r : j.at("judgments"))
        s.judgments.push_back(r.is_null() ? std::nullopt : std::optional(codec::judgment_from_json(r)));
    for (const auto& st : j.at("intrinsic_statements"))
        s.intrinsic_statements.push_back(codec::intrinsic_statement_from_json(st));
    for (const auto& c : j.at("completions"))
        s.completions.push_back(c.is_null() ? std::nullopt : std::optional(codec::completion_from_json(c)));
    if (!j.at("intrinsic").is_null()) s.intrinsic = codec::utility_from_json(j["intrinsic"]);
    for (const auto& st : j.at("statements")) s.statements.push_back(codec::statement_from_json(st));
    if (!j.at("feasibility").is_null()) s.feasibility = codec::feasibility_from_json(j["feasibility"]);
    if (!j.at("inconsistencies").is_null()) s.inconsistencies = codec::report_from_json(j["inconsistencies"]);
    s.resolutions = j.at("resolutions").get<std::vector<std::vector<std::string>>>();
    if (!j.at("relations").is_null()) s.relations = codec::relations_from_json(j["relations"]);
    for (const auto& [label, net] : j.at("networks").items()) s.networks.emplace(label, codec::network_from_json(net));
    if (!j.at("welfare").is_null()) s.welfare = codec::welfare_from_json(j["welfare"]);
    return s;
}

std::string canonical(const Session& s) { return state_to_json(s).dump(2) + "\n"; }

void apply(Session& s, const Event& e) {
    const json& p = e.payload;
    const std::string& type = e.type;
    if (type == "created") {
        s = Session{};
        s.id = p.at("id").get<std::string>();
        s.panel = codec::panel_from_json(p.at("panel"));
        s.thresholds = codec::thresholds_from_json(p.at("thresholds"));
        s.judgments.assign(s.panel.n, std::nullopt);
        s.completions.assign(s.panel.n, std::nullopt);
    } else if (type == "judgment_set") {
        const int dm = p.at("dm").get<int>() - 1;
        s.judgments.at(dm) = codec::judgment_from_json(p.at("judgment"));
        s.completions.at(dm).reset();
    } else if (type == "intrinsic_statements_added") {
        for (const auto& st : p.at("statements")) {
            auto parsed = codec::intrinsic_statement_from_json(st);
            s.completions.at(parsed.dm).reset();
            s.intrinsic_statements.push_back(std::move(parsed));
        }
    } else if (type == "intrinsic_statements_removed") {
        const auto ids = p.at("ids").get<std::set<std::string>>();
        auto& v = s.intrinsic_statements;
        for (const auto& st : v)
            if (ids.count(st.id)) s.completions.at(st.dm).reset();
        v.erase(std::remove_if(v.begin(), v.end(), [&](const auto& st) { return ids.count(st.id) > 0; }), v.end());
    } else if (type == "judgments_completed") {
        const auto& list = p.at("completions");
        for (std::size_t k = 0; k < list.size() && k < s.completions.size(); ++k)
            s.completions[k] = list[k].is_null() ? std::nullopt : std::optional(codec::completion_from_json(list[k]));
    } else if (type == "intrinsic_set") {
        s.intrinsic = codec::utility_from_json(p.at("intrinsic"));
        clear_derived(s);
        advance(s, Phase::EmpathicElicitation);
    } else if (type == "statements_added") {
        for (const auto& st : p.at("statements")) s.statements.push_back(codec::statement_from_json(st));
        clear_derived(s);
    } else if (type == "thresholds_set") {
        s.thresholds = codec::thresholds_from_json(p.at("thresholds"));
        clear_derived(s);
    } else if (type == "checked") {
        set_feasibility(s, p);
    } else if (type == "resolved") {
        const auto removed = p.at("removed").get<std::vector<std::string>>();
        const std::set<std::string> ids(removed.begin(), removed.end());
        auto& v = s.statements;
        v.erase(std::remove_if(v.begin(), v.end(), [&](const auto& st) { return ids.count(st.id) > 0; }), v.end());
        s.resolutions.push_back(removed);
        set_feasibility(s, p);
    } else if (type == "relations_computed") {
        s.relations = codec::relations_from_json(p.at("relations"));
    } else if (type == "network_selected" || type == "network_imported") {
        auto net = codec::network_from_json(p.at("network"));
        const std::string label = net.label;
        s.networks.insert_or_assign(label, std::move(net));
    } else if (type == "welfare_computed") {
        s.welfare = codec::welfare_from_json(p.at("welfare"));
    } else {
        throw ValidationError("unknown event type '" + type + "'", "type");
    }
    s.events.push_back(e);
}

Session replay(const std::vector<Event>& events) {
    Session s;
    for (const auto& e : events) apply(s, e);
    return s;
}

json event_to_json(const Event& e) {
    return {{"seq", e.seq}, {"time", e.time}, {"type", e.type}, {"payload", e.payload}};
}

Event event_from_json(const json& j) {
    Event e;
    e.seq = j.at("seq").get<std::int64_t>();
    e.time = j.at("time").get<std::string>();
    e.type = j.at("type").get<std::string>();
    e.payload = j.at("payload");
    return e;
}

}  // namespace empathic::session
