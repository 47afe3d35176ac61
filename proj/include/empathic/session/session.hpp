#pragma once

#include "empathic/constraints/system.hpp"
#include "empathic/core/matrix.hpp"
#include "empathic/core/network.hpp"
#include "empathic/core/thresholds.hpp"
#include "empathic/inconsistency/inconsistency.hpp"
#include "empathic/judgment/completion.hpp"
#include "empathic/relations/relations.hpp"
#include "empathic/selection/selection.hpp"
#include "empathic/welfare/welfare.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace empathic::session {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

enum class Phase { IntrinsicElicitation, EmpathicElicitation, Resolved };

std::string to_string(Phase p);
Phase phase_from(const std::string& s);

struct Panel {
    int n = 0;
    int m = 0;
    std::vector<std::string> experts;
    std::vector<std::string> alternatives;
    void validate() const;
};

struct CompletionRecord {
    judgment::CompletionResult result;
    std::optional<judgment::JudgmentInconsistency> inconsistency;
};

struct SelectedNetwork {
    std::string label;
    std::optional<selection::TargetSpec> target;  // empty for imported networks
    core::EmpathicMatrix w;
    std::optional<core::EmpathicMatrix> g;
    double objective = 0.0;
    bool objective_unbounded = false;
    double eps = 0.0;
    std::optional<int> center;
    std::string status;
    std::vector<std::string> notes;
    std::vector<solver::StartRecord> trace;
    std::vector<double> max_omega;
    long nodes = 0;
    double recheck_violation = 0.0;
};

struct Event {
    std::int64_t seq = 0;
    std::string time;
    std::string type;
    json payload;
};

struct Session {
    std::string id;
    Panel panel;
    Phase phase = Phase::IntrinsicElicitation;
    core::Thresholds thresholds;
    std::vector<std::optional<judgment::FuzzyJudgmentMatrix>> judgments;
    std::vector<judgment::IntrinsicStatement> intrinsic_statements;
    std::vector<std::optional<CompletionRecord>> completions;
    std::optional<core::UtilityMatrix> intrinsic;
    std::vector<constraints::EmpathicStatement> statements;
    std::optional<constraints::FeasibilityResult> feasibility;
    std::optional<inconsistency::InconsistencyReport> inconsistencies;
    std::vector<std::vector<std::string>> resolutions;  // removed statement-id sets, in order
    std::optional<relations::RelationMatrix> relations;
    std::map<std::string, SelectedNetwork> networks;
    std::optional<welfare::WelfareReport> welfare;
    std::vector<Event> events;

    bool feasible() const { return feasibility && feasibility->consistent(); }
};

// Canonical state (events excluded). Floats are 12-significant-digit strings.
json state_to_json(const Session& s);
Session state_from_json(const json& j);
std::string canonical(const Session& s);

// Applies one event to the state; used both live and during replay.
void apply(Session& s, const Event& e);
Session replay(const std::vector<Event>& events);

json event_to_json(const Event& e);
Event event_from_json(const json& j);

}  // namespace empathic::session
