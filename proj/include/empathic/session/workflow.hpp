#pragma once

// Session operations shared by the CLI and the HTTP service. Every mutation
// builds an event and applies it through apply(), so a live session and a
// replayed one take the same code path.

#include "empathic/session/session.hpp"

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace empathic::session {

using Clock = std::function<std::string()>;

// ISO-8601 UTC, second resolution.
std::string utc_now();

struct CheckOutcome {
    constraints::FeasibilityResult feasibility;
    std::optional<inconsistency::InconsistencyReport> report;
    bool consistent() const { return feasibility.consistent(); }
};

struct CompletionOutcome {
    std::vector<CompletionRecord> records;  // one per expert
    bool all_completed() const;
};

// Response shapes shared by the CLI (--json) and the service.
json check_to_json(const CheckOutcome& c);
json completion_outcome_to_json(const CompletionOutcome& c, const std::optional<core::UtilityMatrix>& intrinsic);

struct ExportFile {
    std::string name;
    std::string content_type;
    std::string text;
};

// format: dot | json (network matrix, needs `network`) or csv (welfare table;
// network == "relations" for the relation table).
ExportFile render_export(const Session& s, const std::string& format, const std::string& network);

class Workflow {
public:
    explicit Workflow(Session& s, Clock clock = utc_now, int workers = 0);

    static Session create(const std::string& id, const Panel& panel, const core::Thresholds& t,
                          Clock clock = utc_now);
    // Problem file: {panel, thresholds?, judgments?, intrinsic?, intrinsic_statements?, statements?}.
    static Session import_problem(const std::string& id, const json& problem, const core::Thresholds& base,
                                  Clock clock = utc_now);

    Session& session() { return s_; }

    void set_judgment(int dm, const judgment::FuzzyJudgmentMatrix& r);
    void add_intrinsic_statements(const std::vector<judgment::IntrinsicStatement>& stmts);
    void remove_intrinsic_statements(const std::set<std::string>& ids);
    CompletionOutcome complete_judgments();
    const core::UtilityMatrix& compute_intrinsic();
    void set_intrinsic(const core::UtilityMatrix& u);

    void add_statements(const std::vector<constraints::EmpathicStatement>& stmts);
    void set_thresholds(const core::Thresholds& t);

    constraints::ConstraintSystem system() const;
    CheckOutcome check(int limit = 32);
    // Drops the statements of inconsistent set k (1-based) and re-checks.
    CheckOutcome resolve(int k, int limit = 32);
    const relations::RelationMatrix& relations();
    const SelectedNetwork& select(const selection::TargetSpec& target, const std::string& label = {});
    // Stores an externally supplied network; `global` also derives G.
    const SelectedNetwork& import_network(const std::string& label, const core::EmpathicMatrix& w, bool global);
    // Empty labels: every stored network in label order.
    const welfare::WelfareReport& welfare(const std::vector<std::string>& labels = {});

    void require_feasible() const;

private:
    void emit(const std::string& type, json payload);

    Session& s_;
    Clock clock_;
    int workers_;
};

}  // namespace empathic::session
