#pragma once

// JSON codecs. External indices are 1-based.

#include "empathic/session/session.hpp"

namespace empathic::session::codec {

enum class FloatStyle { String, Number };

json num(double v, FloatStyle st = FloatStyle::String);
double get_num(const json& j);
std::string format_float(double v);  // %.12g, "inf"/"-inf"/"nan"

json thresholds_to_json(const core::Thresholds& t, FloatStyle st = FloatStyle::String);
core::Thresholds thresholds_from_json(const json& j, core::Thresholds base = {});

json panel_to_json(const Panel& p);
Panel panel_from_json(const json& j);

json judgment_to_json(const judgment::FuzzyJudgmentMatrix& r, FloatStyle st = FloatStyle::String);
judgment::FuzzyJudgmentMatrix judgment_from_json(const json& j);

json intrinsic_statement_to_json(const judgment::IntrinsicStatement& s);
judgment::IntrinsicStatement intrinsic_statement_from_json(const json& j);

json statement_to_json(const constraints::EmpathicStatement& s, FloatStyle st = FloatStyle::String);
// Validates field presence and types; index range is checked at assembly.
constraints::EmpathicStatement statement_from_json(const json& j);

json matrix_to_json(const core::EmpathicMatrix& w, FloatStyle st = FloatStyle::String);
core::EmpathicMatrix matrix_from_json(const json& j);

json utility_to_json(const core::UtilityMatrix& u, FloatStyle st = FloatStyle::String);
core::UtilityMatrix utility_from_json(const json& j);

json feasibility_to_json(const constraints::FeasibilityResult& f, FloatStyle st = FloatStyle::String);
constraints::FeasibilityResult feasibility_from_json(const json& j);

json report_to_json(const inconsistency::InconsistencyReport& r);
inconsistency::InconsistencyReport report_from_json(const json& j);

json judgment_report_to_json(const judgment::JudgmentInconsistency& r);
judgment::JudgmentInconsistency judgment_report_from_json(const json& j);

json completion_to_json(const CompletionRecord& c, FloatStyle st = FloatStyle::String);
CompletionRecord completion_from_json(const json& j);

json relations_to_json(const relations::RelationMatrix& r, FloatStyle st = FloatStyle::String);
relations::RelationMatrix relations_from_json(const json& j);

json tree_to_json(const selection::RootedTree& t);
selection::RootedTree tree_from_json(const json& j, int n);

json target_to_json(const selection::TargetSpec& t);
selection::TargetSpec target_from_json(const json& j, int n);

json diagnostics_to_json(const core::NetworkDiagnostics& d, FloatStyle st = FloatStyle::String);

json network_to_json(const SelectedNetwork& n, const core::Thresholds& t, FloatStyle st = FloatStyle::String);
SelectedNetwork network_from_json(const json& j);
SelectedNetwork network_from_result(const std::string& label, const selection::SelectionResult& r);

json welfare_to_json(const welfare::WelfareReport& r, FloatStyle st = FloatStyle::String);
welfare::WelfareReport welfare_from_json(const json& j);

}  // namespace empathic::session::codec
