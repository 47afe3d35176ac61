#include "empathic_cli.hpp"

#include "empathic/error.hpp"
#include "empathic/session/codec.hpp"
#include "empathic/session/store.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace empathic::cli {

namespace {

using session::json;
using session::Session;
using session::Workflow;
namespace codec = session::codec;
namespace fs = std::filesystem;

struct Options {
    std::string session_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> eps_prime, delta, rho0, big_m;
    bool json_out = false;
    int workers = 0;
    int limit = 32;

    std::string input;
    bool force = false;
    int set = 0;
    std::string target;
    int center = 0;
    std::string direction = "fwd";
    std::string tree_file;
    std::string label;
    std::string networks;
    std::string format;
    std::string network;
    bool global = false;
};

core::EmpathicMatrix network_from_file(const json& j) {
    const json& rows = j.is_array() ? j : j.at("rows");
    core::Rows r;
    for (const auto& row : rows) {
        std::vector<double> v;
        for (const auto& x : row) v.push_back(codec::get_num(x));
        r.push_back(std::move(v));
    }
    // Printed matrices carry a few decimals; rows are renormalized within 1e-3.
    return core::EmpathicMatrix::from_rounded(r);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path, "input");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what(), "input");
    }
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path());
    session::atomic_write(path, text);
}

core::Thresholds overrides(const Options& o, core::Thresholds t) {
    if (o.seed) t.seed = *o.seed;
    if (o.eps_prime) t.eps_prime = *o.eps_prime;
    if (o.delta) t.delta = *o.delta;
    if (o.rho0) t.rho0 = *o.rho0;
    if (o.big_m) t.big_m = *o.big_m;
    return t;
}

bool same(const core::Thresholds& a, const core::Thresholds& b) {
    return codec::thresholds_to_json(a) == codec::thresholds_to_json(b);
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string utility_csv(const core::UtilityMatrix& u) {
    std::string out = "dm";
    for (int s = 0; s < u.m(); ++s) out += ",a" + std::to_string(s + 1);
    out += "\n";
    char buf[32];
    for (int j = 0; j < u.n(); ++j) {
        out += "d" + std::to_string(j + 1);
        for (int s = 0; s < u.m(); ++s) {
            std::snprintf(buf, sizeof buf, ",%.4f", u(j, s));
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string report_text(const inconsistency::InconsistencyReport& r) {
    std::string out;
    for (std::size_t k = 0; k < r.sets.size(); ++k) {
        out += "set " + std::to_string(k + 1) + ":";
        for (const auto& id : r.sets[k]) out += " " + id;
        out += "\n";
    }
    if (!r.exhausted) out += "(enumeration stopped at the limit)\n";
    return out;
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err, session::Clock clock)
        : o_(o), out_(out), err_(err), clock_(std::move(clock)), dir_(o.session_dir) {}

    int init() {
        if (session::is_session_dir(dir_) && !o_.force)
            throw ConflictError("session already exists at " + dir_.string() + " (use --force to replace)");
        const json problem = read_json(o_.input);
        session::SessionLock lock(dir_);
        const std::string id = fs::absolute(dir_).lexically_normal().filename().string();
        Session s = Workflow::import_problem(id.empty() ? "session" : id, problem, overrides(o_, {}), clock_);
        session::save_dir(dir_, s);
        if (o_.json_out) {
            out_ << json({{"id", s.id}, {"phase", to_string(s.phase)}, {"n", s.panel.n}, {"m", s.panel.m},
                          {"statements", s.statements.size()}})
                        .dump(2)
                 << "\n";
        } else {
            out_ << "session " << s.id << ": n=" << s.panel.n << " m=" << s.panel.m << ", "
                 << s.intrinsic_statements.size() << " intrinsic statements, " << s.statements.size()
                 << " empathic statements, phase " << to_string(s.phase) << "\n";
        }
        return kOk;
    }

    template <class F>
    int with_session(F f) {
        session::SessionLock lock(dir_);
        Session s = session::load_dir(dir_);
        Workflow w(s, clock_, o_.workers);
        const auto t = overrides(o_, s.thresholds);
        if (!same(t, s.thresholds)) w.set_thresholds(t);
        int code = kOk;
        try {
            code = f(w, s);
        } catch (...) {
            session::save_dir(dir_, s);
            throw;
        }
        session::save_dir(dir_, s);
        return code;
    }

    int complete() {
        return with_session([&](Workflow& w, Session& s) {
            const auto outcome = w.complete_judgments();
            json report = json::array();
            for (int dm = 0; dm < s.panel.n; ++dm) {
                const auto& rec = outcome.records[dm];
                const auto name = "completion_d" + std::to_string(dm + 1) + ".csv";
                write_text(dir_ / "exports" / name, judgment::completion_csv(rec.result));
                if (rec.inconsistency) {
                    json j = codec::judgment_report_to_json(*rec.inconsistency);
                    j["dm"] = dm + 1;
                    report.push_back(j);
                }
            }
            if (o_.json_out) {
                out_ << session::completion_outcome_to_json(outcome, s.intrinsic).dump(2) << "\n";
            } else {
                char buf[64];
                for (int dm = 0; dm < s.panel.n; ++dm) {
                    const auto& r = outcome.records[dm].result;
                    std::snprintf(buf, sizeof buf, "d%d: %s eps*=%s\n", dm + 1,
                                  r.status == judgment::CompletionStatus::Completed ? "completed" : "inconsistent",
                                  codec::format_float(r.eps_star).c_str());
                    out_ << buf;
                }
            }
            if (!outcome.all_completed()) {
                const auto path = dir_ / "exports" / "judgment_inconsistency.json";
                write_text(path, report.dump(2) + "\n");
                err_ << "judgments inconsistent; report: " << path.string() << "\n";
                return int(kInconsistent);
            }
            return int(kOk);
        });
    }

    int intrinsic() {
        return with_session([&](Workflow& w, Session&) {
            const auto& u = w.compute_intrinsic();
            write_text(dir_ / "exports" / "intrinsic.csv", utility_csv(u));
            if (o_.json_out) out_ << codec::utility_to_json(u, codec::FloatStyle::Number).dump(2) << "\n";
            else out_ << utility_csv(u);
            return int(kOk);
        });
    }

    int add_statements() {
        const json in = read_json(o_.input);
        const json& arr = in.is_object() && in.contains("statements") ? in["statements"] : in;
        if (!arr.is_array()) throw ValidationError("expected an array of statements", "statements");
        std::vector<constraints::EmpathicStatement> v;
        for (const auto& st : arr) v.push_back(codec::statement_from_json(st));
        return with_session([&](Workflow& w, Session& s) {
            w.add_statements(v);
            out_ << (o_.json_out ? json({{"statements", s.statements.size()}}).dump(2)
                                 : std::to_string(s.statements.size()) + " statements")
                 << "\n";
            return int(kOk);
        });
    }

    int report(const session::CheckOutcome& c) {
        if (o_.json_out) {
            out_ << session::check_to_json(c).dump(2) << "\n";
        } else if (c.feasibility.unbounded()) {
            out_ << "consistent: eps* unbounded\n";
        } else if (c.feasibility.status == solver::SolveStatus::Optimal) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s: eps*=%.4f\n", c.consistent() ? "consistent" : "inconsistent",
                          c.feasibility.eps_star);
            out_ << buf;
        } else {
            out_ << "inconsistent: infeasible\n";
        }
        if (c.consistent()) return kOk;
        const auto path = dir_ / "exports" / "inconsistencies.json";
        write_text(path, codec::report_to_json(*c.report).dump(2) + "\n");
        if (!o_.json_out) out_ << report_text(*c.report);
        err_ << "statement system inconsistent; report: " << path.string() << "\n";
        return kInconsistent;
    }

    int check() {
        return with_session([&](Workflow& w, Session&) { return report(w.check(o_.limit)); });
    }

    int resolve() {
        return with_session([&](Workflow& w, Session&) { return report(w.resolve(o_.set, o_.limit)); });
    }

    int relations() {
        return with_session([&](Workflow& w, Session&) {
            const auto& r = w.relations();
            const std::string csv = relations::to_csv(r);
            write_text(dir_ / "exports" / "relations.csv", csv);
            if (o_.json_out) out_ << codec::relations_to_json(r, codec::FloatStyle::Number).dump(2) << "\n";
            else out_ << csv;
            return int(kOk);
        });
    }

    int select() {
        return with_session([&](Workflow& w, Session& s) {
            json spec = {{"kind", o_.target}, {"direction", o_.direction}};
            if (o_.center > 0) spec["center"] = o_.center;
            if (!o_.tree_file.empty()) spec["tree"] = read_json(o_.tree_file);
            const auto target = codec::target_from_json(spec, s.panel.n);
            const auto& net = w.select(target, o_.label);
            const json j = codec::network_to_json(net, s.thresholds, codec::FloatStyle::Number);
            write_text(dir_ / "exports" / ("network_" + net.label + ".json"), j.dump(2) + "\n");
            out_ << j.dump(2) << "\n";
            return int(kOk);
        });
    }

    int import_network() {
        const auto w = network_from_file(read_json(o_.input));
        return with_session([&](Workflow& wf, Session& s) {
            const auto& net = wf.import_network(o_.label, w, o_.global);
            out_ << codec::network_to_json(net, s.thresholds, codec::FloatStyle::Number).dump(2) << "\n";
            return int(kOk);
        });
    }

    int welfare() {
        return with_session([&](Workflow& w, Session&) {
            const auto& r = w.welfare(split(o_.networks));
            const std::string csv = welfare::to_csv(r);
            write_text(dir_ / "exports" / "welfare.csv", csv);
            if (o_.json_out) out_ << codec::welfare_to_json(r, codec::FloatStyle::Number).dump(2) << "\n";
            else out_ << csv;
            return int(kOk);
        });
    }

    int export_() {
        session::SessionLock lock(dir_);
        const Session s = session::load_dir(dir_);
        const auto file = session::render_export(s, o_.format, o_.network);
        write_text(dir_ / "exports" / file.name, file.text);
        out_ << file.text;
        return kOk;
    }

private:
    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
    session::Clock clock_;
    fs::path dir_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, session::Clock clock) {
    CLI::App app{"Empathic network learning for group decisions"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--session", o.session_dir, "Session directory")->required();
    app.add_option("--seed", o.seed, "Multistart seed");
    app.add_option("--eps-prime", o.eps_prime, "Smallest meaningful intensity");
    app.add_option("--delta", o.delta, "Distributed tolerance");
    app.add_option("--rho0", o.rho0, "Density threshold");
    app.add_option("--big-m", o.big_m, "Big-M constant");
    app.add_option("--workers", o.workers, "Worker threads for relation probes (0 = auto)");
    app.add_option("--limit", o.limit, "Maximum number of inconsistent sets to enumerate");
    app.add_flag("--json", o.json_out, "Machine-readable output");

    auto* init = app.add_subcommand("init", "Create a session from a problem file");
    init->add_option("--input", o.input, "Problem JSON")->required()->check(CLI::ExistingFile);
    init->add_flag("--force", o.force, "Replace an existing session");
    auto* complete = app.add_subcommand("complete-judgments", "Complete every expert's judgment matrix");
    auto* intrinsic = app.add_subcommand("intrinsic", "Derive intrinsic utilities from the completed judgments");
    auto* add = app.add_subcommand("add-statements", "Append empathic statements");
    add->add_option("--input", o.input, "JSON array of statements")->required()->check(CLI::ExistingFile);
    auto* check = app.add_subcommand("check", "Feasibility and inconsistency report");
    auto* resolve = app.add_subcommand("resolve", "Drop one inconsistent set of statements");
    resolve->add_option("--set", o.set, "Set index from the report (1-based)")->required();
    auto* rel = app.add_subcommand("relations", "Necessary and possible relations for every pair");
    auto* sel = app.add_subcommand("select", "Select a representative network");
    sel->add_option("--target", o.target, "Target network")
        ->required()
        ->check(CLI::IsMember({"discriminating", "sparse", "central", "distributed", "resilient-local",
                               "resilient-global", "resilient-global-reverse", "star", "bus", "tree"}));
    sel->add_option("--center", o.center, "Star center (1-based)");
    sel->add_option("--direction", o.direction, "Bus or cycle direction")->check(CLI::IsMember({"fwd", "rev"}));
    sel->add_option("--tree", o.tree_file, "Rooted tree JSON")->check(CLI::ExistingFile);
    sel->add_option("--label", o.label, "Name under which the network is stored");
    auto* imp = app.add_subcommand("import-network", "Store an externally supplied weight matrix");
    imp->add_option("--label", o.label, "Network label")->required();
    imp->add_option("--input", o.input, "Matrix JSON ({rows: [...]} or a bare array)")->required()->check(CLI::ExistingFile);
    imp->add_flag("--global", o.global, "Score welfare through the global matrix G");
    auto* wel = app.add_subcommand("welfare", "Social welfare with and without the selected networks");
    wel->add_option("--networks", o.networks, "Comma-separated network labels (default: all)");
    auto* exp = app.add_subcommand("export", "Write an export file");
    exp->add_option("--format", o.format, "dot, csv or json")->required()->check(CLI::IsMember({"dot", "csv", "json"}));
    exp->add_option("--network", o.network, "Network label (csv: 'relations' for the relation table)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    Runner r(o, out, err, std::move(clock));
    try {
        if (init->parsed()) return r.init();
        if (complete->parsed()) return r.complete();
        if (intrinsic->parsed()) return r.intrinsic();
        if (add->parsed()) return r.add_statements();
        if (check->parsed()) return r.check();
        if (resolve->parsed()) return r.resolve();
        if (rel->parsed()) return r.relations();
        if (sel->parsed()) return r.select();
        if (imp->parsed()) return r.import_network();
        if (wel->parsed()) return r.welfare();
        if (exp->parsed()) return r.export_();
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << "\n";
        return kInconsistent;
    } catch (const ValidationError& e) {
        err << "invalid " << e.field() << ": " << e.what() << "\n";
        return kUsage;
    } catch (const ConflictError& e) {
        err << "conflict: " << e.what() << "\n";
        return kUsage;
    } catch (const NotFoundError& e) {
        err << "not found: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kUsage;
}

}  // namespace empathic::cli
