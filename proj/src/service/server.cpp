#include "empathic/service/server.hpp"

#include "empathic/error.hpp"
#include "empathic/session/codec.hpp"
#include "empathic/session/store.hpp"

#include <httplib.h>

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <thread>

namespace empathic::service {

namespace {

using session::json;
using session::Session;
using session::Workflow;
namespace codec = session::codec;

constexpr const char* kSessionId = "([A-Za-z0-9_-]+)";

struct Reply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::string location;
};

Reply ok(const json& j, int status = 200) { return {status, j.dump(2) + "\n", "application/json", {}}; }

Reply error_reply(int status, const std::string& code, const std::string& message, const json& extra = json::object()) {
    json e = {{"code", code}, {"message", message}};
    e.update(extra);
    return ok(json{{"error", e}}, status);
}

std::string random_hex(std::size_t digits) {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard<std::mutex> lock(mu);
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (std::size_t k = 0; k < digits; ++k) s += hex[rng() % 16];
    return s;
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    try {
        return json::parse(req.body);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("request body is not valid JSON: ") + e.what(), "body");
    }
}

const json& list_field(const json& body, const char* name) {
    if (body.is_array()) return body;
    if (body.is_object() && body.contains(name) && body[name].is_array()) return body[name];
    throw ValidationError(std::string("expected an array or {\"") + name + "\": [...]}", name);
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto end = s.find(',', start);
        const auto item = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
        if (!item.empty()) out.push_back(item);
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

class JobPool {
public:
    explicit JobPool(int workers) {
        for (int k = 0; k < std::max(1, workers); ++k) threads_.emplace_back([this] { loop(); });
    }
    ~JobPool() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            stop_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }
    void submit(std::function<void()> f) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            queue_.push_back(std::move(f));
        }
        cv_.notify_one();
    }

private:
    void loop() {
        for (;;) {
            std::function<void()> f;
            {
                std::unique_lock<std::mutex> lock(mu_);
                cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
                if (stop_ && queue_.empty()) return;
                f = std::move(queue_.front());
                queue_.pop_front();
            }
            f();
        }
    }

    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<std::function<void()>> queue_;
    std::vector<std::thread> threads_;
    bool stop_ = false;
};

struct Job {
    std::string id;
    std::string kind;
    std::string session;
    std::string status = "queued";  // queued | running | done | failed
    int http_status = 0;
    json result;
};

struct Cached {
    std::uint64_t request_hash = 0;
    Reply reply;
};

}  // namespace

ServiceConfig config_from_env(ServiceConfig c) {
    auto env = [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (!v || !*v) return std::nullopt;
        return std::string(v);
    };
    if (auto v = env("EMPATHIC_HOST")) c.host = *v;
    if (auto v = env("EMPATHIC_PORT")) c.port = std::stoi(*v);
    if (auto v = env("EMPATHIC_ROOT")) c.root = *v;
    if (auto v = env("EMPATHIC_WORKERS")) c.workers = std::stoi(*v);
    if (auto v = env("EMPATHIC_CORS_ORIGIN")) c.cors_origin = *v;
    if (auto v = env("EMPATHIC_TOKEN")) c.token = *v;
    if (auto v = env("EMPATHIC_EPS_PRIME")) c.defaults.eps_prime = std::stod(*v);
    if (auto v = env("EMPATHIC_DELTA")) c.defaults.delta = std::stod(*v);
    if (auto v = env("EMPATHIC_RHO0")) c.defaults.rho0 = std::stod(*v);
    if (auto v = env("EMPATHIC_BIG_M")) c.defaults.big_m = std::stod(*v);
    if (auto v = env("EMPATHIC_SEED")) c.defaults.seed = std::stoull(*v);
    return c;
}

struct Service::Impl {
    ServiceConfig cfg;
    session::Clock clock;
    session::SessionStore store;
    httplib::Server http;
    JobPool pool;
    int port = 0;

    std::mutex sessions_mu;
    std::map<std::string, std::shared_ptr<std::mutex>> session_mu;

    std::mutex jobs_mu;
    std::map<std::string, Job> jobs;

    std::mutex idem_mu;
    std::map<std::string, Cached> idem;
    std::deque<std::string> idem_order;

    Impl(ServiceConfig c, session::Clock k)
        : cfg(std::move(c)), clock(std::move(k)), store(cfg.root), pool(cfg.workers) {
        routes();
    }

    std::shared_ptr<std::mutex> lock_for(const std::string& id) {
        std::lock_guard<std::mutex> lock(sessions_mu);
        auto& m = session_mu[id];
        if (!m) m = std::make_shared<std::mutex>();
        return m;
    }

    Session read(const std::string& id) { return store.load(id); }

    // Serialized per session: in-process mutex, then the advisory file lock
    // (which also fences off a concurrent CLI writer).
    template <class F>
    auto mutate(const std::string& id, F f) {
        if (!store.exists(id)) throw NotFoundError("unknown session '" + id + "'");
        const auto m = lock_for(id);
        std::lock_guard<std::mutex> guard(*m);
        session::SessionLock file_lock(store.dir(id));
        Session s = store.load(id);
        Workflow w(s, clock, cfg.probe_workers);
        const std::size_t before = s.events.size();
        try {
            auto r = f(w, s);
            if (s.events.size() != before) store.save(s);
            return r;
        } catch (...) {
            if (s.events.size() != before) store.save(s);
            throw;
        }
    }

    Reply map_exception() {
        try {
            throw;
        } catch (const ValidationError& e) {
            return error_reply(422, "invalid", e.what(), {{"field", e.field()}});
        } catch (const NotFoundError& e) {
            return error_reply(404, "not_found", e.what());
        } catch (const ConflictError& e) {
            return error_reply(409, "conflict", e.what());
        } catch (const PreconditionError& e) {
            return error_reply(409, "conflict", e.what());
        } catch (const InfeasibleError& e) {
            return error_reply(409, "infeasible", e.what());
        } catch (const json::exception& e) {
            return error_reply(422, "invalid", std::string("malformed payload: ") + e.what(), {{"field", "body"}});
        } catch (const std::exception& e) {
            const std::string incident = random_hex(12);
            std::cerr << "incident " << incident << ": " << e.what() << std::endl;
            return error_reply(500, "internal", "solver or storage failure", {{"incident", incident}});
        }
    }

    bool authorized(const httplib::Request& req) const {
        if (!cfg.token) return true;
        return req.get_header_value("Authorization") == "Bearer " + *cfg.token;
    }

    void send(httplib::Response& res, const Reply& r) {
        res.status = r.status;
        if (!r.location.empty()) res.set_header("Location", r.location);
        res.set_content(r.body, r.content_type);
    }

    using Handler = std::function<Reply(const httplib::Request&)>;

    httplib::Server::Handler wrap(const std::string& method, Handler h, bool mutating) {
        return [this, method, h, mutating](const httplib::Request& req, httplib::Response& res) {
            if (!authorized(req)) {
                send(res, error_reply(401, "unauthorized", "missing or invalid bearer token"));
                return;
            }
            const std::string key = req.get_header_value("Idempotency-Key");
            const bool idempotent = mutating && !key.empty();
            const std::string slot = method + " " + req.path + " " + key;
            const std::uint64_t hash = constraints::fnv1a(req.body);
            if (idempotent) {
                std::lock_guard<std::mutex> lock(idem_mu);
                const auto it = idem.find(slot);
                if (it != idem.end()) {
                    if (it->second.request_hash != hash) {
                        send(res, error_reply(422, "invalid", "Idempotency-Key reused with a different body",
                                              {{"field", "Idempotency-Key"}}));
                    } else {
                        send(res, it->second.reply);
                        res.set_header("Idempotent-Replayed", "true");
                    }
                    return;
                }
            }
            Reply r;
            try {
                r = h(req);
            } catch (...) {
                r = map_exception();
            }
            if (idempotent && r.status < 500) {
                std::lock_guard<std::mutex> lock(idem_mu);
                if (idem.emplace(slot, Cached{hash, r}).second) idem_order.push_back(slot);
                while (idem_order.size() > cfg.idempotency_capacity) {
                    idem.erase(idem_order.front());
                    idem_order.pop_front();
                }
            }
            send(res, r);
        };
    }

    void get(const std::string& pattern, Handler h, bool mutating = false) {
        http.Get(pattern, wrap("GET", std::move(h), mutating));
    }
    void post(const std::string& pattern, Handler h) { http.Post(pattern, wrap("POST", std::move(h), true)); }
    void put(const std::string& pattern, Handler h) { http.Put(pattern, wrap("PUT", std::move(h), true)); }
    void del(const std::string& pattern, Handler h) { http.Delete(pattern, wrap("DELETE", std::move(h), true)); }

    Reply submit(const std::string& session_id, const std::string& kind,
                 std::function<json(Workflow&, Session&)> work) {
        if (!store.exists(session_id)) throw NotFoundError("unknown session '" + session_id + "'");
        Job job;
        job.id = random_hex(16);
        job.kind = kind;
        job.session = session_id;
        {
            std::lock_guard<std::mutex> lock(jobs_mu);
            jobs[job.id] = job;
        }
        const std::string id = job.id;
        pool.submit([this, id, session_id, work] {
            {
                std::lock_guard<std::mutex> lock(jobs_mu);
                jobs[id].status = "running";
            }
            Reply r;
            try {
                r = ok(mutate(session_id, work));
            } catch (...) {
                r = map_exception();
            }
            std::lock_guard<std::mutex> lock(jobs_mu);
            auto& j = jobs[id];
            j.status = r.status < 400 ? "done" : "failed";
            j.http_status = r.status;
            j.result = json::parse(r.body);
        });
        Reply r = ok({{"job", id}, {"status", "queued"}, {"poll", "/jobs/" + id}}, 202);
        r.location = "/jobs/" + id;
        return r;
    }

    static bool async_flag(const httplib::Request& req, bool fallback) {
        if (!req.has_param("async")) return fallback;
        const auto v = req.get_param_value("async");
        return v == "1" || v == "true";
    }

    static void gate(const Session& s) {
        if (!s.feasibility)
            throw ConflictError("feasibility not established; GET /sessions/" + s.id +
                                "/feasibility (or /inconsistencies) first");
        if (!s.feasible())
            throw ConflictError("statement system is inconsistent; choose a resolution from /sessions/" + s.id +
                                "/inconsistencies");
    }

    json feasibility_view(const Session& s) {
        session::CheckOutcome c;
        c.feasibility = *s.feasibility;
        c.report = s.inconsistencies;
        return session::check_to_json(c);
    }

    json relations_view(const Session& s) { return codec::relations_to_json(*s.relations, codec::FloatStyle::Number); }

    void routes() {
        http.set_default_headers({{"Access-Control-Allow-Origin", cfg.cors_origin},
                                  {"Access-Control-Expose-Headers", "Location, Idempotent-Replayed"}});
        http.Options(".*", [this](const httplib::Request&, httplib::Response& res) {
            res.status = 204;
            res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type, Authorization, Idempotency-Key");
            res.set_header("Access-Control-Max-Age", "600");
            (void)cfg;
        });

        const std::string S = std::string("/sessions/") + kSessionId;

        get("/health", [](const httplib::Request&) { return ok({{"status", "ok"}}); });

        get("/sessions", [this](const httplib::Request&) {
            json arr = json::array();
            for (const auto& s : store.list())
                arr.push_back({{"id", s.id}, {"phase", to_string(s.phase)}, {"n", s.n}, {"m", s.m},
                               {"statements", s.statements}, {"networks", s.networks}, {"events", s.events}});
            return ok({{"sessions", arr}});
        });

        post("/sessions", [this](const httplib::Request& req) {
            json body = parse_body(req);
            if (!body.is_object()) throw ValidationError("body must be an object", "body");
            std::string id = body.value("id", std::string());
            if (id.empty()) id = "s-" + random_hex(12);
            if (!session::valid_session_id(id))
                throw ValidationError("session id may only contain letters, digits, '-' and '_'", "id");
            const auto m = lock_for(id);
            std::lock_guard<std::mutex> guard(*m);
            if (store.exists(id)) throw ConflictError("session '" + id + "' already exists");
            session::SessionLock file_lock(store.dir(id));
            Session s = Workflow::import_problem(id, body, cfg.defaults, clock);
            store.save(s);
            Reply r = ok(session::state_to_json(s), 201);
            r.location = "/sessions/" + id;
            return r;
        });

        get(S, [this](const httplib::Request& req) { return ok(session::state_to_json(read(req.matches[1]))); });

        get(S + "/events", [this](const httplib::Request& req) {
            json arr = json::array();
            for (const auto& e : read(req.matches[1]).events) arr.push_back(session::event_to_json(e));
            return ok({{"events", arr}});
        });

        put(S + R"(/judgments/(\d+))", [this](const httplib::Request& req) {
            const json body = parse_body(req);
            const int dm = std::stoi(req.matches[2]) - 1;
            const auto r = codec::judgment_from_json(body.is_array() ? json{{"rows", body}} : body);
            return mutate(req.matches[1], [&](Workflow& w, Session& s) {
                w.set_judgment(dm, r);
                return ok({{"dm", dm + 1}, {"judgment", codec::judgment_to_json(*s.judgments[dm], codec::FloatStyle::Number)}});
            });
        });

        put(S + "/thresholds", [this](const httplib::Request& req) {
            const json body = parse_body(req);
            return mutate(req.matches[1], [&](Workflow& w, Session& s) {
                w.set_thresholds(codec::thresholds_from_json(body, s.thresholds));
                return ok(codec::thresholds_to_json(s.thresholds, codec::FloatStyle::Number));
            });
        });

        post(S + "/intrinsic-statements", [this](const httplib::Request& req) {
            const json body = parse_body(req);
            std::vector<judgment::IntrinsicStatement> v;
            for (const auto& st : list_field(body, "statements")) v.push_back(codec::intrinsic_statement_from_json(st));
            return mutate(req.matches[1], [&](Workflow& w, Session& s) {
                w.add_intrinsic_statements(v);
                json arr = json::array();
                for (const auto& st : s.intrinsic_statements) arr.push_back(codec::intrinsic_statement_to_json(st));
                return ok({{"intrinsic_statements", arr}});
            });
        });

        del(S + "/intrinsic-statements/([A-Za-z0-9_.-]+)", [this](const httplib::Request& req) {
            const std::string sid = req.matches[2];
            return mutate(req.matches[1], [&](Workflow& w, Session& s) {
                w.remove_intrinsic_statements({sid});
                return ok({{"removed", sid}, {"remaining", s.intrinsic_statements.size()}});
            });
        });

        post(S + "/complete", [this](const httplib::Request& req) {
            return mutate(req.matches[1], [&](Workflow& w, Session& s) {
                const auto outcome = w.complete_judgments();
                if (outcome.all_completed()) w.compute_intrinsic();
                return ok(session::completion_outcome_to_json(outcome, s.intrinsic));
            });
        });

        post(S + "/statements", [this](const httplib::Request& req) {
            const json body = parse_body(req);
            std::vector<constraints::EmpathicStatement> v;
            const auto& arr = list_field(body, "statements");
            for (std::size_t k = 0; k < arr.size(); ++k) v.push_back(codec::statement_from_json(arr[k]));
            return mutate(req.matches[1], [&](Workflow& w, Session& s) {
                w.add_statements(v);
                json out = json::array();
                for (const auto& st : s.statements) out.push_back(codec::statement_to_json(st, codec::FloatStyle::Number));
                return ok({{"statements", out}});
            });
        });

        get(S + "/statements", [this](const httplib::Request& req) {
            json out = json::array();
            for (const auto& st : read(req.matches[1]).statements)
                out.push_back(codec::statement_to_json(st, codec::FloatStyle::Number));
            return ok({{"statements", out}});
        });

        get(
            S + "/feasibility",
            [this](const httplib::Request& req) {
                const Session cur = read(req.matches[1]);
                if (cur.feasibility) return ok(feasibility_view(cur));
                return mutate(req.matches[1], [&](Workflow& w, Session&) { return ok(session::check_to_json(w.check())); });
            },
            true);

        get(
            S + "/inconsistencies",
            [this](const httplib::Request& req) {
                Session cur = read(req.matches[1]);
                if (!cur.feasibility)
                    cur = mutate(req.matches[1], [&](Workflow& w, Session& s) {
                        w.check();
                        return s;
                    });
                if (cur.inconsistencies) return ok(codec::report_to_json(*cur.inconsistencies));
                return ok(codec::report_to_json(inconsistency::InconsistencyReport{}));
            },
            true);

        post(S + "/resolutions", [this](const httplib::Request& req) {
            const json body = parse_body(req);
            if (!body.is_object() || !body.contains("set") || !body["set"].is_number_integer())
                throw ValidationError("body must be {\"set\": <1-based set index>}", "set");
            const int k = body["set"].get<int>();
            return mutate(req.matches[1], [&](Workflow& w, Session&) { return ok(session::check_to_json(w.resolve(k))); });
        });

        get(
            S + "/relations",
            [this](const httplib::Request& req) {
                const Session cur = read(req.matches[1]);
                if (cur.relations) return ok(relations_view(cur));
                gate(cur);
                return mutate(req.matches[1], [&](Workflow& w, Session& s) {
                    w.relations();
                    return ok(relations_view(s));
                });
            },
            true);

        post(S + "/relations", [this](const httplib::Request& req) {
            const std::string id = req.matches[1];
            gate(read(id));
            return submit(id, "relations", [this](Workflow& w, Session& s) {
                w.relations();
                return relations_view(s);
            });
        });

        post(S + "/select", [this](const httplib::Request& req) {
            const json body = parse_body(req);
            const std::string id = req.matches[1];
            const Session cur = read(id);
            const json& spec = body.is_object() && body.contains("target") ? body["target"] : body;
            const auto target = codec::target_from_json(spec, cur.panel.n);
            const std::string label = body.is_object() ? body.value("label", std::string()) : std::string();
            auto work = [this, target, label](Workflow& w, Session& s) {
                const auto& net = w.select(target, label);
                return codec::network_to_json(net, s.thresholds, codec::FloatStyle::Number);
            };
            gate(cur);
            if (async_flag(req, target.kind == selection::TargetKind::Central)) return submit(id, "select", work);
            return mutate(id, [&](Workflow& w, Session& s) { return ok(work(w, s)); });
        });

        get(S + "/networks", [this](const httplib::Request& req) {
            const Session s = read(req.matches[1]);
            json out = json::object();
            for (const auto& [label, net] : s.networks)
                out[label] = codec::network_to_json(net, s.thresholds, codec::FloatStyle::Number);
            return ok({{"networks", out}});
        });

        put(S + "/networks/([A-Za-z0-9_.-]+)", [this](const httplib::Request& req) {
            const json body = parse_body(req);
            const std::string label = req.matches[2];
            const json& m = body.is_object() && body.contains("matrix") ? body["matrix"] : body;
            const json& rows = m.is_array() ? m : m.at("rows");
            core::Rows r;
            for (const auto& row : rows) {
                std::vector<double> v;
                for (const auto& x : row) v.push_back(codec::get_num(x));
                r.push_back(std::move(v));
            }
            const auto w = core::EmpathicMatrix::from_rounded(r);
            const bool global = body.is_object() && body.value("global", false);
            return mutate(req.matches[1], [&](Workflow& wf, Session& s) {
                const auto& net = wf.import_network(label, w, global);
                return ok(codec::network_to_json(net, s.thresholds, codec::FloatStyle::Number));
            });
        });

        get(S + "/networks/([A-Za-z0-9_.-]+)", [this](const httplib::Request& req) {
            const Session s = read(req.matches[1]);
            const auto it = s.networks.find(req.matches[2]);
            if (it == s.networks.end()) throw NotFoundError("unknown network '" + std::string(req.matches[2]) + "'");
            return ok(codec::network_to_json(it->second, s.thresholds, codec::FloatStyle::Number));
        });

        get(
            S + "/welfare",
            [this](const httplib::Request& req) {
                const auto labels = req.has_param("networks") ? split(req.get_param_value("networks"))
                                                              : std::vector<std::string>{};
                return mutate(req.matches[1], [&](Workflow& w, Session&) {
                    return ok(codec::welfare_to_json(w.welfare(labels), codec::FloatStyle::Number));
                });
            },
            true);

        get(S + "/export", [this](const httplib::Request& req) {
            const Session s = read(req.matches[1]);
            const std::string format = req.has_param("format") ? req.get_param_value("format") : "";
            const std::string network = req.has_param("network") ? req.get_param_value("network") : "";
            const auto file = session::render_export(s, format, network);
            Reply r;
            r.body = file.text;
            r.content_type = file.content_type;
            return r;
        });

        get("/jobs/([0-9a-f]+)", [this](const httplib::Request& req) {
            std::lock_guard<std::mutex> lock(jobs_mu);
            const auto it = jobs.find(req.matches[1]);
            if (it == jobs.end()) throw NotFoundError("unknown job '" + std::string(req.matches[1]) + "'");
            const Job& j = it->second;
            json out = {{"id", j.id}, {"kind", j.kind}, {"session", j.session}, {"status", j.status}};
            if (j.status == "done") out["result"] = j.result;
            if (j.status == "failed") {
                out["http_status"] = j.http_status;
                out["error"] = j.result.value("error", json::object());
            }
            return ok(out);
        });
    }
};

Service::Service(ServiceConfig cfg, session::Clock clock) : impl_(std::make_unique<Impl>(std::move(cfg), std::move(clock))) {}

Service::~Service() { stop(); }

int Service::bind() {
    auto& i = *impl_;
    if (i.cfg.port == 0) i.port = i.http.bind_to_any_port(i.cfg.host);
    else i.port = i.http.bind_to_port(i.cfg.host, i.cfg.port) ? i.cfg.port : -1;
    if (i.port < 0) throw Error("cannot bind " + i.cfg.host + ":" + std::to_string(i.cfg.port));
    return i.port;
}

void Service::run() { impl_->http.listen_after_bind(); }

void Service::stop() {
    if (impl_) impl_->http.stop();
}

void Service::wait_until_ready() const { impl_->http.wait_until_ready(); }

const ServiceConfig& Service::config() const { return impl_->cfg; }

}  // namespace empathic::service
