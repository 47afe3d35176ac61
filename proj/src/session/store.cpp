#include "empathic/session/store.hpp"

#include "empathic/constraints/system.hpp"
#include "empathic/error.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace empathic::session {

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw NotFoundError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

SessionLock::SessionLock(const fs::path& dir) : path_(dir / ".lock") {
    fs::create_directories(dir);
    const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) throw ConflictError("session " + dir.filename().string() + " is locked by another writer");
    const std::string pid = std::to_string(::getpid()) + "\n";
    if (::write(fd, pid.data(), pid.size()) < 0) {
        // The lock still holds; the pid is informational.
    }
    ::close(fd);
}

SessionLock::~SessionLock() {
    std::error_code ec;
    fs::remove(path_, ec);
}

void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw Error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string checksum(const std::string& canonical_state) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(constraints::fnv1a(canonical_state)));
    return buf;
}

bool is_session_dir(const fs::path& dir) { return fs::exists(dir / "session.json"); }

void save_dir(const fs::path& dir, const Session& s) {
    fs::create_directories(dir / "exports");
    const std::string state = canonical(s);
    json doc = {{"format_version", kFormatVersion}, {"checksum", checksum(state)}, {"state", state_to_json(s)}};
    std::string events;
    for (const auto& e : s.events) events += event_to_json(e).dump() + "\n";
    atomic_write(dir / "events.ndjson", events);
    atomic_write(dir / "session.json", doc.dump(2) + "\n");
}

Session load_dir(const fs::path& dir) {
    const fs::path file = dir / "session.json";
    if (!fs::exists(file)) throw NotFoundError("no session at " + dir.string());
    json doc;
    try {
        doc = json::parse(read_file(file));
    } catch (const json::parse_error& e) {
        throw CorruptError("corrupt session file " + file.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("format_version") || !doc.contains("state") || !doc.contains("checksum"))
        throw CorruptError("corrupt session file " + file.string() + ": missing envelope fields");
    if (doc["format_version"] != kFormatVersion)
        throw CorruptError("unsupported session format version " + doc["format_version"].dump() + " (expected " +
                           std::to_string(kFormatVersion) + ")");
    const std::string state = doc["state"].dump(2) + "\n";
    if (doc["checksum"] != checksum(state)) throw CorruptError("checksum mismatch in " + file.string());
    Session s;
    try {
        s = state_from_json(doc["state"]);
    } catch (const json::exception& e) {
        throw CorruptError("corrupt session state in " + file.string() + ": " + e.what());
    }
    const fs::path log = dir / "events.ndjson";
    if (fs::exists(log)) {
        std::istringstream in(read_file(log));
        std::string line;
        try {
            while (std::getline(in, line))
                if (!line.empty()) s.events.push_back(event_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw CorruptError("corrupt event log " + log.string() + ": " + e.what());
        }
    }
    return s;
}

bool valid_session_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
    return true;
}

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
}

fs::path SessionStore::dir(const std::string& id) const {
    if (!valid_session_id(id)) throw NotFoundError("unknown session '" + id + "'");
    return root_ / id;
}

bool SessionStore::exists(const std::string& id) const { return valid_session_id(id) && is_session_dir(root_ / id); }

void SessionStore::save(const Session& s) const { save_dir(dir(s.id), s); }

Session SessionStore::load(const std::string& id) const {
    if (!exists(id)) throw NotFoundError("unknown session '" + id + "'");
    return load_dir(dir(id));
}

std::vector<SessionSummary> SessionStore::list() const {
    std::vector<SessionSummary> out;
    for (const auto& entry : fs::directory_iterator(root_)) {
        if (!entry.is_directory() || !is_session_dir(entry.path())) continue;
        try {
            const Session s = load_dir(entry.path());
            out.push_back({s.id, s.phase, s.panel.n, s.panel.m, s.statements.size(), s.networks.size(), s.events.size()});
        } catch (const Error&) {
            continue;
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

}  // namespace empathic::session
