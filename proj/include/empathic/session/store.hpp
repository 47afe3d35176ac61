#pragma once

// One session per directory: session.json, events.ndjson, exports/.

#include "empathic/session/session.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace empathic::session {

namespace fs = std::filesystem;

struct SessionSummary {
    std::string id;
    Phase phase = Phase::IntrinsicElicitation;
    int n = 0;
    int m = 0;
    std::size_t statements = 0;
    std::size_t networks = 0;
    std::size_t events = 0;
};

// Advisory single-writer lock (lock file created with O_EXCL).
class SessionLock {
public:
    explicit SessionLock(const fs::path& dir);  // throws ConflictError when held
    ~SessionLock();
    SessionLock(const SessionLock&) = delete;
    SessionLock& operator=(const SessionLock&) = delete;

private:
    fs::path path_;
};

// Writes `content` to `path` via a temporary file and rename.
void atomic_write(const fs::path& path, const std::string& content);

std::string checksum(const std::string& canonical_state);

// Stand-alone session directory helpers (the CLI works on a single directory).
void save_dir(const fs::path& dir, const Session& s);
Session load_dir(const fs::path& dir);
bool is_session_dir(const fs::path& dir);

class SessionStore {
public:
    explicit SessionStore(fs::path root);

    const fs::path& root() const { return root_; }
    fs::path dir(const std::string& id) const;
    bool exists(const std::string& id) const;

    void save(const Session& s) const;
    Session load(const std::string& id) const;  // NotFoundError, CorruptError
    std::vector<SessionSummary> list() const;

private:
    fs::path root_;
};

bool valid_session_id(const std::string& id);

}  // namespace empathic::session
