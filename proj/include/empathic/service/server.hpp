#pragma once

// HTTP front end over the session workflow.

#include "empathic/core/thresholds.hpp"
#include "empathic/session/workflow.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

namespace empathic::service {

struct ServiceConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0: pick a free port
    std::filesystem::path root = "sessions";
    int workers = 2;  // job pool size
    int probe_workers = 0;
    core::Thresholds defaults;
    std::string cors_origin = "*";
    std::optional<std::string> token;  // shared bearer token, when set
    std::size_t idempotency_capacity = 1024;
};

// Reads EMPATHIC_PORT, EMPATHIC_HOST, EMPATHIC_ROOT, EMPATHIC_WORKERS,
// EMPATHIC_CORS_ORIGIN, EMPATHIC_TOKEN, EMPATHIC_EPS_PRIME, EMPATHIC_DELTA,
// EMPATHIC_RHO0, EMPATHIC_BIG_M, EMPATHIC_SEED over `base`.
ServiceConfig config_from_env(ServiceConfig base = {});

class Service {
public:
    explicit Service(ServiceConfig cfg, session::Clock clock = session::utc_now);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // Binds; returns the bound port (useful with port 0).
    int bind();
    // Blocks until stop().
    void run();
    void stop();
    void wait_until_ready() const;

    const ServiceConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace empathic::service
