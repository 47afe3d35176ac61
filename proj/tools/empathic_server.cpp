#include "empathic/service/server.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

namespace {
empathic::service::Service* g_service = nullptr;
void on_signal(int) {
    if (g_service) g_service->stop();
}
}  // namespace

int main(int argc, char** argv) {
    auto cfg = empathic::service::config_from_env();
    std::string root = cfg.root.string();
    CLI::App app{"Empathic session service"};
    app.add_option("--host", cfg.host, "Bind address");
    app.add_option("--port", cfg.port, "Port (0 picks a free one)");
    app.add_option("--root", root, "Session storage root");
    app.add_option("--workers", cfg.workers, "Job worker threads");
    app.add_option("--probe-workers", cfg.probe_workers, "Threads per relation matrix (0 = auto)");
    app.add_option("--cors-origin", cfg.cors_origin, "Allowed UI origin");
    app.add_option("--eps-prime", cfg.defaults.eps_prime, "Default eps'");
    app.add_option("--delta", cfg.defaults.delta, "Default distributed tolerance");
    app.add_option("--rho0", cfg.defaults.rho0, "Default density threshold");
    app.add_option("--seed", cfg.defaults.seed, "Default multistart seed");
    CLI11_PARSE(app, argc, argv);
    cfg.root = root;

    try {
        empathic::service::Service svc(cfg);
        g_service = &svc;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        const int port = svc.bind();
        std::cout << "listening on " << cfg.host << ":" << port << " (root " << cfg.root.string() << ")" << std::endl;
        svc.run();
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
