#pragma once

#include <memory>
#include <string>

#include "npin/env_config.hpp"

namespace npin {

struct TeleopServerOptions {
    std::string bind = "127.0.0.1:8765";  // host:port; port 0 picks a free one
    double tick_hz = 30.0;
    EnvConfig config;  // what each new connection starts with
};

/// WebSocket front end for TeleopSession. One io thread serves every
/// connection; each connection owns its session and tick timer. Plain HTTP
/// requests get a short text description of the protocol.
class TeleopServer {
public:
    explicit TeleopServer(TeleopServerOptions options);
    ~TeleopServer();
    TeleopServer(const TeleopServer&) = delete;
    TeleopServer& operator=(const TeleopServer&) = delete;

    /// Binds and starts serving on a background thread.
    void start();
    /// Blocks until stop() is called (from a signal handler thread, say).
    void wait();
    void stop();
    unsigned short port() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Splits "host:port"; throws ConfigError on anything else.
std::pair<std::string, unsigned short> parse_bind(const std::string& bind);

}  // namespace npin
