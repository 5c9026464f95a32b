#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "ponconf/tolerances.hpp"

namespace ponconf::service {

// Solved caustic parameters per (A, B, m, winding). Safe for concurrent use.
class LambdaCache {
public:
    double get(double A, double B, int m, int winding);
    std::size_t size() const;
    std::size_t hits() const { return hits_; }
    std::size_t misses() const { return misses_; }

private:
    using Key = std::tuple<double, double, int, int>;
    mutable std::shared_mutex mutex_;
    std::map<Key, double> values_;
    std::atomic<std::size_t> hits_{0}, misses_{0};
};

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// Handlers are pure apart from the cache; the HTTP layer only routes.
Response handle_scene(const std::string& body, LambdaCache& cache, const Tolerances& tol = Tolerances::defaults());
Response handle_validate(const std::string& symbol);
Response handle_health(bool draining);

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::string cors_origin = "*";
    int drain_timeout_ms = 5000;
    Tolerances tol = Tolerances::defaults();
};

class Server {
public:
    explicit Server(ServiceOptions opts);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    // binds; returns the bound port (throws IoError on failure)
    int bind();
    // blocks until stop()
    void run();
    // health turns to "draining", in-flight requests finish, then the listener closes
    void drain();
    void stop();
    bool draining() const { return draining_; }
    int port() const { return port_; }
    LambdaCache& cache() { return cache_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    ServiceOptions opts_;
    LambdaCache cache_;
    std::atomic<bool> draining_{false};
    std::atomic<int> in_flight_{0};
    int port_ = 0;
};

}  // namespace ponconf::service
