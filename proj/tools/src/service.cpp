#include "ponconf/service.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ponconf/celestial.hpp"
#include "ponconf/error.hpp"
#include "ponconf/scene_io.hpp"
#include "ponconf/version.hpp"

namespace ponconf::service {

namespace {

using json = nlohmann::ordered_json;

Response error_response(int status, const std::string& code, const std::string& step, const std::string& message) {
    json j{{"code", code}, {"step", step}, {"message", message}};
    return {status, j.dump() + "\n"};
}

Response domain_error(const Error& e) { return error_response(422, std::string(to_string(e.code())), e.step(), e.what()); }

}  // namespace

double LambdaCache::get(double A, double B, int m, int winding) {
    Key key{A, B, m, winding};
    {
        std::shared_lock lock(mutex_);
        auto it = values_.find(key);
        if (it != values_.end()) {
            ++hits_;
            return it->second;
        }
    }
    // solve outside the lock; concurrent misses on the same key compute the same value
    double lam = solve_caustic(ConfocalFamily(A, B), m, winding);
    ++misses_;
    std::unique_lock lock(mutex_);
    return values_.try_emplace(key, lam).first->second;
}

std::size_t LambdaCache::size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
}

Response handle_scene(const std::string& body, LambdaCache& cache, const Tolerances& tol) {
    json req;
    try {
        req = json::parse(body);
    } catch (const json::parse_error& e) {
        return error_response(400, "SyntaxError", "", std::string("malformed JSON: ") + e.what());
    }
    if (!req.is_object()) return error_response(400, "SchemaError", "/", "request must be an object");
    auto field_error = [](const std::string& path, const std::string& what) {
        return error_response(400, "SchemaError", path, what);
    };
    if (!req.contains("symbol") || !req["symbol"].is_string()) return field_error("/symbol", "symbol must be a string");
    double a = 2, b = 1, t0 = 0.37;
    int winding = 1;
    if (req.contains("axes")) {
        const auto& ax = req["axes"];
        if (!ax.is_array() || ax.size() != 2 || !ax[0].is_number() || !ax[1].is_number())
            return field_error("/axes", "axes must be two numbers");
        a = ax[0].get<double>();
        b = ax[1].get<double>();
    }
    if (req.contains("winding")) {
        if (!req["winding"].is_number_integer()) return field_error("/winding", "winding must be an integer");
        winding = req["winding"].get<int>();
    }
    if (req.contains("t0")) {
        if (!req["t0"].is_number()) return field_error("/t0", "t0 must be a number");
        t0 = req["t0"].get<double>();
    }
    std::optional<double> lambda;
    if (req.contains("lambda") && !req["lambda"].is_null()) {
        if (!req["lambda"].is_number()) return field_error("/lambda", "lambda must be a number");
        lambda = req["lambda"].get<double>();
    }
    try {
        CelestialSymbol sym = parse_symbol(req["symbol"].get<std::string>());
        PolygonSetup setup;
        setup.family = ConfocalFamily::from_semi_axes(a, b);
        setup.winding = winding;
        setup.t0 = t0;
        if (!lambda) {
            validate_winding(sym.m, winding);
            lambda = cache.get(setup.family.A, setup.family.B, sym.m, winding);
        }
        Scene s = symbol_scene(sym, setup, lambda, tol);
        return {200, scene_to_json(s)};
    } catch (const Error& e) {
        return domain_error(e);
    }
}

Response handle_validate(const std::string& symbol) {
    try {
        CelestialSymbol sym = parse_symbol(symbol);
        json pairs = json::array();
        for (auto [x, y] : sym.pairs) pairs.push_back({x, y});
        json j{{"valid", true},       {"symbol", sym.to_string()}, {"m", sym.m},
               {"k", sym.k()},        {"pairs", pairs},           {"trivial", sym.trivial},
               {"warnings", sym.warnings}};
        return {200, j.dump() + "\n"};
    } catch (const Error& e) {
        json j{{"valid", false}, {"code", std::string(to_string(e.code()))}, {"step", e.step()}, {"message", e.what()}};
        return {422, j.dump() + "\n"};
    }
}

Response handle_health(bool draining) {
    json j{{"status", draining ? "draining" : "ok"}, {"version", version()}};
    return {draining ? 503 : 200, j.dump() + "\n"};
}

struct Server::Impl {
    httplib::Server http;
};

Server::Server(ServiceOptions opts) : impl_(std::make_unique<Impl>()), opts_(std::move(opts)) {
    auto& http = impl_->http;
    auto send = [this](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
        res.set_header("Access-Control-Allow-Origin", opts_.cors_origin);
    };
    // count requests so draining can wait for them
    http.set_pre_routing_handler([this](const httplib::Request&, httplib::Response&) {
        ++in_flight_;
        return httplib::Server::HandlerResponse::Unhandled;
    });
    http.set_post_routing_handler([this](const httplib::Request&, httplib::Response&) { --in_flight_; });
    http.Options(R"(/api/.*)", [this](const httplib::Request&, httplib::Response& res) {
        res.status = 204;
        res.set_header("Access-Control-Allow-Origin", opts_.cors_origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
    http.Post("/api/scene", [this, send](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_scene(req.body, cache_, opts_.tol));
    });
    http.Get("/api/symbol/validate", [send](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("symbol")) {
            send(res, {400, json{{"code", "SchemaError"}, {"step", "symbol"}, {"message", "missing symbol parameter"}}.dump() + "\n"});
            return;
        }
        send(res, handle_validate(req.get_param_value("symbol")));
    });
    http.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, handle_health(draining_)); });
    http.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        send(res, {500, json{{"code", "Internal"}, {"step", ""}, {"message", what}}.dump() + "\n"});
    });
}

Server::~Server() { stop(); }

int Server::bind() {
    auto& http = impl_->http;
    if (opts_.port == 0) port_ = http.bind_to_any_port(opts_.host);
    else port_ = http.bind_to_port(opts_.host, opts_.port) ? opts_.port : -1;
    if (port_ <= 0) throw Error(ErrorCode::IoError, "cannot bind " + opts_.host + ":" + std::to_string(opts_.port));
    return port_;
}

void Server::run() {
    if (port_ <= 0) bind();
    impl_->http.listen_after_bind();
}

void Server::drain() {
    draining_ = true;
    auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(opts_.drain_timeout_ms);
    // the drain request itself may be in flight when triggered from a handler; signals are not
    while (in_flight_ > 0 && std::chrono::steady_clock::now() < deadline)
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    stop();
}

void Server::stop() {
    if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace ponconf::service
