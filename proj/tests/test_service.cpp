#include <gtest/gtest.h>

#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "ponconf/scene_io.hpp"
#include "ponconf/service.hpp"

using namespace ponconf;
using namespace ponconf::service;
using json = nlohmann::json;

namespace {
const char* kGR = "7#(3,1;2,3;1,2)";
}

TEST(Service, SceneHandler) {
    LambdaCache cache;
    Response r = handle_scene(json{{"symbol", kGR}}.dump(), cache);
    ASSERT_EQ(r.status, 200) << r.body;
    Scene s = json_to_scene(r.body);
    EXPECT_EQ(s.audit.verdict, Verdict::Proper);
    EXPECT_EQ(s.audit.points, 21);
    EXPECT_LT(s.closure_residual, 1e-8);
    EXPECT_EQ(cache.misses(), 1u);

    // second request with another t0 reuses the solved caustic
    Response r2 = handle_scene(json{{"symbol", kGR}, {"t0", 1.1}}.dump(), cache);
    ASSERT_EQ(r2.status, 200);
    EXPECT_EQ(cache.hits(), 1u);
    EXPECT_EQ(cache.size(), 1u);
    EXPECT_NE(r.body, r2.body);
    EXPECT_EQ(handle_scene(json{{"symbol", kGR}}.dump(), cache).body, r.body);
}

TEST(Service, SceneErrors) {
    LambdaCache cache;
    EXPECT_EQ(handle_scene("{nope", cache).status, 400);
    EXPECT_EQ(handle_scene(R"j({"axes":[2,1]})j", cache).status, 400);
    EXPECT_EQ(handle_scene(R"j({"symbol":"7#(3,1;2,3;1,2)","axes":"wide"})j", cache).status, 400);

    Response bad = handle_scene(R"j({"symbol":"7#(3,3;1,2)"})j", cache);
    EXPECT_EQ(bad.status, 422);
    json j = json::parse(bad.body);
    EXPECT_EQ(j["code"], "AdjacentRepeat");
    EXPECT_TRUE(j.contains("message"));

    // winding incompatible with m
    EXPECT_EQ(handle_scene(R"j({"symbol":"8#(3,1;2,3;1,2)","winding":2})j", cache).status, 422);
}

TEST(Service, ValidateAndHealth) {
    Response v = handle_validate(kGR);
    ASSERT_EQ(v.status, 200);
    json j = json::parse(v.body);
    EXPECT_TRUE(j["valid"].get<bool>());
    EXPECT_EQ(j["m"], 7);
    EXPECT_EQ(j["k"], 3);
    EXPECT_TRUE(j["trivial"].get<bool>());
    EXPECT_EQ(handle_validate("7#(2,").status, 422);

    EXPECT_EQ(handle_health(false).status, 200);
    EXPECT_EQ(json::parse(handle_health(false).body)["status"], "ok");
    EXPECT_EQ(handle_health(true).status, 503);
}

TEST(Service, ConcurrentCache) {
    LambdaCache cache;
    std::vector<std::thread> pool;
    std::vector<double> got(8);
    for (int i = 0; i < 8; ++i) pool.emplace_back([&, i] { got[static_cast<std::size_t>(i)] = cache.get(4.0, 1.0, 7, 1 + i % 2); });
    for (auto& t : pool) t.join();
    EXPECT_EQ(cache.size(), 2u);
    for (int i = 2; i < 8; ++i) EXPECT_EQ(got[static_cast<std::size_t>(i)], got[static_cast<std::size_t>(i % 2)]);
}

TEST(Service, LiveSocket) {
    ServiceOptions opts;
    opts.port = 0;
    Server server(opts);
    int port = server.bind();
    ASSERT_GT(port, 0);
    std::thread th([&] { server.run(); });

    httplib::Client cli("127.0.0.1", port);
    cli.set_read_timeout(30, 0);
    auto h = cli.Get("/api/health");
    ASSERT_TRUE(h);
    EXPECT_EQ(h->status, 200);

    auto s = cli.Post("/api/scene", json{{"symbol", kGR}}.dump(), "application/json");
    ASSERT_TRUE(s);
    EXPECT_EQ(s->status, 200);
    EXPECT_EQ(s->get_header_value("Access-Control-Allow-Origin"), "*");
    EXPECT_EQ(json_to_scene(s->body).audit.verdict, Verdict::Proper);

    auto v = cli.Get("/api/symbol/validate?symbol=7%23(3,3;1,2)j");
    ASSERT_TRUE(v);
    EXPECT_EQ(v->status, 422);

    auto o = cli.Options("/api/scene");
    ASSERT_TRUE(o);
    EXPECT_LT(o->status, 300);

    server.drain();
    th.join();
    EXPECT_TRUE(server.draining());
    EXPECT_FALSE(cli.Get("/api/health"));
}
