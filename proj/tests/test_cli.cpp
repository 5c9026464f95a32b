#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(PONCONF_CLI) + " " + args + " 2>/dev/null";
    Run r{-1, ""};
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path tmpdir() {
    fs::path d = fs::temp_directory_path() / ("ponconf_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST(Cli, ConstructGrunbaumRigby) {
    auto r = run("celestial construct --symbol '7#(3,1;2,3;1,2)' --axes 2,1 --t0 0.37");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("21 points, 21 lines, degree 4"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("verdict: proper"), std::string::npos);
    // deterministic
    EXPECT_EQ(run("celestial construct --symbol '7#(3,1;2,3;1,2)' --axes 2,1 --t0 0.37").out, r.out);
}

TEST(Cli, DetunedLambdaFails) {
    auto r = run("--json celestial construct --symbol '7#(3,1;2,3;1,2)' --lambda 0.3");
    EXPECT_EQ(r.status, 1);
    EXPECT_EQ(json::parse(r.out)["audit"]["verdict"], "failed");
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("celestial validate --symbol '7#(3,1;2,3;1,2)'").status, 0);
    EXPECT_EQ(run("celestial validate --symbol '7#(3,1'").status, 2);
    EXPECT_EQ(run("celestial validate --symbol '7#(3,3;1,2)'").status, 3);
    EXPECT_EQ(run("celestial construct --symbol '7#(3,1;2,3;1,2)' --from /nonexistent/p.json").status, 4);
    EXPECT_EQ(run("no-such-command").status, 2);
    EXPECT_EQ(run("poncelet build").status, 2);
}

TEST(Cli, PolygonFileWorkflow) {
    fs::path d = tmpdir();
    std::string poly = (d / "p7.json").string();
    ASSERT_EQ(run("poncelet build --m 7 --axes 2,1 --out " + poly).status, 0);
    EXPECT_EQ(run("celestial construct --symbol '7#(3,1;2,3;1,2)' --from " + poly).status, 0);
    EXPECT_EQ(run("grid --from " + poly).status, 0);
    auto dual = run("--json grid dual --from " + poly);
    EXPECT_EQ(dual.status, 0);
    EXPECT_EQ(json::parse(dual.out)["dependence_rank"], 2);
    auto pent = run("--json pentagram --from " + poly + " --k 2 --check-commute 3");
    EXPECT_EQ(pent.status, 0);
    EXPECT_EQ(json::parse(pent.out)["rings"].size(), 2u);
    // symbol size has to match the polygon
    EXPECT_EQ(run("celestial construct --symbol '8#(3,1;2,3;1,2)' --from " + poly).status, 3);
    fs::remove_all(d);
}

TEST(Cli, Incircles) {
    fs::path d = tmpdir();
    std::string poly = (d / "p10.json").string();
    ASSERT_EQ(run("poncelet build --m 10 --winding 3 --out " + poly).status, 0);
    auto r = run("--json incircles --from " + poly + " --shifts 1,2,3");
    EXPECT_EQ(r.status, 0);
    EXPECT_LT(json::parse(r.out)["closure_residual"].get<double>(), 1e-8);
    EXPECT_EQ(run("incircles --from " + poly + " --shifts 1,2").status, 3);
    fs::remove_all(d);
}

TEST(Cli, Certify) {
    auto r = run("certify special");
    ASSERT_EQ(r.status, 0);
    json j = json::parse(r.out);
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["verdict"], "pass");
    EXPECT_EQ(j[1]["verdict"], "pass");
    auto l = run("certify lemma1 --samples 25 --seed 7");
    EXPECT_EQ(l.status, 0);
    EXPECT_EQ(json::parse(l.out)["verdict"], "pass");
    EXPECT_EQ(run("certify special --a 1/0").status, 2);
}

TEST(Cli, SweepCsv) {
    auto r = run("sweep --symbol '7#(3,1;2,3;1,2)' --t0-grid 4 --lambda-grid 3 --lambda-span 1e-3 --threads 3");
    ASSERT_EQ(r.status, 0);
    EXPECT_EQ(r.out.rfind("t0,lambda,residual,verdict\n", 0), 0u);
    std::size_t lines = 0, proper = 0;
    for (std::size_t p = 0; (p = r.out.find('\n', p)) != std::string::npos; ++p) ++lines;
    for (std::size_t p = 0; (p = r.out.find(",proper", p)) != std::string::npos; ++p) ++proper;
    EXPECT_EQ(lines, 13u);
    EXPECT_EQ(proper, 4u);  // only the middle lambda row closes
    EXPECT_EQ(run("sweep --symbol '7#(3,1;2,3;1,2)' --t0-grid 4 --lambda-grid 3 --lambda-span 1e-3 --threads 1").out, r.out);
}
