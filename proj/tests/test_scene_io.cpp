#include <gtest/gtest.h>

#include <filesystem>
#include <regex>

#include "ponconf/exact/oracle.hpp"
#include "ponconf/scene_io.hpp"

using namespace ponconf;

namespace {

PolygonSetup gr_setup(double t0 = 0.37) {
    PolygonSetup s;
    s.family = ConfocalFamily::from_semi_axes(2, 1);
    s.t0 = t0;
    return s;
}

const Scene& gr_scene() {
    static const Scene s = symbol_scene(parse_symbol("7#(3,1;2,3;1,2)"), gr_setup());
    return s;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
    return n;
}

std::string schema_path(const std::string& text) {
    try {
        json_to_scene(text);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaError) << e.what();
        return e.path();
    }
    return "<no error>";
}

std::filesystem::path temp_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("ponconf_test_" + name);
    std::filesystem::remove_all(d);
    return d;
}

}  // namespace

TEST(SymbolScene, GrunbaumRigby) {
    const Scene& s = gr_scene();
    EXPECT_EQ(s.audit.verdict, Verdict::Proper);
    EXPECT_EQ(s.audit.points, 21);
    EXPECT_EQ(s.audit.lines, 21);
    EXPECT_LT(s.closure_residual, 1e-7);
    EXPECT_EQ(s.conics.size(), 2u);
    EXPECT_TRUE(s.extensions.count("setup"));
    // detuned caustic breaks the configuration but still yields a scene
    double lam = solve_caustic(gr_setup().family, 7, 1);
    Scene off = symbol_scene(parse_symbol("7#(3,1;2,3;1,2)"), gr_setup(), lam * 0.9);
    EXPECT_EQ(off.audit.verdict, Verdict::Failed);
    EXPECT_GT(off.closure_residual, 1e-4);
}

TEST(SceneJson, RoundTripFloat) {
    const Scene& s = gr_scene();
    std::string text = scene_to_json(s);
    Scene back = json_to_scene(text);
    EXPECT_TRUE(back == s);
    EXPECT_EQ(scene_to_json(back), text);
    EXPECT_EQ(scene_backend(text), "f64");
    EXPECT_NE(text.find("\"matrix6\""), std::string::npos);
}

TEST(SceneJson, RoundTripExactWithCertificate) {
    ExactScene s = exact::lemma1_scene(2, 3, 5, 7);
    std::string text = scene_to_json(s);
    EXPECT_NE(text.find("\"certificate\""), std::string::npos);
    EXPECT_NE(text.find("\"verdict\": \"pass\""), std::string::npos);
    ExactScene back = json_to_exact_scene(text);
    EXPECT_TRUE(back == s);
    EXPECT_EQ(scene_to_json(back), text);
    EXPECT_EQ(scene_backend(text), "exact");
    try {
        json_to_scene(text);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SchemaError);
        EXPECT_EQ(e.path(), "/backend");
    }
}

TEST(SceneJson, EmptyScene) {
    Scene s;
    std::string text = scene_to_json(s);
    Scene back = json_to_scene(text);
    EXPECT_TRUE(back == s);
    EXPECT_EQ(scene_to_json(back), text);
}

TEST(SceneJson, SchemaErrors) {
    std::string text = scene_to_json(gr_scene());
    auto drop_rings = std::regex_replace(text, std::regex("\"rings\""), "\"ringz\"");
    EXPECT_EQ(schema_path(drop_rings), "/rings");
    // five-entry matrix
    auto short_m = std::regex_replace(text, std::regex("\"matrix6\": \\[\\s*([^,]+),"), "\"matrix6\": [", std::regex_constants::format_first_only);
    EXPECT_EQ(schema_path(short_m), "/conics/0/matrix6");
    auto bad_verdict = std::regex_replace(text, std::regex("\"verdict\": \"proper\""), "\"verdict\": \"great\"");
    EXPECT_EQ(schema_path(bad_verdict), "/audit/verdict");
    auto bad_coord = std::regex_replace(text, std::regex("\"elements\": \\[\\s*\\[\\s*[^,]+,"), "\"elements\": [[\"x\",", std::regex_constants::format_first_only);
    EXPECT_EQ(schema_path(bad_coord), "/rings/0/elements/0/0");
    try {
        json_to_scene("{not json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SyntaxError);
    }
}

TEST(SceneSvg, CountsAndDeterminism) {
    const Scene& s = gr_scene();
    std::string svg = scene_to_svg(s);
    EXPECT_EQ(count(svg, "<line "), 21u);
    EXPECT_EQ(count(svg, "<circle "), 21u);
    EXPECT_EQ(count(svg, "<path "), 2u);
    EXPECT_EQ(count(svg, "class=\"lines\""), 3u);
    EXPECT_EQ(svg, scene_to_svg(s));

    SvgStyle alt;
    alt.point_color = "#00ff00";
    alt.line_color = "black";
    alt.ring_colors["L2"] = "orange";
    std::string svg2 = scene_to_svg(s, alt);
    EXPECT_NE(svg, svg2);
    auto geometry = [](const std::string& t) {
        std::regex attr("(x1|y1|x2|y2|cx|cy|d|viewBox)=\"[^\"]*\"");
        std::string out;
        for (std::sregex_iterator it(t.begin(), t.end(), attr), end; it != end; ++it) out += it->str();
        return out;
    };
    EXPECT_EQ(geometry(svg), geometry(svg2));

    std::string empty = scene_to_svg(Scene{});
    EXPECT_NE(empty.find("<g id=\"conics\">\n</g>"), std::string::npos);
    EXPECT_EQ(count(empty, "<circle "), 0u);
}

TEST(Animate, SweepAndManifest) {
    AnimationSpec spec;
    spec.symbol = parse_symbol("7#(3,1;2,3;1,2)");
    spec.setup = gr_setup();
    spec.t0_frames = 120;
    spec.svg = false;
    auto dir = temp_dir("anim");
    auto frames = animate(spec, dir);
    ASSERT_EQ(frames.size(), 120u);
    for (const auto& f : frames) {
        EXPECT_LT(f.closure_residual, 1e-6) << f.index;
        EXPECT_EQ(f.verdict, "proper");
    }
    EXPECT_TRUE(std::filesystem::exists(dir / "frame_00119.scene.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
    Scene f7 = read_scene_file(dir / "frame_00007.scene.json");
    EXPECT_EQ(f7.audit.points, 21);

    spec.t0_frames = 1;
    spec.svg = true;
    auto one = temp_dir("anim1");
    auto single = animate(spec, one);
    ASSERT_EQ(single.size(), 1u);
    EXPECT_TRUE(std::filesystem::exists(one / "frame_00000.svg"));
    PolygonSetup at0 = spec.setup;
    at0.t0 = 0;
    EXPECT_EQ(read_text_file(one / "frame_00000.scene.json"), scene_to_json(symbol_scene(spec.symbol, at0, solve_caustic(at0.family, 7, 1))));

    double lam = solve_caustic(spec.setup.family, 7, 1);
    spec.lambdas = {lam * 0.8};
    spec.t0_frames = 3;
    auto bad = animate(spec, temp_dir("anim2"));
    for (const auto& f : bad) EXPECT_EQ(f.verdict, "failed");
    std::filesystem::remove_all(dir);
}
