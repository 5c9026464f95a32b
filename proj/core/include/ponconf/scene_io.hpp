#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ponconf/celestial.hpp"
#include "ponconf/scene.hpp"

namespace ponconf {

// Canonical JSON; doubles are written with round-trip precision, rationals as "num/den" strings.
std::string scene_to_json(const Scene& s);
std::string scene_to_json(const ExactScene& s);
// "f64" or "exact"; SchemaError "/backend" when missing
std::string scene_backend(const std::string& json);
Scene json_to_scene(const std::string& json);
ExactScene json_to_exact_scene(const std::string& json);

Scene read_scene_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

struct SvgStyle {
    double width = 800;
    double height = 800;
    double margin = 0.05;  // fraction of the fitted extent
    double point_radius = 3;  // in output pixels
    double line_width = 1;
    double conic_width = 1.5;
    std::string background = "#ffffff";
    std::string point_color = "#1f3a93";
    std::string line_color = "#7f8c8d";
    std::string conic_color = "#c0392b";
    bool draw_conics = true;
    std::map<std::string, std::string> ring_colors;  // label -> colour override
};

std::string scene_to_svg(const Scene& s, const SvgStyle& style = {});

struct AnimationSpec {
    CelestialSymbol symbol;
    PolygonSetup setup;
    int t0_frames = 120;
    double t0_begin = 0;
    double t0_end = 6.283185307179586;  // end excluded
    std::vector<double> lambdas;          // empty: solved caustic
    bool svg = true;
    SvgStyle style;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct FrameRecord {
    int index = 0;
    double t0 = 0;
    double lambda = 0;
    double closure_residual = 0;
    std::string verdict;
    std::string error;
    std::string json_file;
    std::string svg_file;
};

// Writes frame_%05d.scene.json (+ .svg) and manifest.json into dir; returns the manifest rows in frame order.
std::vector<FrameRecord> animate(const AnimationSpec& spec, const std::filesystem::path& dir,
                                 const Tolerances& tol = Tolerances::defaults());

}  // namespace ponconf
