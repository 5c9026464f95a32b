#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ponconf/poncelet.hpp"
#include "ponconf/ring_ops.hpp"
#include "ponconf/scene.hpp"

namespace ponconf {

struct CelestialSymbol {
    int m = 0;
    std::vector<std::pair<int, int>> pairs;  // (a_i, b_i)
    bool trivial = false;                    // a- and b-multisets agree
    std::vector<std::string> warnings;

    int k() const { return static_cast<int>(pairs.size()); }
    std::string to_string() const;
};

// Grammar: INT '#(' INT ',' INT (';' INT ',' INT)* ')', whitespace allowed between tokens.
CelestialSymbol parse_symbol(std::string_view text);
// Range and adjacency rules only (used by parse_symbol, exposed for programmatic symbols).
void validate_symbol(CelestialSymbol& sym);

// Alternating construction: L_i = v_{a_i}(P_{i-1}), P_i = w_{b_i}(L_i); P_k is matched back onto P_0 by index.
Scene construct(const CelestialSymbol& sym, const PointRing& p0, const std::vector<SceneConic>& conics = {},
                const Tolerances& tol = Tolerances::defaults());

Scene theorem_a_scene(const PointRing& p, int a, int b, int c, const Tolerances& tol = Tolerances::defaults());

// Tangents to the grid conics at the rings a, b, c and their quadruple points.
Scene grid_tangent_scene(const LineRing& edges, int a, int b, int c, const Tolerances& tol = Tolerances::defaults(),
                         GridOptions opts = {});

// Ten interlocked (n4) configurations over the 3-subsets of five shifts.
Scene build_nested(const PointRing& p, const std::array<int, 5>& shifts, const Tolerances& tol = Tolerances::defaults());
Scene build_nested(int m, const std::array<int, 5>& shifts, const Tolerances& tol = Tolerances::defaults());

// Standard confocal starting polygon used when only (m, axes) are given.
struct PolygonSetup {
    ConfocalFamily family{4.0, 1.0};
    int winding = 1;
    double t0 = 0.37;
};
std::vector<SceneConic> setup_conics(const PolygonSetup& setup, double lambda);

// Symbol realised on the confocal polygon of the setup. Without lambda the caustic is solved for;
// with an explicit lambda the traced polygon need not close and the audit shows the break.
Scene symbol_scene(const CelestialSymbol& sym, const PolygonSetup& setup, std::optional<double> lambda = std::nullopt,
                   const Tolerances& tol = Tolerances::defaults());

}  // namespace ponconf
