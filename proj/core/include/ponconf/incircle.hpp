#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ponconf/poncelet.hpp"
#include "ponconf/ring_ops.hpp"
#include "ponconf/scene.hpp"

namespace ponconf {

// Line with the centre (0,0,1) on its positive side, scaled to unit normal.
struct OrientedLine {
    Vec3<double> coords;

    // signed Euclidean distance of a finite point
    double signed_distance(double x, double y) const { return coords[0] * x + coords[1] * y + coords[2]; }
};

OrientedLine orient(const Line& l, const Tolerances& tol = Tolerances::defaults());
std::vector<OrientedLine> orient_ring(const LineRing& ring, const Tolerances& tol = Tolerances::defaults());

// Cell H_a+ ∩ H_{a+l}- ∩ H_{a+k+l}+ ∩ H_{a+k}-; lines and signs are stored in that order.
struct SquareCell {
    long base = 0;
    int k = 0;
    int l = 0;
    std::array<long, 4> index{};
    std::array<OrientedLine, 4> lines{};
    std::array<int, 4> signs{1, -1, 1, -1};
};

SquareCell square_cell(const std::vector<OrientedLine>& ring, long a, int k, int l);
// General label: positive on a and d, negative on b and c (symmetric rewritings give the same cell).
SquareCell labelled_cell(const std::vector<OrientedLine>& ring, long a, long b, long c, long d);

struct Incircle {
    Point center;
    double cx = 0, cy = 0;
    double radius = 0;
    double residual = 0;
    // +1 when the circle sits on the positive representative (x, y, 1), -1 for the antipodal sheet
    int sheet = 1;
    std::array<double, 4> signed_distances{};

    bool signs_match(const SquareCell& cell) const;
};

Incircle incircle(const SquareCell& cell, const Tolerances& tol = Tolerances::defaults());

// Meet of the tangents to grid conic C_k at the two ring-k corners of the cell.
Point incircle_center_via_tangents(const SquareCell& cell, const Grid& grid, const Tolerances& tol = Tolerances::defaults());

// Centres of the type (a,b), (b,c), (c,a) incircles and the angle bisectors carrying them.
Scene centers_scene(const LineRing& edges, int a, int b, int c, const Tolerances& tol = Tolerances::defaults());

// max |<p, l>| for the best-fitting line through the points
double collinearity_residual(const std::vector<Point>& pts);

// Both confocal parameters of the family members through a finite point (ellipse first).
std::pair<double, double> confocal_parameters(const ConfocalFamily& family, const Point& p);

// A cell whose ring-k corners P, Q are mirror images: P and Q then share an ellipse AND a hyperbola
// of the family; only the grid conic's tangents meet at the incircle centre.
struct FlawedCgtReport {
    long base = 0;
    Point p, q;
    double lambda_grid = 0;
    double lambda_other = 0;
    double other_through_q = 0;         // |Q^T C_other Q|
    double grid_center_distance = 0;    // meet of grid-conic tangents vs incircle centre
    double other_center_distance = 0;   // meet of other-conic tangents vs incircle centre
};

FlawedCgtReport flawed_cgt_check(const ConfocalFamily& family, const LineRing& edges, const Grid& grid, int k, int l,
                                 const Tolerances& tol = Tolerances::defaults());

}  // namespace ponconf
