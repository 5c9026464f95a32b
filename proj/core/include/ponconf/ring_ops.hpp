#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ponconf/ring.hpp"

namespace ponconf {

// line j = p_j v p_{j+i}; i = 0 gives the tangents of the support conic
LineRing v_op(const PointRing& p, int i, const std::optional<Conic>& support = std::nullopt,
              const Tolerances& tol = Tolerances::defaults());
// point j = l_j ^ l_{j-i}; i = 0 gives the touch points on the support conic
PointRing w_op(const LineRing& l, int i, const std::optional<Conic>& support = std::nullopt,
               const Tolerances& tol = Tolerances::defaults());

// largest index strictly below m/2
inline int grid_depth(int m) { return (m - 1) / 2; }

struct GridOptions {
    // strict: fit through five spread points and fail when any ring point misses the conic;
    // lenient: least-squares fit over the whole ring, never fails (negative controls)
    bool strict = true;
};

struct Grid {
    LineRing edges;
    std::vector<PointRing> rings;   // rings[i] = w_i(edges), i = 0..s; rings[0] are the touch points
    std::vector<Conic> conics;      // conics[0] is the caustic
    std::vector<double> fit_residuals;
    std::vector<double> spectrum;   // singular values of the flattened adjugates
    int codependence_rank = 0;
};

Grid build_grid(const LineRing& edges, const Conic& caustic, const Tolerances& tol = Tolerances::defaults(),
                GridOptions opts = {});
// caustic recovered as the dual conic tangent to the edges
Grid build_grid(const LineRing& edges, const Tolerances& tol = Tolerances::defaults(), GridOptions opts = {});

struct DualGrid {
    PointRing points;
    std::vector<LineRing> rings;   // rings[i] = v_i(points); rings[0] tangents of the outer conic
    std::vector<Conic> conics;     // point-conic form of each envelope; conics[0] is the outer conic
    std::vector<double> fit_residuals;  // tangency residuals
    std::vector<double> spectrum;
    int dependence_rank = 0;
};

DualGrid build_dual_grid(const PointRing& points, const Conic& outer, const Tolerances& tol = Tolerances::defaults());
DualGrid build_dual_grid(const PointRing& points, const Tolerances& tol = Tolerances::defaults());

// T_k = w_1 . v_k
PointRing pentagram(const PointRing& p, int k, const Tolerances& tol = Tolerances::defaults());

struct Equivalence {
    ProjectiveTransform transform = ProjectiveTransform::identity();
    long shift = 0;          // target[j] = transform(source[j + shift])
    double residual = 0;
    std::string signature;   // "(+,+,+)" style when the transform is diagonal, empty otherwise
};

// Projective map from p to the grid ring w_a(v_1(p)), best cyclic shift.
Equivalence odd_equivalence(const PointRing& p, int a, const Tolerances& tol = Tolerances::defaults());
// Same search between two arbitrary rings of equal size.
Equivalence ring_equivalence(const PointRing& source, const PointRing& target);

// Pointwise checks returning residuals.
double three_step_closure_residual(const PointRing& p, int a, int b, int c, const Tolerances& tol = Tolerances::defaults());
double step_commute_residual(const PointRing& p, int a, int b, int c, int d, const Tolerances& tol = Tolerances::defaults());
double ring_swap_residual(const Grid& grid, int a, int b, const Tolerances& tol = Tolerances::defaults());
double commute_residual(const PointRing& p, int k1, int k2, const Tolerances& tol = Tolerances::defaults());

}  // namespace ponconf
