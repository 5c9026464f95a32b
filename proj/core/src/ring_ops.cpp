#include "ponconf/ring_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ponconf {

namespace {

void check_shift(long m, int i) {
    if (i < 0 || i >= m) throw Error(ErrorCode::InvalidArgument, "shift " + std::to_string(i) + " outside [0, m)");
}

template <class Out, class In> Out derived(const In& src, const std::string& op, int i, long drift_delta) {
    Out r;
    r.label = op.substr(0, 1) + std::to_string(i) + "(" + src.label + ")";
    r.shift = i;
    r.drift2 = src.drift2 + drift_delta;
    r.trail = src.trail;
    r.trail.push_back({op, i, src.label});
    return r;
}

double max_conic_residual(const Conic& c, const PointRing& r) {
    double worst = 0;
    for (const auto& p : r.elements) worst = std::max(worst, conic_residual(c, p));
    return worst;
}

Conic fit_ring(const std::vector<Vec3<double>>& elems, bool strict, const Tolerances& tol) {
    std::vector<Point> pts;
    if (strict) {
        long m = static_cast<long>(elems.size());
        for (int k = 0; k < 5; ++k) pts.emplace_back(elems[static_cast<std::size_t>((k * m) / 5)]);
        return conic_through_five_points(pts, tol);
    }
    for (const auto& e : elems) pts.emplace_back(e);
    return fit_conic(pts, tol);
}

std::string signature_of(const Mat3<double>& m) {
    double f = frobenius(m);
    double off = std::abs(m[0][1]) + std::abs(m[0][2]) + std::abs(m[1][0]) + std::abs(m[1][2]) + std::abs(m[2][0]) +
                 std::abs(m[2][1]);
    if (off > 1e-6 * f || m[2][2] == 0) return {};
    std::string s = "(";
    for (int i = 0; i < 3; ++i) {
        s += (m[i][i] * m[2][2] > 0) ? "+" : "-";
        s += i < 2 ? "," : ")";
    }
    return s;
}

}  // namespace

LineRing v_op(const PointRing& p, int i, const std::optional<Conic>& support, const Tolerances& tol) {
    check_shift(p.m(), i);
    auto out = derived<LineRing>(p, i == 0 ? "tangent" : "join", i, i);
    out.label = "v" + std::to_string(i) + "(" + p.label + ")";
    if (i == 0) {
        if (!support) throw Error(ErrorCode::CoincidentPoints, "v_0 needs a support conic");
        for (long j = 0; j < p.m(); ++j) {
            // fitted conics carry residuals near the closure tolerance, hence the looser gate
            if (conic_residual(*support, p[j]) > tol.coincidence)
                throw Error(ErrorCode::PointNotOnConic, "ring point " + std::to_string(j) + " is not on the support conic");
            out.elements.emplace_back(mul(support->matrix(), p[j].v()));
        }
        return out;
    }
    for (long j = 0; j < p.m(); ++j) out.elements.push_back(join(p[j], p[j + i], tol));
    return out;
}

PointRing w_op(const LineRing& l, int i, const std::optional<Conic>& support, const Tolerances& tol) {
    check_shift(l.m(), i);
    auto out = derived<PointRing>(l, i == 0 ? "touch" : "meet", i, -i);
    out.label = "w" + std::to_string(i) + "(" + l.label + ")";
    if (i == 0) {
        if (!support) throw Error(ErrorCode::CoincidentLines, "w_0 needs a support conic");
        Mat3<double> d = adjugate(support->matrix());
        Conic dual(d, ConicKind::Dual);
        for (long j = 0; j < l.m(); ++j) {
            if (dual_conic_residual(dual, l[j]) > tol.coincidence)
                throw Error(ErrorCode::PointNotOnConic, "ring line " + std::to_string(j) + " is not tangent to the support conic");
            out.elements.emplace_back(mul(d, l[j].v()));
        }
        return out;
    }
    for (long j = 0; j < l.m(); ++j) out.elements.push_back(meet(l[j], l[j - i], tol));
    return out;
}

Grid build_grid(const LineRing& edges, const Conic& caustic, const Tolerances& tol, GridOptions opts) {
    Grid g;
    g.edges = edges;
    const int m = static_cast<int>(edges.m());
    const int s = grid_depth(m);
    g.rings.push_back(w_op(edges, 0, caustic, tol));
    g.rings[0].label = "P0";
    g.conics.push_back(caustic);
    g.fit_residuals.push_back(max_conic_residual(caustic, g.rings[0]));
    for (int i = 1; i <= s; ++i) {
        PointRing r = w_op(edges, i, std::nullopt, tol);
        r.label = "P" + std::to_string(i);
        std::vector<Vec3<double>> elems;
        for (const auto& p : r.elements) elems.push_back(p.v());
        Conic c = fit_ring(elems, opts.strict, tol);
        double res = max_conic_residual(c, r);
        if (opts.strict && res > tol.closure)
            throw Error(ErrorCode::ConicFitFailure,
                        "ring " + std::to_string(i) + " misses its conic by " + std::to_string(res), "C" + std::to_string(i));
        g.rings.push_back(std::move(r));
        g.conics.push_back(c);
        g.fit_residuals.push_back(res);
    }
    g.spectrum = dependence_spectrum(g.conics, DependenceMode::Inverse);
    g.codependence_rank = dependence_rank(g.conics, DependenceMode::Inverse, tol);
    if (opts.strict && g.conics.size() >= 3 && g.codependence_rank != 2)
        throw Error(ErrorCode::CoDependenceViolation,
                    "grid conics have co-dependence rank " + std::to_string(g.codependence_rank));
    return g;
}

Grid build_grid(const LineRing& edges, const Tolerances& tol, GridOptions opts) {
    std::vector<Vec3<double>> coords;
    for (const auto& l : edges.elements) coords.push_back(l.v());
    Conic dual = fit_ring(coords, opts.strict, tol);
    double res = 0;
    for (const auto& l : edges.elements) res = std::max(res, dual_conic_residual(dual, l));
    if (opts.strict && res > tol.closure)
        throw Error(ErrorCode::ConicFitFailure, "edges are not tangent to one conic (" + std::to_string(res) + ")", "C0");
    return build_grid(edges, Conic(adjugate(dual.matrix())), tol, opts);
}

DualGrid build_dual_grid(const PointRing& points, const Conic& outer, const Tolerances& tol) {
    DualGrid g;
    g.points = points;
    const int m = static_cast<int>(points.m());
    const int s = grid_depth(m);
    g.rings.push_back(v_op(points, 0, outer, tol));
    g.rings[0].label = "L0";
    g.conics.push_back(outer);
    g.fit_residuals.push_back(0.0);
    for (const auto& p : points.elements) g.fit_residuals[0] = std::max(g.fit_residuals[0], conic_residual(outer, p));
    for (int i = 1; i <= s; ++i) {
        LineRing r = v_op(points, i, std::nullopt, tol);
        r.label = "L" + std::to_string(i);
        std::vector<Vec3<double>> coords;
        for (const auto& l : r.elements) coords.push_back(l.v());
        Conic dual = fit_ring(coords, true, tol);
        double res = 0;
        for (const auto& l : r.elements) res = std::max(res, dual_conic_residual(dual, l));
        if (res > tol.closure)
            throw Error(ErrorCode::ConicFitFailure,
                        "line ring " + std::to_string(i) + " is not tangent to one conic (" + std::to_string(res) + ")",
                        "X" + std::to_string(i));
        g.rings.push_back(std::move(r));
        g.conics.push_back(dual.dual(tol));
        g.fit_residuals.push_back(res);
    }
    g.spectrum = dependence_spectrum(g.conics, DependenceMode::Direct);
    g.dependence_rank = dependence_rank(g.conics, DependenceMode::Direct, tol);
    if (g.conics.size() >= 3 && g.dependence_rank != 2)
        throw Error(ErrorCode::CoDependenceViolation,
                    "dual grid conics have dependence rank " + std::to_string(g.dependence_rank));
    return g;
}

DualGrid build_dual_grid(const PointRing& points, const Tolerances& tol) {
    std::vector<Vec3<double>> coords;
    for (const auto& p : points.elements) coords.push_back(p.v());
    return build_dual_grid(points, fit_ring(coords, true, tol), tol);
}

PointRing pentagram(const PointRing& p, int k, const Tolerances& tol) {
    if (k < 2 || 2 * k >= p.m()) throw Error(ErrorCode::InvalidArgument, "pentagram map needs 2 <= k < m/2");
    PointRing r = w_op(v_op(p, k, std::nullopt, tol), 1, std::nullopt, tol);
    r.label = "T" + std::to_string(k) + "(" + p.label + ")";
    return r;
}

Equivalence ring_equivalence(const PointRing& source, const PointRing& target) {
    const long m = source.m();
    if (target.m() != m || m < 5) throw Error(ErrorCode::InvalidArgument, "equivalence needs equal rings of size >= 5");
    const long idx[4] = {0, m / 4, m / 2, (3 * m) / 4};
    Equivalence best;
    best.residual = INFINITY;
    for (long k = 0; k < m; ++k) {
        std::vector<Point> src, dst;
        for (long j : idx) {
            src.push_back(source[j + k]);
            dst.push_back(target[j]);
        }
        try {
            ProjectiveTransform t = fit_homography(src, dst);
            double res = 0;
            for (long j = 0; j < m; ++j) res = std::max(res, distance(t.apply(source[j + k]), target[j]));
            if (res < best.residual) best = {t, k, res, signature_of(t.matrix())};
        } catch (const Error&) {
        }
    }
    return best;
}

Equivalence odd_equivalence(const PointRing& p, int a, const Tolerances& tol) {
    PointRing q = w_op(v_op(p, 1, std::nullopt, tol), a, std::nullopt, tol);
    Equivalence e = ring_equivalence(p, q);
    if (!(e.residual < tol.coincidence))
        throw Error(ErrorCode::NoEquivalenceFound,
                    "no projective equivalence between the polygon and grid ring " + std::to_string(a) +
                        " (best residual " + std::to_string(e.residual) + ")");
    return e;
}

double three_step_closure_residual(const PointRing& p, int a, int b, int c, const Tolerances& tol) {
    auto step = [&](const PointRing& r, int x, int y) { return w_op(v_op(r, x, std::nullopt, tol), y, std::nullopt, tol); };
    PointRing r = step(step(step(p, a, b), c, a), b, c);
    return ring_distance(p, r);
}

double step_commute_residual(const PointRing& p, int a, int b, int c, int d, const Tolerances& tol) {
    auto step = [&](const PointRing& r, int x, int y) { return w_op(v_op(r, x, std::nullopt, tol), y, std::nullopt, tol); };
    return ring_distance(step(step(p, a, b), c, d), step(step(p, c, d), a, b));
}

double ring_swap_residual(const Grid& g, int a, int b, const Tolerances& tol) {
    auto lhs = w_op(v_op(g.rings.at(a), 0, g.conics.at(a), tol), b, std::nullopt, tol);
    auto rhs = w_op(v_op(g.rings.at(b), 0, g.conics.at(b), tol), a, std::nullopt, tol);
    return ring_distance(lhs, rhs);
}

double commute_residual(const PointRing& p, int k1, int k2, const Tolerances& tol) {
    return ring_distance(pentagram(pentagram(p, k1, tol), k2, tol), pentagram(pentagram(p, k2, tol), k1, tol));
}

}  // namespace ponconf
