#include "ponconf/celestial.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "ponconf/audit.hpp"

namespace ponconf {

namespace {

class SymbolLexer {
public:
    explicit SymbolLexer(std::string_view s) : s_(s) {}

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    void expect(char c) {
        skip();
        if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    int integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        if (pos_ - start > 6) fail("integer too large");
        return std::stoi(std::string(s_.substr(start, pos_ - start)));
    }
    void end() {
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(ErrorCode::SyntaxError, what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

std::string ring_name(char prefix, std::initializer_list<int> idx) {
    std::string s(1, prefix);
    bool first = true;
    for (int i : idx) {
        if (!first) s += "-";
        s += std::to_string(i);
        first = false;
    }
    return s;
}

std::string ln_of(int i) { return "L" + std::to_string(i); }
std::string pn_of(int i) { return "P" + std::to_string(i); }

// Best cyclic offset and its residual for matching a[j] against b[j + off].
std::pair<long, double> best_offset(const PointRing& a, const PointRing& b) {
    long best = 0;
    double res = INFINITY;
    for (long off = 0; off < a.m(); ++off) {
        double r = ring_distance(a, b, off);
        if (r < res) res = r, best = off;
    }
    return {best, res};
}

}  // namespace

std::string CelestialSymbol::to_string() const {
    std::string s = std::to_string(m) + "#(";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i) s += ";";
        s += std::to_string(pairs[i].first) + "," + std::to_string(pairs[i].second);
    }
    return s + ")";
}

void validate_symbol(CelestialSymbol& sym) {
    if (sym.pairs.empty()) throw Error(ErrorCode::SyntaxError, "symbol needs at least one pair");
    std::vector<int> letters;
    for (auto [a, b] : sym.pairs) {
        letters.push_back(a);
        letters.push_back(b);
    }
    for (int x : letters)
        if (x < 1 || 2 * x >= sym.m)
            throw Error(ErrorCode::LetterOutOfRange,
                        "letter " + std::to_string(x) + " outside [1, m/2) for m = " + std::to_string(sym.m));
    for (std::size_t i = 0; i < letters.size(); ++i) {
        std::size_t next = (i + 1) % letters.size();
        if (next != i && letters[i] == letters[next])
            throw Error(ErrorCode::AdjacentRepeat, "adjacent letters " + std::to_string(letters[i]) + " repeat (positions " +
                                                       std::to_string(i) + ", " + std::to_string(next) + ")");
    }
    std::vector<int> as, bs;
    for (auto [a, b] : sym.pairs) as.push_back(a), bs.push_back(b);
    std::sort(as.begin(), as.end());
    std::sort(bs.begin(), bs.end());
    sym.trivial = as == bs;
    sym.warnings.clear();
    if (!sym.trivial) sym.warnings.push_back("NonTrivial: a- and b-letters differ as multisets; closure is not expected");
}

CelestialSymbol parse_symbol(std::string_view text) {
    SymbolLexer lx(text);
    CelestialSymbol sym;
    sym.m = lx.integer();
    lx.expect('#');
    lx.expect('(');
    do {
        int a = lx.integer();
        lx.expect(',');
        int b = lx.integer();
        sym.pairs.emplace_back(a, b);
        if (!lx.peek(';')) break;
        lx.expect(';');
    } while (true);
    lx.expect(')');
    lx.end();
    validate_symbol(sym);
    return sym;
}

Scene construct(const CelestialSymbol& sym, const PointRing& p0_in, const std::vector<SceneConic>& conics,
                const Tolerances& tol) {
    if (p0_in.m() != sym.m)
        throw Error(ErrorCode::InvalidArgument,
                    "seed ring has " + std::to_string(p0_in.m()) + " points, symbol needs " + std::to_string(sym.m));
    Scene scene;
    scene.m = sym.m;
    scene.symbol = sym.to_string();
    scene.conics = conics;

    PointRing p = p0_in;
    p.label = "P0";
    p.drift2 = 0;
    scene.point_rings.push_back(p);
    PointRing last;
    for (int i = 1; i <= sym.k(); ++i) {
        auto [a, b] = sym.pairs[static_cast<std::size_t>(i - 1)];
        std::string ln = ln_of(i), pn = pn_of(i);
        LineRing l;
        try {
            l = v_op(p, a, std::nullopt, tol);
        } catch (const Error& e) {
            throw e.with_step(ln);
        }
        l.label = ln;
        try {
            p = w_op(l, b, std::nullopt, tol);
        } catch (const Error& e) {
            throw e.with_step(pn);
        }
        p.label = pn;
        scene.line_rings.push_back(l);
        if (i < sym.k()) scene.point_rings.push_back(p);
        else last = p;
    }

    const PointRing& p0 = scene.point_rings.front();
    const long m = sym.m;
    const long drift = last.drift2;
    auto [found_off, found_res] = best_offset(last, p0);
    long off = found_off;
    bool index_matched = drift % 2 == 0;
    if (index_matched) off = wrap_index(drift / 2, m);
    scene.closure_residual = ring_distance(last, p0, off);

    IncidenceAuditor auditor(4, tol);
    std::vector<int> pid, lid;
    for (const auto& r : scene.point_rings) pid.push_back(auditor.add_points(r));
    for (const auto& r : scene.line_rings) lid.push_back(auditor.add_lines(r));
    for (int i = 1; i <= sym.k(); ++i) {
        auto [a, b] = sym.pairs[static_cast<std::size_t>(i - 1)];
        const auto& l = scene.line_rings[static_cast<std::size_t>(i - 1)];
        const auto& prev = scene.point_rings[static_cast<std::size_t>(i - 1)];
        auditor.expect(pid[static_cast<std::size_t>(i - 1)], prev.drift2, lid[static_cast<std::size_t>(i - 1)], l.drift2, a);
        if (i < sym.k()) {
            const auto& next = scene.point_rings[static_cast<std::size_t>(i)];
            auditor.expect(pid[static_cast<std::size_t>(i)], next.drift2, lid[static_cast<std::size_t>(i - 1)], l.drift2, b);
        } else {
            // P_k is P_0 shifted by off: P_k[j] = P_0[j + off]
            auditor.expect(pid[0], drift - 2 * off, lid[static_cast<std::size_t>(i - 1)], l.drift2, b);
        }
        for (auto [x, what] : {std::pair{a, ln_of(i)}, std::pair{b, pn_of(i)}}) {
            int g = std::gcd(x, sym.m);
            if (g > 1)
                auditor.note(what + ": shift " + std::to_string(x) + " splits the ring into " + std::to_string(g) +
                             " sub-polygons of size " + std::to_string(sym.m / g));
        }
    }
    scene.audit = auditor.run();
    if (!index_matched)
        scene.audit.notes.push_back("index drift is odd; closure matched at the discovered offset");
    nlohmann::json closure = {{"drift2", drift},
                              {"offset", off},
                              {"index_matched", index_matched},
                              {"discovered_offset", found_off},
                              {"discovered_residual", found_res}};
    scene.extensions["closure"] = closure.dump();
    return scene;
}

Scene theorem_a_scene(const PointRing& p, int a, int b, int c, const Tolerances& tol) {
    if (a == b || b == c || a == c) throw Error(ErrorCode::InvalidArgument, "three-shift scene needs distinct shifts");
    CelestialSymbol sym;
    sym.m = static_cast<int>(p.m());
    sym.pairs = {{a, b}, {c, a}, {b, c}};
    validate_symbol(sym);
    return construct(sym, p, {}, tol);
}

Scene grid_tangent_scene(const LineRing& edges, int a, int b, int c, const Tolerances& tol, GridOptions opts) {
    const int m = static_cast<int>(edges.m());
    const int s = grid_depth(m);
    for (int x : {a, b, c})
        if (x < 1 || x > s) throw Error(ErrorCode::InvalidArgument, "grid ring index outside [1, m/2)");
    if (a == b || b == c || a == c) throw Error(ErrorCode::InvalidArgument, "grid tangent scene needs distinct rings");
    Grid g = build_grid(edges, tol, opts);

    Scene scene;
    scene.m = m;
    scene.conics.push_back({"C0", "caustic", g.conics[0]});
    std::map<int, LineRing> tangents;
    for (int x : {a, b, c}) {
        scene.conics.push_back({"C" + std::to_string(x), "grid", g.conics[static_cast<std::size_t>(x)]});
        LineRing t;
        const auto& ring = g.rings[static_cast<std::size_t>(x)];
        const auto& conic = g.conics[static_cast<std::size_t>(x)];
        if (opts.strict) {
            try {
                t = v_op(ring, 0, conic, tol);
            } catch (const Error& e) {
                throw e.with_step("T" + std::to_string(x));
            }
        } else {
            // lenient control: polars of the ring points w.r.t. the least-squares conic
            t.drift2 = ring.drift2;
            t.trail = ring.trail;
            t.trail.push_back({"tangent", 0, ring.label});
            for (const auto& p : ring.elements) t.elements.emplace_back(mul(conic.matrix(), p.v()));
        }
        t.label = "T" + std::to_string(x);
        tangents[x] = t;
    }
    const std::array<std::pair<int, int>, 3> pairs{{{a, b}, {b, c}, {c, a}}};
    double quad = 0;
    for (auto [x, y] : pairs) {
        PointRing pt = w_op(tangents[x], y, std::nullopt, tol);
        PointRing alt = w_op(tangents[y], x, std::nullopt, tol);
        quad = std::max(quad, ring_distance(pt, alt));
        pt.label = ring_name('X', {x, y});
        scene.point_rings.push_back(pt);
    }
    for (int x : {a, b, c}) scene.line_rings.push_back(tangents[x]);

    IncidenceAuditor auditor(4, tol);
    std::vector<int> pid;
    std::map<int, int> lid;
    for (const auto& r : scene.point_rings) pid.push_back(auditor.add_points(r));
    for (std::size_t i = 0; i < scene.line_rings.size(); ++i) lid[std::array{a, b, c}[i]] = auditor.add_lines(scene.line_rings[i]);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [x, y] = pairs[i];
        const auto& pr = scene.point_rings[i];
        auditor.expect(pid[i], pr.drift2, lid[x], tangents[x].drift2, y);
        auditor.expect(pid[i], pr.drift2, lid[y], tangents[y].drift2, x);
    }
    scene.audit = auditor.run();
    double fit = 0;
    for (double r : g.fit_residuals) fit = std::max(fit, r);
    nlohmann::json ext = {{"quadruple_residual", quad}, {"max_fit_residual", fit}, {"codependence_rank", g.codependence_rank}};
    scene.extensions["grid"] = ext.dump();
    scene.closure_residual = quad;
    return scene;
}

Scene build_nested(const PointRing& p, const std::array<int, 5>& shifts_in, const Tolerances& tol) {
    std::array<int, 5> sh = shifts_in;
    std::sort(sh.begin(), sh.end());
    const int m = static_cast<int>(p.m());
    for (std::size_t i = 0; i < 5; ++i) {
        if (sh[i] < 1 || 2 * sh[i] >= m) throw Error(ErrorCode::LetterOutOfRange, "nested shift outside [1, m/2)");
        if (i && sh[i] == sh[i - 1]) throw Error(ErrorCode::InvalidArgument, "nested shifts must be distinct");
    }
    using Pair = std::array<int, 2>;
    using Triple = std::array<int, 3>;
    std::map<Pair, PointRing> prings;
    std::map<Triple, LineRing> lrings;
    std::vector<Pair> all_pairs;
    std::vector<Triple> all_triples;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            all_pairs.push_back({sh[i], sh[j]});
            for (int k = j + 1; k < 5; ++k) all_triples.push_back({sh[i], sh[j], sh[k]});
        }
    PointRing seed = p;
    seed.drift2 = 0;
    seed.label = ring_name('P', {sh[0], sh[1]});
    prings[all_pairs[0]] = seed;

    auto pair_in = [](const Triple& t, int drop) {
        Pair r{};
        int n = 0;
        for (int x : t)
            if (x != drop) r[static_cast<std::size_t>(n++)] = x;
        return r;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& t : all_triples) {
            if (lrings.count(t)) continue;
            for (int z : t) {
                Pair pr = pair_in(t, z);
                auto it = prings.find(pr);
                if (it == prings.end()) continue;
                std::string name = ring_name('L', {t[0], t[1], t[2]});
                try {
                    LineRing l = v_op(it->second, z, std::nullopt, tol);
                    l.label = name;
                    lrings[t] = l;
                } catch (const Error& e) {
                    throw e.with_step(name);
                }
                changed = true;
                break;
            }
        }
        for (const auto& pr : all_pairs) {
            if (prings.count(pr)) continue;
            for (const auto& t : all_triples) {
                auto it = lrings.find(t);
                if (it == lrings.end()) continue;
                int z = 0;
                bool contains = true;
                for (int x : pr) contains = contains && std::count(t.begin(), t.end(), x);
                if (!contains) continue;
                for (int x : t)
                    if (x != pr[0] && x != pr[1]) z = x;
                std::string name = ring_name('P', {pr[0], pr[1]});
                try {
                    PointRing q = w_op(it->second, z, std::nullopt, tol);
                    q.label = name;
                    prings[pr] = q;
                } catch (const Error& e) {
                    throw e.with_step(name);
                }
                changed = true;
                break;
            }
        }
    }

    Scene scene;
    scene.m = m;
    IncidenceAuditor auditor(6, tol);
    std::map<Pair, int> pid;
    std::map<Triple, int> lid;
    for (const auto& pr : all_pairs) {
        scene.point_rings.push_back(prings.at(pr));
        pid[pr] = auditor.add_points(prings.at(pr));
    }
    for (const auto& t : all_triples) {
        scene.line_rings.push_back(lrings.at(t));
        lid[t] = auditor.add_lines(lrings.at(t));
    }
    for (const auto& t : all_triples)
        for (int z : t) {
            Pair pr = pair_in(t, z);
            auditor.expect(pid[pr], prings.at(pr).drift2, lid[t], lrings.at(t).drift2, z);
        }
    scene.audit = auditor.run();
    scene.closure_residual = scene.audit.max_intended_residual;
    nlohmann::json ext = {{"shifts", sh}};
    scene.extensions["nested"] = ext.dump();
    return scene;
}

Scene build_nested(int m, const std::array<int, 5>& shifts, const Tolerances& tol) {
    PolygonSetup setup;
    double lambda = solve_caustic(setup.family, m, setup.winding, tol);
    PointRing p = build_polygon(confocal_pair(setup.family, lambda, m, setup.winding, setup.t0), tol);
    Scene s = build_nested(p, shifts, tol);
    s.conics = setup_conics(setup, lambda);
    return s;
}

std::vector<SceneConic> setup_conics(const PolygonSetup& setup, double lambda) {
    return {{"outer", "outer", setup.family.outer()}, {"caustic", "caustic", setup.family.member(lambda)}};
}

Scene symbol_scene(const CelestialSymbol& sym, const PolygonSetup& setup, std::optional<double> lambda,
                   const Tolerances& tol) {
    validate_winding(sym.m, setup.winding);
    const bool solved = !lambda.has_value();
    double lam = solved ? solve_caustic(setup.family, sym.m, setup.winding) : *lambda;
    auto conics = setup_conics(setup, lam);
    PointRing p0 = trace_polygon(conics[0].conic, conics[1].conic, sym.m, setup.t0, tol);
    p0.label = "P0";
    Scene s = construct(sym, p0, conics, tol);
    nlohmann::json ext = {{"A", setup.family.A},     {"B", setup.family.B}, {"winding", setup.winding},
                          {"t0", setup.t0},          {"lambda", lam},       {"lambda_solved", solved},
                          {"polygon_closure", p0.closure_residual.value_or(0.0)}};
    s.extensions["setup"] = ext.dump();
    return s;
}

}  // namespace ponconf
