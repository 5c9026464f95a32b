#include <atomic>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ponconf/celestial.hpp"
#include "ponconf/exact/oracle.hpp"
#include "ponconf/incircle.hpp"
#include "ponconf/scene_io.hpp"
#include "ponconf/service.hpp"
#include "ponconf/version.hpp"

using namespace ponconf;
using json = nlohmann::ordered_json;

namespace {

// thrown to leave with a specific exit status after output was written
struct Exit {
    int code;
};

struct Globals {
    bool json = false;
    std::string tol_spec;
    Tolerances tol() const { return tol_spec.empty() ? Tolerances::from_env() : Tolerances::parse(tol_spec, Tolerances::from_env()); }
};

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

std::string fixed(double x, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

struct AxesOpt {
    std::vector<double> axes{2.0, 1.0};
    int winding = 1;
    double t0 = 0.37;
    std::optional<double> lambda;

    void add(CLI::App* app, bool with_t0 = true) {
        app->add_option("--axes", axes, "semi-axes a,b of the outer ellipse (a >= b)")->delimiter(',')->expected(2);
        app->add_option("--winding", winding, "rotation number q of the polygon");
        if (with_t0) app->add_option("--t0", t0, "parameter of the first vertex");
        app->add_option("--lambda", lambda, "caustic parameter (default: solved for closure)");
    }
    PolygonSetup setup() const {
        PolygonSetup s;
        s.family = ConfocalFamily::from_semi_axes(axes.at(0), axes.at(1));
        s.winding = winding;
        s.t0 = t0;
        return s;
    }
};

void write_outputs(const Scene& s, const std::string& out, const std::string& svg) {
    if (!out.empty()) write_text_file(out, scene_to_json(s));
    if (!svg.empty()) write_text_file(svg, scene_to_svg(s));
}

void print_audit(const Scene& s) {
    const auto& a = s.audit;
    std::cout << "audit: " << a.points << " points, " << a.lines << " lines, degree " << a.degree << "\n";
    auto hist = [](const std::map<int, int>& h) {
        std::string out;
        for (auto [k, v] : h) out += (out.empty() ? "" : ", ") + std::to_string(v) + "x" + std::to_string(k);
        return out.empty() ? std::string("-") : out;
    };
    std::cout << "  point incidences: " << hist(a.point_histogram) << "\n";
    std::cout << "  line incidences:  " << hist(a.line_histogram) << "\n";
    std::cout << "  extra: " << a.extra.size() << "  missing: " << a.missing.size()
              << "  max intended residual: " << sci(a.max_intended_residual) << "\n";
    for (const auto& f : a.missing) std::cout << "  missing " << f.kind << " " << f.a << " / " << f.b << " " << sci(f.residual) << "\n";
    std::size_t shown = 0;
    for (const auto& f : a.extra) {
        if (++shown > 10) {
            std::cout << "  ... " << a.extra.size() - 10 << " more extra incidences\n";
            break;
        }
        std::cout << "  extra " << f.kind << " " << f.a << " / " << f.b << " " << sci(f.residual) << "\n";
    }
    for (const auto& n : a.notes) std::cout << "  note: " << n << "\n";
    std::cout << "  verdict: " << to_string(a.verdict) << "\n";
    std::cout << "closure residual: " << sci(s.closure_residual) << "\n";
}

struct Polygon {
    Scene scene;
    PointRing ring;
    std::optional<Conic> outer, caustic;
};

Polygon load_polygon(const std::string& file) {
    Polygon p;
    p.scene = read_scene_file(file);
    const PointRing* r = p.scene.find_points("P0");
    if (!r && !p.scene.point_rings.empty()) r = &p.scene.point_rings.front();
    if (!r) throw Error(ErrorCode::SchemaError, file + ": scene has no point ring", "/rings");
    p.ring = *r;
    for (const auto& c : p.scene.conics) {
        if (c.role == "outer") p.outer = c.conic;
        if (c.role == "caustic") p.caustic = c.conic;
    }
    return p;
}

std::vector<int> parse_ints(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            try {
                std::size_t used = 0;
                out.push_back(std::stoi(cur, &used));
                if (used != cur.size()) throw std::invalid_argument(cur);
            } catch (const std::exception&) {
                throw Error(ErrorCode::SyntaxError, what + ": '" + text + "' is not a comma separated integer list");
            }
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    return out;
}

// ---- poncelet build

void cmd_poncelet(const Globals& g, const AxesOpt& ax, int m, const std::string& out, const std::string& svg) {
    Tolerances tol = g.tol();
    PolygonSetup setup = ax.setup();
    validate_winding(m, setup.winding);
    double lam = ax.lambda ? *ax.lambda : solve_caustic(setup.family, m, setup.winding);
    auto conics = setup_conics(setup, lam);
    PointRing p = ax.lambda ? trace_polygon(conics[0].conic, conics[1].conic, m, setup.t0, tol)
                            : build_polygon(confocal_pair(setup.family, lam, m, setup.winding, setup.t0), tol);
    Scene s;
    s.m = m;
    s.conics = conics;
    s.point_rings.push_back(p);
    s.closure_residual = p.closure_residual.value_or(0);
    s.audit.degree = 0;
    s.audit.points = m;
    s.audit.verdict = s.closure_residual < tol.closure ? Verdict::Proper : Verdict::Failed;
    s.extensions["setup"] = json{{"A", setup.family.A}, {"B", setup.family.B}, {"winding", setup.winding},
                                 {"t0", setup.t0},      {"lambda", lam},        {"lambda_solved", !ax.lambda}}
                                .dump();
    write_outputs(s, out, svg);
    if (g.json) {
        std::cout << scene_to_json(s);
    } else {
        std::cout << "poncelet polygon m=" << m << " winding=" << setup.winding << " axes=" << ax.axes[0] << "," << ax.axes[1] << "\n";
        std::cout << "caustic lambda: " << fixed(lam, 12) << "\n";
        for (long j = 0; j < p.m(); ++j) {
            const auto& v = p[j].v();
            std::cout << "  P0[" << j << "] = (" << fixed(v[0] / v[2], 9) << ", " << fixed(v[1] / v[2], 9) << ")\n";
        }
        std::cout << "closure residual: " << sci(s.closure_residual) << "\n";
    }
    if (s.audit.verdict == Verdict::Failed) throw Exit{1};
}

// ---- celestial

void cmd_construct(const Globals& g, const std::string& symbol, const std::string& from, const AxesOpt& ax,
                   const std::string& out, const std::string& svg) {
    Tolerances tol = g.tol();
    CelestialSymbol sym = parse_symbol(symbol);
    Scene s;
    if (!from.empty()) {
        Polygon p = load_polygon(from);
        if (p.ring.m() != sym.m)
            throw Error(ErrorCode::InvalidArgument, "polygon has " + std::to_string(p.ring.m()) + " vertices, symbol needs " +
                                                        std::to_string(sym.m));
        std::vector<SceneConic> conics;
        for (const auto& c : p.scene.conics)
            if (c.role == "outer" || c.role == "caustic") conics.push_back(c);
        p.ring.label = "P0";
        s = construct(sym, p.ring, conics, tol);
    } else {
        s = symbol_scene(sym, ax.setup(), ax.lambda, tol);
    }
    write_outputs(s, out, svg);
    if (g.json) {
        std::cout << scene_to_json(s);
    } else {
        std::cout << "symbol " << sym.to_string() << (sym.trivial ? " (trivial)" : " (non-trivial)") << "\n";
        print_audit(s);
    }
    bool ok = s.audit.verdict == Verdict::Proper && s.closure_residual < tol.closure;
    if (!ok) throw Exit{1};
}

void cmd_validate(const Globals& g, const std::string& symbol) {
    CelestialSymbol sym = parse_symbol(symbol);
    if (g.json) {
        json pairs = json::array();
        for (auto [a, b] : sym.pairs) pairs.push_back({a, b});
        std::cout << json{{"symbol", sym.to_string()}, {"m", sym.m}, {"k", sym.k()}, {"pairs", pairs}, {"trivial", sym.trivial}, {"warnings", sym.warnings}}
                         .dump(2)
                  << "\n";
        return;
    }
    std::cout << "symbol:  " << sym.to_string() << "\n";
    std::cout << "m:       " << sym.m << "\n";
    std::cout << "steps:   " << sym.k() << "\n";
    for (int i = 0; i < sym.k(); ++i)
        std::cout << "  L" << i + 1 << " = v" << sym.pairs[static_cast<std::size_t>(i)].first << "(P" << i << "), P"
                  << i + 1 << " = w" << sym.pairs[static_cast<std::size_t>(i)].second << "(L" << i + 1 << ")\n";
    std::cout << "trivial: " << (sym.trivial ? "yes" : "no") << "\n";
    for (const auto& w : sym.warnings) std::cout << "warning: " << w << "\n";
}

// ---- grid

void cmd_grid(const Globals& g, const std::string& from, const std::string& rings, bool dual) {
    Tolerances tol = g.tol();
    Polygon p = load_polygon(from);
    std::vector<int> pick;
    if (!rings.empty()) pick = parse_ints(rings, "--rings");
    json rep;
    bool ok = false;
    if (!dual) {
        LineRing edges = v_op(p.ring, 1, std::nullopt, tol);
        Grid gr = p.caustic ? build_grid(edges, *p.caustic, tol) : build_grid(edges, tol);
        json rs = json::array();
        for (std::size_t i = 0; i < gr.rings.size(); ++i) {
            if (!pick.empty() && std::find(pick.begin(), pick.end(), static_cast<int>(i)) == pick.end()) continue;
            rs.push_back({{"index", i}, {"label", gr.rings[i].label}, {"fit_residual", gr.fit_residuals[i]}});
        }
        rep = {{"kind", "grid"}, {"m", p.ring.m()}, {"rings", rs}, {"spectrum", gr.spectrum}, {"codependence_rank", gr.codependence_rank}};
        ok = gr.codependence_rank == 2;
    } else {
        DualGrid dg = p.outer ? build_dual_grid(p.ring, *p.outer, tol) : build_dual_grid(p.ring, tol);
        json rs = json::array();
        for (std::size_t i = 0; i < dg.rings.size(); ++i) {
            if (!pick.empty() && std::find(pick.begin(), pick.end(), static_cast<int>(i)) == pick.end()) continue;
            rs.push_back({{"index", i}, {"label", dg.rings[i].label}, {"fit_residual", dg.fit_residuals[i]}});
        }
        rep = {{"kind", "dual-grid"}, {"m", p.ring.m()}, {"rings", rs}, {"spectrum", dg.spectrum}, {"dependence_rank", dg.dependence_rank}};
        ok = dg.dependence_rank == 2;
    }
    if (g.json) {
        std::cout << rep.dump(2) << "\n";
    } else {
        std::cout << rep["kind"].get<std::string>() << " of a " << p.ring.m() << "-gon\n";
        std::cout << "  ring  label        fit residual\n";
        for (const auto& r : rep["rings"]) {
            char line[96];
            std::snprintf(line, sizeof line, "  %4d  %-12s %s\n", r["index"].get<int>(), r["label"].get<std::string>().c_str(),
                          sci(r["fit_residual"].get<double>()).c_str());
            std::cout << line;
        }
        std::cout << "  spectrum:";
        for (double x : rep["spectrum"]) std::cout << " " << sci(x);
        std::cout << "\n  " << (dual ? "dependence" : "co-dependence") << " rank: "
                  << (dual ? rep["dependence_rank"] : rep["codependence_rank"]).get<int>() << "\n";
    }
    if (!ok) throw Exit{1};
}

// ---- incircles

void cmd_incircles(const Globals& g, const std::string& from, const std::string& shifts, const std::string& out, const std::string& svg) {
    Tolerances tol = g.tol();
    auto sh = parse_ints(shifts, "--shifts");
    if (sh.size() != 3) throw Error(ErrorCode::InvalidArgument, "--shifts needs three values a,b,c");
    Polygon p = load_polygon(from);
    LineRing edges = v_op(p.ring, 1, std::nullopt, tol);
    Scene s = centers_scene(edges, sh[0], sh[1], sh[2], tol);
    write_outputs(s, out, svg);
    if (g.json) {
        std::cout << scene_to_json(s);
    } else {
        std::cout << "incircle centres for shifts " << shifts << " on a " << p.ring.m() << "-gon\n";
        print_audit(s);
        std::cout << "four-centre collinearity residual: " << sci(s.closure_residual) << "\n";
    }
    if (s.audit.verdict == Verdict::Failed || !(s.closure_residual < tol.closure)) throw Exit{1};
}

// ---- certify

void cmd_certify(const std::vector<exact::CertificateReport>& reports) {
    std::cout << (reports.size() == 1 ? exact::to_json(reports.front()) : exact::to_json(reports)) << "\n";
    for (const auto& r : reports)
        if (!r.pass) throw Exit{1};
}

Rational parse_rational(const std::string& s, const std::string& what) {
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw Error(ErrorCode::SyntaxError, what + ": '" + s + "' is not a rational");
    q.canonicalize();
    return q;
}

// ---- pentagram

void cmd_pentagram(const Globals& g, const std::string& from, int k, std::optional<int> k2, const std::string& out) {
    Tolerances tol = g.tol();
    Polygon p = load_polygon(from);
    PointRing t = pentagram(p.ring, k, tol);
    Scene s;
    s.m = static_cast<int>(p.ring.m());
    s.point_rings = {p.ring, t};
    std::optional<double> comm;
    if (k2) comm = commute_residual(p.ring, k, *k2, tol);
    s.closure_residual = comm.value_or(0);
    s.audit.degree = 0;
    s.audit.points = static_cast<int>(2 * p.ring.m());
    s.audit.verdict = !comm || *comm < tol.closure ? Verdict::Proper : Verdict::Failed;
    if (comm) s.extensions["commute"] = json{{"k1", k}, {"k2", *k2}, {"residual", *comm}}.dump();
    if (!out.empty()) write_text_file(out, scene_to_json(s));
    if (g.json) {
        std::cout << scene_to_json(s);
    } else {
        std::cout << "T" << k << " of a " << p.ring.m() << "-gon\n";
        for (long j = 0; j < t.m(); ++j) {
            const auto& v = t[j].v();
            std::cout << "  " << t.label << "[" << j << "] = (" << fixed(v[0] / v[2], 9) << ", " << fixed(v[1] / v[2], 9) << ")\n";
        }
        if (comm) std::cout << "T" << k << " T" << *k2 << " vs T" << *k2 << " T" << k << ": " << sci(*comm) << "\n";
    }
    if (s.audit.verdict == Verdict::Failed) throw Exit{1};
}

// ---- sweep

void cmd_sweep(const Globals& g, const std::string& symbol, const AxesOpt& ax, int t0_grid, int lambda_grid, double span,
               unsigned threads) {
    Tolerances tol = g.tol();
    CelestialSymbol sym = parse_symbol(symbol);
    if (t0_grid < 1 || lambda_grid < 1) throw Error(ErrorCode::InvalidArgument, "grid sizes must be positive");
    PolygonSetup setup = ax.setup();
    validate_winding(sym.m, setup.winding);
    double lam0 = ax.lambda ? *ax.lambda : solve_caustic(setup.family, sym.m, setup.winding);
    struct Row {
        double t0, lambda, residual;
        std::string verdict;
    };
    std::vector<Row> rows;
    for (int j = 0; j < lambda_grid; ++j) {
        // relative offsets symmetric around the solved value
        double off = lambda_grid == 1 ? 0.0 : span * (2.0 * j / (lambda_grid - 1) - 1.0);
        for (int i = 0; i < t0_grid; ++i) rows.push_back({2 * M_PI * i / t0_grid, lam0 * (1 + off), 0, ""});
    }
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < rows.size();) {
            Row& r = rows[k];
            PolygonSetup s = setup;
            s.t0 = r.t0;
            try {
                Scene sc = symbol_scene(sym, s, r.lambda, tol);
                r.residual = sc.closure_residual;
                r.verdict = to_string(sc.audit.verdict);
            } catch (const Error&) {
                r.residual = std::numeric_limits<double>::infinity();
                r.verdict = "failed";
            }
        }
    };
    unsigned n = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < std::min<std::size_t>(n, rows.size()); ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (g.json) {
        json a = json::array();
        for (const auto& r : rows)
            a.push_back({{"t0", r.t0}, {"lambda", r.lambda}, {"residual", std::isfinite(r.residual) ? json(r.residual) : json(nullptr)}, {"verdict", r.verdict}});
        std::cout << a.dump(2) << "\n";
        return;
    }
    std::cout << "t0,lambda,residual,verdict\n";
    for (const auto& r : rows)
        std::cout << fixed(r.t0, 9) << "," << fixed(r.lambda, 12) << "," << (std::isfinite(r.residual) ? sci(r.residual) : "inf") << ","
                  << r.verdict << "\n";
}

// ---- serve

std::atomic<service::Server*> g_server{nullptr};
std::atomic<bool> g_signalled{false};

void on_signal(int) { g_signalled = true; }

void cmd_serve(const Globals& g, const std::string& host, int port) {
    service::ServiceOptions opts;
    opts.host = host;
    opts.port = port;
    opts.tol = g.tol();
    service::Server server(opts);
    int bound = server.bind();
    std::cerr << "ponconf " << version() << " listening on http://" << host << ":" << bound << "\n";
    std::signal(SIGTERM, on_signal);
    std::signal(SIGINT, on_signal);
    std::thread watcher([&] {
        while (!g_signalled) std::this_thread::sleep_for(std::chrono::milliseconds(50));
        std::cerr << "draining\n";
        server.drain();
    });
    server.run();
    g_signalled = true;
    watcher.join();
}

// ---- misc

void cmd_render(const std::string& from, const std::string& svg) {
    Scene s = read_scene_file(from);
    std::string text = scene_to_svg(s);
    if (svg.empty()) std::cout << text;
    else write_text_file(svg, text);
}

void cmd_animate(const Globals& g, const std::string& symbol, const AxesOpt& ax, int frames, const std::vector<double>& lambdas,
                 const std::string& dir, bool no_svg) {
    AnimationSpec spec;
    spec.symbol = parse_symbol(symbol);
    spec.setup = ax.setup();
    spec.t0_frames = frames;
    spec.lambdas = lambdas;
    spec.svg = !no_svg;
    auto rows = animate(spec, dir, g.tol());
    std::size_t failed = 0;
    double worst = 0;
    for (const auto& r : rows) {
        if (r.verdict == "failed") ++failed;
        else worst = std::max(worst, r.closure_residual);
    }
    std::cout << rows.size() << " frames written to " << dir << "; " << failed << " failed; worst closure residual " << sci(worst) << "\n";
    if (failed) throw Exit{1};
}

void cmd_equivalence(const Globals& g, const std::string& from, int a) {
    Polygon p = load_polygon(from);
    Equivalence e = odd_equivalence(p.ring, a, g.tol());
    json j{{"shift", e.shift}, {"residual", e.residual}, {"signature", e.signature}};
    json m = json::array();
    for (const auto& row : e.transform.matrix()) m.push_back({row[0], row[1], row[2]});
    j["transform"] = m;
    if (g.json) std::cout << j.dump(2) << "\n";
    else
        std::cout << "projective equivalence P -> w" << a << "(v1(P)): shift " << e.shift << ", residual " << sci(e.residual)
                  << (e.signature.empty() ? "" : ", signature " + e.signature) << "\n";
}

void cmd_nested(const Globals& g, int m, const std::string& shifts, const std::string& out, const std::string& svg) {
    auto sh = parse_ints(shifts, "--shifts");
    if (sh.size() != 5) throw Error(ErrorCode::InvalidArgument, "--shifts needs five values");
    Scene s = build_nested(m, {sh[0], sh[1], sh[2], sh[3], sh[4]}, g.tol());
    write_outputs(s, out, svg);
    if (g.json) std::cout << scene_to_json(s);
    else print_audit(s);
    if (s.audit.verdict != Verdict::Proper) throw Exit{1};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poncelet-grid incidence configurations: constructions, audits and exact certificates", "ponconf"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);
    Globals g;
    app.add_flag("--json", g.json, "machine-readable JSON output");
    app.add_option("--tol", g.tol_spec, "tolerance overrides, e.g. closure=1e-8,incidence=1e-10 (PONCELET_TOL is read first)");

    // poncelet build
    auto* poncelet = app.add_subcommand("poncelet", "Poncelet polygons");
    poncelet->require_subcommand(1);
    auto* pb = poncelet->add_subcommand("build", "closed polygon between confocal conics");
    AxesOpt pb_ax;
    int pb_m = 7;
    std::string pb_out, pb_svg;
    pb_ax.add(pb);
    pb->add_option("--m", pb_m, "number of vertices")->required();
    pb->add_option("--out", pb_out, "write the scene JSON");
    pb->add_option("--svg", pb_svg, "write an SVG drawing");
    pb->callback([&] { cmd_poncelet(g, pb_ax, pb_m, pb_out, pb_svg); });

    // celestial
    auto* cel = app.add_subcommand("celestial", "celestial symbols m#(a1,b1;...)");
    cel->require_subcommand(1);
    auto* cc = cel->add_subcommand("construct", "run the alternating construction and audit the incidences");
    std::string cc_sym, cc_from, cc_out, cc_svg;
    AxesOpt cc_ax;
    cc->add_option("--symbol", cc_sym, "celestial symbol")->required();
    auto* cc_from_opt = cc->add_option("--from", cc_from, "polygon scene file (ring P0 or the first point ring)");
    cc_ax.add(cc);
    cc_from_opt->excludes(cc->get_option("--axes"));
    cc->add_option("--out", cc_out, "write the scene JSON");
    cc->add_option("--svg", cc_svg, "write an SVG drawing");
    cc->callback([&] { cmd_construct(g, cc_sym, cc_from, cc_ax, cc_out, cc_svg); });
    auto* cv = cel->add_subcommand("validate", "parse and check a symbol");
    std::string cv_sym;
    cv->add_option("--symbol", cv_sym, "celestial symbol")->required();
    cv->callback([&] { cmd_validate(g, cv_sym); });

    // grid
    auto* grid = app.add_subcommand("grid", "Poncelet grid audit (conic fits and co-dependence)");
    std::string gr_from, gr_rings;
    grid->add_option("--from", gr_from, "polygon scene file");
    grid->add_option("--rings", gr_rings, "comma separated ring indices to report");
    auto* gd = grid->add_subcommand("dual", "dual grid audit (tangent envelopes and dependence)");
    std::string gd_from, gd_rings;
    gd->add_option("--from", gd_from, "polygon scene file")->required();
    gd->add_option("--rings", gd_rings, "comma separated ring indices to report");
    gd->callback([&] { cmd_grid(g, gd_from, gd_rings, true); });
    grid->callback([&] {
        if (grid->got_subcommand(gd)) return;
        if (gr_from.empty()) throw CLI::RequiredError("--from");
        cmd_grid(g, gr_from, gr_rings, false);
    });

    // incircles
    auto* inc = app.add_subcommand("incircles", "incircle centres of square cells and their collinearities");
    std::string in_from, in_shifts, in_out, in_svg;
    inc->add_option("--from", in_from, "polygon scene file")->required();
    inc->add_option("--shifts", in_shifts, "three shifts a,b,c")->required();
    inc->add_option("--out", in_out, "write the centres scene JSON");
    inc->add_option("--svg", in_svg, "write an SVG drawing");
    inc->callback([&] { cmd_incircles(g, in_from, in_shifts, in_out, in_svg); });

    // certify
    auto* cert = app.add_subcommand("certify", "exact certificates for the core lemma");
    cert->require_subcommand(1);
    auto* cl = cert->add_subcommand("lemma1", "exact determinants on seeded random rationals");
    std::size_t cl_samples = 200;
    std::uint64_t cl_seed = 42;
    cl->add_option("--samples", cl_samples, "number of quadruples");
    cl->add_option("--seed", cl_seed, "sampler seed");
    cl->callback([&] { cmd_certify({exact::lemma1_sweep(cl_samples, cl_seed)}); });
    auto* cp = cert->add_subcommand("polynomial", "expand both determinants symbolically");
    cp->callback([&] { cmd_certify({exact::certify_identity_polynomial()}); });
    auto* cs = cert->add_subcommand("special", "special positions (mirror / swap-mirror)");
    std::string cs_case = "x-axis", cs_s = "2", cs_t = "3", cs_a = "1/5";
    cs->add_option("--case", cs_case, "mirror-x | swap-mirror-x | mirror-y | swap-mirror-y | mirror-origin | swap-mirror-origin | x-axis (both x cases, default) | all");
    cs->add_option("--s", cs_s, "rational s");
    cs->add_option("--t", cs_t, "rational t");
    cs->add_option("--a", cs_a, "rational a (axis point parameter)");
    cs->callback([&] {
        Rational s = parse_rational(cs_s, "--s"), t = parse_rational(cs_t, "--t"), a = parse_rational(cs_a, "--a");
        std::vector<exact::SpecialCase> cases;
        if (cs_case == "x-axis") cases = {exact::SpecialCase::MirrorX, exact::SpecialCase::SwapMirrorX};
        else if (cs_case == "all") cases = exact::all_special_cases();
        else cases = {exact::special_case_from_string(cs_case)};
        std::vector<exact::CertificateReport> reports;
        for (auto c : cases) reports.push_back(exact::special_case_check(s, t, a, c));
        cmd_certify(reports);
    });

    // pentagram
    auto* pent = app.add_subcommand("pentagram", "pentagram-type map T_k = w1 v_k");
    std::string pe_from, pe_out;
    int pe_k = 2;
    std::optional<int> pe_k2;
    pent->add_option("--from", pe_from, "polygon scene file")->required();
    pent->add_option("--k", pe_k, "diagonal shift")->required();
    pent->add_option("--check-commute", pe_k2, "second shift; report T_k T_k2 vs T_k2 T_k");
    pent->add_option("--out", pe_out, "write the scene JSON");
    pent->callback([&] { cmd_pentagram(g, pe_from, pe_k, pe_k2, pe_out); });

    // equivalence
    auto* eq = app.add_subcommand("equivalence", "projective map from an odd polygon to its grid ring");
    std::string eq_from;
    int eq_a = 2;
    eq->add_option("--from", eq_from, "polygon scene file")->required();
    eq->add_option("--a", eq_a, "grid ring index");
    eq->callback([&] { cmd_equivalence(g, eq_from, eq_a); });

    // nested
    auto* nest = app.add_subcommand("nested", "nested (n6) configuration over five shifts");
    int ne_m = 12;
    std::string ne_shifts = "1,2,3,4,5", ne_out, ne_svg;
    nest->add_option("--m", ne_m, "polygon size");
    nest->add_option("--shifts", ne_shifts, "five shifts");
    nest->add_option("--out", ne_out, "write the scene JSON");
    nest->add_option("--svg", ne_svg, "write an SVG drawing");
    nest->callback([&] { cmd_nested(g, ne_m, ne_shifts, ne_out, ne_svg); });

    // sweep
    auto* sw = app.add_subcommand("sweep", "closure residual over t0 and lambda grids (CSV)");
    std::string sw_sym;
    AxesOpt sw_ax;
    int sw_t0 = 16, sw_lam = 1;
    double sw_span = 0.01;
    unsigned sw_threads = 0;
    sw->add_option("--symbol", sw_sym, "celestial symbol")->required();
    sw_ax.add(sw, false);
    sw->add_option("--t0-grid", sw_t0, "t0 samples over a full turn");
    sw->add_option("--lambda-grid", sw_lam, "lambda samples around the solved caustic");
    sw->add_option("--lambda-span", sw_span, "relative half-width of the lambda grid");
    sw->add_option("--threads", sw_threads, "worker threads (0: all cores)");
    sw->callback([&] { cmd_sweep(g, sw_sym, sw_ax, sw_t0, sw_lam, sw_span, sw_threads); });

    // animate / render
    auto* an = app.add_subcommand("animate", "frame export over a t0 sweep");
    std::string an_sym, an_dir = "frames";
    AxesOpt an_ax;
    int an_frames = 120;
    std::vector<double> an_lambdas;
    bool an_no_svg = false;
    an->add_option("--symbol", an_sym, "celestial symbol")->required();
    an_ax.add(an, false);
    an->add_option("--frames", an_frames, "frames per lambda");
    an->add_option("--lambdas", an_lambdas, "explicit caustic parameters")->delimiter(',');
    an->add_option("--out", an_dir, "output directory");
    an->add_flag("--no-svg", an_no_svg, "skip SVG frames");
    an->callback([&] { cmd_animate(g, an_sym, an_ax, an_frames, an_lambdas, an_dir, an_no_svg); });
    auto* rd = app.add_subcommand("render", "render a scene file as SVG");
    std::string rd_from, rd_svg;
    rd->add_option("--from", rd_from, "scene file")->required();
    rd->add_option("--svg", rd_svg, "output file (default stdout)");
    rd->callback([&] { cmd_render(rd_from, rd_svg); });

    // serve
    auto* srv = app.add_subcommand("serve", "HTTP/JSON service for the explorer");
    int sv_port = 8080;
    std::string sv_host = "127.0.0.1";
    srv->add_option("--port", sv_port, "port (0 picks a free one)");
    srv->add_option("--host", sv_host, "bind address");
    srv->callback([&] { cmd_serve(g, sv_host, sv_port); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Exit& e) {
        std::cout.flush();
        return e.code;
    } catch (const Error& e) {
        std::cout.flush();
        std::cerr << "error [" << to_string(e.code()) << "]" << (e.step().empty() ? "" : " at " + e.step()) << ": " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
