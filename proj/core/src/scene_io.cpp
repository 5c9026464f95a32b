#include "ponconf/scene_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ponconf/error.hpp"
#include "ponconf/poncelet.hpp"

namespace ponconf {

namespace {

using json = nlohmann::ordered_json;

json num(double x) { return x; }
json num(const Rational& x) { return x.get_str(); }

template <class T> json vec_json(const Vec3<T>& v) { return json::array({num(v[0]), num(v[1]), num(v[2])}); }

json flagged_json(const std::vector<FlaggedIncidence>& fs) {
    json a = json::array();
    for (const auto& f : fs) a.push_back({{"kind", f.kind}, {"a", f.a}, {"b", f.b}, {"residual", f.residual}});
    return a;
}

json histogram_json(const std::map<int, int>& h) {
    json o = json::object();
    for (auto [k, v] : h) o[std::to_string(k)] = v;
    return o;
}

json audit_json(const IncidenceAudit& a) {
    return {{"degree", a.degree},
            {"tolerance", a.tolerance},
            {"points", a.points},
            {"lines", a.lines},
            {"point_histogram", histogram_json(a.point_histogram)},
            {"line_histogram", histogram_json(a.line_histogram)},
            {"extra", flagged_json(a.extra)},
            {"missing", flagged_json(a.missing)},
            {"max_intended_residual", a.max_intended_residual},
            {"verdict", to_string(a.verdict)},
            {"notes", a.notes}};
}

template <class E> json ring_json(const BasicRing<E>& r, const char* kind) {
    json j;
    j["label"] = r.label;
    j["kind"] = kind;
    j["shift"] = r.shift;
    j["drift2"] = r.drift2;
    json trail = json::array();
    for (const auto& t : r.trail) trail.push_back({{"op", t.op}, {"shift", t.shift}, {"source", t.source}});
    j["trail"] = trail;
    if (r.closure_residual) j["closure_residual"] = *r.closure_residual;
    json el = json::array();
    for (const auto& e : r.elements) el.push_back(vec_json(e.v()));
    j["elements"] = el;
    return j;
}

template <class T> std::string to_json_text(const BasicScene<T>& s) {
    json j;
    j["backend"] = BasicScene<T>::backend();
    j["m"] = s.m;
    if (s.symbol) j["symbol"] = *s.symbol;
    json conics = json::array();
    for (const auto& c : s.conics) {
        const auto& m = c.conic.matrix();
        conics.push_back({{"id", c.id},
                          {"role", c.role},
                          {"kind", c.conic.kind() == ConicKind::Point ? "point" : "dual"},
                          {"matrix6", json::array({num(m[0][0]), num(m[0][1]), num(m[0][2]), num(m[1][1]), num(m[1][2]),
                                                   num(m[2][2])})}});
    }
    j["conics"] = conics;
    json rings = json::array();
    for (const auto& r : s.point_rings) rings.push_back(ring_json(r, "points"));
    for (const auto& r : s.line_rings) rings.push_back(ring_json(r, "lines"));
    j["rings"] = rings;
    j["audit"] = audit_json(s.audit);
    j["closure_residual"] = s.closure_residual;
    json ext = json::object();
    for (const auto& [k, v] : s.extensions) ext[k] = json::parse(v);
    j["extensions"] = ext;
    return j.dump(2) + "\n";
}

// ---- reading

[[noreturn]] void schema(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::SchemaError, what + " at " + (path.empty() ? "/" : path), path.empty() ? "/" : path);
}

const json& at(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) schema(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) schema(path + "/" + key, "missing field '" + key + "'");
    return *it;
}

std::string str_at(const json& j, const std::string& key, const std::string& path) {
    const json& v = at(j, key, path);
    if (!v.is_string()) schema(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

long int_at(const json& j, const std::string& key, const std::string& path) {
    const json& v = at(j, key, path);
    if (!v.is_number_integer()) schema(path + "/" + key, "expected an integer");
    return v.get<long>();
}

double dbl(const json& v, const std::string& path) {
    if (!v.is_number()) schema(path, "expected a number");
    return v.get<double>();
}

double dbl_at(const json& j, const std::string& key, const std::string& path) {
    return dbl(at(j, key, path), path + "/" + key);
}

const json& arr_at(const json& j, const std::string& key, const std::string& path) {
    const json& v = at(j, key, path);
    if (!v.is_array()) schema(path + "/" + key, "expected an array");
    return v;
}

template <class T> T scalar(const json& v, const std::string& path);
template <> double scalar<double>(const json& v, const std::string& path) { return dbl(v, path); }
template <> Rational scalar<Rational>(const json& v, const std::string& path) {
    if (!v.is_string()) schema(path, "expected a rational string");
    Rational q;
    if (q.set_str(v.get<std::string>(), 10) != 0) schema(path, "malformed rational '" + v.get<std::string>() + "'");
    q.canonicalize();
    return q;
}

template <class T> Vec3<T> vec_at(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) schema(path, "expected three homogeneous coordinates");
    return {scalar<T>(v[0], path + "/0"), scalar<T>(v[1], path + "/1"), scalar<T>(v[2], path + "/2")};
}

std::vector<FlaggedIncidence> flagged_at(const json& j, const std::string& key, const std::string& path) {
    std::vector<FlaggedIncidence> out;
    const json& a = arr_at(j, key, path);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::string p = path + "/" + key + "/" + std::to_string(i);
        out.push_back({str_at(a[i], "kind", p), str_at(a[i], "a", p), str_at(a[i], "b", p), dbl_at(a[i], "residual", p)});
    }
    return out;
}

std::map<int, int> histogram_at(const json& j, const std::string& key, const std::string& path) {
    const json& o = at(j, key, path);
    if (!o.is_object()) schema(path + "/" + key, "expected an object");
    std::map<int, int> h;
    for (auto it = o.begin(); it != o.end(); ++it) {
        std::string p = path + "/" + key + "/" + it.key();
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(it.key(), &used);
            if (used != it.key().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            schema(p, "histogram keys must be integers");
        }
        if (!it.value().is_number_integer()) schema(p, "expected an integer");
        h[k] = it.value().get<int>();
    }
    return h;
}

IncidenceAudit audit_from(const json& j, const std::string& path) {
    IncidenceAudit a;
    a.degree = static_cast<int>(int_at(j, "degree", path));
    a.tolerance = dbl_at(j, "tolerance", path);
    a.points = static_cast<int>(int_at(j, "points", path));
    a.lines = static_cast<int>(int_at(j, "lines", path));
    a.point_histogram = histogram_at(j, "point_histogram", path);
    a.line_histogram = histogram_at(j, "line_histogram", path);
    a.extra = flagged_at(j, "extra", path);
    a.missing = flagged_at(j, "missing", path);
    a.max_intended_residual = dbl_at(j, "max_intended_residual", path);
    try {
        a.verdict = verdict_from_string(str_at(j, "verdict", path));
    } catch (const Error&) {
        schema(path + "/verdict", "unknown verdict");
    }
    const json& notes = arr_at(j, "notes", path);
    for (std::size_t i = 0; i < notes.size(); ++i) {
        if (!notes[i].is_string()) schema(path + "/notes/" + std::to_string(i), "expected a string");
        a.notes.push_back(notes[i].get<std::string>());
    }
    return a;
}

template <class E, class T> BasicRing<E> ring_from(const json& j, const std::string& path) {
    BasicRing<E> r;
    r.label = str_at(j, "label", path);
    r.shift = static_cast<int>(int_at(j, "shift", path));
    r.drift2 = int_at(j, "drift2", path);
    const json& trail = arr_at(j, "trail", path);
    for (std::size_t i = 0; i < trail.size(); ++i) {
        std::string p = path + "/trail/" + std::to_string(i);
        r.trail.push_back({str_at(trail[i], "op", p), static_cast<int>(int_at(trail[i], "shift", p)), str_at(trail[i], "source", p)});
    }
    if (j.contains("closure_residual")) r.closure_residual = dbl_at(j, "closure_residual", path);
    const json& el = arr_at(j, "elements", path);
    for (std::size_t i = 0; i < el.size(); ++i) {
        std::string p = path + "/elements/" + std::to_string(i);
        Vec3<T> v = vec_at<T>(el[i], p);
        if (is_zero_vec(v)) schema(p, "zero vector");
        if constexpr (ScalarTraits<T>::exact) r.elements.push_back(E(v));
        else r.elements.push_back(E::from_canonical(v));
    }
    return r;
}

template <class T> BasicScene<T> from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SyntaxError, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) schema("", "scene must be an object");
    const std::string backend = str_at(j, "backend", "");
    if (backend != BasicScene<T>::backend())
        schema("/backend", "backend '" + backend + "' where '" + BasicScene<T>::backend() + "' was expected");
    BasicScene<T> s;
    s.m = static_cast<int>(int_at(j, "m", ""));
    if (j.contains("symbol")) s.symbol = str_at(j, "symbol", "");

    const json& conics = arr_at(j, "conics", "");
    for (std::size_t i = 0; i < conics.size(); ++i) {
        std::string p = "/conics/" + std::to_string(i);
        const json& c = conics[i];
        const json& m6 = arr_at(c, "matrix6", p);
        if (m6.size() != 6) schema(p + "/matrix6", "matrix6 needs 6 entries, got " + std::to_string(m6.size()));
        std::array<T, 6> e;
        for (std::size_t k = 0; k < 6; ++k) e[k] = scalar<T>(m6[k], p + "/matrix6/" + std::to_string(k));
        Mat3<T> m{{{e[0], e[1], e[2]}, {e[1], e[3], e[4]}, {e[2], e[4], e[5]}}};
        std::string kind = c.contains("kind") ? str_at(c, "kind", p) : "point";
        if (kind != "point" && kind != "dual") schema(p + "/kind", "kind must be 'point' or 'dual'");
        try {
            s.conics.push_back({str_at(c, "id", p), str_at(c, "role", p),
                                BasicConic<T>::from_normalised(m, kind == "point" ? ConicKind::Point : ConicKind::Dual)});
        } catch (const Error& err) {
            if (err.code() == ErrorCode::SchemaError) throw;
            schema(p + "/matrix6", err.what());
        }
    }

    const json& rings = arr_at(j, "rings", "");
    for (std::size_t i = 0; i < rings.size(); ++i) {
        std::string p = "/rings/" + std::to_string(i);
        std::string kind = str_at(rings[i], "kind", p);
        if (kind == "points") s.point_rings.push_back(ring_from<BasicPoint<T>, T>(rings[i], p));
        else if (kind == "lines") s.line_rings.push_back(ring_from<BasicLine<T>, T>(rings[i], p));
        else schema(p + "/kind", "kind must be 'points' or 'lines'");
    }
    s.audit = audit_from(at(j, "audit", ""), "/audit");
    s.closure_residual = dbl_at(j, "closure_residual", "");
    if (j.contains("extensions")) {
        const json& ext = j["extensions"];
        if (!ext.is_object()) schema("/extensions", "expected an object");
        for (auto it = ext.begin(); it != ext.end(); ++it) s.extensions[it.key()] = it.value().dump();
    }
    return s;
}

}  // namespace

std::string scene_to_json(const Scene& s) { return to_json_text(s); }
std::string scene_to_json(const ExactScene& s) { return to_json_text(s); }

std::string scene_backend(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::SyntaxError, std::string("malformed JSON: ") + e.what());
    }
    return str_at(j, "backend", "");
}

Scene json_to_scene(const std::string& json_text) { return from_json_text<double>(json_text); }
ExactScene json_to_exact_scene(const std::string& json_text) { return from_json_text<Rational>(json_text); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Scene read_scene_file(const std::filesystem::path& path) {
    try {
        return json_to_scene(read_text_file(path));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::IoError) throw;
        throw Error(e.code(), path.string() + ": " + e.what(), e.step());
    }
}

// ---- SVG

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(x) < 5e-13 ? 0.0 : x);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string id_of(const std::string& label, long j) {
    std::string id;
    for (char c : label) id += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
    return id + "_" + std::to_string(j);
}

bool finite_point(const Point& p, double& x, double& y) {
    if (std::abs(p[2]) < 1e-9 * std::max(std::abs(p[0]), std::abs(p[1]))) return false;
    x = p[0] / p[2];
    y = p[1] / p[2];
    return std::isfinite(x) && std::isfinite(y);
}

struct Box {
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    void add(double x, double y) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
    }
    bool empty() const { return x0 > x1; }
};

// clip the line a x + b y + c = 0 to the box
bool clip(const Line& l, const Box& b, double& ax, double& ay, double& bx, double& by) {
    std::vector<std::pair<double, double>> hits;
    auto try_pt = [&](double x, double y) {
        const double e = 1e-9 * std::max(b.x1 - b.x0, b.y1 - b.y0);
        if (x >= b.x0 - e && x <= b.x1 + e && y >= b.y0 - e && y <= b.y1 + e) hits.emplace_back(x, y);
    };
    if (std::abs(l[1]) > 1e-15) {
        for (double x : {b.x0, b.x1}) try_pt(x, -(l[0] * x + l[2]) / l[1]);
    }
    if (std::abs(l[0]) > 1e-15) {
        for (double y : {b.y0, b.y1}) try_pt(-(l[1] * y + l[2]) / l[0], y);
    }
    if (hits.size() < 2) return false;
    // farthest pair
    double best = -1;
    for (std::size_t i = 0; i < hits.size(); ++i)
        for (std::size_t j = i + 1; j < hits.size(); ++j) {
            double d = std::hypot(hits[i].first - hits[j].first, hits[i].second - hits[j].second);
            if (d > best) {
                best = d;
                ax = hits[i].first;
                ay = hits[i].second;
                bx = hits[j].first;
                by = hits[j].second;
            }
        }
    return best > 0;
}

std::string colour(const SvgStyle& st, const std::string& label, const std::string& fallback) {
    auto it = st.ring_colors.find(label);
    return it == st.ring_colors.end() ? fallback : it->second;
}

}  // namespace

std::string scene_to_svg(const Scene& s, const SvgStyle& st) {
    Box box;
    double x = 0, y = 0;
    for (const auto& r : s.point_rings)
        for (const auto& p : r.elements)
            if (finite_point(p, x, y)) box.add(x, y);
    std::vector<std::pair<const SceneConic*, std::vector<std::pair<double, double>>>> curves;
    if (st.draw_conics)
        for (const auto& c : s.conics) {
            if (c.conic.kind() != ConicKind::Point || c.conic.degenerate() || !is_ellipse(c.conic)) continue;
            std::vector<std::pair<double, double>> pts;
            for (int i = 0; i < 64; ++i) {
                Point p = ellipse_point(c.conic, 2 * std::numbers::pi * i / 64);
                if (finite_point(p, x, y)) pts.emplace_back(x, y);
            }
            for (auto [px, py] : pts) box.add(px, py);
            curves.emplace_back(&c, std::move(pts));
        }
    if (box.empty()) box = {-1, -1, 1, 1};
    double span = std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-9});
    double pad = st.margin * span;
    box.x0 -= pad;
    box.y0 -= pad;
    box.x1 += pad;
    box.y1 += pad;
    const double w = box.x1 - box.x0, h = box.y1 - box.y0;
    const double px = std::max(w, h) / std::max(st.width, st.height);  // world units per pixel

    std::ostringstream os;
    // world y points up; the group flips it
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(st.width) << "\" height=\"" << fmt(st.height)
       << "\" viewBox=\"" << fmt(box.x0) << " " << fmt(-box.y1) << " " << fmt(w) << " " << fmt(h) << "\">\n";
    os << "<rect x=\"" << fmt(box.x0) << "\" y=\"" << fmt(-box.y1) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
       << "\" fill=\"" << esc(st.background) << "\"/>\n";
    os << "<g id=\"scene\" transform=\"scale(1,-1)\">\n";
    os << "<g id=\"conics\">\n";
    for (const auto& [c, pts] : curves) {
        if (pts.empty()) continue;
        os << "<path id=\"conic_" << id_of(c->id, 0) << "\" class=\"conic " << esc(c->role) << "\" d=\"M";
        for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " L" : "") << fmt(pts[i].first) << " " << fmt(pts[i].second);
        os << " Z\" fill=\"none\" stroke=\"" << esc(st.conic_color) << "\" stroke-width=\"" << fmt(st.conic_width * px) << "\"/>\n";
    }
    os << "</g>\n";
    for (const auto& r : s.line_rings) {
        os << "<g id=\"ring_" << id_of(r.label, 0) << "\" class=\"lines\" data-label=\"" << esc(r.label) << "\" stroke=\""
           << esc(colour(st, r.label, st.line_color)) << "\" stroke-width=\"" << fmt(st.line_width * px) << "\">\n";
        for (long j = 0; j < r.m(); ++j) {
            double ax, ay, bx, by;
            if (!clip(r[j], box, ax, ay, bx, by)) continue;
            os << "<line id=\"" << id_of(r.label, j) << "\" x1=\"" << fmt(ax) << "\" y1=\"" << fmt(ay) << "\" x2=\"" << fmt(bx)
               << "\" y2=\"" << fmt(by) << "\"/>\n";
        }
        os << "</g>\n";
    }
    for (const auto& r : s.point_rings) {
        os << "<g id=\"ring_" << id_of(r.label, 0) << "\" class=\"points\" data-label=\"" << esc(r.label) << "\" fill=\""
           << esc(colour(st, r.label, st.point_color)) << "\">\n";
        for (long j = 0; j < r.m(); ++j) {
            if (!finite_point(r[j], x, y)) continue;
            os << "<circle id=\"" << id_of(r.label, j) << "\" cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\""
               << fmt(st.point_radius * px) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

// ---- frames

std::vector<FrameRecord> animate(const AnimationSpec& spec, const std::filesystem::path& dir, const Tolerances& tol) {
    if (spec.t0_frames < 1) throw Error(ErrorCode::InvalidArgument, "need at least one frame");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::optional<double>> lambdas;
    if (spec.lambdas.empty()) lambdas.push_back(solve_caustic(spec.setup.family, spec.symbol.m, spec.setup.winding));
    else
        for (double l : spec.lambdas) lambdas.push_back(l);

    std::vector<FrameRecord> frames;
    for (const auto& lam : lambdas)
        for (int i = 0; i < spec.t0_frames; ++i) {
            FrameRecord f;
            f.index = static_cast<int>(frames.size());
            f.t0 = spec.t0_begin + (spec.t0_end - spec.t0_begin) * i / spec.t0_frames;
            f.lambda = *lam;
            char name[32];
            std::snprintf(name, sizeof name, "frame_%05d", f.index);
            f.json_file = std::string(name) + ".scene.json";
            if (spec.svg) f.svg_file = std::string(name) + ".svg";
            frames.push_back(f);
        }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < frames.size();) {
            FrameRecord& f = frames[k];
            PolygonSetup setup = spec.setup;
            setup.t0 = f.t0;
            try {
                Scene s = symbol_scene(spec.symbol, setup, f.lambda, tol);
                f.closure_residual = s.closure_residual;
                f.verdict = to_string(s.audit.verdict);
                write_text_file(dir / f.json_file, scene_to_json(s));
                if (spec.svg) write_text_file(dir / f.svg_file, scene_to_svg(s, spec.style));
            } catch (const Error& e) {
                if (e.code() == ErrorCode::IoError) throw;
                f.verdict = "failed";
                f.error = e.what();
                f.closure_residual = std::numeric_limits<double>::infinity();
                f.json_file.clear();
                f.svg_file.clear();
            }
        }
    };
    unsigned n = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(frames.size()));
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned i = 0; i < n; ++i)
        pool.emplace_back([&] {
            try {
                work();
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = frames.size();
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    json manifest;
    manifest["symbol"] = spec.symbol.to_string();
    manifest["axes"] = {spec.setup.family.A, spec.setup.family.B};
    manifest["winding"] = spec.setup.winding;
    json rows = json::array();
    for (const auto& f : frames) {
        json r{{"frame", f.index}, {"t0", f.t0}, {"lambda", f.lambda}};
        if (std::isfinite(f.closure_residual)) r["closure_residual"] = f.closure_residual;
        else r["closure_residual"] = nullptr;
        r["verdict"] = f.verdict;
        if (!f.json_file.empty()) r["scene"] = f.json_file;
        if (!f.svg_file.empty()) r["svg"] = f.svg_file;
        if (!f.error.empty()) r["error"] = f.error;
        rows.push_back(r);
    }
    manifest["frames"] = rows;
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return frames;
}

}  // namespace ponconf
