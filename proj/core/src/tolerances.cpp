#include "ponconf/tolerances.hpp"

#include <charconv>
#include <cstdlib>
#include <cstdio>

#include "ponconf/error.hpp"

namespace ponconf {

namespace {
double parse_number(std::string_view key, std::string_view text) {
    std::string s(text);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !(v > 0))
        throw Error(ErrorCode::InvalidArgument, "bad tolerance value for '" + std::string(key) + "': " + s);
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}
}  // namespace

Tolerances Tolerances::parse(std::string_view spec, Tolerances t) {
    while (!spec.empty()) {
        auto comma = spec.find(',');
        auto item = trim(spec.substr(0, comma));
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorCode::InvalidArgument, "tolerance entry must be key=value: " + std::string(item));
        auto key = trim(item.substr(0, eq));
        double v = parse_number(key, trim(item.substr(eq + 1)));
        if (key == "incidence") t.incidence = v;
        else if (key == "rank" || key == "rank_cutoff") t.rank_cutoff = v;
        else if (key == "closure") t.closure = v;
        else if (key == "coincidence") t.coincidence = v;
        else if (key == "degenerate") t.degenerate = v;
        else if (key == "degenerate_conic") t.degenerate_conic = v;
        else if (key == "incircle") t.incircle = v;
        else throw Error(ErrorCode::InvalidArgument, "unknown tolerance key: " + std::string(key));
    }
    return t;
}

Tolerances Tolerances::from_env(Tolerances base) {
    const char* env = std::getenv("PONCELET_TOL");
    if (!env || !*env) return base;
    return parse(env, base);
}

Tolerances Tolerances::parse(std::string_view spec) { return parse(spec, Tolerances{}); }
Tolerances Tolerances::from_env() { return from_env(Tolerances{}); }

std::string Tolerances::to_string() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "incidence=%g,rank_cutoff=%g,closure=%g,coincidence=%g,degenerate=%g,degenerate_conic=%g,incircle=%g",
                  incidence, rank_cutoff, closure, coincidence, degenerate, degenerate_conic, incircle);
    return buf;
}

}  // namespace ponconf
