#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ponconf/ring.hpp"

namespace ponconf {

enum class Verdict { Proper, Pre, Failed };
std::string to_string(Verdict v);  // "proper" | "pre" | "failed"
Verdict verdict_from_string(const std::string& s);

struct FlaggedIncidence {
    std::string kind;  // point-line | coincident-points | coincident-lines
    std::string a;
    std::string b;
    double residual = 0;

    bool operator==(const FlaggedIncidence&) const = default;
};

struct IncidenceAudit {
    int degree = 4;
    double tolerance = 0;
    int points = 0;
    int lines = 0;
    // incidence count -> number of elements with that count
    std::map<int, int> point_histogram;
    std::map<int, int> line_histogram;
    std::vector<FlaggedIncidence> extra;
    std::vector<FlaggedIncidence> missing;
    double max_intended_residual = 0;
    Verdict verdict = Verdict::Failed;
    std::vector<std::string> notes;

    bool operator==(const IncidenceAudit&) const = default;
};

template <class T> struct BasicSceneConic {
    std::string id;
    std::string role;  // outer | caustic | grid | dual-grid | fitted | ...
    BasicConic<T> conic;

    bool operator==(const BasicSceneConic&) const = default;
};

template <class T> struct BasicScene {
    int m = 0;
    std::optional<std::string> symbol;
    std::vector<BasicSceneConic<T>> conics;
    std::vector<BasicPointRing<T>> point_rings;
    std::vector<BasicLineRing<T>> line_rings;
    IncidenceAudit audit;
    double closure_residual = 0;
    // named JSON documents attached by producers (certificates, extra metrics); stored as serialized text
    std::map<std::string, std::string> extensions;

    bool operator==(const BasicScene&) const = default;

    static constexpr const char* backend() { return ScalarTraits<T>::backend; }

    const BasicPointRing<T>* find_points(const std::string& label) const {
        for (const auto& r : point_rings)
            if (r.label == label) return &r;
        return nullptr;
    }
    const BasicLineRing<T>* find_lines(const std::string& label) const {
        for (const auto& r : line_rings)
            if (r.label == label) return &r;
        return nullptr;
    }
};

using Scene = BasicScene<double>;
using ExactScene = BasicScene<Rational>;
using SceneConic = BasicSceneConic<double>;

}  // namespace ponconf
