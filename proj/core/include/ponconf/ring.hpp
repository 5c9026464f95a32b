#pragma once

#include <algorithm>
#include <optional>
#include <type_traits>
#include <string>
#include <vector>

#include "ponconf/projective.hpp"

namespace ponconf {

enum class RingKind { Points, Lines };

inline long wrap_index(long j, long m) {
    long r = j % m;
    return r < 0 ? r + m : r;
}

// One operator application in a ring's history.
struct TrailStep {
    std::string op;  // seed | join | meet | tangent | touch
    int shift = 0;
    std::string source;  // label of the input ring

    bool operator==(const TrailStep&) const = default;
};

template <class E> struct BasicRing {
    std::string label;
    std::vector<E> elements;
    int shift = 0;  // shift of the last operator
    // Twice the index drift against the seed ring: join by i adds i, meet by i subtracts i.
    // For trivial symbols the drift cancels, which is what index-matched closure relies on.
    long drift2 = 0;
    std::vector<TrailStep> trail;
    std::optional<double> closure_residual;

    std::size_t size() const { return elements.size(); }
    long m() const { return static_cast<long>(elements.size()); }
    const E& operator[](long j) const { return elements[static_cast<std::size_t>(wrap_index(j, m()))]; }
    bool operator==(const BasicRing&) const = default;
};

template <class T> using BasicPointRing = BasicRing<BasicPoint<T>>;
template <class T> using BasicLineRing = BasicRing<BasicLine<T>>;
using PointRing = BasicRing<Point>;
using LineRing = BasicRing<Line>;
using ExactPointRing = BasicRing<ExactPoint>;
using ExactLineRing = BasicRing<ExactLine>;

template <class E> constexpr RingKind ring_kind() {
    if constexpr (std::is_same_v<E, Point> || std::is_same_v<E, ExactPoint>) return RingKind::Points;
    else return RingKind::Lines;
}

// max over j of distance(a[j], b[j + offset])
template <class E> double ring_distance(const BasicRing<E>& a, const BasicRing<E>& b, long offset = 0) {
    double worst = 0;
    for (long j = 0; j < a.m(); ++j) worst = std::max(worst, distance(a[j], b[j + offset]));
    return worst;
}

}  // namespace ponconf
