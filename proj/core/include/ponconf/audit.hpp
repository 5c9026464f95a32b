#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ponconf/scene.hpp"

namespace ponconf {

// Index-tracked incidence audit. Elements of a ring sit at positions j + drift2/2;
// a line at position c is expected to carry the points of a partner ring at c - w/2 and c + w/2.
class IncidenceAuditor {
public:
    IncidenceAuditor(int degree, const Tolerances& tol) : degree_(degree), tol_(tol) {}

    int add_points(const PointRing& ring);
    int add_lines(const LineRing& ring);
    void expect(int point_ring, long point_drift2, int line_ring, long line_drift2, int width);
    void note(std::string text) { notes_.push_back(std::move(text)); }

    IncidenceAudit run() const;

private:
    struct Entry {
        std::string label;
        Vec3<double> v;
    };
    int degree_;
    Tolerances tol_;
    std::vector<Entry> points_, lines_;
    std::vector<std::size_t> point_ring_start_, line_ring_start_;
    std::vector<long> point_ring_size_, line_ring_size_;
    std::vector<std::pair<std::size_t, std::size_t>> intended_;
    std::vector<std::string> notes_;
};

}  // namespace ponconf
