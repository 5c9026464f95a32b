#include "ponconf/audit.hpp"

#include <algorithm>
#include <set>

namespace ponconf {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Proper: return "proper";
    case Verdict::Pre: return "pre";
    case Verdict::Failed: return "failed";
    }
    return "failed";
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "proper") return Verdict::Proper;
    if (s == "pre") return Verdict::Pre;
    if (s == "failed") return Verdict::Failed;
    throw Error(ErrorCode::SchemaError, "unknown verdict '" + s + "'", "/audit/verdict");
}

int IncidenceAuditor::add_points(const PointRing& ring) {
    point_ring_start_.push_back(points_.size());
    point_ring_size_.push_back(ring.m());
    for (long j = 0; j < ring.m(); ++j) points_.push_back({ring.label + "[" + std::to_string(j) + "]", ring[j].v()});
    return static_cast<int>(point_ring_start_.size()) - 1;
}

int IncidenceAuditor::add_lines(const LineRing& ring) {
    line_ring_start_.push_back(lines_.size());
    line_ring_size_.push_back(ring.m());
    for (long j = 0; j < ring.m(); ++j) lines_.push_back({ring.label + "[" + std::to_string(j) + "]", ring[j].v()});
    return static_cast<int>(line_ring_start_.size()) - 1;
}

void IncidenceAuditor::expect(int pr, long pd2, int lr, long ld2, int width) {
    long m = line_ring_size_.at(lr);
    if (point_ring_size_.at(pr) != m) throw Error(ErrorCode::InvalidArgument, "ring sizes differ");
    for (long j = 0; j < m; ++j) {
        for (int sign : {-1, 1}) {
            long twice = 2 * j + ld2 + sign * width - pd2;
            if (twice % 2 != 0) throw Error(ErrorCode::InvalidArgument, "incidence pattern has half-integer index offset");
            long i = wrap_index(twice / 2, m);
            intended_.emplace_back(point_ring_start_[pr] + static_cast<std::size_t>(i),
                                   line_ring_start_[lr] + static_cast<std::size_t>(j));
        }
    }
}

IncidenceAudit IncidenceAuditor::run() const {
    IncidenceAudit a;
    a.degree = degree_;
    a.tolerance = tol_.coincidence;
    a.points = static_cast<int>(points_.size());
    a.lines = static_cast<int>(lines_.size());
    a.notes = notes_;

    std::set<std::pair<std::size_t, std::size_t>> intended(intended_.begin(), intended_.end());
    std::vector<int> pcount(points_.size(), 0), lcount(lines_.size(), 0);
    std::vector<Vec3<double>> pn, ln;
    for (const auto& p : points_) pn.push_back(canonical(p.v));
    for (const auto& l : lines_) ln.push_back(canonical(l.v));

    for (std::size_t i = 0; i < pn.size(); ++i) {
        for (std::size_t j = 0; j < ln.size(); ++j) {
            double r = std::abs(dot(pn[i], ln[j]));
            bool on = r < tol_.coincidence;
            bool want = intended.count({i, j}) > 0;
            if (want) a.max_intended_residual = std::max(a.max_intended_residual, r);
            if (on) ++pcount[i], ++lcount[j];
            if (on && !want) a.extra.push_back({"point-line", points_[i].label, lines_[j].label, r});
            if (!on && want) a.missing.push_back({"point-line", points_[i].label, lines_[j].label, r});
        }
    }
    for (std::size_t i = 0; i < pn.size(); ++i)
        for (std::size_t k = i + 1; k < pn.size(); ++k) {
            double d = norm(cross(pn[i], pn[k]));
            if (d < tol_.coincidence) a.extra.push_back({"coincident-points", points_[i].label, points_[k].label, d});
        }
    for (std::size_t i = 0; i < ln.size(); ++i)
        for (std::size_t k = i + 1; k < ln.size(); ++k) {
            double d = norm(cross(ln[i], ln[k]));
            if (d < tol_.coincidence) a.extra.push_back({"coincident-lines", lines_[i].label, lines_[k].label, d});
        }
    for (int c : pcount) ++a.point_histogram[c];
    for (int c : lcount) ++a.line_histogram[c];

    bool regular = a.point_histogram.size() == 1 && a.point_histogram.begin()->first == degree_ &&
                   a.line_histogram.size() == 1 && a.line_histogram.begin()->first == degree_;
    if (pn.empty() && ln.empty()) regular = false;
    if (a.missing.empty() && a.extra.empty() && regular) a.verdict = Verdict::Proper;
    else if (a.missing.empty()) a.verdict = Verdict::Pre;
    else a.verdict = Verdict::Failed;
    return a;
}

}  // namespace ponconf
