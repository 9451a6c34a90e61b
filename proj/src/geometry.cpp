#include "specnet/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace specnet {

double point_segment_distance(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(dot2(p - a, d) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

std::optional<SegmentHit> segment_intersection(cplx a1, cplx b1, cplx a2, cplx b2) {
    cplx d1 = b1 - a1, d2 = b2 - a2;
    double denom = cross2(d1, d2);
    if (denom == 0.0) return std::nullopt;
    cplx r = a2 - a1;
    double s = cross2(r, d2) / denom;
    double t = cross2(r, d1) / denom;
    if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0) return std::nullopt;
    return SegmentHit{a1 + s * d1, s, t};
}

PolylineIndex::PolylineIndex(std::span<const cplx> points, int chunk)
    : pts_(points.begin(), points.end()), chunk_(chunk) {
    size_t nseg = pts_.size() >= 2 ? pts_.size() - 1 : 0;
    for (size_t first = 0; first < nseg; first += chunk_) {
        size_t last = std::min(nseg, first + size_t(chunk_));
        Box box{1e300, -1e300, 1e300, -1e300, first, last};
        for (size_t i = first; i <= last; ++i) {
            box.xlo = std::min(box.xlo, pts_[i].real());
            box.xhi = std::max(box.xhi, pts_[i].real());
            box.ylo = std::min(box.ylo, pts_[i].imag());
            box.yhi = std::max(box.yhi, pts_[i].imag());
        }
        boxes_.push_back(box);
    }
}

std::vector<PolylineIndex::Crossing> PolylineIndex::crossings(const PolylineIndex& a,
                                                              const PolylineIndex& b) {
    std::vector<Crossing> out;
    for (const auto& ba : a.boxes_) {
        for (const auto& bb : b.boxes_) {
            if (ba.xhi < bb.xlo || bb.xhi < ba.xlo || ba.yhi < bb.ylo || bb.yhi < ba.ylo) continue;
            for (size_t i = ba.first; i < ba.last; ++i) {
                for (size_t j = bb.first; j < bb.last; ++j) {
                    auto hit = segment_intersection(a.pts_[i], a.pts_[i + 1], b.pts_[j], b.pts_[j + 1]);
                    if (hit) out.push_back({hit->point, i, j, hit->s, hit->t});
                }
            }
        }
    }
    return out;
}

double PolylineIndex::distance_to(cplx p, size_t* nearest_seg) const {
    double best = 1e300;
    size_t bseg = 0;
    for (const auto& box : boxes_) {
        double dx = std::max({box.xlo - p.real(), 0.0, p.real() - box.xhi});
        double dy = std::max({box.ylo - p.imag(), 0.0, p.imag() - box.yhi});
        if (std::hypot(dx, dy) > best) continue;
        for (size_t i = box.first; i < box.last; ++i) {
            double d = point_segment_distance(p, pts_[i], pts_[i + 1]);
            if (d < best) best = d, bseg = i;
        }
    }
    if (nearest_seg) *nearest_seg = bseg;
    return best;
}

int count_self_intersections(std::span<const cplx> pts) {
    int count = 0;
    if (pts.size() < 4) return 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        for (size_t j = i + 2; j + 1 < pts.size(); ++j) {
            if (i == 0 && j + 2 == pts.size()) {
                // still a genuine pair for an open polyline
            }
            auto hit = segment_intersection(pts[i], pts[i + 1], pts[j], pts[j + 1]);
            if (hit) ++count;
        }
    }
    return count;
}

double directed_hausdorff(std::span<const cplx> a, std::span<const cplx> b) {
    PolylineIndex idx(b);
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, idx.distance_to(a[i]));
        if (i + 1 < a.size()) worst = std::max(worst, idx.distance_to(0.5 * (a[i] + a[i + 1])));
    }
    return worst;
}

double hausdorff(std::span<const cplx> a, std::span<const cplx> b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

namespace {
void dp_rec(std::span<const cplx> pts, size_t lo, size_t hi, double tol, std::vector<bool>& keep) {
    if (hi <= lo + 1) return;
    double worst = -1.0;
    size_t split = lo;
    for (size_t i = lo + 1; i < hi; ++i) {
        double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > worst) worst = d, split = i;
    }
    if (worst > tol) {
        keep[split] = true;
        dp_rec(pts, lo, split, tol, keep);
        dp_rec(pts, split, hi, tol, keep);
    }
}
}  // namespace

std::vector<cplx> decimate(std::span<const cplx> pts, double tolerance) {
    if (pts.size() <= 2) return {pts.begin(), pts.end()};
    std::vector<bool> keep(pts.size(), false);
    keep.front() = keep.back() = true;
    dp_rec(pts, 0, pts.size() - 1, tolerance, keep);
    std::vector<cplx> out;
    for (size_t i = 0; i < pts.size(); ++i)
        if (keep[i]) out.push_back(pts[i]);
    return out;
}

bool point_in_polygon(cplx p, std::span<const cplx> polygon) {
    // winding number via signed crossings of the horizontal ray
    int winding = 0;
    size_t n = polygon.size();
    for (size_t i = 0; i < n; ++i) {
        cplx a = polygon[i], b = polygon[(i + 1) % n];
        if (a.imag() <= p.imag()) {
            if (b.imag() > p.imag() && cross2(b - a, p - a) > 0.0) ++winding;
        } else {
            if (b.imag() <= p.imag() && cross2(b - a, p - a) < 0.0) --winding;
        }
    }
    return winding != 0;
}

double polygon_signed_area(std::span<const cplx> polygon) {
    double area = 0.0;
    size_t n = polygon.size();
    for (size_t i = 0; i < n; ++i) {
        cplx a = polygon[i], b = polygon[(i + 1) % n];
        area += cross2(a, b);
    }
    return 0.5 * area;
}

}  // namespace specnet
