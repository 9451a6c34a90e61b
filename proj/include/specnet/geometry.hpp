#pragma once

#include <optional>
#include <span>
#include <vector>

#include "specnet/types.hpp"

namespace specnet {

inline double cross2(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot2(cplx a, cplx b) { return a.real() * b.real() + a.imag() * b.imag(); }

double point_segment_distance(cplx p, cplx a, cplx b);

struct SegmentHit {
    cplx point;
    double s;  // parameter on [a1, b1]
    double t;  // parameter on [a2, b2]
};

/// Proper intersection of two closed segments, if any.
std::optional<SegmentHit> segment_intersection(cplx a1, cplx b1, cplx a2, cplx b2);

/// Axis-aligned boxes over chunks of consecutive polyline segments; used to
/// prune pairwise intersection and proximity queries.
class PolylineIndex {
  public:
    explicit PolylineIndex(std::span<const cplx> points, int chunk = 32);

    struct Crossing {
        cplx point;
        size_t seg_a;  // segment index in this polyline
        size_t seg_b;  // segment index in the other polyline
        double s, t;   // parameters within the two segments
    };

    /// All transversal crossings between two polylines.
    static std::vector<Crossing> crossings(const PolylineIndex& a, const PolylineIndex& b);

    /// Minimal distance from the polyline to a point.
    double distance_to(cplx p, size_t* nearest_seg = nullptr) const;

    std::span<const cplx> points() const { return {pts_.data(), pts_.size()}; }

  private:
    struct Box {
        double xlo, xhi, ylo, yhi;
        size_t first, last;  // segment range [first, last)
    };
    std::vector<cplx> pts_;
    std::vector<Box> boxes_;
    int chunk_;

    friend std::vector<Crossing> polyline_crossings_impl(const PolylineIndex&, const PolylineIndex&);
};

/// Count of self-intersections of a polyline (consecutive segments excluded).
int count_self_intersections(std::span<const cplx> pts);

/// Directed Hausdorff distance from the points of `a` (vertices and
/// midpoints) to the segments of `b`.
double directed_hausdorff(std::span<const cplx> a, std::span<const cplx> b);

/// Symmetric Hausdorff distance between two polylines.
double hausdorff(std::span<const cplx> a, std::span<const cplx> b);

/// Douglas-Peucker decimation; keeps endpoints, tolerance in chart units.
std::vector<cplx> decimate(std::span<const cplx> pts, double tolerance);

/// Winding-number point-in-polygon test for a closed polygon (last point
/// need not repeat the first).
bool point_in_polygon(cplx p, std::span<const cplx> polygon);

double polygon_signed_area(std::span<const cplx> polygon);

}  // namespace specnet
