#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specnet/differential.hpp"
#include "specnet/types.hpp"

namespace specnet {

struct TraceLimits {
    double max_flat_length = 0.0;  // 0 means "single point"
    double escape_radius = 0.0;
    double hit_tolerance = 0.0;
    size_t max_points = 200000;

    static TraceLimits defaults(const PolynomialCubicDifferential& phi) {
        return {phi.default_max_flat_length(), phi.escape_radius(), phi.hit_tolerance(), 200000};
    }
};

struct TrajectoryOrigin {
    enum class Kind { Zero, Joint, Point };
    Kind kind = Kind::Point;
    int zero_id = -1;
    int direction_index = -1;
    int joint_id = -1;
};

struct Verdict {
    enum class Kind { HitZero, EscapedToPole, Truncated };
    enum class TruncationReason { None, MaxFlatLength, StepCollapse, NearMiss, PointCap };
    Kind kind = Kind::Truncated;
    TruncationReason reason = TruncationReason::MaxFlatLength;
    int zero_id = -1;
    double distance = 0.0;
};

/// A traced real trajectory of the rotated differential: a polyline with the
/// continued cube-root branch and cumulative flat length at every vertex.
struct Trajectory {
    TrajectorySign sign = TrajectorySign::Positive;
    TrajectoryOrigin origin;
    std::vector<cplx> points;
    std::vector<double> flat_lengths;
    std::vector<cplx> branch_values;
    double slope = 0.0;  // developed slope, multiple of pi/3 in the launch frame
    Verdict verdict;
    int generation = 0;
    int id = -1;

    cplx endpoint() const { return points.back(); }
    double flat_length() const { return flat_lengths.back(); }
    /// Unit chart tangent at vertex i.
    cplx tangent_at(size_t i) const;
};

/// Trace from an arbitrary on-curve point. The branch is seeded from the
/// cube roots at `start`; `sign` fixes the slope parity.
Trajectory trace_from_point(const PolynomialCubicDifferential& phi, Phase theta, cplx start,
                            cplx direction, TrajectorySign sign, const TraceLimits& limits,
                            TrajectoryOrigin origin = {});

/// Trace a critical trajectory from a zero along one of its eight critical
/// directions, launched off the cone point with the local model.
Trajectory trace_from_zero(const PolynomialCubicDifferential& phi, Phase theta, int zero_index,
                           const CriticalDirection& dir, const TraceLimits& limits);

/// Spec-shaped entry point: dispatches on whether `start` is a zero.
Trajectory trace(const PolynomialCubicDifferential& phi, Phase theta, cplx start, cplx direction,
                 TrajectorySign sign, const TraceLimits& limits);

/// Escape predicate: far outside the zero cluster and moving outward.
bool pole_escape(const PolynomialCubicDifferential& phi, cplx point, cplx velocity);

struct ClosestApproach {
    bool hit = false;       // within hit tolerance: degeneration found
    double distance = 0.0;
    int side = 0;           // +1 = target to the left of travel, -1 = right
    size_t segment = 0;
};

/// Shooting functional: minimal polyline distance to the target and the
/// signed side on which the trajectory passes it.
ClosestApproach closest_approach(const Trajectory& traj, cplx target, double hit_tolerance);

/// Max straightness defect |Im(e^{-i slope} increments)| per unit flat
/// length, for audits.
double straightness_defect(const PolynomialCubicDifferential& phi, Phase theta,
                           const Trajectory& traj);

}  // namespace specnet
