#include "specnet/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "specnet/geometry.hpp"

namespace specnet {

cplx Trajectory::tangent_at(size_t i) const {
    if (points.size() < 2) return {1.0, 0.0};
    cplx d;
    if (i + 1 < points.size())
        d = points[i + 1] - points[i];
    else
        d = points[i] - points[i - 1];
    double n = std::abs(d);
    return n > 0.0 ? d / n : cplx{1.0, 0.0};
}

bool pole_escape(const PolynomialCubicDifferential& phi, cplx point, cplx velocity) {
    cplx rel = point - phi.zero_centroid();
    if (std::abs(rel) <= phi.escape_radius()) return false;
    return (rel * std::conj(velocity)).real() > 0.0;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

struct Stepper {
    const PolynomialCubicDifferential& phi;
    Phase theta;
    cplx unit;  // e^{i slope}
    bool branch_failed = false;

    // Velocity field at x given the branch continued from (xref, vref).
    cplx f(cplx x, const CubeRootBranch& ref) {
        BranchStep st = continue_branch_step(phi, theta, ref, x);
        if (!st.ok) {
            branch_failed = true;
            return {0.0, 0.0};
        }
        return unit / st.value;
    }
};

}  // namespace

static Trajectory trace_core(const PolynomialCubicDifferential& phi, Phase theta, cplx x0,
                             cplx v0, double slope, TrajectorySign sign,
                             const TraceLimits& limits, TrajectoryOrigin origin) {
    Trajectory traj;
    traj.sign = sign;
    traj.origin = origin;
    traj.slope = slope;
    traj.points.reserve(1024);
    traj.flat_lengths.reserve(1024);
    traj.branch_values.reserve(1024);

    traj.points.push_back(x0);
    traj.flat_lengths.push_back(0.0);
    traj.branch_values.push_back(v0);

    const double scale = phi.characteristic_scale();
    const double local_tol = phi.tol().ode_local_error * scale;
    const double near_miss_radius = 1e3 * limits.hit_tolerance;

    Stepper stepper{phi, theta, std::exp(cplx{0.0, slope})};
    CubeRootBranch branch{x0, v0};
    double s = 0.0;

    if (limits.max_flat_length <= 0.0) {
        traj.verdict = {Verdict::Kind::Truncated, Verdict::TruncationReason::MaxFlatLength, -1, 0.0};
        return traj;
    }

    double h = 0.05 * std::abs(v0) * phi.distance_to_nearest_zero(x0);
    h = std::max(h, 1e-12 * scale);
    int consecutive_halvings = 0;

    while (true) {
        // Step-size guards: never overstep half the distance to a zero.
        int near_zero = -1;
        double dist = phi.distance_to_nearest_zero(branch.base_point, &near_zero);
        double speed = 1.0 / std::abs(branch.value);
        double hmax_geom = 0.5 * dist / speed;
        if (h > hmax_geom) h = hmax_geom;
        if (s + h > limits.max_flat_length) h = limits.max_flat_length - s;
        if (h <= 0.0) {
            traj.verdict = {Verdict::Kind::Truncated, Verdict::TruncationReason::MaxFlatLength, -1, 0.0};
            break;
        }

        // One RK attempt.
        stepper.branch_failed = false;
        cplx x = branch.base_point;
        cplx k1 = stepper.f(x, branch);
        cplx k2 = stepper.f(x + h * (A21 * k1), branch);
        cplx k3 = stepper.f(x + h * (A31 * k1 + A32 * k2), branch);
        cplx k4 = stepper.f(x + h * (A41 * k1 + A42 * k2 + A43 * k3), branch);
        cplx k5 = stepper.f(x + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), branch);
        cplx k6 = stepper.f(x + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5), branch);
        cplx x5 = x + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        cplx k7 = stepper.f(x5, branch);
        double err = std::abs(h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7));

        bool reject = stepper.branch_failed || !(err <= local_tol);
        if (reject) {
            if (++consecutive_halvings > 60) {
                bool near = phi.distance_to_nearest_zero(branch.base_point) < near_miss_radius;
                traj.verdict = {Verdict::Kind::Truncated,
                                near ? Verdict::TruncationReason::NearMiss
                                     : Verdict::TruncationReason::StepCollapse,
                                -1, 0.0};
                break;
            }
            h *= stepper.branch_failed ? 0.5 : std::clamp(0.9 * std::pow(local_tol / (err + 1e-300), 0.2), 0.1, 0.5);
            continue;
        }
        consecutive_halvings = 0;

        BranchStep endstep = continue_branch_step(phi, theta, branch, x5);
        if (!endstep.ok) {
            h *= 0.5;
            continue;
        }

        branch = {x5, endstep.value};
        s += h;
        traj.points.push_back(x5);
        traj.flat_lengths.push_back(s);
        traj.branch_values.push_back(endstep.value);

        // Hit detection on the new segment.
        bool terminated = false;
        for (size_t zi = 0; zi < phi.zeros().size(); ++zi) {
            cplx z = phi.zeros()[zi].location;
            double dseg = point_segment_distance(z, x, x5);
            if (dseg < limits.hit_tolerance) {
                traj.points.back() = z;  // snap
                traj.verdict = {Verdict::Kind::HitZero, Verdict::TruncationReason::None, int(zi), dseg};
                terminated = true;
                break;
            }
        }
        if (terminated) break;

        cplx velocity = k7;
        if (pole_escape(phi, x5, velocity)) {
            traj.verdict = {Verdict::Kind::EscapedToPole, Verdict::TruncationReason::None, -1, 0.0};
            break;
        }
        if (s >= limits.max_flat_length) {
            traj.verdict = {Verdict::Kind::Truncated, Verdict::TruncationReason::MaxFlatLength, -1, 0.0};
            break;
        }
        if (traj.points.size() >= limits.max_points) {
            traj.verdict = {Verdict::Kind::Truncated, Verdict::TruncationReason::PointCap, -1, 0.0};
            break;
        }

        h *= std::clamp(0.9 * std::pow(local_tol / (err + 1e-300), 0.2), 0.5, 4.0);
    }

    return traj;
}

Trajectory trace_from_point(const PolynomialCubicDifferential& phi, Phase theta, cplx start,
                            cplx direction, TrajectorySign sign, const TraceLimits& limits,
                            TrajectoryOrigin origin) {
    direction /= std::abs(direction);
    auto roots = cube_roots(phi.eval(start, theta));
    // All three roots give slopes in the same parity class; pick the one whose
    // slope is closest to a multiple of pi/3 and read the slope off it.
    cplx v0 = roots[0];
    double raw = std::arg(v0 * direction);
    double slope = std::round(raw / (kPi / 3.0)) * (kPi / 3.0);
    int parity = int(std::llround(slope / (kPi / 3.0))) & 1;
    int want = (sign == TrajectorySign::Positive) ? 0 : 1;
    if (parity != want) {
        throw EngineError("direction/sign mismatch at trace_from_point");
    }
    Trajectory traj = trace_core(phi, theta, start, v0, slope, sign, limits, origin);
    return traj;
}

Trajectory trace_from_zero(const PolynomialCubicDifferential& phi, Phase theta, int zero_index,
                           const CriticalDirection& dir, const TraceLimits& limits) {
    cplx z = phi.zeros()[zero_index].location;
    double r0 = 10.0 * phi.eps_sing();
    cplx x0 = z + r0 * dir.direction;
    auto roots = cube_roots(phi.eval(x0, theta));
    // Choose the root whose slope is closest to a multiple of pi/3.
    int best = 0;
    double bestdef = 1e300;
    double bestslope = 0.0;
    for (int k = 0; k < 3; ++k) {
        double raw = std::arg(roots[k] * dir.direction);
        double slope = std::round(raw / (kPi / 3.0)) * (kPi / 3.0);
        double defect = std::abs(raw - slope);
        if (defect < bestdef) {
            bestdef = defect;
            best = k;
            bestslope = slope;
        }
    }
    if (bestdef > 1e-2)
        throw EngineError("launch direction is not critical within tolerance");
    int parity = int(std::llround(bestslope / (kPi / 3.0))) & 1;
    int want = (dir.sign == TrajectorySign::Positive) ? 0 : 1;
    if (parity != want)
        throw EngineError("critical direction parity mismatch");

    TrajectoryOrigin origin;
    origin.kind = TrajectoryOrigin::Kind::Zero;
    origin.zero_id = zero_index;
    origin.direction_index = dir.index;
    return trace_core(phi, theta, x0, roots[best], bestslope, dir.sign, limits, origin);
}

Trajectory trace(const PolynomialCubicDifferential& phi, Phase theta, cplx start, cplx direction,
                 TrajectorySign sign, const TraceLimits& limits) {
    for (size_t zi = 0; zi < phi.zeros().size(); ++zi) {
        if (std::abs(start - phi.zeros()[zi].location) < limits.hit_tolerance) {
            auto dirs = critical_directions(phi, phi.zeros()[zi].location, theta);
            const CriticalDirection* best = nullptr;
            double bd = 1e300;
            for (const auto& d : dirs) {
                if (d.sign != sign) continue;
                double gap = std::abs(std::arg(d.direction * std::conj(direction / std::abs(direction))));
                if (gap < bd) bd = gap, best = &d;
            }
            if (!best) throw EngineError("no critical direction of the requested sign");
            return trace_from_zero(phi, theta, int(zi), *best, limits);
        }
    }
    TrajectoryOrigin origin;
    origin.kind = TrajectoryOrigin::Kind::Point;
    return trace_from_point(phi, theta, start, direction, sign, limits, origin);
}

ClosestApproach closest_approach(const Trajectory& traj, cplx target, double hit_tolerance) {
    ClosestApproach out;
    if (traj.verdict.kind == Verdict::Kind::HitZero &&
        std::abs(traj.endpoint() - target) < hit_tolerance) {
        out.hit = true;
        out.distance = 0.0;
        return out;
    }
    double best = 1e300;
    size_t bseg = 0;
    const auto& p = traj.points;
    for (size_t i = 0; i + 1 < p.size(); ++i) {
        double d = point_segment_distance(target, p[i], p[i + 1]);
        if (d < best) best = d, bseg = i;
    }
    if (p.size() == 1) best = std::abs(target - p[0]);
    out.distance = best;
    out.segment = bseg;
    if (best < hit_tolerance) {
        out.hit = true;
        return out;
    }
    if (p.size() >= 2) {
        cplx tangent = p[bseg + 1] - p[bseg];
        double c = cross2(tangent, target - p[bseg]);
        out.side = c >= 0.0 ? +1 : -1;
    }
    return out;
}

double straightness_defect(const PolynomialCubicDifferential& phi, Phase theta,
                           const Trajectory& traj) {
    (void)phi;
    (void)theta;
    // Increments of the developed coordinate must align with e^{i slope}.
    cplx unit = std::exp(cplx{0.0, -traj.slope});
    double worst = 0.0;
    cplx dev{0.0, 0.0};
    for (size_t i = 0; i + 1 < traj.points.size(); ++i) {
        cplx mid_v = 0.5 * (traj.branch_values[i] + traj.branch_values[i + 1]);
        dev += mid_v * (traj.points[i + 1] - traj.points[i]);
        double s = traj.flat_lengths[i + 1];
        if (s > 0.0) worst = std::max(worst, std::abs((unit * dev).imag()) / s);
    }
    return worst;
}

}  // namespace specnet
