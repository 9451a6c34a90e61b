#include "specnet/differential.hpp"

#include <algorithm>
#include <cmath>

namespace specnet {

namespace {

cplx eval_poly(const std::vector<cplx>& c, cplx x) {
    cplx v{0.0, 0.0};
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

cplx eval_poly_derivative(const std::vector<cplx>& c, cplx x) {
    cplx v{0.0, 0.0};
    for (size_t i = c.size(); i-- > 1;) v = v * x + double(i) * c[i];
    return v;
}

// Durand-Kerner iteration; adequate for the low degrees handled here.
std::vector<cplx> all_roots(const std::vector<cplx>& coeffs, double tol) {
    int n = int(coeffs.size()) - 1;
    std::vector<cplx> monic(coeffs.begin(), coeffs.end());
    for (auto& c : monic) c /= coeffs.back();

    double radius = 1.0;
    for (int i = 0; i < n; ++i) radius = std::max(radius, 2.0 * std::pow(std::abs(monic[i]), 1.0 / (n - i)));

    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * kPi * i / n + 0.4;  // avoid symmetric stalls
        r[i] = 0.7 * radius * cplx{std::cos(ang), std::sin(ang)};
    }
    for (int iter = 0; iter < 500; ++iter) {
        double maxstep = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx num = eval_poly(monic, r[i]);
            cplx den{1.0, 0.0};
            for (int j = 0; j < n; ++j)
                if (j != i) den *= (r[i] - r[j]);
            if (std::abs(den) == 0.0) continue;
            cplx step = num / den;
            r[i] -= step;
            maxstep = std::max(maxstep, std::abs(step));
        }
        if (maxstep < tol * radius) break;
    }
    // Newton polish
    for (auto& root : r) {
        for (int k = 0; k < 4; ++k) {
            cplx d = eval_poly_derivative(monic, root);
            if (std::abs(d) < 1e-300) break;
            root -= eval_poly(monic, root) / d;
        }
    }
    return r;
}

}  // namespace

PolynomialCubicDifferential PolynomialCubicDifferential::from_poly(std::vector<cplx> coefficients,
                                                                   const Tolerances& tol) {
    while (coefficients.size() > 1 && std::abs(coefficients.back()) == 0.0)
        coefficients.pop_back();
    if (coefficients.empty()) throw ConfigError("empty polynomial");
    PolynomialCubicDifferential phi;
    phi.form_ = Form::GenericPolynomial;
    phi.coeffs_ = std::move(coefficients);
    phi.degree_ = int(phi.coeffs_.size()) - 1;
    phi.tol_ = tol;
    phi.finalize();
    return phi;
}

PolynomialCubicDifferential PolynomialCubicDifferential::normalized_degree3(cplx alpha, cplx t,
                                                                            const Tolerances& tol) {
    if (std::abs(alpha) == 0.0) throw ConfigError("alpha must be nonzero");
    if (std::abs(t) < 1e-14 || std::abs(t - 1.0) < 1e-14)
        throw ConfigError("t must avoid 0 and 1");
    PolynomialCubicDifferential phi;
    phi.form_ = Form::NormalizedDegree3;
    phi.alpha_ = alpha;
    phi.t_ = t;
    // alpha x (x-1) / (x-t)^9 dx^3 in the chart u = 1/(x-t):
    // -alpha [ u + (2t-1) u^2 + t(t-1) u^3 ] du^3.
    phi.coeffs_ = {cplx{0.0, 0.0}, -alpha, -alpha * (2.0 * t - 1.0), -alpha * t * (t - 1.0)};
    phi.degree_ = 3;
    phi.tol_ = tol;
    phi.finalize();
    return phi;
}

void PolynomialCubicDifferential::finalize() {
    if (degree_ >= 1) {
        std::vector<cplx> roots = all_roots(coeffs_, tol_.root_tol);
        std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
            if (a.real() != b.real()) return a.real() < b.real();
            return a.imag() < b.imag();
        });
        // characteristic scale before cluster detection, for the radius
        double ps = 1.0;
        for (size_t i = 0; i < roots.size(); ++i)
            for (size_t j = i + 1; j < roots.size(); ++j)
                ps = std::max(ps, std::abs(roots[i] - roots[j]));
        double cluster_radius = 1e-8 * ps;
        for (size_t i = 0; i + 1 < roots.size(); ++i) {
            if (std::abs(roots[i] - roots[i + 1]) < cluster_radius)
                throw MultipleZeroError("repeated zero detected; only simple zeros are supported");
        }
        zeros_.clear();
        for (size_t i = 0; i < roots.size(); ++i)
            zeros_.push_back({roots[i], 1, "z" + std::to_string(i)});

        if (form_ == Form::NormalizedDegree3) {
            // Relabel by the x-chart points they represent.
            const cplx u0 = -1.0 / t_;          // x = 0
            const cplx u1 = 1.0 / (1.0 - t_);   // x = 1
            std::vector<ZeroInfo> relabeled(3);
            std::vector<bool> used(3, false);
            auto take = [&](cplx target, const std::string& label) -> ZeroInfo {
                size_t best = 0;
                double bd = 1e300;
                for (size_t i = 0; i < zeros_.size(); ++i) {
                    if (used[i]) continue;
                    double d = std::abs(zeros_[i].location - target);
                    if (d < bd) bd = d, best = i;
                }
                used[best] = true;
                ZeroInfo z = zeros_[best];
                z.label = label;
                return z;
            };
            relabeled[0] = take(u0, "0");
            relabeled[1] = take(u1, "1");
            relabeled[2] = take(cplx{0.0, 0.0}, "inf");
            zeros_ = std::move(relabeled);
        }
    }

    scale_ = 1.0;
    centroid_ = cplx{0.0, 0.0};
    for (const auto& z : zeros_) centroid_ += z.location;
    if (!zeros_.empty()) centroid_ /= double(zeros_.size());
    for (size_t i = 0; i < zeros_.size(); ++i)
        for (size_t j = i + 1; j < zeros_.size(); ++j)
            scale_ = std::max(scale_, std::abs(zeros_[i].location - zeros_[j].location));
    if (zeros_.size() == 1) scale_ = std::max(1.0, std::abs(zeros_[0].location));

    // Flat cost of reaching the escape circle from the centroid, estimated by
    // the leading-order growth |P|^{1/3} ~ |c_d|^{1/3} r^{d/3}.
    double r_esc = tol_.escape_factor * scale_;
    double cd = std::abs(coeffs_.back());
    double grow = 3.0 / (degree_ + 3.0) * std::cbrt(cd) * std::pow(r_esc, (degree_ + 3.0) / 3.0);
    double interior = 0.0;
    for (const auto& z : zeros_)
        interior = std::max(interior, std::cbrt(std::abs(eval(z.location + scale_))) * scale_);
    max_flat_default_ = 10.0 * (grow + interior) + 50.0 * scale_;
}

cplx PolynomialCubicDifferential::eval(cplx x, Phase theta) const {
    cplx v = eval_poly(coeffs_, x);
    if (theta.theta != 0.0) v *= std::exp(cplx{0.0, -3.0 * theta.theta});
    return v;
}

cplx PolynomialCubicDifferential::eval_derivative(cplx x, Phase theta) const {
    cplx v = eval_poly_derivative(coeffs_, x);
    if (theta.theta != 0.0) v *= std::exp(cplx{0.0, -3.0 * theta.theta});
    return v;
}

PolynomialCubicDifferential PolynomialCubicDifferential::rotate(Phase theta) const {
    PolynomialCubicDifferential out = *this;
    cplx f = std::exp(cplx{0.0, -3.0 * theta.theta});
    for (auto& c : out.coeffs_) c *= f;
    if (form_ == Form::NormalizedDegree3) out.alpha_ *= f;
    return out;
}

cplx PolynomialCubicDifferential::working_from_x(cplx x) const {
    if (form_ == Form::GenericPolynomial) return x;
    return 1.0 / (x - t_);
}

cplx PolynomialCubicDifferential::x_from_working(cplx u) const {
    if (form_ == Form::GenericPolynomial) return u;
    return t_ + 1.0 / u;
}

double PolynomialCubicDifferential::distance_to_nearest_zero(cplx x, int* which) const {
    double best = 1e300;
    int bi = -1;
    for (size_t i = 0; i < zeros_.size(); ++i) {
        double d = std::abs(x - zeros_[i].location);
        if (d < best) best = d, bi = int(i);
    }
    if (which) *which = bi;
    return best;
}

std::array<cplx, 3> cube_roots(cplx w) {
    double r = std::cbrt(std::abs(w));
    double a = std::arg(w) / 3.0;
    std::array<cplx, 3> out;
    for (int k = 0; k < 3; ++k) {
        double ang = a + 2.0 * kPi * k / 3.0;
        out[k] = r * cplx{std::cos(ang), std::sin(ang)};
    }
    return out;
}

BranchStep continue_branch_step(const PolynomialCubicDifferential& phi, Phase theta,
                                const CubeRootBranch& branch, cplx next_point) {
    auto cands = cube_roots(phi.eval(next_point, theta));
    int best = 0;
    double bd = 1e300;
    for (int k = 0; k < 3; ++k) {
        double d = std::abs(cands[k] - branch.value);
        if (d < bd) bd = d, best = k;
    }
    double sep = std::sqrt(3.0) * std::abs(cands[best]);
    double margin = sep > 0.0 ? bd / sep : 1e300;
    return {cands[best], margin, margin < phi.tol().branch_margin};
}

CubeRootBranch continue_branch(const PolynomialCubicDifferential& phi, Phase theta,
                               const CubeRootBranch& branch, cplx next_point) {
    CubeRootBranch cur = branch;
    // Stack of pending targets; subdivide on weak margins.
    std::vector<cplx> stack{next_point};
    int splits = 0;
    while (!stack.empty()) {
        cplx target = stack.back();
        BranchStep step = continue_branch_step(phi, theta, cur, target);
        if (step.ok) {
            cur = {target, step.value};
            stack.pop_back();
            continue;
        }
        if (++splits > 60)
            throw BranchAmbiguityError("cube-root continuation ambiguous after 60 subdivisions");
        stack.push_back(0.5 * (cur.base_point + target));
    }
    return cur;
}

CubeRootBranch continue_branch_along(const PolynomialCubicDifferential& phi, Phase theta,
                                     CubeRootBranch branch, std::span<const cplx> waypoints) {
    for (cplx p : waypoints) branch = continue_branch(phi, theta, branch, p);
    return branch;
}

namespace {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 15;
constexpr double kGLx[kGL] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601700,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGLw[kGL] = {
    0.03075324199611727, 0.07036604748810812, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939,  0.1861610000155622,  0.1984314853271116, 0.2025782419255613,
    0.1984314853271116,  0.1861610000155622,  0.1662692058169939, 0.1395706779261543,
    0.1071592204671719,  0.07036604748810812, 0.03075324199611727};

struct SegResult {
    cplx value;
    CubeRootBranch end;
};

// One GL panel over [a, b] with node-to-node branch continuation.
SegResult gl_panel(const PolynomialCubicDifferential& phi, Phase theta, cplx a, cplx b,
                   CubeRootBranch branch) {
    cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx acc{0.0, 0.0};
    for (int i = 0; i < kGL; ++i) {
        cplx x = mid + kGLx[i] * half;
        branch = continue_branch(phi, theta, branch, x);
        acc += kGLw[i] * branch.value;
    }
    branch = continue_branch(phi, theta, branch, b);
    return {acc * half, branch};
}

// Adaptive integral over one straight segment.
void adaptive_segment(const PolynomialCubicDifferential& phi, Phase theta, cplx a, cplx b,
                      CubeRootBranch& branch, double abs_tol, int depth, cplx& total,
                      double& err_total) {
    CubeRootBranch at_a = continue_branch(phi, theta, branch, a);
    SegResult whole = gl_panel(phi, theta, a, b, at_a);
    cplx m = 0.5 * (a + b);
    SegResult left = gl_panel(phi, theta, a, m, at_a);
    SegResult right = gl_panel(phi, theta, m, b, left.end);
    cplx refined = left.value + right.value;
    double err = std::abs(refined - whole.value);
    if (err < abs_tol || depth >= 30) {
        if (depth >= 30 && err > abs_tol)
            throw QuadratureStallError("quadrature failed to converge in 30 refinements");
        total += refined;
        err_total += err;
        branch = right.end;
        return;
    }
    adaptive_segment(phi, theta, a, m, branch, 0.5 * abs_tol, depth + 1, total, err_total);
    adaptive_segment(phi, theta, m, b, branch, 0.5 * abs_tol, depth + 1, total, err_total);
}

}  // namespace

BranchIntegral integrate_branch(const PolynomialCubicDifferential& phi, Phase theta,
                                std::span<const cplx> waypoints, CubeRootBranch seed,
                                double rel_tol) {
    if (waypoints.size() < 2) return {cplx{0.0, 0.0}, 0.0, seed};
    // First pass: coarse magnitude estimate for the absolute budget.
    double rough = 0.0;
    for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
        cplx m = 0.5 * (waypoints[i] + waypoints[i + 1]);
        rough += std::cbrt(std::abs(phi.eval(m, theta))) * std::abs(waypoints[i + 1] - waypoints[i]);
    }
    double abs_tol = std::max(rough, 1e-30) * rel_tol;

    cplx total{0.0, 0.0};
    double err = 0.0;
    CubeRootBranch branch = continue_branch(phi, theta, seed, waypoints[0]);
    for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
        double frac = std::abs(waypoints[i + 1] - waypoints[i]);
        double budget = abs_tol * std::max(frac / std::max(rough, 1e-30), 1e-6);
        adaptive_segment(phi, theta, waypoints[i], waypoints[i + 1], branch, budget, 0, total, err);
    }
    return {total, err, branch};
}

std::vector<CriticalDirection> critical_directions(const PolynomialCubicDifferential& phi,
                                                   cplx zero, Phase theta) {
    cplx c = phi.eval_derivative(zero, theta);
    if (std::abs(c) == 0.0)
        throw EngineError("critical_directions requires a simple zero");
    double argc = std::arg(c);
    std::vector<CriticalDirection> out;
    out.reserve(8);
    // Local development w ~ (x-z)^{4/3}: direction k has developed slope
    // k pi/3, so the chart angle solves (4/3) psi + arg(c)/3 = k pi/3.
    for (int k = 0; k < 8; ++k) {
        double psi = 0.75 * (k * kPi / 3.0 - argc / 3.0);
        psi = std::fmod(psi, 2.0 * kPi);
        if (psi < 0.0) psi += 2.0 * kPi;
        TrajectorySign sign = (k % 2 == 0) ? TrajectorySign::Positive : TrajectorySign::Negative;
        out.push_back({k, cplx{std::cos(psi), std::sin(psi)}, sign});
    }
    auto angle01 = [](cplx d) {
        double a = std::arg(d);
        if (a < -1e-15) a += 2.0 * kPi;
        return a;
    };
    std::sort(out.begin(), out.end(), [&](const CriticalDirection& a, const CriticalDirection& b) {
        return angle01(a.direction) < angle01(b.direction);
    });
    for (int k = 0; k < 8; ++k) out[k].index = k;
    return out;
}

double gauss_bonnet_residual(std::span<const double> corner_angles,
                             std::span<const int> interior_orders) {
    double sum = 0.0;
    for (double a : corner_angles) sum += a;
    double orders = 0.0;
    for (int a : interior_orders) orders += a;
    double k = double(corner_angles.size());
    return sum - ((k - 2.0) * kPi - (2.0 * kPi / 3.0) * orders);
}

std::vector<cplx> reference_path(const PolynomialCubicDifferential& phi, cplx from, cplx to,
                                 double avoid_radius) {
    std::vector<cplx> path{from};
    // Insert perpendicular detours around zeros close to the open segment.
    struct Detour {
        double s;
        cplx point;
    };
    std::vector<Detour> detours;
    cplx d = to - from;
    double len = std::abs(d);
    if (len == 0.0) return {from, to};
    cplx dir = d / len;
    for (const auto& z : phi.zeros()) {
        cplx rel = z.location - from;
        double s = (rel * std::conj(dir)).real();
        if (s < avoid_radius || s > len - avoid_radius) continue;
        cplx foot = from + s * dir;
        double dist = std::abs(z.location - foot);
        if (dist < avoid_radius) {
            cplx n = cplx{-dir.imag(), dir.real()};
            double side = ((z.location - foot) * std::conj(n)).real() >= 0.0 ? -1.0 : 1.0;
            detours.push_back({s, z.location + side * n * (avoid_radius + dist)});
        }
    }
    std::sort(detours.begin(), detours.end(), [](const Detour& a, const Detour& b) { return a.s < b.s; });
    for (const auto& dt : detours) path.push_back(dt.point);
    path.push_back(to);
    return path;
}

}  // namespace specnet
