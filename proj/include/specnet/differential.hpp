#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specnet/types.hpp"

namespace specnet {

struct ZeroInfo {
    cplx location;      // position in the working chart
    int multiplicity;   // always 1 for supported inputs
    std::string label;  // "0", "1", "inf" for the degree-3 family, else "z<k>"
};

/// A cubic differential P(x) dx^3 on the sphere with polynomial P.
///
/// The normalized degree-3 family alpha x(x-1)/(x-t)^9 dx^3 is stored through
/// the chart u = 1/(x - t), where it becomes the degree-3 polynomial
/// -alpha u (1+t u)(1+(t-1)u) du^3 with simple zeros at the images of 0, 1
/// and infinity. All engine computations run in the working (polynomial)
/// chart; conversion back to x is only done for output.
class PolynomialCubicDifferential {
  public:
    enum class Form { GenericPolynomial, NormalizedDegree3 };

    static PolynomialCubicDifferential from_poly(std::vector<cplx> coefficients,
                                                 const Tolerances& tol = {});
    static PolynomialCubicDifferential normalized_degree3(cplx alpha, cplx t,
                                                          const Tolerances& tol = {});

    Form form() const { return form_; }
    int degree() const { return degree_; }
    cplx alpha() const { return alpha_; }
    cplx t_param() const { return t_; }
    const std::vector<cplx>& coefficients() const { return coeffs_; }
    const Tolerances& tol() const { return tol_; }

    /// Zeros of the working polynomial, all simple. Throws MultipleZeroError
    /// for repeated roots (outside supported scope).
    const std::vector<ZeroInfo>& zeros() const { return zeros_; }

    /// max(1, max pairwise zero distance) in the working chart.
    double characteristic_scale() const { return scale_; }
    cplx zero_centroid() const { return centroid_; }

    double escape_radius() const { return tol_.escape_factor * scale_; }
    double hit_tolerance() const { return tol_.hit_factor * scale_; }
    double eps_sing() const { return tol_.sing_factor * scale_; }
    double joint_dedup_radius() const { return tol_.joint_dedup_factor * scale_; }

    /// Default flat-length budget for traces: generous multiple of the flat
    /// cost of crossing the core and reaching the escape circle.
    double default_max_flat_length() const { return max_flat_default_; }

    /// Value of the rotated polynomial e^{-3 i theta} P at x.
    cplx eval(cplx x, Phase theta = Phase{}) const;
    cplx eval_derivative(cplx x, Phase theta = Phase{}) const;

    /// e^{-3 i theta} phi as a new differential.
    PolynomialCubicDifferential rotate(Phase theta) const;

    /// Chart maps for the normalized degree-3 family (identity otherwise).
    cplx working_from_x(cplx x) const;
    cplx x_from_working(cplx u) const;

    double distance_to_nearest_zero(cplx x, int* which = nullptr) const;

  private:
    Form form_ = Form::GenericPolynomial;
    std::vector<cplx> coeffs_;  // working-chart polynomial, ascending powers
    cplx alpha_{0.0, 0.0};
    cplx t_{0.0, 0.0};
    int degree_ = 0;
    Tolerances tol_;
    std::vector<ZeroInfo> zeros_;
    double scale_ = 1.0;
    cplx centroid_{0.0, 0.0};
    double max_flat_default_ = 0.0;

    void finalize();
};

/// One branch of the cube root of the rotated polynomial at a point.
struct CubeRootBranch {
    cplx base_point;
    cplx value;  // value^3 == e^{-3 i theta} P(base_point)
};

/// The three cube roots of w.
std::array<cplx, 3> cube_roots(cplx w);

struct BranchStep {
    cplx value;
    double margin;  // |jump| / (sqrt(3) |value|), small is safe
    bool ok;        // margin below the configured threshold
};

/// Single-segment continuation: nearest cube-root candidate at next_point.
BranchStep continue_branch_step(const PolynomialCubicDifferential& phi, Phase theta,
                                const CubeRootBranch& branch, cplx next_point);

/// Continuation with automatic subdivision of the segment. Throws
/// BranchAmbiguityError when 60 subdivision levels do not resolve it.
CubeRootBranch continue_branch(const PolynomialCubicDifferential& phi, Phase theta,
                               const CubeRootBranch& branch, cplx next_point);

/// Continuation along a polyline.
CubeRootBranch continue_branch_along(const PolynomialCubicDifferential& phi, Phase theta,
                                     CubeRootBranch branch, std::span<const cplx> waypoints);

struct BranchIntegral {
    cplx value;            // integral of the continued cube root along the path
    double error;          // conservative absolute error estimate
    CubeRootBranch end;    // branch at the end of the path
};

/// Adaptive Gauss-Legendre integral of the continued cube root along a
/// polyline. Endpoints must stay away from zeros (see period() for the
/// zero-endpoint substitution).
BranchIntegral integrate_branch(const PolynomialCubicDifferential& phi, Phase theta,
                                std::span<const cplx> waypoints, CubeRootBranch seed,
                                double rel_tol);

struct CriticalDirection {
    int index;        // 0..7, counterclockwise
    cplx direction;   // unit vector in the working chart
    TrajectorySign sign;
};

/// The eight real critical directions at a simple zero of the rotated
/// differential, counterclockwise, signs strictly alternating.
std::vector<CriticalDirection> critical_directions(const PolynomialCubicDifferential& phi,
                                                   cplx zero, Phase theta);

/// Residual of the polygon angle identity: sum(theta_j) - ((k-2) pi -
/// (2 pi/3) sum(a_i)). Valid polygons audit to < 1e-6.
double gauss_bonnet_residual(std::span<const double> corner_angles,
                             std::span<const int> interior_orders);

/// Straight path from `from` to `to`, detouring around intermediate zeros.
std::vector<cplx> reference_path(const PolynomialCubicDifferential& phi, cplx from, cplx to,
                                 double avoid_radius);

}  // namespace specnet
