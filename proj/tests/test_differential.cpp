#include "doctest.h"

#include <cmath>

#include "specnet/differential.hpp"
#include "specnet/geometry.hpp"

using namespace specnet;

namespace {
cplx expi(double a) { return {std::cos(a), std::sin(a)}; }
}

TEST_CASE("zeros of the generic family") {
    auto phi = PolynomialCubicDifferential::from_poly({cplx{-1.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    REQUIRE(phi.zeros().size() == 2);
    CHECK(std::abs(phi.zeros()[0].location - cplx{-1.0, 0.0}) < 1e-12);
    CHECK(std::abs(phi.zeros()[1].location - cplx{1.0, 0.0}) < 1e-12);
    CHECK(phi.zeros()[0].multiplicity == 1);
}

TEST_CASE("repeated zero is rejected") {
    // (x-2)^2 = 4 - 4x + x^2
    CHECK_THROWS_AS(PolynomialCubicDifferential::from_poly({cplx{4.0, 0.0}, cplx{-4.0, 0.0}, cplx{1.0, 0.0}}),
                    MultipleZeroError);
}

TEST_CASE("normalized degree-3 zeros map to 0, 1, infinity") {
    cplx t{0.3, 0.2};
    auto phi = PolynomialCubicDifferential::normalized_degree3(cplx{1.0, 0.0}, t);
    REQUIRE(phi.zeros().size() == 3);
    CHECK(phi.zeros()[0].label == "0");
    CHECK(phi.zeros()[1].label == "1");
    CHECK(phi.zeros()[2].label == "inf");
    CHECK(std::abs(phi.zeros()[0].location - (-1.0 / t)) < 1e-10);
    CHECK(std::abs(phi.zeros()[1].location - 1.0 / (1.0 - t)) < 1e-10);
    CHECK(std::abs(phi.zeros()[2].location) < 1e-10);
    // chart round trip
    cplx x{0.7, -0.4};
    CHECK(std::abs(phi.x_from_working(phi.working_from_x(x)) - x) < 1e-12);
}

TEST_CASE("rotate scales the leading coefficient") {
    auto phi = PolynomialCubicDifferential::from_poly({cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    auto rot = phi.rotate(Phase{0.1});
    CHECK(std::abs(rot.coefficients()[1] - expi(-0.3)) < 1e-15);
    // theta = 0 is the identity
    auto same = phi.rotate(Phase{0.0});
    CHECK(std::abs(same.coefficients()[1] - cplx{1.0, 0.0}) < 1e-15);
    // rotation composes modulo the sign identification at pi/3
    auto ab = phi.rotate(Phase{0.12}).rotate(Phase{0.2});
    auto once = phi.rotate(Phase{0.32});
    CHECK(std::abs(ab.coefficients()[1] - once.coefficients()[1]) < 1e-14);
}

TEST_CASE("cube-root continuation around a zero picks up monodromy") {
    auto phi = PolynomialCubicDifferential::from_poly({cplx{0.0, 0.0}, cplx{1.0, 0.0}});  // x dx^3
    CubeRootBranch b{cplx{1.0, 0.0}, cplx{1.0, 0.0}};  // cbrt(1) = 1
    // full loop around 0: multiply by e^{2 pi i/3}
    CubeRootBranch cur = b;
    for (int k = 1; k <= 360; ++k) {
        double a = 2.0 * kPi * k / 360.0;
        cur = continue_branch(phi, Phase{}, cur, expi(a));
    }
    CHECK(std::abs(cur.value - expi(2.0 * kPi / 3.0)) < 1e-9);

    // contractible loop away from 0: trivial monodromy
    cur = {cplx{3.5, 0.0}, std::cbrt(3.5) * cplx{1.0, 0.0}};
    for (int k = 1; k <= 240; ++k) {
        double a = 2.0 * kPi * k / 240.0;
        cur = continue_branch(phi, Phase{}, cur, cplx{3.0, 0.0} + 0.5 * expi(a));
    }
    CHECK(std::abs(cur.value - std::cbrt(3.5)) < 1e-10);
}

TEST_CASE("constant integrand stays on one cube root") {
    auto phi = PolynomialCubicDifferential::from_poly({cplx{1.0, 0.0}});
    CubeRootBranch b{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    auto c = continue_branch(phi, Phase{}, b, cplx{5.0, 7.0});
    CHECK(std::abs(c.value - cplx{1.0, 0.0}) < 1e-14);
}

TEST_CASE("critical directions of x dx^3") {
    auto phi = PolynomialCubicDifferential::from_poly({cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    auto dirs = critical_directions(phi, cplx{0.0, 0.0}, Phase{});
    REQUIRE(dirs.size() == 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(std::abs(dirs[k].direction - expi(k * kPi / 4.0)) < 1e-12);
        CHECK(dirs[k].sign == (k % 2 == 0 ? TrajectorySign::Positive : TrajectorySign::Negative));
    }
    // signs strictly alternate counterclockwise
    for (int k = 0; k < 8; ++k) CHECK(dirs[k].sign != dirs[(k + 1) % 8].sign);
}

TEST_CASE("critical directions rotate by 3/4 theta") {
    auto phi = PolynomialCubicDifferential::from_poly({cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    double th = kPi / 6.0;
    auto dirs0 = critical_directions(phi, cplx{0.0, 0.0}, Phase{});
    auto dirs = critical_directions(phi, cplx{0.0, 0.0}, Phase{th});
    REQUIRE(dirs.size() == 8);
    // every rotated direction matches some base direction rotated by 3/4 theta,
    // with the sign preserved
    for (const auto& d : dirs) {
        bool found = false;
        for (const auto& d0 : dirs0) {
            if (std::abs(d.direction - d0.direction * expi(0.75 * th)) < 1e-10) {
                CHECK(d.sign == d0.sign);
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("critical directions at the zero representing infinity") {
    auto phi = PolynomialCubicDifferential::normalized_degree3(cplx{1.0, 0.0}, cplx{0.4, 0.3});
    auto dirs = critical_directions(phi, phi.zeros()[2].location, Phase{});
    CHECK(dirs.size() == 8);
    int pos = 0;
    for (const auto& d : dirs) pos += d.sign == TrajectorySign::Positive;
    CHECK(pos == 4);
}

TEST_CASE("gauss-bonnet residual") {
    // Euclidean triangle, no interior singularities
    double tri[] = {1.1, 0.9, kPi - 2.0};
    CHECK(gauss_bonnet_residual(tri, {}) == doctest::Approx(0.0).epsilon(1e-12));
    // one-cornered loop around a simple zero forces a negative corner angle,
    // certifying that no self-intersecting trajectory exists
    int orders[] = {1};
    double theta_loop = -kPi - 2.0 * kPi / 3.0;
    double loop[] = {theta_loop};
    CHECK(theta_loop < 0.0);
    CHECK(gauss_bonnet_residual(loop, orders) == doctest::Approx(0.0).epsilon(1e-12));
    // hexagonal core: six corners of 2 pi/3 (zeros sit on the boundary, so
    // the interior carries no singularity)
    std::vector<double> hex(6, 2.0 * kPi / 3.0);
    CHECK(gauss_bonnet_residual(hex, {}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("branch integral matches an elementary antiderivative") {
    // P = 1: integral of 1 dx along a segment is the displacement
    auto phi = PolynomialCubicDifferential::from_poly({cplx{1.0, 0.0}});
    std::vector<cplx> path{cplx{0.0, 0.0}, cplx{2.0, 1.0}};
    auto r = integrate_branch(phi, Phase{}, path, CubeRootBranch{path[0], cplx{1.0, 0.0}}, 1e-12);
    CHECK(std::abs(r.value - cplx{2.0, 1.0}) < 1e-12);

    // P = x on [1, 8] with the real branch: integral of x^{1/3} is (3/4) x^{4/3}
    auto phix = PolynomialCubicDifferential::from_poly({cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    std::vector<cplx> path2{cplx{1.0, 0.0}, cplx{8.0, 0.0}};
    auto r2 = integrate_branch(phix, Phase{}, path2, CubeRootBranch{path2[0], cplx{1.0, 0.0}}, 1e-12);
    CHECK(std::abs(r2.value - cplx{45.0 / 4.0, 0.0}) < 1e-10);
    CHECK(r2.error < 1e-9 * std::abs(r2.value) + 1e-15);
}

TEST_CASE("reference path detours around zeros") {
    auto phi = PolynomialCubicDifferential::from_poly({cplx{-1.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    // straight from -2 to 2 would pass through both zeros
    auto path = reference_path(phi, cplx{-2.0, 0.0}, cplx{2.0, 0.0}, 0.1);
    CHECK(path.size() == 4);
    for (const auto& z : phi.zeros()) {
        double dmin = 1e300;
        for (size_t i = 0; i + 1 < path.size(); ++i)
            dmin = std::min(dmin, point_segment_distance(z.location, path[i], path[i + 1]));
        CHECK(dmin > 0.05);
    }
}
