#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "artipark/positioning.hpp"

using namespace artipark;

namespace {
constexpr double kPi = std::numbers::pi;

// collinear layout used throughout: beacons on the y axis, B between A and C
const BeaconArray kLine{{0.0, 0.4}, {0.0, 0.2}, {0.0, 0.0}};
}  // namespace

TEST_CASE("beacon array derived quantities") {
    CHECK(kLine.a() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(kLine.b() == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(kLine.phi_b() == doctest::Approx(-0.5 * kPi).epsilon(1e-15));
    // collinear layout: the interior angle at B is pi, so zeta3 = 0
    CHECK(kLine.zeta3() == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    BeaconArray tri{{0.0, 0.4}, {0.3, 0.2}, {0.0, 0.0}};
    // zeta3 is pi minus the interior angle between the B->A and B->C legs
    double interior = std::acos(0.05 / 0.13);  // dot product of the unit legs
    CHECK(tri.zeta3() == doctest::Approx(kPi - interior).epsilon(1e-12));

    CHECK_THROWS_AS(BeaconArray({0, 0}, {0, 0}, {1, 1}), InvalidInputError);
    CHECK_THROWS_AS(BeaconArray({0, 0}, {1, std::nan("")}, {2, 0}), InvalidInputError);
}

TEST_CASE("bearings from a worked pose") {
    // robot 1 m left of B, heading along +x, straddled by A and C
    BearingMeasurement m = bearings_from_pose(Pose{-1.0, 0.2, 0.0}, kLine);
    double expected = std::atan(0.2);
    CHECK(m.alpha == doctest::Approx(expected).epsilon(1e-12));
    CHECK(m.beta == doctest::Approx(expected).epsilon(1e-12));
    CHECK(m.gamma == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(expected == doctest::Approx(0.19739555984988075).epsilon(1e-14));

    CHECK_THROWS_AS(bearings_from_pose(Pose{0.0, 0.2, 0.0}, kLine), TriangulationError);
}

TEST_CASE("zeta1 and range for the symmetric worked case") {
    double ab = std::atan(0.2);
    BearingMeasurement m{ab, ab, 0.0};
    double zeta1 = solve_zeta1(m, kLine);
    // the denominator products cancel exactly, so the angle is exactly
    // pi/2: the robot sits on the perpendicular through B
    CHECK(zeta1 == 0.5 * kPi);
    double d = solve_range(m, zeta1, kLine);
    CHECK(d == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(solve_zeta1(BearingMeasurement{0.0, ab, 0.0}, kLine), TriangulationError);
    CHECK_THROWS_AS(solve_zeta1(BearingMeasurement{ab, kPi, 0.0}, kLine), TriangulationError);
    CHECK_THROWS_AS(solve_range(BearingMeasurement{ab, ab, 0.0},
                                std::numeric_limits<double>::quiet_NaN(), kLine),
                    InvalidInputError);
}

TEST_CASE("pose recovery for worked poses") {
    for (double y : {0.2, 0.1, 0.3}) {
        Pose truth{-1.0, y, 0.0};
        BearingMeasurement m = bearings_from_pose(truth, kLine);
        TriangulationSolution sol = pose_from_bearings(m, kLine);
        CHECK(sol.pose.x == doctest::Approx(truth.x).epsilon(1e-9));
        CHECK(sol.pose.y == doctest::Approx(truth.y).epsilon(1e-9));
        CHECK(wrap_angle(sol.pose.theta - truth.theta) ==
              doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
        CHECK(sol.d == doctest::Approx(std::hypot(truth.x, truth.y - 0.2)).epsilon(1e-9));
    }
}

TEST_CASE("pose recovery round trip over random poses") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xdist(-8.0, -0.3);
    std::uniform_real_distribution<double> ydist(-3.0, 3.0);
    std::uniform_real_distribution<double> tdist(-kPi, kPi);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        Pose truth{xdist(rng), ydist(rng), tdist(rng)};
        BearingMeasurement m;
        try {
            m = bearings_from_pose(truth, kLine);
        } catch (const TriangulationError&) {
            continue;  // pose collapsed onto a beacon direction pair
        }
        TriangulationSolution sol = pose_from_bearings(m, kLine);
        CHECK(std::hypot(sol.pose.x - truth.x, sol.pose.y - truth.y) < 1e-9);
        CHECK(std::fabs(wrap_angle(sol.pose.theta - truth.theta)) < 1e-9);

        // sine-law identities for the two sight triangles through B
        CHECK(std::fabs(sol.d * std::sin(m.beta) -
                        kLine.b() * std::sin(m.beta + sol.zeta1)) < 1e-9);
        CHECK(std::fabs(sol.d * std::sin(m.alpha) -
                        kLine.a() * std::sin(kLine.zeta3() + sol.zeta1 - m.alpha)) < 1e-9);
        ++checked;
    }
    CHECK(checked > 900);
}

TEST_CASE("polar configuration from a recovered pose") {
    TriangulationSolution sol{0.5 * kPi, 1.0, Pose{-1.0, 0.2, 0.0}};
    PolarConfig c = polar_config_from_pose(sol);
    CHECK(c.e == doctest::Approx(1.0198039027185569).epsilon(1e-12));
    CHECK(c.theta1 == doctest::Approx(std::atan2(-0.2, 1.0)).epsilon(1e-12));
    CHECK(c.theta2 == doctest::Approx(c.theta1).epsilon(1e-12));  // heading zero

    TriangulationSolution at_goal{0.0, 1.0, Pose{1e-10, 0.0, 0.0}};
    CHECK_THROWS_AS(polar_config_from_pose(at_goal), AtGoalError);
}

TEST_CASE("indeterminate circle raises the dedicated error kind") {
    // non-collinear beacons with the robot on their circumcircle
    BeaconArray tri{{0.0, 0.4}, {0.3, 0.2}, {0.0, 0.0}};
    Point2 center{1.0 / 12.0, 0.2};
    double radius = std::hypot(center.x - 0.0, center.y - 0.4);
    // pick points on the circle away from the beacons themselves
    for (double ang : {2.6, 3.0, -2.9}) {
        Pose on_circle{center.x + radius * std::cos(ang),
                       center.y + radius * std::sin(ang), 0.3};
        BearingMeasurement m = bearings_from_pose(on_circle, tri);
        try {
            pose_from_bearings(m, tri);
            FAIL("expected TriangulationError");
        } catch (const TriangulationError& err) {
            CHECK(err.kind() == TriangulationError::Kind::IndeterminateConfiguration);
        }
    }
}

TEST_CASE("inconsistent bearings are rejected") {
    // No pose sees collinear beacons under alpha + beta >= pi, so these
    // angles cannot come from a real measurement.
    BearingMeasurement m = bearings_from_pose(Pose{-1.0, 0.2, 0.0}, kLine);
    m.alpha = 2.5;
    m.beta = 2.0;
    try {
        pose_from_bearings(m, kLine);
        FAIL("expected TriangulationError");
    } catch (const TriangulationError& err) {
        CHECK(err.kind() == TriangulationError::Kind::InconsistentMeasurement);
    }
}

TEST_CASE("bearing noise is seeded and optional") {
    BearingMeasurement m{0.4, 0.5, -0.2};
    BearingMeasurement same = add_bearing_noise(m, 0.0, 99);
    CHECK(same.alpha == m.alpha);
    CHECK(same.beta == m.beta);
    CHECK(same.gamma == m.gamma);

    BearingMeasurement a = add_bearing_noise(m, 1e-3, 42);
    BearingMeasurement b = add_bearing_noise(m, 1e-3, 42);
    CHECK(a.alpha == b.alpha);
    CHECK(a.beta == b.beta);
    CHECK(a.gamma == b.gamma);
    CHECK(a.alpha != m.alpha);

    // the stream form advances the generator
    std::mt19937_64 rng(42);
    BearingMeasurement first = add_bearing_noise(m, 1e-3, rng);
    BearingMeasurement second = add_bearing_noise(m, 1e-3, rng);
    CHECK(first.alpha == a.alpha);
    CHECK(second.alpha != first.alpha);
}
