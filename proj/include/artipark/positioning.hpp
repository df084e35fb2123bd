#pragma once

#include <cstdint>
#include <random>

#include "artipark/model.hpp"

// Bearing-only localization against three active beacons A, B, C placed in
// the goal frame. The robot measures the two angles subtended at its
// position by the beacon pairs (A, B) and (C, B) plus the heading-relative
// bearing of B, and recovers its pose by triangle resection.

namespace artipark {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Robot pose in the goal frame.
struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // heading [rad]
};

// Beacon layout with the derived quantities frozen at construction:
//   a      = |AB|, b = |CB|  (side lengths at B)
//   zeta3  = pi - interior angle of the beacon triangle at B (0 when the
//            beacons are collinear with B between A and C)
//   phi_b  = direction of the ray from B through C, in the goal frame
class BeaconArray {
public:
    BeaconArray(Point2 a, Point2 b, Point2 c);

    const Point2& A() const { return a_pos_; }
    const Point2& B() const { return b_pos_; }
    const Point2& C() const { return c_pos_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double zeta3() const { return zeta3_; }
    double phi_b() const { return phi_b_; }

private:
    Point2 a_pos_, b_pos_, c_pos_;
    double a_, b_, zeta3_, phi_b_;
};

struct BearingMeasurement {
    double alpha = 0.0;  // unsigned angle at the robot between A and B, in (0, pi)
    double beta = 0.0;   // unsigned angle at the robot between C and B, in (0, pi)
    double gamma = 0.0;  // signed angle from the robot heading to the sight line of B
};

struct TriangulationSolution {
    double zeta1 = 0.0;  // angle at B between the robot sight line and BC [rad]
    double d = 0.0;      // range from the robot to B [m]
    Pose pose;           // recovered robot pose in the goal frame
};

// Goal-relative polar coordinates recovered from a pose; the articulation
// angle is not observable from beacons and is deliberately absent.
struct PolarConfig {
    double e = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

// Synthesizes the exact bearings seen from a pose. Throws
// TriangulationError (DegenerateGeometry) when the robot coincides with a
// beacon.
BearingMeasurement bearings_from_pose(const Pose& pose, const BeaconArray& beacons);

// Angle at B between the robot sight line and BC, from the subtended
// angles. Throws TriangulationError (IndeterminateConfiguration) when the
// robot lies on the beacons' circumcircle, where the bearings carry no
// position information.
double solve_zeta1(const BearingMeasurement& m, const BeaconArray& beacons);

// Range |robot - B| by the law of sines. Throws TriangulationError when the
// geometry degenerates or the implied range is not positive.
double solve_range(const BearingMeasurement& m, double zeta1, const BeaconArray& beacons);

// Full resection. The subtended angles are unsigned, so the triangle
// admits a mirror pose; of the two candidate branches the one that
// reproduces the measured bearings (within 1e-6 rad) is returned.
TriangulationSolution pose_from_bearings(const BearingMeasurement& m, const BeaconArray& beacons);

// Goal-relative coordinates of a recovered pose. Throws AtGoalError within
// kGoalEps of the goal.
PolarConfig polar_config_from_pose(const TriangulationSolution& solution);

// Adds independent zero-mean Gaussian noise of standard deviation sigma to
// alpha, beta and gamma (in that draw order); gamma is re-wrapped. sigma = 0
// returns the measurement unchanged without consuming randomness.
BearingMeasurement add_bearing_noise(const BearingMeasurement& m, double sigma,
                                     std::mt19937_64& rng);

// Convenience overload seeding a fresh generator; calls with equal inputs
// return bitwise-identical results.
BearingMeasurement add_bearing_noise(const BearingMeasurement& m, double sigma,
                                     std::uint64_t seed);

}  // namespace artipark
