#pragma once

#include <array>

#include "artipark/errors.hpp"

// Kinematics of a center-articulated mobile robot in two equivalent state
// representations.
//
// Frames and conventions:
//  - The goal (docking) pose is the origin of the plane with heading 0.
//  - Cartesian state: position (x, y) and heading psi of the front body,
//    plus the articulation angle phi between the two bodies.
//  - Polar state: e is the distance to the goal, theta1 the direction of
//    the robot-to-goal vector measured in the goal frame, and theta2 the
//    angle from that vector to the front body's velocity direction, i.e.
//    theta2 = theta1 - psi. phi is carried along unchanged.
//
// All angles live in (-pi, pi].

namespace artipark {

// Distance below which a state counts as being at the goal; theta1/theta2
// are undefined there.
inline constexpr double kGoalEps = 1e-9;

// Normalizes an angle to (-pi, pi]. Throws InvalidInputError on non-finite
// input.
double wrap_angle(double a);

struct RobotGeometry {
    double l1;  // front body length: hitch to front axle [m]
    double l2;  // rear body length: hitch to rear axle [m]

    RobotGeometry(double l1, double l2);

    // With l2 <= l1 the fully-folded singularity l2 + l1*cos(phi) = 0 is
    // reachable by some articulation angle.
    bool articulation_singularity_reachable() const { return l2 <= l1; }

    // Guard threshold on the articulation factor, relative to robot size.
    double articulation_guard() const { return 1e-6 * (l1 + l2); }
};

struct ControlCommand {
    double v = 0.0;      // linear velocity of the front body [m/s]
    double omega = 0.0;  // articulation rate d(phi)/dt [rad/s]
};

struct CartesianState {
    double x = 0.0;    // [m]
    double y = 0.0;    // [m]
    double psi = 0.0;  // front-body heading [rad], in (-pi, pi]
    double phi = 0.0;  // articulation angle [rad], in (-pi, pi]

    CartesianState() = default;
    CartesianState(double x, double y, double psi, double phi);
};

struct PolarState {
    double e = 0.0;       // distance to goal [m], >= 0
    double theta1 = 0.0;  // [rad], in (-pi, pi]
    double theta2 = 0.0;  // [rad], in (-pi, pi]
    double phi = 0.0;     // [rad], in (-pi, pi]

    PolarState() = default;
    PolarState(double e, double theta1, double theta2, double phi);
};

// Time derivatives in the same field order as the corresponding state.
using StateRates = std::array<double, 4>;

// l2 + l1*cos(phi). Throws ArticulationSingularityError when the value is
// within the geometry's guard of zero (vehicle fully folded).
double articulation_factor(double phi, const RobotGeometry& geom);

// Throws AtGoalError when the state is within kGoalEps of the origin.
PolarState polar_from_cartesian(const CartesianState& s);
CartesianState cartesian_from_polar(const PolarState& p);

// Kinematics under command u; fields ordered (x, y, psi, phi).
StateRates cartesian_derivative(const CartesianState& s, const ControlCommand& u,
                                const RobotGeometry& geom);

// Kinematics under command u; fields ordered (e, theta1, theta2, phi).
// Throws AtGoalError for e below kGoalEps.
StateRates polar_derivative(const PolarState& p, const ControlCommand& u,
                            const RobotGeometry& geom);

}  // namespace artipark
