#pragma once

#include <optional>

#include "artipark/model.hpp"

// Docking controller derived from the quadratic Lyapunov function
//
//   V = (lambda1*e^2 + lambda2*theta1^2 + lambda3*theta2^2 + lambda4*phi^2) / 2
//
// whose closed-loop derivative is -(v^2 + omega^2) <= 0. The commanded pair
// (v, omega) is stationary exactly on the manifold theta2 = phi = 0,
// theta1 != 0, which the deadlock kick escapes by steering phi away from
// zero with the vehicle halted.

namespace artipark {

// Weights of the Lyapunov form. lambda1..lambda3 must be positive; lambda4
// may be zero, in which case the articulation angle is left uncontrolled.
struct Gains {
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    double lambda3 = 1.0;
    double lambda4 = 0.01;

    Gains() = default;
    Gains(double lambda1, double lambda2, double lambda3, double lambda4);
};

enum class ControlMode { Normal, Kick };

struct ControllerConfig {
    Gains gains;
    double deadlock_eps = 1e-3;     // angle threshold defining the deadlock [rad]
    double kick_omega = 0.1;        // articulation rate magnitude while kicking [rad/s]
    double kick_phi_target = 0.05;  // |phi| at which the kick hands back control [rad]
    bool kick_enabled = true;
    std::optional<double> v_max;      // symmetric |v| clamp [m/s]
    std::optional<double> omega_max;  // symmetric |omega| clamp [rad/s]

    ControllerConfig() = default;
    explicit ControllerConfig(const Gains& g) : gains(g) {}

    // Throws InvalidInputError on inconsistent values.
    void validate() const;
};

struct ControlDecision {
    ControlCommand command;
    ControlMode mode = ControlMode::Normal;
};

double lyapunov_value(const PolarState& p, const Gains& g);

// Stabilizing feedback law (unsaturated). Throws AtGoalError at e < kGoalEps
// and ArticulationSingularityError at the folded configuration.
ControlCommand control_law(const PolarState& p, const Gains& g, const RobotGeometry& geom);

// dV/dt along the closed loop, identically -(v^2 + omega^2).
double closed_loop_vdot(const PolarState& p, const Gains& g, const RobotGeometry& geom);

// True on the stationary manifold: |theta2| and |phi| below deadlock_eps
// while |theta1| is not.
bool detect_deadlock(const PolarState& p, const ControllerConfig& cfg);

// Normal law with the deadlock escape layered on top, then the optional
// saturation clamps. While kicking the command is (v = 0, omega =
// |kick_omega| * sign), sign chosen so that the induced theta1 drift reduces
// |theta1| once normal control resumes.
ControlDecision control_with_deadlock_handling(const PolarState& p, const ControllerConfig& cfg,
                                               const RobotGeometry& geom);

}  // namespace artipark
