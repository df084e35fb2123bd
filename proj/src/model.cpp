#include "artipark/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace artipark {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << name << " must be finite, got " << v;
        throw InvalidInputError(os.str());
    }
}

}  // namespace

double wrap_angle(double a) {
    require_finite(a, "angle");
    double r = std::remainder(a, 2.0 * kPi);
    // remainder() lands in [-pi, pi]; fold the closed lower end onto +pi.
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

RobotGeometry::RobotGeometry(double l1_, double l2_) : l1(l1_), l2(l2_) {
    require_finite(l1, "l1");
    require_finite(l2, "l2");
    if (l1 <= 0.0 || l2 <= 0.0) throw InvalidInputError("body lengths l1, l2 must be positive");
}

CartesianState::CartesianState(double x_, double y_, double psi_, double phi_)
    : x(x_), y(y_), psi(wrap_angle(psi_)), phi(wrap_angle(phi_)) {
    require_finite(x, "x");
    require_finite(y, "y");
}

PolarState::PolarState(double e_, double theta1_, double theta2_, double phi_)
    : e(e_), theta1(wrap_angle(theta1_)), theta2(wrap_angle(theta2_)), phi(wrap_angle(phi_)) {
    require_finite(e, "e");
    if (e < 0.0) throw InvalidInputError("distance e must be non-negative");
}

double articulation_factor(double phi, const RobotGeometry& geom) {
    double f = geom.l2 + geom.l1 * std::cos(phi);
    if (std::abs(f) < geom.articulation_guard()) {
        std::ostringstream os;
        os << "articulation factor l2 + l1*cos(phi) = " << f << " at phi = " << phi
           << " is below the guard " << geom.articulation_guard() << " (vehicle fully folded)";
        throw ArticulationSingularityError(os.str());
    }
    return f;
}

PolarState polar_from_cartesian(const CartesianState& s) {
    double e = std::hypot(s.x, s.y);
    if (e < kGoalEps) {
        std::ostringstream os;
        os << "state is at the goal (e = " << e << "); theta1/theta2 are undefined";
        throw AtGoalError(os.str());
    }
    // theta1 is the heading of the robot-to-goal vector (-x, -y).
    double theta1 = std::atan2(-s.y, -s.x);
    double theta2 = wrap_angle(theta1 - s.psi);
    return PolarState(e, theta1, theta2, s.phi);
}

CartesianState cartesian_from_polar(const PolarState& p) {
    double x = -p.e * std::cos(p.theta1);
    double y = -p.e * std::sin(p.theta1);
    double psi = wrap_angle(p.theta1 - p.theta2);
    return CartesianState(x, y, psi, p.phi);
}

StateRates cartesian_derivative(const CartesianState& s, const ControlCommand& u,
                                const RobotGeometry& geom) {
    require_finite(u.v, "v");
    require_finite(u.omega, "omega");
    double f = articulation_factor(s.phi, geom);
    double psi_dot = (std::sin(s.phi) / f) * u.v + (geom.l2 / f) * u.omega;
    return {u.v * std::cos(s.psi), u.v * std::sin(s.psi), psi_dot, u.omega};
}

StateRates polar_derivative(const PolarState& p, const ControlCommand& u,
                            const RobotGeometry& geom) {
    require_finite(u.v, "v");
    require_finite(u.omega, "omega");
    if (p.e < kGoalEps) {
        std::ostringstream os;
        os << "polar kinematics are singular at the goal (e = " << p.e << ")";
        throw AtGoalError(os.str());
    }
    double f = articulation_factor(p.phi, geom);
    double s2 = std::sin(p.theta2);
    double e_dot = -u.v * std::cos(p.theta2);
    double theta1_dot = u.v * s2 / p.e;
    double theta2_dot = (s2 / p.e - std::sin(p.phi) / f) * u.v - (geom.l2 / f) * u.omega;
    return {e_dot, theta1_dot, theta2_dot, u.omega};
}

}  // namespace artipark
