#include "artipark/controller.hpp"

#include <cmath>
#include <sstream>

namespace artipark {

namespace {

double clamp_abs(double v, const std::optional<double>& limit) {
    if (!limit) return v;
    if (v > *limit) return *limit;
    if (v < -*limit) return -*limit;
    return v;
}

ControlCommand saturate(ControlCommand u, const ControllerConfig& cfg) {
    u.v = clamp_abs(u.v, cfg.v_max);
    u.omega = clamp_abs(u.omega, cfg.omega_max);
    return u;
}

// A kick starts inside |theta2|, |phi| < deadlock_eps and must keep running
// until |phi| reaches kick_phi_target. While v = 0, theta2 moves at rate
// -omega * l2 / (l2 + l1*cos(phi)), whose magnitude never exceeds |phi_dot|
// for |phi| <= pi/2, so along a kick orbit |theta2| stays inside the funnel
// deadlock_eps + |phi| and the kick persists until |phi| reaches its target.
// States with |theta2| outside the funnel are already turning and get the
// plain law; a box-shaped region here would capture ordinary convergence
// tails and stall them with v = 0.
bool kick_active(const PolarState& p, const ControllerConfig& cfg) {
    return std::abs(p.theta1) >= cfg.deadlock_eps && std::abs(p.phi) < cfg.kick_phi_target &&
           std::abs(p.theta2) < cfg.deadlock_eps + std::abs(p.phi);
}

}  // namespace

Gains::Gains(double l1, double l2, double l3, double l4)
    : lambda1(l1), lambda2(l2), lambda3(l3), lambda4(l4) {
    for (double g : {lambda1, lambda2, lambda3, lambda4}) {
        if (!std::isfinite(g)) throw InvalidInputError("gains must be finite");
    }
    if (lambda1 <= 0.0 || lambda2 <= 0.0 || lambda3 <= 0.0) {
        throw InvalidInputError("lambda1, lambda2, lambda3 must be positive");
    }
    if (lambda4 < 0.0) throw InvalidInputError("lambda4 must be non-negative");
}

void ControllerConfig::validate() const {
    Gains check(gains.lambda1, gains.lambda2, gains.lambda3, gains.lambda4);
    (void)check;
    if (!(deadlock_eps > 0.0)) throw InvalidInputError("deadlock_eps must be positive");
    if (!(std::isfinite(kick_omega)) || kick_omega == 0.0) {
        throw InvalidInputError("kick_omega must be finite and non-zero");
    }
    if (!(kick_phi_target > deadlock_eps)) {
        throw InvalidInputError("kick_phi_target must exceed deadlock_eps");
    }
    if (v_max && !(*v_max > 0.0)) throw InvalidInputError("v_max must be positive");
    if (omega_max && !(*omega_max > 0.0)) throw InvalidInputError("omega_max must be positive");
}

double lyapunov_value(const PolarState& p, const Gains& g) {
    return 0.5 * (g.lambda1 * p.e * p.e + g.lambda2 * p.theta1 * p.theta1 +
                  g.lambda3 * p.theta2 * p.theta2 + g.lambda4 * p.phi * p.phi);
}

ControlCommand control_law(const PolarState& p, const Gains& g, const RobotGeometry& geom) {
    if (p.e < kGoalEps) {
        std::ostringstream os;
        os << "control law is undefined at the goal (e = " << p.e << ")";
        throw AtGoalError(os.str());
    }
    double f = articulation_factor(p.phi, geom);
    double s2 = std::sin(p.theta2);
    double c2 = std::cos(p.theta2);
    double v = -((g.lambda2 * p.theta1 + g.lambda3 * p.theta2) * s2 / p.e - g.lambda1 * p.e * c2 -
                 g.lambda3 * p.theta2 * std::sin(p.phi) / f);
    double omega = -(g.lambda4 * p.phi - geom.l2 * g.lambda3 * p.theta2 / f);
    return {v, omega};
}

double closed_loop_vdot(const PolarState& p, const Gains& g, const RobotGeometry& geom) {
    ControlCommand u = control_law(p, g, geom);
    return -(u.v * u.v + u.omega * u.omega);
}

bool detect_deadlock(const PolarState& p, const ControllerConfig& cfg) {
    return std::abs(p.theta2) < cfg.deadlock_eps && std::abs(p.phi) < cfg.deadlock_eps &&
           std::abs(p.theta1) >= cfg.deadlock_eps;
}

ControlDecision control_with_deadlock_handling(const PolarState& p, const ControllerConfig& cfg,
                                               const RobotGeometry& geom) {
    if (cfg.kick_enabled && kick_active(p, cfg)) {
        // Bending the vehicle toward sign(theta1) makes the resumed law
        // steer the goal bearing back toward zero.
        double sign = (p.theta1 < 0.0) ? -1.0 : 1.0;
        ControlCommand u{0.0, std::abs(cfg.kick_omega) * sign};
        return {saturate(u, cfg), ControlMode::Kick};
    }
    return {saturate(control_law(p, cfg.gains, geom), cfg), ControlMode::Normal};
}

}  // namespace artipark
