#include "artipark/simulation.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace artipark {

namespace {

using Vec4 = std::array<double, 4>;

Vec4 axpy(const Vec4& y, double h, const Vec4& k) {
    return {y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2], y[3] + h * k[3]};
}

void require_dt(double dt) {
    if (!std::isfinite(dt) || dt <= 0.0) throw InvalidInputError("dt must be finite and positive");
}

template <typename F>
Vec4 rk4_core(const Vec4& y, F f, double dt) {
    Vec4 k1 = f(y);
    Vec4 k2 = f(axpy(y, 0.5 * dt, k1));
    Vec4 k3 = f(axpy(y, 0.5 * dt, k2));
    Vec4 k4 = f(axpy(y, dt, k3));
    Vec4 out;
    for (int i = 0; i < 4; ++i) {
        out[i] = y[i] + dt * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
    }
    return out;
}

}  // namespace

CartesianState rk4_step(const CartesianState& s, const ControlCommand& u,
                        const RobotGeometry& geom, double dt) {
    require_dt(dt);
    auto f = [&](const Vec4& y) {
        return cartesian_derivative(CartesianState(y[0], y[1], y[2], y[3]), u, geom);
    };
    Vec4 y = rk4_core({s.x, s.y, s.psi, s.phi}, f, dt);
    return CartesianState(y[0], y[1], y[2], y[3]);
}

PolarState rk4_step(const PolarState& p, const ControlCommand& u, const RobotGeometry& geom,
                    double dt) {
    require_dt(dt);
    auto f = [&](const Vec4& y) {
        return polar_derivative(PolarState(y[0], y[1], y[2], y[3]), u, geom);
    };
    Vec4 y = rk4_core({p.e, p.theta1, p.theta2, p.phi}, f, dt);
    return PolarState(y[0], y[1], y[2], y[3]);
}

CartesianState euler_step(const CartesianState& s, const ControlCommand& u,
                          const RobotGeometry& geom, double dt) {
    require_dt(dt);
    Vec4 y = axpy({s.x, s.y, s.psi, s.phi}, dt, cartesian_derivative(s, u, geom));
    return CartesianState(y[0], y[1], y[2], y[3]);
}

PolarState euler_step(const PolarState& p, const ControlCommand& u, const RobotGeometry& geom,
                      double dt) {
    require_dt(dt);
    Vec4 y = axpy({p.e, p.theta1, p.theta2, p.phi}, dt, polar_derivative(p, u, geom));
    return PolarState(y[0], y[1], y[2], y[3]);
}

void SimulationConfig::validate() const {
    if (!std::isfinite(dt) || dt <= 0.0) throw InvalidInputError("dt must be finite and positive");
    if (!std::isfinite(t_max) || t_max < dt) {
        throw InvalidInputError("t_max must be finite and at least one step long");
    }
    if (!(e_tol > kGoalEps)) {
        throw InvalidInputError("e_tol must exceed the goal singularity guard");
    }
    if (!(angle_tol > 0.0)) throw InvalidInputError("angle_tol must be positive");
    if (!std::isfinite(feedback.sigma) || feedback.sigma < 0.0) {
        throw InvalidInputError("feedback sigma must be finite and non-negative");
    }
    if (feedback.mode == FeedbackMode::Beacon && !feedback.beacons) {
        throw InvalidInputError("beacon feedback requires a beacon layout");
    }
}

FeedbackSource::FeedbackSource(const FeedbackConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (!std::isfinite(cfg_.sigma) || cfg_.sigma < 0.0) {
        throw InvalidInputError("feedback sigma must be finite and non-negative");
    }
    if (cfg_.mode == FeedbackMode::Beacon && !cfg_.beacons) {
        throw InvalidInputError("beacon feedback requires a beacon layout");
    }
}

PolarState FeedbackSource::observe(const CartesianState& truth_cartesian,
                                   const PolarState& truth_polar) {
    if (cfg_.mode == FeedbackMode::GroundTruth) return truth_polar;
    Pose pose{truth_cartesian.x, truth_cartesian.y, truth_cartesian.psi};
    BearingMeasurement m = bearings_from_pose(pose, *cfg_.beacons);
    m = add_bearing_noise(m, cfg_.sigma, rng_);
    TriangulationSolution sol = pose_from_bearings(m, *cfg_.beacons);
    PolarConfig pc = polar_config_from_pose(sol);
    // phi comes from the on-board articulation encoder, not from beacons.
    return PolarState(pc.e, pc.theta1, pc.theta2, truth_polar.phi);
}

namespace {

// Ground truth carried in both representations; cfg.frame selects which one
// the integrator advances, the other is derived from it.
struct MasterState {
    CartesianState cart;
    PolarState polar;
};

MasterState advance(const MasterState& m, const ControlCommand& u, const SimulationConfig& cfg,
                    const RobotGeometry& geom) {
    if (cfg.frame == Frame::Cartesian) {
        CartesianState next = (cfg.integrator == Integrator::Rk4)
                                  ? rk4_step(m.cart, u, geom, cfg.dt)
                                  : euler_step(m.cart, u, geom, cfg.dt);
        return {next, polar_from_cartesian(next)};
    }
    PolarState next = (cfg.integrator == Integrator::Rk4) ? rk4_step(m.polar, u, geom, cfg.dt)
                                                          : euler_step(m.polar, u, geom, cfg.dt);
    return {cartesian_from_polar(next), next};
}

bool goal_reached(const PolarState& p, const SimulationConfig& cfg) {
    return p.e < cfg.e_tol && std::abs(p.theta1) < cfg.angle_tol &&
           std::abs(p.theta2) < cfg.angle_tol;
}

// The law's sin(theta2)/e term grows without bound as the range error
// shrinks, so near the goal a command held constant over a full step can
// travel past the goal and trap the sampled loop in a limit cycle around
// it. Scaling v and omega by one common factor is a pure time
// reparametrization of the closed-loop field, so capping the per-step
// travel at a small fraction of the observed range keeps the sampled path
// on the continuous orbit without changing its shape; away from the goal
// the cap is inactive and commands pass through bitwise untouched.
constexpr double kMaxStepRangeFraction = 0.1;

ControlCommand pace_command(ControlCommand u, double range, double dt) {
    double travel = std::abs(u.v) * dt;
    double budget = kMaxStepRangeFraction * range;
    if (travel <= budget) return u;
    double scale = budget / travel;
    u.v *= scale;
    u.omega *= scale;
    return u;
}

// Gain of the sampled v loop: how strongly one held step of v feeds back
// into the next commanded v through (e, theta1, theta2). Holding a stiff
// command for a full step is only contracting while dt * |dv/dt per unit v|
// stays below the sampled-stability bound; the 1/e sensitivities push it
// past that bound close to the goal, where the continuous orbit rides a
// slow manifold with v near zero and the raw sampled loop chatters in
// sign. Scaling v alone restores contraction there without slowing the
// articulation dynamics, and keeps the decision-point energy rate
// -(c*v^2 + omega^2) negative, so descent is preserved.
double v_loop_gain(const PolarState& p, const Gains& g, const RobotGeometry& geom, double dt) {
    double f = articulation_factor(p.phi, geom);
    double s2 = std::sin(p.theta2);
    double c2 = std::cos(p.theta2);
    double sf = std::sin(p.phi);
    double k = g.lambda2 * p.theta1 + g.lambda3 * p.theta2;
    double dv_de = k * s2 / (p.e * p.e) + g.lambda1 * c2;
    double dv_dth1 = -g.lambda2 * s2 / p.e;
    double dv_dth2 =
        -(k * c2 + g.lambda3 * s2) / p.e - g.lambda1 * p.e * s2 + g.lambda3 * sf / f;
    double de_dv = -c2;
    double dth1_dv = s2 / p.e;
    double dth2_dv = s2 / p.e - sf / f;
    double j = dv_de * de_dv + dv_dth1 * dth1_dv + dv_dth2 * dth2_dv;
    return dt * std::abs(j);
}

ControlCommand pace_decision(const ControlDecision& d, const PolarState& est,
                             const SimulationConfig& cfg, const ControllerConfig& ctrl_cfg,
                             const RobotGeometry& geom) {
    ControlCommand u = d.command;
    if (d.mode == ControlMode::Normal) {
        double gain = v_loop_gain(est, ctrl_cfg.gains, geom, cfg.dt);
        if (gain > 1.0) u.v /= gain;
    }
    return pace_command(u, est.e, cfg.dt);
}

}  // namespace

TrajectorySample step_closed_loop(const TrajectorySample& sample, FeedbackSource& feedback,
                                  const SimulationConfig& cfg, const ControllerConfig& ctrl_cfg,
                                  const RobotGeometry& geom) {
    cfg.validate();
    ctrl_cfg.validate();
    MasterState next = advance({sample.cartesian, sample.polar}, sample.command, cfg, geom);
    TrajectorySample out;
    out.t = sample.t + cfg.dt;
    out.cartesian = next.cart;
    out.polar = next.polar;
    out.V = lyapunov_value(next.polar, ctrl_cfg.gains);
    PolarState est = feedback.observe(next.cart, next.polar);
    ControlDecision d = control_with_deadlock_handling(est, ctrl_cfg, geom);
    out.command = pace_decision(d, est, cfg, ctrl_cfg, geom);
    out.mode = d.mode;
    return out;
}

Trajectory run_scenario(const PolarState& initial, const SimulationConfig& cfg,
                        const ControllerConfig& ctrl_cfg, const RobotGeometry& geom) {
    cfg.validate();
    ctrl_cfg.validate();
    FeedbackSource feedback(cfg.feedback);

    Trajectory traj;
    MasterState m{cartesian_from_polar(initial), initial};
    long max_steps = static_cast<long>(std::floor(cfg.t_max / cfg.dt + 1e-9));

    auto finish = [&](double t, StopReason why) {
        TrajectorySample s;
        s.t = t;
        s.cartesian = m.cart;
        s.polar = m.polar;
        s.V = lyapunov_value(m.polar, ctrl_cfg.gains);
        traj.samples.push_back(s);
        traj.stop_reason = why;
        return traj;
    };

    for (long k = 0;; ++k) {
        double t = k * cfg.dt;
        if (goal_reached(m.polar, cfg)) return finish(t, StopReason::AtGoal);
        if (k >= max_steps) return finish(t, StopReason::TimeBudget);

        PolarState est;
        try {
            est = feedback.observe(m.cart, m.polar);
        } catch (const Error&) {
            return finish(t, StopReason::FeedbackFailure);
        }

        ControlDecision d;
        MasterState next;
        try {
            d = control_with_deadlock_handling(est, ctrl_cfg, geom);
            d.command = pace_decision(d, est, cfg, ctrl_cfg, geom);
            next = advance(m, d.command, cfg, geom);
        } catch (const Error&) {
            return finish(t, StopReason::Singularity);
        }

        TrajectorySample s;
        s.t = t;
        s.cartesian = m.cart;
        s.polar = m.polar;
        s.V = lyapunov_value(m.polar, ctrl_cfg.gains);
        s.command = d.command;
        s.mode = d.mode;
        traj.samples.push_back(s);
        m = next;
    }
}

std::vector<Trajectory> run_batch(const std::vector<PolarState>& initials,
                                  const SimulationConfig& cfg, const ControllerConfig& ctrl_cfg,
                                  const RobotGeometry& geom, unsigned parallelism) {
    cfg.validate();
    ctrl_cfg.validate();
    std::vector<Trajectory> results(initials.size());
    if (initials.empty()) return results;

    unsigned workers = std::max(1u, std::min<unsigned>(parallelism, initials.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < initials.size(); ++i) {
            results[i] = run_scenario(initials[i], cfg, ctrl_cfg, geom);
        }
        return results;
    }

    std::atomic<std::size_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto work = [&]() {
        for (;;) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= initials.size()) return;
            try {
                results[i] = run_scenario(initials[i], cfg, ctrl_cfg, geom);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace artipark
