#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "artipark/controller.hpp"
#include "artipark/positioning.hpp"

// Fixed-step closed-loop simulation: at every step the controller sees the
// current (true or beacon-derived) polar state, and the resulting command is
// held constant while the kinematics are integrated over dt. Near the goal,
// where holding the stiff law over a full step would overshoot the remaining
// range, v and omega are scaled down by a common factor (a pure time
// reparametrization of the closed-loop path) so one step never covers more
// than a tenth of the observed range error.

namespace artipark {

enum class Integrator { Rk4, Euler };
enum class Frame { Cartesian, Polar };
enum class FeedbackMode { GroundTruth, Beacon };

enum class StopReason {
    AtGoal,           // goal tolerances met
    TimeBudget,       // t_max reached without meeting the tolerances
    Singularity,      // integration hit a kinematic singularity
    FeedbackFailure,  // localization could not produce a state estimate
};

struct FeedbackConfig {
    FeedbackMode mode = FeedbackMode::GroundTruth;
    std::optional<BeaconArray> beacons;  // required in Beacon mode
    double sigma = 0.0;                  // bearing noise standard deviation [rad]
    std::uint64_t seed = 0;
};

struct SimulationConfig {
    double dt = 0.01;         // step size [s]
    double t_max = 100.0;     // time budget [s]
    double e_tol = 0.01;      // goal distance tolerance [m]
    double angle_tol = 0.05;  // goal tolerance on |theta1| and |theta2| [rad]
    Integrator integrator = Integrator::Rk4;
    Frame frame = Frame::Cartesian;  // which representation is integrated
    FeedbackConfig feedback;

    // Throws InvalidInputError on inconsistent values.
    void validate() const;
};

struct TrajectorySample {
    double t = 0.0;
    CartesianState cartesian;  // ground truth
    PolarState polar;          // ground truth, same configuration
    ControlCommand command;    // held over [t, t + dt); zero on the final sample
    double V = 0.0;            // Lyapunov value of the true state
    ControlMode mode = ControlMode::Normal;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    StopReason stop_reason = StopReason::TimeBudget;
};

// Single integration step with the command held constant; angles are
// re-wrapped in the result.
CartesianState rk4_step(const CartesianState& s, const ControlCommand& u,
                        const RobotGeometry& geom, double dt);
PolarState rk4_step(const PolarState& p, const ControlCommand& u, const RobotGeometry& geom,
                    double dt);
CartesianState euler_step(const CartesianState& s, const ControlCommand& u,
                          const RobotGeometry& geom, double dt);
PolarState euler_step(const PolarState& p, const ControlCommand& u, const RobotGeometry& geom,
                      double dt);

// Produces the polar state the controller acts on. Beacon mode synthesizes
// bearings from the true pose, optionally perturbs them, and triangulates;
// the articulation angle is always taken from ground truth (measured
// on-board, not by beacons).
class FeedbackSource {
public:
    explicit FeedbackSource(const FeedbackConfig& cfg);
    PolarState observe(const CartesianState& truth_cartesian, const PolarState& truth_polar);

private:
    FeedbackConfig cfg_;
    std::mt19937_64 rng_;
};

// Advances one closed-loop step: integrates sample.command over dt, then
// evaluates feedback and controller at the new state to fill the returned
// sample's command, Lyapunov value and mode.
TrajectorySample step_closed_loop(const TrajectorySample& sample, FeedbackSource& feedback,
                                  const SimulationConfig& cfg, const ControllerConfig& ctrl_cfg,
                                  const RobotGeometry& geom);

// Runs from the given initial state until the goal tolerances are met, the
// time budget runs out, or a singularity / feedback failure ends the run.
// The trajectory always contains at least the initial sample; the final
// sample carries a zero command.
Trajectory run_scenario(const PolarState& initial, const SimulationConfig& cfg,
                        const ControllerConfig& ctrl_cfg, const RobotGeometry& geom);

// Runs independent scenarios, optionally across threads. Results match
// sequential execution bitwise regardless of parallelism.
std::vector<Trajectory> run_batch(const std::vector<PolarState>& initials,
                                  const SimulationConfig& cfg, const ControllerConfig& ctrl_cfg,
                                  const RobotGeometry& geom, unsigned parallelism = 1);

}  // namespace artipark
