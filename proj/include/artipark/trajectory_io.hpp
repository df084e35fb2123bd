#pragma once

#include <string>

#include "artipark/simulation.hpp"

// Trajectory serialization.
//
// CSV layout: the fixed header
//   t,x,y,psi,phi,e,theta1,theta2,v,omega,V,mode
// one row per sample with numbers in plain decimal notation carrying nine
// significant digits, and a final comment line `# stop_reason=<REASON>`.

namespace artipark {

// Throws InvalidInputError for an empty trajectory and IoError when the
// file cannot be written.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

// Inverse of write_trajectory_csv; rejects files whose header or row shape
// does not match. Angles are re-normalized, so values equal to pi at full
// precision may read back as their -pi-side equivalent.
Trajectory read_trajectory_csv(const std::string& path);

// Renders a two-panel figure: the docking path with heading marks, start
// and goal, and the time series of e, theta1, theta2 and phi.
void render_trajectory_svg(const Trajectory& traj, const std::string& path);

const char* stop_reason_name(StopReason reason);
const char* control_mode_name(ControlMode mode);

}  // namespace artipark
