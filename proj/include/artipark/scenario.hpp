#pragma once

#include <string>
#include <vector>

#include "artipark/simulation.hpp"

// Scenario files are JSON objects with the blocks
//
//   geometry    {l1, l2}
//   gains       {lambda1..lambda4}
//   initial     {e, theta1, theta2, phi}          (required)
//   controller  {deadlock_eps, kick_omega, kick_phi_target, kick_enabled,
//                v_max, omega_max}
//   simulation  {dt, t_max, e_tol, angle_tol, integrator, frame}
//   feedback    {mode, beacons {A, B, C}, sigma, seed}
//   output      {directory, csv, svg}
//
// Every block except "initial" is optional and falls back to defaults.
// Unknown keys are rejected with the offending path in the message.

namespace artipark {

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool svg = true;
};

struct ScenarioConfig {
    std::string name = "scenario";  // output file stem, from the file name
    RobotGeometry geometry{0.1, 0.1};
    ControllerConfig controller;
    PolarState initial;
    SimulationConfig simulation;
    OutputConfig output;
    std::vector<std::string> warnings;  // non-fatal findings from parsing
};

// Beacon layout used when beacon feedback is requested without an explicit
// layout: collinear beacons on the goal's y-axis, C at the goal, sized for
// approaches from the x < 0 half-plane.
BeaconArray default_beacon_array();

// Throws IoError when the file cannot be read and InvalidInputError for
// malformed JSON or invalid values; messages carry the file and key path.
ScenarioConfig parse_scenario_file(const std::string& path);

// Same, from an in-memory document; `label` stands in for the file name in
// messages and derives the scenario name.
ScenarioConfig parse_scenario_string(const std::string& text, const std::string& label);

// Canonical JSON for a configuration; parsing it back yields the same
// configuration.
std::string serialize_scenario(const ScenarioConfig& cfg);

// Convenience wrapper running the scenario's initial state under its own
// settings.
Trajectory run_scenario(const ScenarioConfig& scenario);

}  // namespace artipark
