#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "artipark/scenario.hpp"
#include "artipark/trajectory_io.hpp"

namespace py = pybind11;
using namespace artipark;

namespace {

std::string repr_polar(const PolarState& p) {
    std::ostringstream os;
    os << "PolarState(e=" << p.e << ", theta1=" << p.theta1 << ", theta2=" << p.theta2
       << ", phi=" << p.phi << ")";
    return os.str();
}

std::string repr_cartesian(const CartesianState& s) {
    std::ostringstream os;
    os << "CartesianState(x=" << s.x << ", y=" << s.y << ", psi=" << s.psi << ", phi=" << s.phi
       << ")";
    return os.str();
}

std::string repr_command(const ControlCommand& u) {
    std::ostringstream os;
    os << "ControlCommand(v=" << u.v << ", omega=" << u.omega << ")";
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Lyapunov docking controller for center-articulated robots";
    m.attr("__version__") = "0.1.0";
    m.attr("GOAL_EPS") = kGoalEps;

    // Exceptions: derived ones are registered after the base so their
    // translators run first.
    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<InvalidInputError>(m, "InvalidInputError", base.ptr());
    py::register_exception<AtGoalError>(m, "AtGoalError", base.ptr());
    py::register_exception<ArticulationSingularityError>(m, "ArticulationSingularityError",
                                                         base.ptr());
    py::register_exception<TriangulationError>(m, "TriangulationError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::enum_<ControlMode>(m, "ControlMode")
        .value("NORMAL", ControlMode::Normal)
        .value("KICK", ControlMode::Kick);
    py::enum_<Integrator>(m, "Integrator")
        .value("RK4", Integrator::Rk4)
        .value("EULER", Integrator::Euler);
    py::enum_<Frame>(m, "Frame")
        .value("CARTESIAN", Frame::Cartesian)
        .value("POLAR", Frame::Polar);
    py::enum_<FeedbackMode>(m, "FeedbackMode")
        .value("GROUND_TRUTH", FeedbackMode::GroundTruth)
        .value("BEACON", FeedbackMode::Beacon);
    py::enum_<StopReason>(m, "StopReason")
        .value("AT_GOAL", StopReason::AtGoal)
        .value("TIME_BUDGET", StopReason::TimeBudget)
        .value("SINGULARITY", StopReason::Singularity)
        .value("FEEDBACK_FAILURE", StopReason::FeedbackFailure);

    py::class_<RobotGeometry>(m, "RobotGeometry")
        .def(py::init<double, double>(), py::arg("l1"), py::arg("l2"))
        .def_readonly("l1", &RobotGeometry::l1)
        .def_readonly("l2", &RobotGeometry::l2)
        .def("articulation_singularity_reachable",
             &RobotGeometry::articulation_singularity_reachable)
        .def("articulation_guard", &RobotGeometry::articulation_guard);

    py::class_<ControlCommand>(m, "ControlCommand")
        .def(py::init<>())
        .def(py::init([](double v, double omega) {
                 return ControlCommand{v, omega};
             }),
             py::arg("v"), py::arg("omega"))
        .def_readwrite("v", &ControlCommand::v)
        .def_readwrite("omega", &ControlCommand::omega)
        .def("__repr__", &repr_command);

    py::class_<CartesianState>(m, "CartesianState")
        .def(py::init<double, double, double, double>(), py::arg("x"), py::arg("y"),
             py::arg("psi"), py::arg("phi"))
        .def_readonly("x", &CartesianState::x)
        .def_readonly("y", &CartesianState::y)
        .def_readonly("psi", &CartesianState::psi)
        .def_readonly("phi", &CartesianState::phi)
        .def("__repr__", &repr_cartesian);

    py::class_<PolarState>(m, "PolarState")
        .def(py::init<double, double, double, double>(), py::arg("e"), py::arg("theta1"),
             py::arg("theta2"), py::arg("phi"))
        .def_readonly("e", &PolarState::e)
        .def_readonly("theta1", &PolarState::theta1)
        .def_readonly("theta2", &PolarState::theta2)
        .def_readonly("phi", &PolarState::phi)
        .def("__repr__", &repr_polar);

    py::class_<Gains>(m, "Gains")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("lambda1"), py::arg("lambda2"),
             py::arg("lambda3"), py::arg("lambda4"))
        .def_readonly("lambda1", &Gains::lambda1)
        .def_readonly("lambda2", &Gains::lambda2)
        .def_readonly("lambda3", &Gains::lambda3)
        .def_readonly("lambda4", &Gains::lambda4);

    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def(py::init<const Gains&>(), py::arg("gains"))
        .def_readwrite("gains", &ControllerConfig::gains)
        .def_readwrite("deadlock_eps", &ControllerConfig::deadlock_eps)
        .def_readwrite("kick_omega", &ControllerConfig::kick_omega)
        .def_readwrite("kick_phi_target", &ControllerConfig::kick_phi_target)
        .def_readwrite("kick_enabled", &ControllerConfig::kick_enabled)
        .def_readwrite("v_max", &ControllerConfig::v_max)
        .def_readwrite("omega_max", &ControllerConfig::omega_max)
        .def("validate", &ControllerConfig::validate);

    py::class_<ControlDecision>(m, "ControlDecision")
        .def_readonly("command", &ControlDecision::command)
        .def_readonly("mode", &ControlDecision::mode);

    py::class_<Point2>(m, "Point2")
        .def(py::init<>())
        .def(py::init([](double x, double y) {
                 return Point2{x, y};
             }),
             py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Point2::x)
        .def_readwrite("y", &Point2::y);

    py::class_<Pose>(m, "Pose")
        .def(py::init<>())
        .def(py::init([](double x, double y, double theta) {
                 return Pose{x, y, theta};
             }),
             py::arg("x"), py::arg("y"), py::arg("theta"))
        .def_readwrite("x", &Pose::x)
        .def_readwrite("y", &Pose::y)
        .def_readwrite("theta", &Pose::theta);

    py::class_<BeaconArray>(m, "BeaconArray")
        .def(py::init<Point2, Point2, Point2>(), py::arg("a"), py::arg("b"), py::arg("c"))
        .def_property_readonly("A", &BeaconArray::A)
        .def_property_readonly("B", &BeaconArray::B)
        .def_property_readonly("C", &BeaconArray::C)
        .def_property_readonly("a", &BeaconArray::a)
        .def_property_readonly("b", &BeaconArray::b)
        .def_property_readonly("zeta3", &BeaconArray::zeta3)
        .def_property_readonly("phi_b", &BeaconArray::phi_b);

    py::class_<BearingMeasurement>(m, "BearingMeasurement")
        .def(py::init<>())
        .def(py::init([](double alpha, double beta, double gamma) {
                 return BearingMeasurement{alpha, beta, gamma};
             }),
             py::arg("alpha"), py::arg("beta"), py::arg("gamma"))
        .def_readwrite("alpha", &BearingMeasurement::alpha)
        .def_readwrite("beta", &BearingMeasurement::beta)
        .def_readwrite("gamma", &BearingMeasurement::gamma);

    py::class_<TriangulationSolution>(m, "TriangulationSolution")
        .def_readonly("zeta1", &TriangulationSolution::zeta1)
        .def_readonly("d", &TriangulationSolution::d)
        .def_readonly("pose", &TriangulationSolution::pose);

    py::class_<PolarConfig>(m, "PolarConfig")
        .def_readonly("e", &PolarConfig::e)
        .def_readonly("theta1", &PolarConfig::theta1)
        .def_readonly("theta2", &PolarConfig::theta2);

    py::class_<FeedbackConfig>(m, "FeedbackConfig")
        .def(py::init<>())
        .def_readwrite("mode", &FeedbackConfig::mode)
        .def_readwrite("beacons", &FeedbackConfig::beacons)
        .def_readwrite("sigma", &FeedbackConfig::sigma)
        .def_readwrite("seed", &FeedbackConfig::seed);

    py::class_<SimulationConfig>(m, "SimulationConfig")
        .def(py::init<>())
        .def_readwrite("dt", &SimulationConfig::dt)
        .def_readwrite("t_max", &SimulationConfig::t_max)
        .def_readwrite("e_tol", &SimulationConfig::e_tol)
        .def_readwrite("angle_tol", &SimulationConfig::angle_tol)
        .def_readwrite("integrator", &SimulationConfig::integrator)
        .def_readwrite("frame", &SimulationConfig::frame)
        .def_readwrite("feedback", &SimulationConfig::feedback)
        .def("validate", &SimulationConfig::validate);

    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("t", &TrajectorySample::t)
        .def_readonly("cartesian", &TrajectorySample::cartesian)
        .def_readonly("polar", &TrajectorySample::polar)
        .def_readonly("command", &TrajectorySample::command)
        .def_readonly("V", &TrajectorySample::V)
        .def_readonly("mode", &TrajectorySample::mode);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("samples", &Trajectory::samples)
        .def_readonly("stop_reason", &Trajectory::stop_reason);

    py::class_<FeedbackSource>(m, "FeedbackSource")
        .def(py::init<const FeedbackConfig&>(), py::arg("config"))
        .def("observe", &FeedbackSource::observe, py::arg("truth_cartesian"),
             py::arg("truth_polar"));

    py::class_<OutputConfig>(m, "OutputConfig")
        .def(py::init<>())
        .def_readwrite("directory", &OutputConfig::directory)
        .def_readwrite("csv", &OutputConfig::csv)
        .def_readwrite("svg", &OutputConfig::svg);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("name", &ScenarioConfig::name)
        .def_readwrite("geometry", &ScenarioConfig::geometry)
        .def_readwrite("controller", &ScenarioConfig::controller)
        .def_readwrite("initial", &ScenarioConfig::initial)
        .def_readwrite("simulation", &ScenarioConfig::simulation)
        .def_readwrite("output", &ScenarioConfig::output)
        .def_readonly("warnings", &ScenarioConfig::warnings);

    m.def("wrap_angle", &wrap_angle, py::arg("angle"),
          "Normalize an angle to the interval (-pi, pi].");
    m.def("articulation_factor", &articulation_factor, py::arg("phi"), py::arg("geometry"));
    m.def("polar_from_cartesian", &polar_from_cartesian, py::arg("state"));
    m.def("cartesian_from_polar", &cartesian_from_polar, py::arg("state"));
    m.def("cartesian_derivative", &cartesian_derivative, py::arg("state"), py::arg("command"),
          py::arg("geometry"));
    m.def("polar_derivative", &polar_derivative, py::arg("state"), py::arg("command"),
          py::arg("geometry"));

    m.def("lyapunov_value", &lyapunov_value, py::arg("state"), py::arg("gains"));
    m.def("control_law", &control_law, py::arg("state"), py::arg("gains"), py::arg("geometry"));
    m.def("closed_loop_vdot", &closed_loop_vdot, py::arg("state"), py::arg("gains"),
          py::arg("geometry"));
    m.def("detect_deadlock", &detect_deadlock, py::arg("state"), py::arg("config"));
    m.def("control_with_deadlock_handling", &control_with_deadlock_handling, py::arg("state"),
          py::arg("config"), py::arg("geometry"));

    m.def("bearings_from_pose", &bearings_from_pose, py::arg("pose"), py::arg("beacons"));
    m.def("solve_zeta1", &solve_zeta1, py::arg("measurement"), py::arg("beacons"));
    m.def("solve_range", &solve_range, py::arg("measurement"), py::arg("zeta1"),
          py::arg("beacons"));
    m.def("pose_from_bearings", &pose_from_bearings, py::arg("measurement"), py::arg("beacons"));
    m.def("polar_config_from_pose", &polar_config_from_pose, py::arg("solution"));
    m.def(
        "add_bearing_noise",
        [](const BearingMeasurement& meas, double sigma, std::uint64_t seed) {
            return add_bearing_noise(meas, sigma, seed);
        },
        py::arg("measurement"), py::arg("sigma"), py::arg("seed"));

    m.def("rk4_step",
          py::overload_cast<const CartesianState&, const ControlCommand&, const RobotGeometry&,
                            double>(&rk4_step),
          py::arg("state"), py::arg("command"), py::arg("geometry"), py::arg("dt"));
    m.def("rk4_step",
          py::overload_cast<const PolarState&, const ControlCommand&, const RobotGeometry&,
                            double>(&rk4_step),
          py::arg("state"), py::arg("command"), py::arg("geometry"), py::arg("dt"));
    m.def("euler_step",
          py::overload_cast<const CartesianState&, const ControlCommand&, const RobotGeometry&,
                            double>(&euler_step),
          py::arg("state"), py::arg("command"), py::arg("geometry"), py::arg("dt"));
    m.def("euler_step",
          py::overload_cast<const PolarState&, const ControlCommand&, const RobotGeometry&,
                            double>(&euler_step),
          py::arg("state"), py::arg("command"), py::arg("geometry"), py::arg("dt"));

    m.def("step_closed_loop", &step_closed_loop, py::arg("sample"), py::arg("feedback"),
          py::arg("config"), py::arg("controller"), py::arg("geometry"));
    m.def("run_scenario",
          py::overload_cast<const PolarState&, const SimulationConfig&, const ControllerConfig&,
                            const RobotGeometry&>(&run_scenario),
          py::arg("initial"), py::arg("config"), py::arg("controller"), py::arg("geometry"),
          py::call_guard<py::gil_scoped_release>());
    m.def("run_scenario", py::overload_cast<const ScenarioConfig&>(&run_scenario),
          py::arg("scenario"), py::call_guard<py::gil_scoped_release>());
    m.def("run_batch", &run_batch, py::arg("initials"), py::arg("config"), py::arg("controller"),
          py::arg("geometry"), py::arg("parallelism") = 1,
          py::call_guard<py::gil_scoped_release>());

    m.def("default_beacon_array", &default_beacon_array);
    m.def("parse_scenario_file", &parse_scenario_file, py::arg("path"));
    m.def("parse_scenario_string", &parse_scenario_string, py::arg("text"), py::arg("label"));
    m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));

    m.def("write_trajectory_csv", &write_trajectory_csv, py::arg("trajectory"), py::arg("path"));
    m.def("read_trajectory_csv", &read_trajectory_csv, py::arg("path"));
    m.def("render_trajectory_svg", &render_trajectory_svg, py::arg("trajectory"), py::arg("path"));
    m.def("stop_reason_name", &stop_reason_name, py::arg("reason"));
    m.def("control_mode_name", &control_mode_name, py::arg("mode"));
}
