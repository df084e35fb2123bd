"""Smoke tests for the Python bindings: one touch per API family."""

import math

import pytest

import artipark as ap


def test_module_metadata():
    assert ap.__version__ == "0.1.0"
    assert 0.0 < ap.GOAL_EPS < 1e-6


def test_wrap_and_frame_conversions():
    assert ap.wrap_angle(3 * math.pi) == pytest.approx(math.pi, abs=1e-12)
    assert ap.wrap_angle(-math.pi) == pytest.approx(math.pi, abs=1e-12)

    polar = ap.PolarState(5.0, -math.pi / 4, -math.pi / 4, 0.0)
    cart = ap.cartesian_from_polar(polar)
    assert cart.x == pytest.approx(-5.0 * math.cos(math.pi / 4), rel=1e-12)
    assert cart.y == pytest.approx(5.0 * math.sin(math.pi / 4), rel=1e-12)
    back = ap.polar_from_cartesian(cart)
    assert back.e == pytest.approx(5.0, rel=1e-12)
    assert back.theta1 == pytest.approx(-math.pi / 4, rel=1e-12)
    assert back.theta2 == pytest.approx(-math.pi / 4, rel=1e-12)


def test_control_law_worked_values():
    geom = ap.RobotGeometry(0.1, 0.1)
    gains = ap.Gains(1.0, 1.0, 1.0, 0.01)
    state = ap.PolarState(5.0, -math.pi / 4, -math.pi / 4, 0.0)

    assert ap.lyapunov_value(state, gains) == pytest.approx(13.116850275068085, rel=1e-12)
    u = ap.control_law(state, gains, geom)
    assert u.v == pytest.approx(3.3133897590248195, rel=1e-12)
    assert u.omega == pytest.approx(-0.39269908169872414, rel=1e-12)

    backward = ap.control_law(ap.PolarState(5.0, -math.pi / 4, math.pi, 0.0), gains, geom)
    assert backward.v == -5.0

    vdot = ap.closed_loop_vdot(state, gains, geom)
    assert vdot == pytest.approx(-(u.v**2 + u.omega**2), rel=1e-12)


def test_closed_loop_run_docks():
    sim = ap.SimulationConfig()
    ctrl = ap.ControllerConfig(ap.Gains(1.0, 1.0, 1.0, 0.01))
    geom = ap.RobotGeometry(0.1, 0.1)
    initial = ap.PolarState(5.0, -math.pi / 4, -math.pi / 4, 0.0)

    traj = ap.run_scenario(initial, sim, ctrl, geom)
    assert traj.stop_reason == ap.StopReason.AT_GOAL
    assert len(traj.samples) > 10

    last = traj.samples[-1]
    assert last.polar.e < sim.e_tol
    assert abs(last.polar.theta1) < sim.angle_tol
    assert last.command.v == 0.0  # terminal sample carries no command
    assert last.mode == ap.ControlMode.NORMAL

    v0 = traj.samples[0].V
    assert all(
        b.V - a.V <= 1e-6 * v0
        for a, b in zip(traj.samples, traj.samples[1:])
        if a.mode == ap.ControlMode.NORMAL
    )


def test_batch_matches_serial():
    sim = ap.SimulationConfig()
    sim.t_max = 2.0
    ctrl = ap.ControllerConfig()
    geom = ap.RobotGeometry(0.1, 0.1)
    initials = [
        ap.PolarState(5.0, -math.pi / 4, -math.pi / 4, 0.0),
        ap.PolarState(3.0, 1.2, -0.4, 0.1),
    ]

    batch = ap.run_batch(initials, sim, ctrl, geom, 2)
    assert len(batch) == 2
    for initial, parallel in zip(initials, batch):
        serial = ap.run_scenario(initial, sim, ctrl, geom)
        assert parallel.stop_reason == serial.stop_reason
        assert len(parallel.samples) == len(serial.samples)
        assert all(
            p.polar.e == s.polar.e and p.command.v == s.command.v
            for p, s in zip(parallel.samples, serial.samples)
        )


def test_single_steps():
    geom = ap.RobotGeometry(0.1, 0.1)
    s = ap.CartesianState(-1.0, 0.0, 0.0, 0.0)
    u = ap.ControlCommand(1.0, 0.0)
    assert ap.euler_step(s, u, geom, 0.01).x == pytest.approx(-0.99, rel=1e-15)
    assert ap.rk4_step(s, u, geom, 0.01).x == pytest.approx(-0.99, rel=1e-15)


def test_triangulation_round_trip():
    beacons = ap.BeaconArray(ap.Point2(0.0, 0.4), ap.Point2(0.0, 0.2), ap.Point2(0.0, 0.0))
    truth = ap.Pose(-1.0, 0.2, 0.0)
    m = ap.bearings_from_pose(truth, beacons)
    assert m.alpha == pytest.approx(math.atan(0.2), rel=1e-12)
    assert m.beta == pytest.approx(math.atan(0.2), rel=1e-12)

    sol = ap.pose_from_bearings(m, beacons)
    assert sol.zeta1 == pytest.approx(math.pi / 2, rel=1e-12)
    assert sol.d == pytest.approx(1.0, rel=1e-12)
    assert sol.pose.x == pytest.approx(-1.0, abs=1e-9)
    assert sol.pose.y == pytest.approx(0.2, abs=1e-9)

    config = ap.polar_config_from_pose(sol)
    assert config.e == pytest.approx(math.hypot(1.0, 0.2), rel=1e-12)

    noisy = ap.add_bearing_noise(m, 1e-3, 42)
    again = ap.add_bearing_noise(m, 1e-3, 42)
    assert noisy.alpha == again.alpha and noisy.alpha != m.alpha


def test_typed_exceptions():
    geom = ap.RobotGeometry(0.1, 0.1)
    gains = ap.Gains()

    with pytest.raises(ap.AtGoalError):
        ap.control_law(ap.PolarState(0.0, 0.0, 0.0, 0.0), gains, geom)
    with pytest.raises(ap.ArticulationSingularityError):
        ap.articulation_factor(math.pi, geom)
    with pytest.raises(ap.TriangulationError):
        ap.bearings_from_pose(
            ap.Pose(0.0, 0.2, 0.0),
            ap.BeaconArray(ap.Point2(0.0, 0.4), ap.Point2(0.0, 0.2), ap.Point2(0.0, 0.0)),
        )
    with pytest.raises(ap.InvalidInputError):
        ap.RobotGeometry(-1.0, 0.1)

    assert issubclass(ap.AtGoalError, ap.Error)
    assert issubclass(ap.Error, RuntimeError)


def test_scenario_parsing_and_serialization():
    cfg = ap.parse_scenario_string(
        '{"initial": {"e": 1.0, "theta1": 0.5, "theta2": 0.0, "phi": 0.0}}', "mini.json"
    )
    assert cfg.name == "mini"
    assert cfg.initial.e == 1.0
    assert cfg.simulation.dt == 0.01

    text = ap.serialize_scenario(cfg)
    back = ap.parse_scenario_string(text, "mini.json")
    assert back.initial.theta1 == cfg.initial.theta1

    with pytest.raises(ap.InvalidInputError):
        ap.parse_scenario_string('{"initial": {"e": 1.0}}', "broken.json")

    traj = ap.run_scenario(cfg)
    assert traj.stop_reason in (ap.StopReason.AT_GOAL, ap.StopReason.TIME_BUDGET)
