#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "artipark/controller.hpp"

using namespace artipark;

namespace {
constexpr double kPi = std::numbers::pi;
const RobotGeometry kGeom{0.1, 0.1};
const Gains kGains{1.0, 1.0, 1.0, 0.01};
}  // namespace

TEST_CASE("gains validate") {
    CHECK_THROWS_AS(Gains(0.0, 1, 1, 0.01), InvalidInputError);
    CHECK_THROWS_AS(Gains(1, -1, 1, 0.01), InvalidInputError);
    CHECK_THROWS_AS(Gains(1, 1, 1, -0.01), InvalidInputError);
    Gains relaxed(1, 1, 1, 0.0);  // zero lambda4 is allowed
    CHECK(relaxed.lambda4 == 0.0);
    Gains defaults;
    CHECK(defaults.lambda1 == 1.0);
    CHECK(defaults.lambda4 == 0.01);
}

TEST_CASE("controller config validates") {
    ControllerConfig cfg(kGains);
    CHECK_NOTHROW(cfg.validate());
    cfg.deadlock_eps = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInputError);
    cfg.deadlock_eps = 1e-3;
    cfg.kick_omega = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInputError);
    cfg.kick_omega = 0.1;
    cfg.kick_phi_target = 1e-4;  // must exceed deadlock_eps
    CHECK_THROWS_AS(cfg.validate(), InvalidInputError);
    cfg.kick_phi_target = 0.05;
    cfg.v_max = -1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInputError);
}

TEST_CASE("lyapunov value worked cases") {
    CHECK(lyapunov_value(PolarState(5.0, -kPi / 4, -kPi / 4, 0.0), kGains) ==
          doctest::Approx(13.116850275068085).epsilon(1e-12));
    CHECK(lyapunov_value(PolarState(1.0, 0, 0, 0), kGains) == 0.5);
    CHECK(lyapunov_value(PolarState(0.0, 0, 0, 0), kGains) == 0.0);
    // quadratic form: doubling every coordinate quadruples V
    PolarState p(2.0, 0.4, -0.3, 0.2);
    PolarState half(1.0, 0.2, -0.15, 0.1);
    CHECK(lyapunov_value(p, kGains) ==
          doctest::Approx(4.0 * lyapunov_value(half, kGains)).epsilon(1e-12));
}

TEST_CASE("control law worked cases") {
    ControlCommand u1 = control_law(PolarState(1.0, 0, 0, 0), kGains, kGeom);
    CHECK(u1.v == 1.0);
    CHECK(u1.omega == 0.0);

    ControlCommand u2 = control_law(PolarState(5.0, -kPi / 4, -kPi / 4, 0.0), kGains, kGeom);
    CHECK(u2.v == doctest::Approx(3.3133897590248195).epsilon(1e-12));
    CHECK(u2.omega == doctest::Approx(-0.39269908169872414).epsilon(1e-12));

    ControlCommand u3 = control_law(PolarState(5.0, -kPi / 4, kPi, 0.0), kGains, kGeom);
    CHECK(u3.v == -5.0);  // reversing: the target is dead astern
    CHECK(u3.omega == doctest::Approx(0.5 * kPi).epsilon(1e-12));

    CHECK_THROWS_AS(control_law(PolarState(0.0, 0, 0, 0), kGains, kGeom), AtGoalError);
    CHECK_THROWS_AS(control_law(PolarState(1.0, 0, 0, kPi), kGains, kGeom),
                    ArticulationSingularityError);
}

TEST_CASE("control law is linear in the gains") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> edist(0.2, 10.0);
    std::uniform_real_distribution<double> adist(-3.0, 3.0);
    std::uniform_real_distribution<double> gdist(0.1, 4.0);
    for (int i = 0; i < 200; ++i) {
        PolarState p(edist(rng), adist(rng), adist(rng), 0.4 * adist(rng));
        Gains g(gdist(rng), gdist(rng), gdist(rng), gdist(rng));
        double c = gdist(rng);
        Gains scaled(c * g.lambda1, c * g.lambda2, c * g.lambda3, c * g.lambda4);
        ControlCommand u = control_law(p, g, kGeom);
        ControlCommand su = control_law(p, scaled, kGeom);
        CHECK(su.v == doctest::Approx(c * u.v).epsilon(1e-12));
        CHECK(su.omega == doctest::Approx(c * u.omega).epsilon(1e-12));
    }
}

TEST_CASE("closed loop vdot equals the negative command norm") {
    CHECK(closed_loop_vdot(PolarState(1.0, 0, 0, 0), kGains, kGeom) == -1.0);
    CHECK(closed_loop_vdot(PolarState(5.0, -kPi / 4, kPi, 0.0), kGains, kGeom) ==
          doctest::Approx(-27.46740110027234).epsilon(1e-12));
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> edist(0.2, 10.0);
    std::uniform_real_distribution<double> adist(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        PolarState p(edist(rng), adist(rng), adist(rng), 0.4 * adist(rng));
        ControlCommand u = control_law(p, kGains, kGeom);
        CHECK(closed_loop_vdot(p, kGains, kGeom) ==
              doctest::Approx(-(u.v * u.v + u.omega * u.omega)).epsilon(1e-14));
        CHECK(closed_loop_vdot(p, kGains, kGeom) <= 0.0);
    }
}

TEST_CASE("deadlock detection") {
    ControllerConfig cfg(kGains);
    CHECK(detect_deadlock(PolarState(5.0, 0.5 * kPi, 0.0, 0.0), cfg) == true);
    CHECK(detect_deadlock(PolarState(5.0, 0.0, 0.0, 0.0), cfg) == false);
    CHECK(detect_deadlock(PolarState(5.0, 0.5 * kPi, 0.01, 0.0), cfg) == false);
    CHECK(detect_deadlock(PolarState(5.0, 0.5 * kPi, 0.0, 0.01), cfg) == false);
    CHECK(detect_deadlock(PolarState(5.0, -0.1, 0.0005, -0.0005), cfg) == true);
}

TEST_CASE("deadlock handling issues and sustains the kick") {
    ControllerConfig cfg(kGains);

    ControlDecision start = control_with_deadlock_handling(PolarState(5, 0.5 * kPi, 0, 0),
                                                           cfg, kGeom);
    CHECK(start.mode == ControlMode::Kick);
    CHECK(start.command.v == 0.0);
    CHECK(start.command.omega == 0.1);

    // negative theta1 bends the other way
    ControlDecision neg = control_with_deadlock_handling(PolarState(5, -0.5 * kPi, 0, 0),
                                                         cfg, kGeom);
    CHECK(neg.command.omega == -0.1);

    // mid-kick state (phi below the target, theta2 dragged along) keeps kicking
    ControlDecision mid = control_with_deadlock_handling(PolarState(5, 0.5 * kPi, -0.015, 0.03),
                                                         cfg, kGeom);
    CHECK(mid.mode == ControlMode::Kick);
    CHECK(mid.command.omega == 0.1);

    // phi at the target: normal control resumes
    ControlDecision done = control_with_deadlock_handling(PolarState(5, 0.5 * kPi, -0.025, 0.05),
                                                          cfg, kGeom);
    CHECK(done.mode == ControlMode::Normal);

    // theta2 beyond what the kick's own drag explains: steering is already
    // effective, so the plain law runs even though both angles are small
    ControlDecision steer = control_with_deadlock_handling(PolarState(5, 0.5 * kPi, 0.04, 0.01),
                                                           cfg, kGeom);
    CHECK(steer.mode == ControlMode::Normal);

    // disabled kick falls through to the plain law
    ControllerConfig off(kGains);
    off.kick_enabled = false;
    ControlDecision plain = control_with_deadlock_handling(PolarState(5, 0.5 * kPi, 0, 0),
                                                           off, kGeom);
    CHECK(plain.mode == ControlMode::Normal);
    CHECK(plain.command.v == 5.0);
    CHECK(plain.command.omega == 0.0);

    // ordinary state: identical to the raw law
    PolarState p(5.0, -kPi / 4, -kPi / 4, 0.0);
    ControlDecision normal = control_with_deadlock_handling(p, cfg, kGeom);
    ControlCommand raw = control_law(p, kGains, kGeom);
    CHECK(normal.mode == ControlMode::Normal);
    CHECK(normal.command.v == raw.v);
    CHECK(normal.command.omega == raw.omega);
}

TEST_CASE("saturation clamps the final command") {
    ControllerConfig cfg(kGains);
    cfg.v_max = 1.0;
    cfg.omega_max = 0.25;
    PolarState p(5.0, -kPi / 4, -kPi / 4, 0.0);  // raw law: v ~ 3.31, omega ~ -0.39
    ControlDecision d = control_with_deadlock_handling(p, cfg, kGeom);
    CHECK(d.command.v == 1.0);
    CHECK(d.command.omega == -0.25);

    cfg.omega_max = 0.05;  // clamps the kick as well
    ControlDecision kick = control_with_deadlock_handling(PolarState(5, 0.5 * kPi, 0, 0),
                                                          cfg, kGeom);
    CHECK(kick.mode == ControlMode::Kick);
    CHECK(kick.command.omega == 0.05);
}
