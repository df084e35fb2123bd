#include "artipark/positioning.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace artipark {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this the 0/0 form of the bearing equations is treated as the
// circumcircle degeneracy rather than numerical noise.
constexpr double kIndeterminateEps = 1e-12;

// A candidate pose must reproduce the measured bearings this closely to be
// accepted; the mirror branch misses by a geometric amount, not an epsilon.
constexpr double kRecheckTol = 1e-6;

double distance(const Point2& p, const Point2& q) { return std::hypot(q.x - p.x, q.y - p.y); }

double direction(const Point2& from, const Point2& to) {
    return std::atan2(to.y - from.y, to.x - from.x);
}

void require_measurement(const BearingMeasurement& m) {
    for (double value : {m.alpha, m.beta, m.gamma}) {
        if (!std::isfinite(value)) throw InvalidInputError("bearing measurement must be finite");
    }
    if (m.alpha <= 0.0 || m.alpha >= kPi || m.beta <= 0.0 || m.beta >= kPi) {
        std::ostringstream os;
        os << "subtended angles must lie in (0, pi), got alpha = " << m.alpha
           << ", beta = " << m.beta;
        throw TriangulationError(TriangulationError::Kind::DegenerateGeometry, os.str());
    }
}

}  // namespace

BeaconArray::BeaconArray(Point2 a, Point2 b, Point2 c) : a_pos_(a), b_pos_(b), c_pos_(c) {
    for (const Point2* p : {&a_pos_, &b_pos_, &c_pos_}) {
        if (!std::isfinite(p->x) || !std::isfinite(p->y)) {
            throw InvalidInputError("beacon coordinates must be finite");
        }
    }
    a_ = distance(b_pos_, a_pos_);
    b_ = distance(b_pos_, c_pos_);
    if (a_ < 1e-9 || b_ < 1e-9 || distance(a_pos_, c_pos_) < 1e-9) {
        throw InvalidInputError("beacons must be pairwise distinct");
    }
    phi_b_ = direction(b_pos_, c_pos_);
    double interior_at_b = std::abs(wrap_angle(direction(b_pos_, a_pos_) - phi_b_));
    zeta3_ = kPi - interior_at_b;
}

BearingMeasurement bearings_from_pose(const Pose& pose, const BeaconArray& beacons) {
    if (!std::isfinite(pose.x) || !std::isfinite(pose.y) || !std::isfinite(pose.theta)) {
        throw InvalidInputError("pose must be finite");
    }
    Point2 o{pose.x, pose.y};
    const Point2* positions[] = {&beacons.A(), &beacons.B(), &beacons.C()};
    const char* names[] = {"A", "B", "C"};
    for (int i = 0; i < 3; ++i) {
        if (distance(o, *positions[i]) < 1e-12) {
            throw TriangulationError(
                TriangulationError::Kind::DegenerateGeometry,
                std::string("robot coincides with beacon ") + names[i]);
        }
    }
    double u_a = direction(o, beacons.A());
    double u_b = direction(o, beacons.B());
    double u_c = direction(o, beacons.C());
    BearingMeasurement m;
    m.alpha = std::abs(wrap_angle(u_a - u_b));
    m.beta = std::abs(wrap_angle(u_c - u_b));
    m.gamma = wrap_angle(u_b - pose.theta);
    return m;
}

double solve_zeta1(const BearingMeasurement& m, const BeaconArray& beacons) {
    require_measurement(m);
    double sa = std::sin(m.alpha);
    double sb = std::sin(m.beta);
    double num = beacons.b() * sa * sb - beacons.a() * sb * std::sin(beacons.zeta3() - m.alpha);
    double den =
        beacons.a() * sb * std::cos(beacons.zeta3() - m.alpha) - beacons.b() * sa * std::cos(m.beta);
    if (std::abs(num) < kIndeterminateEps && std::abs(den) < kIndeterminateEps) {
        throw TriangulationError(
            TriangulationError::Kind::IndeterminateConfiguration,
            "bearings are indeterminate: the robot lies on the beacons' circumcircle");
    }
    return std::atan2(num, den);
}

double solve_range(const BearingMeasurement& m, double zeta1, const BeaconArray& beacons) {
    require_measurement(m);
    if (!std::isfinite(zeta1)) throw InvalidInputError("zeta1 must be finite");
    double sb = std::sin(m.beta);
    if (std::abs(sb) < kIndeterminateEps) {
        throw TriangulationError(TriangulationError::Kind::DegenerateGeometry,
                                 "sin(beta) vanishes; range is undefined");
    }
    double d = beacons.b() * std::sin(m.beta + zeta1) / sb;
    if (!(d > 0.0)) {
        std::ostringstream os;
        os << "bearings imply a non-positive range d = " << d;
        throw TriangulationError(TriangulationError::Kind::InconsistentMeasurement, os.str());
    }
    return d;
}

TriangulationSolution pose_from_bearings(const BearingMeasurement& m, const BeaconArray& beacons) {
    double zeta1 = solve_zeta1(m, beacons);
    double d = solve_range(m, zeta1, beacons);

    // The subtended angles fix the triangle but not the side of the line
    // through B perpendicular to the sight geometry; place the robot for
    // both supplementary branches and keep whichever reproduces the
    // measurement.
    auto place = [&](double zeta) -> Pose {
        double ang = beacons.phi_b() + zeta;
        Pose p;
        p.x = beacons.B().x - d * std::cos(ang);
        p.y = beacons.B().y - d * std::sin(ang);
        p.theta = wrap_angle(ang - m.gamma);
        return p;
    };
    auto residual = [&](const Pose& candidate) -> double {
        try {
            BearingMeasurement r = bearings_from_pose(candidate, beacons);
            double res = std::abs(r.alpha - m.alpha);
            res = std::max(res, std::abs(r.beta - m.beta));
            res = std::max(res, std::abs(wrap_angle(r.gamma - m.gamma)));
            return res;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    Pose first = place(zeta1);
    Pose second = place(wrap_angle(kPi - zeta1));
    double res_first = residual(first);
    double res_second = residual(second);
    const Pose& best = (res_second < res_first) ? second : first;
    double res_best = std::min(res_first, res_second);
    if (!(res_best <= kRecheckTol)) {
        std::ostringstream os;
        os << "no pose reproduces the measured bearings (best residual " << res_best << " rad)";
        throw TriangulationError(TriangulationError::Kind::InconsistentMeasurement, os.str());
    }
    return {zeta1, d, best};
}

PolarConfig polar_config_from_pose(const TriangulationSolution& solution) {
    double e = std::hypot(solution.pose.x, solution.pose.y);
    if (e < kGoalEps) {
        std::ostringstream os;
        os << "recovered pose is at the goal (e = " << e << "); theta1/theta2 are undefined";
        throw AtGoalError(os.str());
    }
    double theta1 = std::atan2(-solution.pose.y, -solution.pose.x);
    double theta2 = wrap_angle(theta1 - solution.pose.theta);
    return {e, theta1, theta2};
}

BearingMeasurement add_bearing_noise(const BearingMeasurement& m, double sigma,
                                     std::mt19937_64& rng) {
    if (!std::isfinite(sigma) || sigma < 0.0) {
        throw InvalidInputError("noise sigma must be finite and non-negative");
    }
    if (sigma == 0.0) return m;
    std::normal_distribution<double> noise(0.0, sigma);
    BearingMeasurement out = m;
    out.alpha = m.alpha + noise(rng);
    out.beta = m.beta + noise(rng);
    out.gamma = wrap_angle(m.gamma + noise(rng));
    return out;
}

BearingMeasurement add_bearing_noise(const BearingMeasurement& m, double sigma,
                                     std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return add_bearing_noise(m, sigma, rng);
}

}  // namespace artipark
