#pragma once

#include <stdexcept>
#include <string>

namespace artipark {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite or otherwise malformed input values / configuration.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

// State numerically indistinguishable from the goal: theta1 and theta2 are
// undefined there and the polar kinematics are singular.
class AtGoalError : public Error {
public:
    using Error::Error;
};

// |l2 + l1*cos(phi)| fell below the guard: the vehicle is fully folded and
// the heading / theta2 rates are undefined.
class ArticulationSingularityError : public Error {
public:
    using Error::Error;
};

// Bearing-only resection failure.
class TriangulationError : public Error {
public:
    enum class Kind {
        DegenerateGeometry,          // sight line or triangle collapsed
        IndeterminateConfiguration,  // robot on the beacons' circumcircle
        InconsistentMeasurement,     // bearings admit no positive range
    };

    TriangulationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// File read/write failure, message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace artipark
