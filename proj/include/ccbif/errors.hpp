#pragma once

#include <stdexcept>
#include <string>

namespace ccbif {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A pairwise distance fell below the collision floor.
class CollisionError : public Error {
public:
    CollisionError(int body_a, int body_b, double distance)
        : Error("bodies " + std::to_string(body_a) + " and " + std::to_string(body_b) +
                " are closer than the collision floor (distance " + std::to_string(distance) + ")"),
          body_a(body_a), body_b(body_b), distance(distance) {}
    int body_a;
    int body_b;
    double distance;
};

/// Moment of inertia too small to define lambda = U / 2I.
class DegenerateInertia : public Error {
public:
    using Error::Error;
};

/// Orbit tangent requested at the zero configuration.
class ZeroConfiguration : public Error {
public:
    using Error::Error;
};

/// Matrix handed to the symmetric eigensolver is not symmetric.
class NotSymmetric : public Error {
public:
    using Error::Error;
};

/// Operation requires a critical point of the augmented potential.
class NotCritical : public Error {
public:
    NotCritical(double residual, double tolerance)
        : Error("gradient residual " + std::to_string(residual) +
                " exceeds tolerance " + std::to_string(tolerance)),
          residual(residual), tolerance(tolerance) {}
    double residual;
    double tolerance;
};

/// Degree requested at an orbit whose Hessian kernel is larger than the orbit tangent.
class DegenerateOrbit : public Error {
public:
    using Error::Error;
};

/// Family parameter outside the validity range.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Ring-wise mass solve failed (singular system or nonpositive mass).
class MassSolveFailed : public Error {
public:
    using Error::Error;
};

/// Ring radii are not constant within tolerance.
class AsymmetricShape : public Error {
public:
    using Error::Error;
};

/// Mass parameters violate positivity.
class InvalidMasses : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A supplied configuration is not a central configuration.
class NotCentral : public Error {
public:
    NotCentral(int row, double residual)
        : Error("row " + std::to_string(row) + " is not a central configuration (residual " +
                std::to_string(residual) + ")"),
          row(row), residual(residual) {}
    int row;
    double residual;
};

} // namespace ccbif
