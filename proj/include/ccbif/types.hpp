#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "ccbif/errors.hpp"

namespace ccbif {

/// Pairwise distances below this floor raise CollisionError unless overridden.
inline constexpr double kCollisionFloor = 1e-12;

/// Default relative threshold separating kernel eigenvalues from the rest.
inline constexpr double kTauZero = 1e-8;

/// Default residual tolerance (relative to the Hessian scale) for accepting
/// a configuration as central.
inline constexpr double kResidualTol = 1e-9;

/// Positions of N planar bodies stored as a flat vector (x1,y1,...,xN,yN).
///
/// Membership in the collision-free domain is not enforced at construction;
/// operations that need it check min_pair_distance themselves.
class Configuration {
public:
    explicit Configuration(Eigen::VectorXd flat) : flat_(std::move(flat)) {
        if (flat_.size() == 0 || flat_.size() % 2 != 0)
            throw Error("configuration vector must have positive even length, got " +
                        std::to_string(flat_.size()));
    }

    static Configuration from_points(const std::vector<Eigen::Vector2d>& points) {
        Eigen::VectorXd flat(2 * static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) flat.segment<2>(2 * i) = points[i];
        return Configuration(std::move(flat));
    }

    int n_bodies() const { return static_cast<int>(flat_.size() / 2); }
    const Eigen::VectorXd& flat() const { return flat_; }
    Eigen::Vector2d body(int i) const { return flat_.segment<2>(2 * i); }

    double min_pair_distance() const {
        const int n = n_bodies();
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                best = std::min(best, (body(i) - body(j)).norm());
        return best;
    }

    /// True when all pairwise distances exceed the given floor.
    bool in_domain(double floor = kCollisionFloor) const { return min_pair_distance() > floor; }

private:
    Eigen::VectorXd flat_;
};

/// Strictly positive body masses.
struct MassVector {
    explicit MassVector(Eigen::VectorXd masses) : values(std::move(masses)) {
        for (Eigen::Index i = 0; i < values.size(); ++i)
            if (!(values[i] > 0.0))
                throw InvalidMasses("mass " + std::to_string(i) + " is not positive: " +
                                    std::to_string(values[i]));
    }

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int i) const { return values[i]; }

    Eigen::VectorXd values;
};

/// Planar rotation by a fixed angle, with its block-diagonal lift to 2N dims.
class Rotation {
public:
    explicit Rotation(double angle) : angle_(angle) {}

    double angle() const { return angle_; }

    Eigen::Matrix2d matrix() const {
        const double c = std::cos(angle_), s = std::sin(angle_);
        Eigen::Matrix2d g;
        g << c, -s, s, c;
        return g;
    }

    /// Block-diagonal action on a flat 2N vector.
    Eigen::VectorXd apply(const Eigen::VectorXd& flat) const {
        const Eigen::Matrix2d g = matrix();
        Eigen::VectorXd out(flat.size());
        for (Eigen::Index i = 0; i + 1 < flat.size(); i += 2)
            out.segment<2>(i) = g * flat.segment<2>(i);
        return out;
    }

    Configuration apply(const Configuration& q) const { return Configuration(apply(q.flat())); }

    /// The 2N x 2N block-diagonal lift.
    Eigen::MatrixXd lift(int n_bodies) const {
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n_bodies, 2 * n_bodies);
        const Eigen::Matrix2d g = matrix();
        for (int i = 0; i < n_bodies; ++i) G.block<2, 2>(2 * i, 2 * i) = g;
        return G;
    }

private:
    double angle_;
};

/// Masses together with the lambda coefficient frozen at its family value.
struct AugmentedPotentialContext {
    AugmentedPotentialContext(MassVector masses, double lambda)
        : masses(std::move(masses)), lambda(lambda) {
        if (!(lambda > 0.0))
            throw Error("lambda must be positive, got " + std::to_string(lambda));
    }

    MassVector masses;
    double lambda;
};

} // namespace ccbif
