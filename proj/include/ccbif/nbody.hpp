#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ccbif/errors.hpp"
#include "ccbif/types.hpp"

namespace ccbif {

namespace detail {

/// Throws CollisionError if bodies i, j are closer than the floor.
inline void check_separation(int i, int j, double distance, double floor) {
    if (!(distance > floor)) throw CollisionError(i, j, distance);
}

} // namespace detail

/// Newtonian pair potential: sum over i<j of m_i m_j / |q_i - q_j|.
/// The gravitational constant is taken as one.
inline double newtonian_potential(const Configuration& q, const MassVector& m,
                                  double collision_floor = kCollisionFloor) {
    const int n = q.n_bodies();
    double u = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double r = (q.body(i) - q.body(j)).norm();
            detail::check_separation(i, j, r, collision_floor);
            u += m[i] * m[j] / r;
        }
    }
    return u;
}

/// Moment of inertia: half the mass-weighted squared distance to the origin.
/// Total on all configurations, including collisions.
inline double moment_of_inertia(const Configuration& q, const MassVector& m) {
    const int n = q.n_bodies();
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += m[i] * q.body(i).squaredNorm();
    return 0.5 * s;
}

/// The central-configuration multiplier lambda = U / (2 I).
inline double lambda_of(const Configuration& q, const MassVector& m,
                        double inertia_floor = 1e-12) {
    const double inertia = moment_of_inertia(q, m);
    if (!(inertia > inertia_floor))
        throw DegenerateInertia("moment of inertia " + std::to_string(inertia) +
                                " below floor " + std::to_string(inertia_floor));
    return newtonian_potential(q, m) / (2.0 * inertia);
}

/// Augmented potential U + lambda I with lambda frozen in the context.
/// SO(2)-invariant; its critical points are central configurations whose
/// multiplier equals the frozen lambda.
inline double augmented_potential(const Configuration& q, const AugmentedPotentialContext& ctx,
                                  double collision_floor = kCollisionFloor) {
    return newtonian_potential(q, ctx.masses, collision_floor) +
           ctx.lambda * moment_of_inertia(q, ctx.masses);
}

/// Gradient of the augmented potential as a flat 2N vector, from the
/// closed-form pair derivatives. Zero (up to roundoff) exactly at central
/// configurations with matching lambda.
inline Eigen::VectorXd augmented_gradient(const Configuration& q,
                                          const AugmentedPotentialContext& ctx,
                                          double collision_floor = kCollisionFloor) {
    const int n = q.n_bodies();
    const MassVector& m = ctx.masses;
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Eigen::Vector2d d = q.body(i) - q.body(j);
            const double r = d.norm();
            detail::check_separation(i, j, r, collision_floor);
            const Eigen::Vector2d f = m[i] * m[j] * d / (r * r * r);
            g.segment<2>(2 * i) -= f;
            g.segment<2>(2 * j) += f;
        }
    }
    for (int i = 0; i < n; ++i) g.segment<2>(2 * i) += ctx.lambda * m[i] * q.body(i);
    return g;
}

/// Hessian of the augmented potential, assembled from the closed-form 2x2
/// pair blocks of 1/r plus the lambda * m_i * Id blocks of the inertia term.
/// Symmetrized as (H + H^T)/2 after assembly.
inline Eigen::MatrixXd augmented_hessian(const Configuration& q,
                                         const AugmentedPotentialContext& ctx,
                                         double collision_floor = kCollisionFloor) {
    const int n = q.n_bodies();
    const MassVector& m = ctx.masses;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Eigen::Vector2d d = q.body(i) - q.body(j);
            const double r = d.norm();
            detail::check_separation(i, j, r, collision_floor);
            const Eigen::Vector2d u = d / r;
            // 2D Hessian of 1/r: (3 u u^T - Id) / r^3
            const Eigen::Matrix2d block =
                m[i] * m[j] * (3.0 * u * u.transpose() - Eigen::Matrix2d::Identity()) / (r * r * r);
            h.block<2, 2>(2 * i, 2 * i) += block;
            h.block<2, 2>(2 * j, 2 * j) += block;
            h.block<2, 2>(2 * i, 2 * j) -= block;
            h.block<2, 2>(2 * j, 2 * i) -= block;
        }
    }
    for (int i = 0; i < n; ++i)
        h.block<2, 2>(2 * i, 2 * i) += ctx.lambda * m[i] * Eigen::Matrix2d::Identity();
    return 0.5 * (h + h.transpose());
}

/// Unit tangent to the SO(2)-orbit through q: (J q_1, ..., J q_N) normalized,
/// with J the quarter-turn generator. Lies in the Hessian kernel at every
/// critical point.
inline Eigen::VectorXd orbit_tangent(const Configuration& q, double zero_floor = 1e-12) {
    const int n = q.n_bodies();
    Eigen::VectorXd t(2 * n);
    for (int i = 0; i < n; ++i) {
        const Eigen::Vector2d p = q.body(i);
        t[2 * i] = -p[1];
        t[2 * i + 1] = p[0];
    }
    const double norm = t.norm();
    if (!(norm > zero_floor))
        throw ZeroConfiguration("orbit tangent undefined at the zero configuration");
    return t / norm;
}

/// True if no nonidentity rotation fixes q as a vector in R^{2N}. Candidate
/// angles 2 pi k / L for L up to 2N are sampled; for planar configurations
/// away from the origin this always holds.
inline bool has_trivial_isotropy(const Configuration& q, double tol = 1e-9) {
    const int n = q.n_bodies();
    const double scale = std::max(1.0, q.flat().cwiseAbs().maxCoeff());
    for (int l = 2; l <= 2 * n; ++l) {
        for (int k = 1; k < l; ++k) {
            const Rotation g(2.0 * M_PI * k / l);
            if ((g.apply(q.flat()) - q.flat()).cwiseAbs().maxCoeff() <= tol * scale) return false;
        }
    }
    return true;
}

} // namespace ccbif
