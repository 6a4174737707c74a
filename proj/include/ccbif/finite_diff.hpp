#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "ccbif/nbody.hpp"
#include "ccbif/types.hpp"

namespace ccbif {

/// Central-difference gradient of a scalar function of a flat vector.
/// Error O(h^2). Independent of any analytic derivative path: only values
/// of f are sampled.
template <typename F>
Eigen::VectorXd fd_gradient(F&& f, const Eigen::VectorXd& x, double h) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd probe = x;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        probe[k] = x[k] + h;
        const double fp = f(probe);
        probe[k] = x[k] - h;
        const double fm = f(probe);
        probe[k] = x[k];
        g[k] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// Raw central-difference Hessian: columns are central differences of the
/// central-difference gradient, so only values of f are ever sampled. The
/// result is asymmetric at the truncation-error level O(h^2).
template <typename F>
Eigen::MatrixXd fd_hessian_raw(F&& f, const Eigen::VectorXd& x, double h) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd probe = x;
    for (Eigen::Index l = 0; l < n; ++l) {
        probe[l] = x[l] + h;
        const Eigen::VectorXd gp = fd_gradient(f, probe, h);
        probe[l] = x[l] - h;
        const Eigen::VectorXd gm = fd_gradient(f, probe, h);
        probe[l] = x[l];
        hess.col(l) = (gp - gm) / (2.0 * h);
    }
    return hess;
}

/// Symmetrized central-difference Hessian, (H + H^T)/2 of the raw stencil.
/// Error O(h^2).
template <typename F>
Eigen::MatrixXd fd_hessian(F&& f, const Eigen::VectorXd& x, double h) {
    const Eigen::MatrixXd raw = fd_hessian_raw(f, x, h);
    return 0.5 * (raw + raw.transpose());
}

/// Step size for gradient checks: cbrt(eps) times the coordinate scale.
inline double fd_gradient_step(const Eigen::VectorXd& x) {
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    return std::cbrt(std::numeric_limits<double>::epsilon()) * scale;
}

/// Step size for Hessian checks: eps^(1/4) times the coordinate scale.
inline double fd_hessian_step(const Eigen::VectorXd& x) {
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    return std::pow(std::numeric_limits<double>::epsilon(), 0.25) * scale;
}

/// Finite-difference gradient of the augmented potential. Probe points that
/// leave the collision-free domain raise CollisionError.
inline Eigen::VectorXd fd_augmented_gradient(const Configuration& q,
                                             const AugmentedPotentialContext& ctx, double h) {
    auto value = [&](const Eigen::VectorXd& flat) {
        return augmented_potential(Configuration(flat), ctx);
    };
    return fd_gradient(value, q.flat(), h);
}

/// Finite-difference Hessian of the augmented potential (symmetrized stencil).
inline Eigen::MatrixXd fd_augmented_hessian(const Configuration& q,
                                            const AugmentedPotentialContext& ctx, double h) {
    auto value = [&](const Eigen::VectorXd& flat) {
        return augmented_potential(Configuration(flat), ctx);
    };
    return fd_hessian(value, q.flat(), h);
}

} // namespace ccbif
