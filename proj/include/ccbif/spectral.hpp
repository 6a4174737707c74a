#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "ccbif/errors.hpp"
#include "ccbif/nbody.hpp"
#include "ccbif/types.hpp"

namespace ccbif {

namespace detail {

inline void require_symmetric(const Eigen::MatrixXd& m, double rel_tol = 1e-10) {
    if (m.rows() != m.cols()) throw NotSymmetric("matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > rel_tol * scale)
        throw NotSymmetric("asymmetry " + std::to_string(asym) + " exceeds " +
                           std::to_string(rel_tol) + " relative");
}

} // namespace detail

/// Ascending eigenvalues of a symmetric matrix.
inline Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& m) {
    detail::require_symmetric(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
    return solver.eigenvalues();
}

struct Eigensystem {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // orthonormal columns, matching order
};

/// Ascending eigenvalues plus an orthonormal eigenbasis.
inline Eigensystem symmetric_eigensystem(const Eigen::MatrixXd& m) {
    detail::require_symmetric(m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Classification of a symmetric spectrum against a zero threshold.
///
/// Eigenvalues within tau_zero * max(1, spectral radius) of zero count as
/// kernel; the Morse index counts those below minus the threshold;
/// nonzero_product multiplies the rest.
struct SpectralReport {
    std::vector<double> eigenvalues; // ascending
    int kernel_dim = 0;
    int morse_index = 0;
    double nonzero_product = 1.0;
    double zero_tolerance_used = 0.0;
};

inline SpectralReport spectral_report(const Eigen::MatrixXd& m, double tau_zero = kTauZero) {
    if (!(tau_zero > 0.0)) throw Error("tau_zero must be positive");
    const Eigen::VectorXd w = symmetric_eigenvalues(m);
    const double radius = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
    const double thr = tau_zero * std::max(1.0, radius);
    SpectralReport rep;
    rep.eigenvalues.assign(w.data(), w.data() + w.size());
    rep.zero_tolerance_used = thr;
    for (double v : rep.eigenvalues) {
        if (std::abs(v) <= thr) {
            ++rep.kernel_dim;
        } else {
            rep.nonzero_product *= v;
            if (v < 0.0) ++rep.morse_index;
        }
    }
    return rep;
}

/// Orthonormal basis of the hyperplane orthogonal to a unit vector t,
/// as the trailing columns of the Householder reflector that maps t to
/// a signed first basis vector.
inline Eigen::MatrixXd orbit_complement_basis(const Eigen::VectorXd& t) {
    const Eigen::Index n = t.size();
    if (std::abs(t.norm() - 1.0) > 1e-8) throw Error("tangent vector must have unit norm");
    Eigen::VectorXd v = t;
    // pick the farther of t -+ e1 for stability
    v[0] += (t[0] >= 0.0) ? 1.0 : -1.0;
    v /= v.norm();
    Eigen::MatrixXd basis(n, n - 1);
    for (Eigen::Index k = 1; k < n; ++k) {
        Eigen::VectorXd col = -2.0 * v[k] * v;
        col[k] += 1.0;
        basis.col(k - 1) = col;
    }
    return basis;
}

/// The Hessian compressed onto the orthogonal complement of the orbit
/// tangent. When the tangent lies in the kernel this carries the full
/// spectrum with one zero removed.
struct RestrictedHessian {
    Eigen::MatrixXd b; // symmetric, (2N-1) x (2N-1)
};

inline RestrictedHessian restrict_to_orbit_complement(const Eigen::MatrixXd& hessian,
                                                      const Eigen::VectorXd& tangent) {
    const Eigen::MatrixXd basis = orbit_complement_basis(tangent);
    Eigen::MatrixXd b = basis.transpose() * hessian * basis;
    return {0.5 * (b + b.transpose())};
}

/// det of the restricted Hessian B at a critical point: the product of all
/// Hessian eigenvalues except the single orbit-tangent zero. Crosses or
/// touches zero exactly at the degenerate parameters.
inline double degeneracy_indicator(const Configuration& q, const AugmentedPotentialContext& ctx,
                                   double residual_tol = 1e-7) {
    const Eigen::VectorXd grad = augmented_gradient(q, ctx);
    const Eigen::MatrixXd hessian = augmented_hessian(q, ctx);
    const double scale = std::max(1.0, hessian.cwiseAbs().maxCoeff());
    const double residual = grad.norm();
    if (residual > residual_tol * scale) throw NotCritical(residual, residual_tol * scale);
    const RestrictedHessian restricted = restrict_to_orbit_complement(hessian, orbit_tangent(q));
    const Eigen::VectorXd w = symmetric_eigenvalues(restricted.b);
    double product = 1.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) product *= w[i];
    return product;
}

} // namespace ccbif
