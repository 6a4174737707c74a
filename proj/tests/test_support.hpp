#pragma once

// Shared test oracles, deliberately independent of the library paths they
// check: plain-loop summations, the printed closed forms for the family
// masses, a characteristic-polynomial eigenvalue bracketer, and a random
// admissible-configuration generator.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ccbif/types.hpp"

namespace testsupport {

// Pairwise-sum potential with long double accumulation, plain loops.
inline double brute_force_potential(const ccbif::Configuration& q, const ccbif::MassVector& m) {
    long double sum = 0.0L;
    for (int i = 0; i < q.n_bodies(); ++i) {
        for (int j = i + 1; j < q.n_bodies(); ++j) {
            const long double dx = q.body(i)[0] - q.body(j)[0];
            const long double dy = q.body(i)[1] - q.body(j)[1];
            sum += static_cast<long double>(m[i]) * m[j] / std::sqrt(dx * dx + dy * dy);
        }
    }
    return static_cast<double>(sum);
}

inline double brute_force_inertia(const ccbif::Configuration& q, const ccbif::MassVector& m) {
    long double sum = 0.0L;
    for (int i = 0; i < q.n_bodies(); ++i) {
        const long double x = q.body(i)[0], y = q.body(i)[1];
        sum += static_cast<long double>(m[i]) * (x * x + y * y);
    }
    return static_cast<double>(0.5L * sum);
}

// The printed closed form for the outer-square mass of the two-nested-squares
// family, with bodies 1..4 the outer square and 5..8 the inner one:
//   M = -B(r)/A(r),  R_ij = 1/|q_i-q_j|^3,  D_ijk = (q_i-q_j) x (q_i-q_k).
inline double two_squares_closed_form_mass(const ccbif::Configuration& q) {
    auto R = [&](int i, int j) {
        return 1.0 / std::pow((q.body(i - 1) - q.body(j - 1)).norm(), 3);
    };
    auto D = [&](int i, int j, int k) {
        const Eigen::Vector2d a = q.body(i - 1) - q.body(j - 1);
        const Eigen::Vector2d b = q.body(i - 1) - q.body(k - 1);
        return a[0] * b[1] - a[1] * b[0];
    };
    const double A = (R(1, 2) - R(1, 5)) * D(1, 5, 2) + (R(1, 3) - R(1, 6)) * D(1, 6, 3) +
                     (R(1, 7) - R(1, 2)) * D(1, 7, 2);
    const double B = (R(6, 7) - R(1, 5)) * D(1, 5, 6) + (R(1, 7) - R(6, 7)) * D(5, 6, 3) +
                     (R(1, 6) - R(5, 7)) * D(1, 6, 8);
    return -B / A;
}

// Eigenvalues of a small symmetric matrix by bisection on the characteristic
// polynomial, bracketed inside the Gershgorin bound. Assumes simple,
// well-separated eigenvalues (the test constructs such matrices).
inline std::vector<double> charpoly_eigenvalues(const Eigen::MatrixXd& m, double separation) {
    const int n = static_cast<int>(m.rows());
    auto charpoly = [&](double x) {
        return (m - x * Eigen::MatrixXd::Identity(n, n)).determinant();
    };
    double radius = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            if (j != i) row += std::abs(m(i, j));
        radius = std::max(radius, std::abs(m(i, i)) + row);
    }
    std::vector<double> roots;
    const int cells = static_cast<int>(std::ceil(4.0 * radius / separation)) + 1;
    double prev_x = -radius - separation;
    double prev_p = charpoly(prev_x);
    for (int c = 1; c <= cells; ++c) {
        const double x = -radius - separation + (2.0 * (radius + separation)) * c / cells;
        const double p = charpoly(x);
        if ((prev_p < 0.0) != (p < 0.0)) {
            double lo = prev_x, hi = x;
            double plo = prev_p;
            for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(lo)); ++it) {
                const double mid = 0.5 * (lo + hi);
                const double pm = charpoly(mid);
                if ((plo < 0.0) != (pm < 0.0)) {
                    hi = mid;
                } else {
                    lo = mid;
                    plo = pm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_p = p;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Random planar configuration with all pairwise distances at least min_dist.
inline ccbif::Configuration random_configuration(std::mt19937& rng, int n_bodies,
                                                 double min_dist = 0.3) {
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    for (;;) {
        Eigen::VectorXd flat(2 * n_bodies);
        for (int i = 0; i < 2 * n_bodies; ++i) flat[i] = coord(rng);
        ccbif::Configuration q(std::move(flat));
        if (q.min_pair_distance() >= min_dist) return q;
    }
}

inline ccbif::MassVector random_masses(std::mt19937& rng, int n_bodies) {
    std::uniform_real_distribution<double> mass(0.5, 2.0);
    Eigen::VectorXd m(n_bodies);
    for (int i = 0; i < n_bodies; ++i) m[i] = mass(rng);
    return ccbif::MassVector(std::move(m));
}

} // namespace testsupport
