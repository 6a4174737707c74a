#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccbif/errors.hpp"
#include "ccbif/nbody.hpp"
#include "ccbif/types.hpp"

namespace ccbif {

/// A validated point of a parameterized family of central configurations.
struct FamilyPoint {
    std::vector<double> parameter; // one or two coordinates
    Configuration configuration;
    MassVector masses;
    double lambda;
    double residual;       // |grad of the augmented potential|
    double residual_scale; // max(1, Hessian max-abs entry)
};

/// Builds a FamilyPoint, computing lambda from the configuration and
/// rejecting anything whose gradient residual exceeds
/// residual_tol * max(1, Hessian scale).
inline FamilyPoint make_family_point(std::vector<double> parameter, Configuration configuration,
                                     MassVector masses, double residual_tol = kResidualTol,
                                     int csv_row = -1) {
    const double lambda = lambda_of(configuration, masses);
    const AugmentedPotentialContext ctx(masses, lambda);
    const double scale = std::max(1.0, augmented_hessian(configuration, ctx).cwiseAbs().maxCoeff());
    const double residual = augmented_gradient(configuration, ctx).norm();
    if (residual > residual_tol * scale) throw NotCentral(csv_row, residual);
    return {std::move(parameter), std::move(configuration), std::move(masses),
            lambda,               residual,                 scale};
}

/// One ring of a ring-symmetric shape: bodies at a common radius, with the
/// ring mass either pinned or left for the solver.
struct RingSpec {
    std::vector<int> bodies;
    std::optional<double> mass; // nullopt = unknown
};

namespace detail {

/// Radial balance coefficient of ring `group` in the equation of body `rep`:
/// the projection on the outward unit vector of minus the unit-mass pair
/// force sum. Each ring's equation reads
///   sum_g mu_g * coeff(rep, g) + lambda * |q_rep| = 0.
inline double ring_coefficient(const Configuration& q, int rep, const std::vector<int>& group) {
    const Eigen::Vector2d qi = q.body(rep);
    const Eigen::Vector2d outward = qi / qi.norm();
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    for (int j : group) {
        if (j == rep) continue;
        const Eigen::Vector2d d = qi - q.body(j);
        const double r = d.norm();
        check_separation(rep, j, r, kCollisionFloor);
        sum += d / (r * r * r);
    }
    return -outward.dot(sum);
}

struct RingSolve {
    std::vector<double> unknown_masses; // per unknown ring, in ring order
    double lambda;
};

/// Raw ring-wise linear solve; no positivity or residual checks. Used by the
/// family-boundary locator, which needs solved masses past the sign change.
inline RingSolve solve_ring_system(const Configuration& shape, const std::vector<RingSpec>& rings,
                                   double radius_tol = 1e-12) {
    const int n = shape.n_bodies();
    std::vector<int> seen(n, 0);
    bool any_fixed = false;
    for (const auto& ring : rings) {
        if (ring.bodies.empty()) throw Error("empty ring");
        for (int b : ring.bodies) {
            if (b < 0 || b >= n || seen[b]++) throw Error("rings must partition the bodies");
        }
        if (ring.mass) any_fixed = true;
        const double r0 = shape.body(ring.bodies.front()).norm();
        for (int b : ring.bodies) {
            const double r = shape.body(b).norm();
            if (std::abs(r - r0) > radius_tol * std::max(1.0, r0))
                throw AsymmetricShape("ring radius varies: " + std::to_string(r) + " vs " +
                                      std::to_string(r0));
        }
    }
    for (int b = 0; b < n; ++b)
        if (!seen[b]) throw Error("rings must partition the bodies");
    if (!any_fixed) throw MassSolveFailed("at least one ring mass must be fixed");

    std::vector<int> unknown_rings;
    for (int g = 0; g < static_cast<int>(rings.size()); ++g)
        if (!rings[g].mass) unknown_rings.push_back(g);

    // one radial equation per ring away from the origin
    std::vector<int> equation_rings;
    for (int g = 0; g < static_cast<int>(rings.size()); ++g)
        if (shape.body(rings[g].bodies.front()).norm() > kCollisionFloor) equation_rings.push_back(g);

    const int n_unknowns = static_cast<int>(unknown_rings.size()) + 1; // + lambda
    const int n_equations = static_cast<int>(equation_rings.size());
    if (n_equations < n_unknowns)
        throw MassSolveFailed("underdetermined ring system: " + std::to_string(n_equations) +
                              " equations for " + std::to_string(n_unknowns) + " unknowns");

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_equations, n_unknowns);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_equations);
    for (int row = 0; row < n_equations; ++row) {
        const int rep = rings[equation_rings[row]].bodies.front();
        for (int u = 0; u < static_cast<int>(unknown_rings.size()); ++u)
            a(row, u) = ring_coefficient(shape, rep, rings[unknown_rings[u]].bodies);
        a(row, n_unknowns - 1) = shape.body(rep).norm();
        for (int g = 0; g < static_cast<int>(rings.size()); ++g)
            if (rings[g].mass) rhs[row] -= *rings[g].mass * ring_coefficient(shape, rep, rings[g].bodies);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < n_unknowns) throw MassSolveFailed("singular ring system");
    const Eigen::VectorXd x = qr.solve(rhs);

    RingSolve out;
    out.unknown_masses.assign(x.data(), x.data() + unknown_rings.size());
    out.lambda = x[n_unknowns - 1];
    return out;
}

inline MassVector assemble_ring_masses(const Configuration& shape,
                                       const std::vector<RingSpec>& rings,
                                       const std::vector<double>& unknowns) {
    Eigen::VectorXd masses(shape.n_bodies());
    int u = 0;
    for (const auto& ring : rings) {
        const double value = ring.mass ? *ring.mass : unknowns[u++];
        if (!(value > 0.0)) throw MassSolveFailed("solved ring mass is not positive: " +
                                                  std::to_string(value));
        for (int b : ring.bodies) masses[b] = value;
    }
    return MassVector(std::move(masses));
}

} // namespace detail

/// Masses that make a ring-symmetric shape a central configuration.
///
/// Each ring contributes one scalar radial equation, linear in the unknown
/// ring masses and lambda; the small system is solved directly and the
/// result verified through the full gradient.
inline MassVector solve_balancing_masses(const Configuration& shape,
                                         const std::vector<RingSpec>& rings,
                                         double residual_tol = kResidualTol) {
    const detail::RingSolve solve = detail::solve_ring_system(shape, rings);
    MassVector masses = detail::assemble_ring_masses(shape, rings, solve.unknown_masses);
    const AugmentedPotentialContext ctx(masses, lambda_of(shape, masses));
    const double scale = std::max(1.0, augmented_hessian(shape, ctx).cwiseAbs().maxCoeff());
    const double residual = augmented_gradient(shape, ctx).norm();
    if (residual > residual_tol * scale)
        throw MassSolveFailed("ring solve did not balance the shape: residual " +
                              std::to_string(residual));
    return masses;
}

// ---------------------------------------------------------------------------
// Two nested squares, eight bodies.
// ---------------------------------------------------------------------------

/// Outer square of side one, vertices listed counterclockwise from
/// (-1/2,-1/2); inner square with circumradius r on the diagonals.
inline Configuration two_squares_shape(double r) {
    const double s = std::sqrt(2.0) / 2.0 * r;
    Eigen::VectorXd flat(16);
    flat << -0.5, -0.5, 0.5, -0.5, 0.5, 0.5, -0.5, 0.5, -s, -s, s, -s, s, s, -s, s;
    return Configuration(std::move(flat));
}

inline std::vector<RingSpec> two_squares_rings() {
    return {{{0, 1, 2, 3}, std::nullopt}, {{4, 5, 6, 7}, 1.0}};
}

/// Raw solved outer-square mass with the inner masses pinned to one.
/// Positive on the family range and negative past its boundary.
inline double two_squares_outer_mass(double r) {
    return detail::solve_ring_system(two_squares_shape(r), two_squares_rings()).unknown_masses[0];
}

/// Parameter where the outer mass crosses zero, located by bisection.
inline double two_squares_mass_boundary() {
    static const double boundary = [] {
        double lo = 0.3, hi = 0.5;
        if (!(two_squares_outer_mass(lo) > 0.0) || !(two_squares_outer_mass(hi) < 0.0))
            throw Error("mass boundary bracket lost");
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            (two_squares_outer_mass(mid) > 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return boundary;
}

/// The two-nested-squares family point at inner circumradius r.
inline FamilyPoint two_squares_point(double r, double residual_tol = kResidualTol) {
    if (!(r > 0.0) || !(r < two_squares_mass_boundary()))
        throw OutOfRange("two-squares parameter " + std::to_string(r) + " outside (0, " +
                         std::to_string(two_squares_mass_boundary()) + ")");
    Configuration shape = two_squares_shape(r);
    MassVector masses = solve_balancing_masses(shape, two_squares_rings(), residual_tol);
    return make_family_point({r}, std::move(shape), std::move(masses), residual_tol);
}

// ---------------------------------------------------------------------------
// Rosette, thirteen bodies.
// ---------------------------------------------------------------------------

/// Second-ring mass making the rosette central, from the closed form in the
/// source family. Strictly positive for positive (m0, m1).
inline double rosette_second_ring_mass(double m0, double m1) {
    if (!(m0 > 0.0) || !(m1 > 0.0))
        throw InvalidMasses("rosette mass parameters must be positive");
    const double s3 = std::sqrt(3.0), s7 = std::sqrt(7.0);
    const double den = -1862.0 * s3 - 7203.0 + 810.0 * s7 + 90.0 * s7 * s3;
    const double num = -7644.0 * m0 + 6.0 * (81.0 * s7 - 441.0 * s3 + 9.0 * s3 * s7 - 147.0) * m1;
    const double m2 = num / den;
    if (!(m2 > 0.0)) throw InvalidMasses("second-ring mass is not positive: " + std::to_string(m2));
    return m2;
}

/// Hexagon of radius 1/2, a second hexagon of radius sqrt(3)/2 rotated by
/// 30 degrees, and a central body.
inline Configuration rosette_shape() {
    const double r1 = 0.5, r2 = std::sqrt(3.0) / 2.0;
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(13);
    for (int k = 0; k < 6; ++k) {
        const double a = 2.0 * M_PI * k / 6.0;
        pts.emplace_back(r1 * std::cos(a), r1 * std::sin(a));
    }
    for (int k = 0; k < 6; ++k) {
        const double a = M_PI / 6.0 + 2.0 * M_PI * k / 6.0;
        pts.emplace_back(r2 * std::cos(a), r2 * std::sin(a));
    }
    pts.emplace_back(0.0, 0.0);
    return Configuration::from_points(pts);
}

inline std::vector<RingSpec> rosette_rings(double m0, double m1) {
    return {{{0, 1, 2, 3, 4, 5}, m1}, {{6, 7, 8, 9, 10, 11}, std::nullopt}, {{12}, m0}};
}

/// The rosette family point at mass parameters (m0, m1).
inline FamilyPoint rosette_point(double m0, double m1, double residual_tol = kResidualTol) {
    const double m2 = rosette_second_ring_mass(m0, m1);
    Eigen::VectorXd masses(13);
    for (int i = 0; i < 6; ++i) masses[i] = m1;
    for (int i = 6; i < 12; ++i) masses[i] = m2;
    masses[12] = m0;
    return make_family_point({m0, m1}, rosette_shape(), MassVector(std::move(masses)),
                             residual_tol);
}

// ---------------------------------------------------------------------------
// CSV-backed families.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> parse_csv_numbers(const std::string& line, int row) {
    std::vector<double> values;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &pos);
        } catch (const std::exception&) {
            throw ParseError("row " + std::to_string(row) + ": not a number: '" + field + "'");
        }
        while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
        if (pos != field.size())
            throw ParseError("row " + std::to_string(row) + ": trailing junk: '" + field + "'");
        values.push_back(v);
    }
    return values;
}

} // namespace detail

/// Loads a family from CSV rows of the form
///   parameter, x1,y1,...,xN,yN, m1,...,mN
/// optionally followed by the four spectral columns a scan dump appends.
/// Lines starting with '#' are comments. Every row is validated as a central
/// configuration.
inline std::vector<FamilyPoint> load_family_csv(const std::string& path,
                                                double residual_tol = kResidualTol) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::vector<FamilyPoint> points;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<double> v = detail::parse_csv_numbers(line, row);
        std::size_t payload = v.size() - 1;
        if (payload % 3 != 0) {
            if (v.size() >= 5 && (v.size() - 5) % 3 == 0)
                payload = v.size() - 5; // spectral suffix present
            else
                throw ParseError("row " + std::to_string(row) + ": expected 1+3N columns, got " +
                                 std::to_string(v.size()));
        }
        const int n = static_cast<int>(payload / 3);
        if (n < 2) throw ParseError("row " + std::to_string(row) + ": need at least two bodies");
        Eigen::VectorXd flat(2 * n), masses(n);
        for (int i = 0; i < 2 * n; ++i) flat[i] = v[1 + i];
        for (int i = 0; i < n; ++i) {
            masses[i] = v[1 + 2 * n + i];
            if (!(masses[i] > 0.0))
                throw ParseError("row " + std::to_string(row) + ": nonpositive mass " +
                                 std::to_string(masses[i]));
        }
        points.push_back(make_family_point({v[0]}, Configuration(std::move(flat)),
                                           MassVector(std::move(masses)), residual_tol, row));
    }
    return points;
}

} // namespace ccbif
