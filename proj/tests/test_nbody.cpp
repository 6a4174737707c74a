#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ccbif/families.hpp"
#include "ccbif/finite_diff.hpp"
#include "ccbif/nbody.hpp"
#include "test_support.hpp"

using namespace ccbif;
using Catch::Approx;

namespace {

Configuration two_body_pair() {
    Eigen::VectorXd flat(4);
    flat << 1.0, 0.0, -1.0, 0.0;
    return Configuration(flat);
}

MassVector unit_masses(int n) { return MassVector(Eigen::VectorXd::Ones(n)); }

double rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    return (got - want).cwiseAbs().maxCoeff() / std::max(1.0, want.cwiseAbs().maxCoeff());
}

} // namespace

TEST_CASE("newtonian potential") {
    SECTION("two bodies at unit distance from the origin") {
        REQUIRE(newtonian_potential(two_body_pair(), unit_masses(2)) == Approx(0.5).margin(1e-15));
    }
    SECTION("quadratic homogeneity in the masses") {
        std::mt19937 rng(7);
        const Configuration q = testsupport::random_configuration(rng, 5);
        const MassVector m = testsupport::random_masses(rng, 5);
        const MassVector scaled(3.0 * m.values);
        REQUIRE(newtonian_potential(q, scaled) ==
                Approx(9.0 * newtonian_potential(q, m)).epsilon(1e-14));
    }
    SECTION("degree minus-one homogeneity in the positions") {
        std::mt19937 rng(8);
        const Configuration q = testsupport::random_configuration(rng, 4);
        const MassVector m = testsupport::random_masses(rng, 4);
        const Configuration scaled(2.5 * q.flat());
        REQUIRE(newtonian_potential(scaled, m) ==
                Approx(newtonian_potential(q, m) / 2.5).epsilon(1e-14));
    }
    SECTION("two-squares value against a brute-force summation") {
        const FamilyPoint p = two_squares_point(0.2);
        const double u = newtonian_potential(p.configuration, p.masses);
        REQUIRE(u == Approx(testsupport::brute_force_potential(p.configuration, p.masses))
                         .epsilon(1e-13));
        REQUIRE(u == Approx(757.54375329195386).epsilon(1e-12)); // frozen oracle value
    }
    SECTION("collision raises") {
        Eigen::VectorXd flat(4);
        flat << 0.3, 0.4, 0.3, 0.4;
        REQUIRE_THROWS_AS(newtonian_potential(Configuration(flat), unit_masses(2)),
                          CollisionError);
    }
}

TEST_CASE("moment of inertia") {
    SECTION("two bodies at distance one from the origin") {
        REQUIRE(moment_of_inertia(two_body_pair(), unit_masses(2)) == Approx(1.0).margin(1e-15));
    }
    SECTION("total at the origin, value zero") {
        REQUIRE(moment_of_inertia(Configuration(Eigen::VectorXd::Zero(6)), unit_masses(3)) == 0.0);
    }
    SECTION("rosette value against an independent summation") {
        const FamilyPoint p = rosette_point(1.0, 1.0);
        const double inertia = moment_of_inertia(p.configuration, p.masses);
        REQUIRE(inertia ==
                Approx(testsupport::brute_force_inertia(p.configuration, p.masses)).epsilon(1e-14));
        REQUIRE(inertia == Approx(4.0583595533068629).epsilon(1e-12));
    }
    SECTION("quadratic homogeneity in the positions") {
        std::mt19937 rng(9);
        const Configuration q = testsupport::random_configuration(rng, 4);
        const MassVector m = testsupport::random_masses(rng, 4);
        REQUIRE(moment_of_inertia(Configuration(2.0 * q.flat()), m) ==
                Approx(4.0 * moment_of_inertia(q, m)).epsilon(1e-14));
    }
}

TEST_CASE("central-configuration multiplier") {
    SECTION("two-body value") {
        REQUIRE(lambda_of(two_body_pair(), unit_masses(2)) == Approx(0.25).margin(1e-15));
    }
    SECTION("scaling by r rescales lambda by 1/r^3") {
        REQUIRE(lambda_of(Configuration(2.0 * two_body_pair().flat()), unit_masses(2)) ==
                Approx(0.25 / 8.0).epsilon(1e-14));
    }
    SECTION("regression fixture at the first two-squares lemma parameter") {
        const FamilyPoint p = two_squares_point(std::sqrt(2.0) / 7.0);
        REQUIRE(p.lambda == Approx(37.610924856507033).epsilon(1e-12));
    }
    SECTION("degenerate inertia raises") {
        REQUIRE_THROWS_AS(lambda_of(Configuration(Eigen::VectorXd::Zero(4)), unit_masses(2)),
                          DegenerateInertia);
    }
}

TEST_CASE("augmented gradient") {
    SECTION("vanishes at the two-body central configuration") {
        const AugmentedPotentialContext ctx(unit_masses(2), 0.25);
        REQUIRE(augmented_gradient(two_body_pair(), ctx).norm() < 1e-14);
    }
    SECTION("matches central finite differences on random configurations") {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            const Configuration q = testsupport::random_configuration(rng, 3);
            const MassVector m = testsupport::random_masses(rng, 3);
            const AugmentedPotentialContext ctx(m, lambda_of(q, m));
            const double h = fd_gradient_step(q.flat());
            const Eigen::VectorXd analytic = augmented_gradient(q, ctx);
            const Eigen::VectorXd numeric = fd_augmented_gradient(q, ctx, h);
            REQUIRE(rel_err(numeric, analytic) < 1e-6);
        }
    }
    SECTION("equivariance under rotations") {
        std::mt19937 rng(12);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        const Configuration q = testsupport::random_configuration(rng, 4);
        const MassVector m = testsupport::random_masses(rng, 4);
        const AugmentedPotentialContext ctx(m, lambda_of(q, m));
        for (int trial = 0; trial < 10; ++trial) {
            const Rotation g(angle(rng));
            const Eigen::VectorXd lhs = augmented_gradient(g.apply(q), ctx);
            const Eigen::VectorXd rhs = g.apply(augmented_gradient(q, ctx));
            REQUIRE(rel_err(lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("augmented hessian") {
    std::mt19937 rng(13);
    const Configuration q = testsupport::random_configuration(rng, 3);
    const MassVector m = testsupport::random_masses(rng, 3);
    const AugmentedPotentialContext ctx(m, lambda_of(q, m));

    SECTION("matches finite differences entrywise") {
        const double h = fd_hessian_step(q.flat());
        REQUIRE(rel_err(fd_augmented_hessian(q, ctx, h), augmented_hessian(q, ctx)) < 1e-5);
    }
    SECTION("conjugation equivariance") {
        const Rotation g(1.234);
        const Eigen::MatrixXd lifted = g.lift(q.n_bodies());
        const Eigen::MatrixXd lhs = augmented_hessian(g.apply(q), ctx);
        const Eigen::MatrixXd rhs = lifted * augmented_hessian(q, ctx) * lifted.transpose();
        REQUIRE(rel_err(lhs, rhs) < 1e-12);
    }
    SECTION("annihilates the orbit tangent at critical points") {
        const FamilyPoint p = two_squares_point(0.25);
        const AugmentedPotentialContext fam_ctx(p.masses, p.lambda);
        const Eigen::MatrixXd hess = augmented_hessian(p.configuration, fam_ctx);
        const double bound = (augmented_gradient(p.configuration, fam_ctx).norm() +
                              1e-10 * std::max(1.0, hess.cwiseAbs().maxCoeff()));
        REQUIRE((hess * orbit_tangent(p.configuration)).norm() <= bound);
    }
}

TEST_CASE("orbit tangent") {
    SECTION("quarter turn of a single body") {
        Eigen::VectorXd flat(2);
        flat << 1.0, 0.0;
        const Eigen::VectorXd t = orbit_tangent(Configuration(flat));
        REQUIRE(t[0] == Approx(0.0).margin(1e-15));
        REQUIRE(t[1] == Approx(1.0).margin(1e-15));
    }
    SECTION("commutes with rotations and is orthogonal to the configuration") {
        std::mt19937 rng(14);
        const Configuration q = testsupport::random_configuration(rng, 5);
        const Rotation g(0.77);
        const Eigen::VectorXd lhs = orbit_tangent(g.apply(q));
        const Eigen::VectorXd rhs = g.apply(orbit_tangent(q));
        REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
        REQUIRE(std::abs(orbit_tangent(q).dot(q.flat())) < 1e-14);
    }
    SECTION("zero configuration raises") {
        REQUIRE_THROWS_AS(orbit_tangent(Configuration(Eigen::VectorXd::Zero(4))),
                          ZeroConfiguration);
    }
}

TEST_CASE("rotations") {
    const Rotation a(0.4), b(1.1), sum(1.5);
    SECTION("orthogonal with determinant one") {
        const Eigen::Matrix2d g = a.matrix();
        REQUIRE((g * g.transpose() - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-15);
        REQUIRE(g.determinant() == Approx(1.0).margin(1e-15));
    }
    SECTION("group law") {
        REQUIRE((a.matrix() * b.matrix() - sum.matrix()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("finite-difference oracles") {
    SECTION("exact on the quadratic inertia term alone") {
        std::mt19937 rng(15);
        const Configuration q = testsupport::random_configuration(rng, 4);
        const MassVector m = testsupport::random_masses(rng, 4);
        const double lambda = 0.8;
        auto inertia_only = [&](const Eigen::VectorXd& flat) {
            return lambda * moment_of_inertia(Configuration(flat), m);
        };
        Eigen::VectorXd expected(q.flat().size());
        for (int i = 0; i < q.n_bodies(); ++i)
            expected.segment<2>(2 * i) = lambda * m[i] * q.body(i);
        const Eigen::VectorXd numeric = fd_gradient(inertia_only, q.flat(), 1e-3);
        REQUIRE((numeric - expected).cwiseAbs().maxCoeff() < 1e-10);
    }
    SECTION("agrees with the analytic gradient on random four-body configurations") {
        std::mt19937 rng(16);
        for (int trial = 0; trial < 100; ++trial) {
            const Configuration q = testsupport::random_configuration(rng, 4);
            const MassVector m = testsupport::random_masses(rng, 4);
            const AugmentedPotentialContext ctx(m, lambda_of(q, m));
            const Eigen::VectorXd numeric =
                fd_augmented_gradient(q, ctx, fd_gradient_step(q.flat()));
            REQUIRE(rel_err(numeric, augmented_gradient(q, ctx)) < 1e-6);
        }
    }
    SECTION("raw stencil is nearly symmetric before symmetrization") {
        std::mt19937 rng(17);
        for (int trial = 0; trial < 10; ++trial) {
            const Configuration q = testsupport::random_configuration(rng, 4, 0.6);
            const MassVector m = testsupport::random_masses(rng, 4);
            const AugmentedPotentialContext ctx(m, lambda_of(q, m));
            auto value = [&](const Eigen::VectorXd& flat) {
                return augmented_potential(Configuration(flat), ctx);
            };
            const Eigen::MatrixXd raw = fd_hessian_raw(value, q.flat(), fd_hessian_step(q.flat()));
            REQUIRE((raw - raw.transpose()).cwiseAbs().maxCoeff() < 1e-6);
            const Eigen::MatrixXd sym = fd_hessian(value, q.flat(), fd_hessian_step(q.flat()));
            REQUIRE((sym - sym.transpose()).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SECTION("probe outside the collision-free domain raises") {
        Eigen::VectorXd flat(4);
        flat << 0.0, 0.0, 1e-7, 0.0;
        const Configuration q(flat);
        const AugmentedPotentialContext ctx(unit_masses(2), 1.0);
        REQUIRE_THROWS_AS(fd_augmented_gradient(q, ctx, 1e-3), CollisionError);
    }
}

TEST_CASE("invariance of the augmented potential") {
    std::mt19937 rng(18);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const Configuration q = testsupport::random_configuration(rng, 6);
    const MassVector m = testsupport::random_masses(rng, 6);
    const AugmentedPotentialContext ctx(m, lambda_of(q, m));
    const double reference = augmented_potential(q, ctx);
    for (int trial = 0; trial < 25; ++trial) {
        const Rotation g(angle(rng));
        REQUIRE(augmented_potential(g.apply(q), ctx) ==
                Approx(reference).epsilon(1e-12));
    }
}

TEST_CASE("isotropy detection") {
    SECTION("family configurations have trivial isotropy") {
        REQUIRE(has_trivial_isotropy(two_squares_point(0.22).configuration));
        REQUIRE(has_trivial_isotropy(rosette_point(1.0, 1.0).configuration));
    }
    SECTION("single body keeps trivial isotropy away from the origin") {
        Eigen::VectorXd flat(2);
        flat << 0.3, -0.1;
        REQUIRE(has_trivial_isotropy(Configuration(flat)));
    }
}
