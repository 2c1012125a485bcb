#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helixlab/connection.hpp"
#include "support/oracles.hpp"

using namespace helixlab;

namespace {

Eigen::VectorXd pt(std::initializer_list<double> xs) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) u(i++) = x;
    return u;
}

// ambient value of a tangent field, for finite-difference oracles
Eigen::VectorXd ambient_of(const Immersion& M, const TangentField& Y, const Eigen::VectorXd& u) {
    return Y.ambient(M, u);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

} // namespace

TEST_CASE("gauss split on the plane vanishes") {
    const Immersion& M = catalog_get("plane").immersion;
    const TangentField X = TangentField::coordinate(M, 0);
    const GaussSplit g = gauss_split(M, pt({0.3, -0.4}), X, X);
    CHECK(g.nabla_XY.norm() == 0.0);
    CHECK(g.V_XY.norm() == 0.0);
}

TEST_CASE("gauss split on the cylinder circle direction") {
    const Immersion& M = catalog_get("cylinder").immersion;
    const TangentField X = TangentField::coordinate(M, 0);
    const Eigen::VectorXd u = pt({0.0, 0.0});

    const GaussSplit g = gauss_split(M, u, X, X);
    CHECK(g.nabla_XY.norm() < 1e-12);
    CHECK((g.V_XY - pt({-1, 0, 0})).norm() < 1e-12);

    const TangentField Y = TangentField::coordinate(M, 1);
    const GaussSplit mixed = gauss_split(M, u, X, Y);
    CHECK(mixed.nabla_XY.norm() < 1e-12);
    CHECK(mixed.V_XY.norm() < 1e-12);

    // at a generic point too, against the classical formula
    const Eigen::VectorXd v = pt({1.2, 0.5});
    const GaussSplit g2 = gauss_split(M, v, X, X);
    CHECK((g2.V_XY - pt({-std::cos(1.2), -std::sin(1.2), 0.0})).norm() < 1e-12);
}

TEST_CASE("D_X Y from jets matches finite differences of the ambient field") {
    std::mt19937_64 rng(314);
    for (const char* name : {"cylinder", "cone", "sphere", "helix-cylinder-4d"}) {
        const Immersion& M = catalog_get(name).immersion;
        // polynomial/trig chart fields with nonconstant coefficients
        std::vector<std::string> xs, ys;
        for (int i = 0; i < M.dim(); ++i) {
            xs.push_back(i == 0 ? "1 + u1*u1/4" : "u1 - u2/2");
            ys.push_back(i == 0 ? "sin(u1/2)" : "1 + u2/3");
        }
        const TangentField X = TangentField::parse(M, xs);
        const TangentField Y = TangentField::parse(M, ys);

        for (int trial = 0; trial < 20; ++trial) {
            const Eigen::VectorXd u = oracles::random_interior_point(M.domain(), rng, 0.2);
            const GaussSplit g = gauss_split(M, u, X, Y);
            const Eigen::VectorXd a = X.chart_components(u);
            const Eigen::VectorXd D_fd = oracles::fd_directional(
                [&](const Eigen::VectorXd& q) { return ambient_of(M, Y, q); }, u, a);
            CHECK((g.nabla_XY + g.V_XY - D_fd).norm() < 1e-5);
        }
    }
}

TEST_CASE("second fundamental form: catalog values and bilinearity") {
    const Immersion& cyl = catalog_get("cylinder").immersion;
    const TangentField du = TangentField::coordinate(cyl, 0);
    CHECK((second_fundamental_form(cyl, pt({0.0, 0.0}), du, du) - pt({-1, 0, 0})).norm() < 1e-12);

    const TangentField zero = TangentField::constant(cyl, pt({0.0, 0.0}));
    CHECK(second_fundamental_form(cyl, pt({0.4, 0.1}), du, zero).norm() == 0.0);

    // unit-slope cone at (0,1), circle direction: |V| = 1/sqrt(2)
    const Immersion& cone = catalog_get("cone").immersion;
    const TangentField circle = TangentField::parse(cone, {"1/u2", "0"});
    const Eigen::VectorXd V = second_fundamental_form(cone, pt({0.0, 1.0}), circle, circle);
    CHECK(V.norm() == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    // aligned with the unit cone normal (cos u, sin u, -1)/sqrt(2), inward side
    const Eigen::VectorXd nrm = pt({kInvSqrt2, 0.0, -kInvSqrt2});
    CHECK(std::abs(V.dot(nrm) + kInvSqrt2) < 1e-12);
}

TEST_CASE("weingarten split on the cylinder outward normal") {
    const Immersion& M = catalog_get("cylinder").immersion;
    const NormalField xi = NormalField::parse(M, {"cos(u1)", "sin(u1)", "0"});
    const TangentField du = TangentField::coordinate(M, 0);
    const Eigen::VectorXd u = pt({0.0, 0.0});

    const WeingartenSplit w = weingarten_split(M, u, du, xi);
    CHECK((w.A_xi_X - pt({0, -1, 0})).norm() < 1e-12); // A(X) = -X for X = f_u at u=0
    CHECK(w.nabla_perp.norm() < 1e-12);

    const TangentField dv = TangentField::coordinate(M, 1);
    const WeingartenSplit w2 = weingarten_split(M, u, dv, xi);
    CHECK(w2.A_xi_X.norm() < 1e-12);
}

TEST_CASE("weingarten split with a constant normal field on circle-cylinder-4d") {
    const Immersion& M = catalog_get("circle-cylinder-4d").immersion;
    const NormalField e4 = NormalField::constant(M, pt({0, 0, 0, 1}));
    const TangentField X = TangentField::parse(M, {"1", "u1/2"});
    const WeingartenSplit w = weingarten_split(M, pt({0.3, 0.2}), X, e4);
    CHECK(w.A_xi_X.norm() == 0.0);
    CHECK(w.nabla_perp.norm() == 0.0);
}

TEST_CASE("weingarten rejects non-normal fields") {
    const Immersion& M = catalog_get("cylinder").immersion;
    const NormalField not_normal = NormalField::parse(M, {"cos(u1)", "sin(u1)", "0.5"});
    const TangentField du = TangentField::coordinate(M, 0);
    CHECK_THROWS_AS(weingarten_split(M, pt({0.0, 0.0}), du, not_normal), GeometryError);
}

TEST_CASE("shape operator eigenvalues: cylinder, plane, cone") {
    const Immersion& cyl = catalog_get("cylinder").immersion;
    const Eigen::VectorXd u = pt({0.7, -0.3});
    const Eigen::MatrixXd S =
        shape_operator_matrix(cyl, u, pt({-std::cos(0.7), -std::sin(0.7), 0.0}));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1.0).epsilon(1e-12));

    const Immersion& plane = catalog_get("plane").immersion;
    CHECK(shape_operator_matrix(plane, pt({0.1, 0.2}), pt({0, 0, 1})).norm() == 0.0);

    const Immersion& cone = catalog_get("cone").immersion;
    const Eigen::VectorXd xi = pt({kInvSqrt2, 0.0, -kInvSqrt2}); // (cos u, sin u, -1)/sqrt2 at u=0
    const Eigen::MatrixXd Sc = shape_operator_matrix(cone, pt({0.0, 1.0}), xi);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esc(Sc);
    CHECK(esc.eigenvalues()(0) == doctest::Approx(-kInvSqrt2).epsilon(1e-12));
    CHECK(esc.eigenvalues()(1) == doctest::Approx(0.0).epsilon(1e-12));

    // finite-difference cross-check of the nonzero principal curvature
    const auto fd_shape = [&](const Eigen::VectorXd& q) {
        // differentiate the unit normal field of the cone along u1
        const double c = std::cos(q(0)), s = std::sin(q(0));
        return pt({c * kInvSqrt2, s * kInvSqrt2, -kInvSqrt2});
    };
    const Eigen::VectorXd dxi = oracles::fd_directional(fd_shape, pt({0.0, 1.0}), pt({1.0, 0.0}));
    // A(E1) = -tang(D_{E1} xi) with E1 the unit circle direction (chart (1/v,0), v=1)
    const Frame F = frame_at(cone, pt({0.0, 1.0}));
    const Eigen::VectorXd A_E1 = -F.tangential(dxi);
    CHECK(std::abs(A_E1.dot(F.jacobian.col(0) / F.jacobian.col(0).norm()) + kInvSqrt2) < 1e-6);
}

TEST_CASE("shape operator rejects directions with tangential components") {
    const Immersion& M = catalog_get("cylinder").immersion;
    CHECK_THROWS_AS(shape_operator_matrix(M, pt({0.0, 0.0}), pt({1, 0, 0.5})), GeometryError);
}

TEST_CASE("second normal spaces of the catalog") {
    const Immersion& qc = catalog_get("circle-cylinder-4d").immersion;
    const Eigen::MatrixXd b1 = second_normal_space(qc, pt({0.4, -0.7}));
    REQUIRE(b1.cols() == 1);
    CHECK(std::abs(b1.col(0).dot(pt({0, 0, 0, 1}))) > 1.0 - 1e-10);

    CHECK(second_normal_space(catalog_get("cylinder").immersion, pt({0.2, 0.1})).cols() == 0);
    CHECK(second_normal_space(catalog_get("sphere").immersion, pt({0.2, 0.1})).cols() == 0);

    const Eigen::MatrixXd bp = second_normal_space(catalog_get("plane").immersion, pt({0.0, 0.0}));
    REQUIRE(bp.cols() == 1);
    CHECK(std::abs(bp.col(0).dot(pt({0, 0, 1}))) > 1.0 - 1e-12);

    // m = 1 path: the helix curve has a 1-dimensional second normal space
    const Immersion& hc = catalog_get("helix-curve").immersion;
    const Eigen::MatrixXd bh = second_normal_space(hc, pt({0.3}));
    REQUIRE(bh.cols() == 1);
    CHECK(shape_operator_matrix(hc, pt({0.3}), bh.col(0)).norm() < 1e-10);

    // defining property via SVD-kernel holds for every returned vector
    const Immersion& h4 = catalog_get("helix-cylinder-4d").immersion;
    const Eigen::MatrixXd b4 = second_normal_space(h4, pt({0.5, 0.5}));
    REQUIRE(b4.cols() == 1);
    CHECK(shape_operator_matrix(h4, pt({0.5, 0.5}), b4.col(0)).norm() < 1e-10);
}

TEST_CASE("self-adjointness and symmetry at 1000 random probes") {
    std::mt19937_64 rng(987);
    const std::vector<std::string> names = {"cylinder", "cone", "sphere", "helix-cylinder-4d",
                                            "circle-cylinder-4d", "helix-curve", "plane"};
    int probes = 0;
    while (probes < 1000) {
        const std::string& name = names[probes % names.size()];
        const Immersion& M = catalog_get(name).immersion;
        const Eigen::VectorXd u = oracles::random_interior_point(M.domain(), rng, 0.15);
        const Frame F = frame_at(M, u);
        const ImmersionJets jets = M.jets(u);
        const int m = M.dim(), n = M.ambient_dim();

        const Eigen::VectorXd x = oracles::random_unit_vector(rng, m);
        const Eigen::VectorXd y = oracles::random_unit_vector(rng, m);
        const Eigen::VectorXd xi = F.normal_basis * oracles::random_unit_vector(rng, n - m);

        // <A^xi X, Y> = <V(X,Y), xi> in the orthonormal tangent basis
        const Eigen::MatrixXd S = shape_operator_matrix(jets, F, xi);
        const Eigen::VectorXd X_amb = F.jacobian * x;
        const Eigen::VectorXd Y_amb = F.jacobian * y;
        const Eigen::VectorXd xq = F.tangent_basis.transpose() * X_amb;
        const Eigen::VectorXd yq = F.tangent_basis.transpose() * Y_amb;
        const double lhs = (S * xq).dot(yq);
        const Eigen::VectorXd Vxy = second_fundamental_point(jets, F, x, y);
        CHECK(std::abs(lhs - Vxy.dot(xi)) < 1e-9);

        // V(X,Y) = V(Y,X)
        const Eigen::VectorXd Vyx = second_fundamental_point(jets, F, y, x);
        CHECK((Vxy - Vyx).norm() < 1e-10);
        ++probes;
    }
    CHECK(probes == 1000);
}

TEST_CASE("gauss and weingarten splits recompose to the ambient derivative") {
    std::mt19937_64 rng(55);
    const Immersion& M = catalog_get("cone").immersion;
    const TangentField X = TangentField::parse(M, {"u2/2", "sin(u1)"});
    const TangentField Y = TangentField::parse(M, {"1", "u1/3"});
    const NormalField xi =
        NormalField::parse(M, {"cos(u1)/sqrt(2)", "sin(u1)/sqrt(2)", "-1/sqrt(2)"});

    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::VectorXd u = oracles::random_interior_point(M.domain(), rng, 0.2);
        const GaussSplit g = gauss_split(M, u, X, Y);
        const Eigen::VectorXd a = X.chart_components(u);

        // D_X Y assembled independently from jets
        const ImmersionJets jets = M.jets(u);
        Eigen::VectorXd D = jets.jacobian * (Y.chart_jacobian(u) * a);
        for (int k = 0; k < M.ambient_dim(); ++k)
            D(k) += a.dot(jets.hessians[k] * Y.chart_components(u));
        CHECK((g.nabla_XY + g.V_XY - D).norm() < 1e-10);

        const WeingartenSplit w = weingarten_split(M, u, X, xi);
        const Eigen::VectorXd Dxi = xi.jacobian(u) * a;
        CHECK((-w.A_xi_X + w.nabla_perp - Dxi).norm() < 1e-10);
    }
}
