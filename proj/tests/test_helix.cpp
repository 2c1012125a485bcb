#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helixlab/helix.hpp"
#include "support/oracles.hpp"

using namespace helixlab;

namespace {

Eigen::VectorXd pt(std::initializer_list<double> xs) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) u(i++) = x;
    return u;
}

const double kPi = std::acos(-1.0);
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// distance from v to the span of the columns of D
double span_distance(const Eigen::MatrixXd& D, const Eigen::VectorXd& v) {
    const Eigen::MatrixXd Q = orthonormalize_mgs(D);
    return (v - Q * (Q.transpose() * v)).norm();
}

} // namespace

TEST_CASE("decompose_direction on the catalog edge cases") {
    const Immersion& cyl = catalog_get("cylinder").immersion;

    const HelixDecomposition tangent = decompose_direction(cyl, pt({0.0, 0.0}), pt({0, 0, 1}));
    CHECK(tangent.theta == 0.0);
    REQUIRE(tangent.tangent_dir.has_value());
    CHECK((*tangent.tangent_dir - pt({0, 0, 1})).norm() < 1e-12);
    CHECK_FALSE(tangent.normal_dir.has_value());

    const HelixDecomposition normal = decompose_direction(cyl, pt({0.0, 0.0}), pt({1, 0, 0}));
    CHECK(normal.theta == doctest::Approx(kPi / 2).epsilon(1e-12));
    REQUIRE(normal.normal_dir.has_value());
    CHECK((*normal.normal_dir - pt({1, 0, 0})).norm() < 1e-12);
    CHECK_FALSE(normal.tangent_dir.has_value());

    const Immersion& cone = catalog_get("cone").immersion;
    const HelixDecomposition mid = decompose_direction(cone, pt({0.0, 1.0}), pt({0, 0, 1}));
    CHECK(mid.theta == doctest::Approx(kPi / 4).epsilon(1e-12));
    REQUIRE(mid.tangent_dir.has_value());
    CHECK((*mid.tangent_dir - pt({kInvSqrt2, 0.0, kInvSqrt2})).norm() < 1e-12);
}

TEST_CASE("decompose_direction requires a unit direction") {
    const Immersion& cyl = catalog_get("cylinder").immersion;
    CHECK_THROWS_AS(decompose_direction(cyl, pt({0.0, 0.0}), pt({0, 0, 2})), InputError);
}

TEST_CASE("reconstruction invariant at 1000 random triples") {
    std::mt19937_64 rng(31337);
    int checked = 0;
    while (checked < 1000) {
        const auto& names = oracles::catalog_names();
        const Immersion& M = catalog_get(names[checked % names.size()]).immersion;
        const Eigen::VectorXd u = oracles::random_interior_point(M.domain(), rng, 0.15);
        const Eigen::VectorXd d = oracles::random_unit_vector(rng, M.ambient_dim());
        const HelixDecomposition dec = decompose_direction(M, u, d);
        if (!dec.tangent_dir || !dec.normal_dir) continue;
        const Eigen::VectorXd rebuilt =
            std::cos(dec.theta) * *dec.tangent_dir + std::sin(dec.theta) * *dec.normal_dir;
        CHECK((rebuilt - d).norm() < 1e-10);
        CHECK(dec.tangential_norm == doctest::Approx(std::cos(dec.theta)).epsilon(1e-14));
        ++checked;
    }
}

TEST_CASE("check_helix: cone constant angle, sphere not, plane always") {
    const Immersion& cone = catalog_get("cone").immersion;
    const auto grid = make_grid(cone.domain(), 20);
    const HelixVerdict v = check_helix(cone, pt({0, 0, 1}), grid, 1e-8);
    CHECK(v.is_helix);
    CHECK(v.theta_mean == doctest::Approx(kPi / 4).epsilon(1e-12));
    CHECK(v.theta_spread < 1e-10);
    CHECK(v.grid_size == 400);

    const Immersion& sph = catalog_get("sphere").immersion;
    const HelixVerdict vs = check_helix(sph, pt({0, 0, 1}), make_grid(sph.domain(), 20), 1e-8);
    CHECK_FALSE(vs.is_helix);
    CHECK(vs.theta_spread > 0.5);

    const Immersion& pl = catalog_get("plane").immersion;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 5; ++i) {
        const Eigen::VectorXd d = oracles::random_unit_vector(rng, 3);
        CHECK(check_helix(pl, d, make_grid(pl.domain(), 10), 1e-8).is_helix);
    }
}

TEST_CASE("check_helix verdict is invariant under rescaling the immersion") {
    std::vector<Expr> comps = {parse_expression("2*cos(u1)", 2), parse_expression("2*sin(u1)", 2),
                               parse_expression("2*u2", 2)};
    Box box;
    box.lo = pt({-3.1, -2.0});
    box.hi = pt({3.1, 2.0});
    const Immersion scaled("cylinder-x2", 2, 3, comps, box);

    const auto grid = make_grid(box, 15);
    for (auto dir : {pt({0, 0, 1}), pt({1, 0, 0}), pt({0.6, 0.0, 0.8})}) {
        const bool a = check_helix(catalog_get("cylinder").immersion, dir, grid, 1e-8).is_helix;
        const bool b = check_helix(scaled, dir, grid, 1e-8).is_helix;
        CHECK(a == b);
    }
}

TEST_CASE("check_helix needs enough valid points") {
    const Immersion& cone = catalog_get("cone").immersion;
    std::vector<Eigen::VectorXd> outside = {pt({0, 5}), pt({0, 6})};
    CHECK_THROWS_AS(check_helix(cone, pt({0, 0, 1}), outside, 1e-8), GeometryError);
}

TEST_CASE("find_helix_directions on the 4d helix cylinder finds a rank-2 set") {
    const Immersion& M = catalog_get("helix-cylinder-4d").immersion;
    const auto grid = make_grid(M.domain(), 20);
    const WeakHelixResult r = find_helix_directions(M, grid, 1e-6, 8, 42);

    CHECK(r.independence_rank >= 2);
    CHECK(r.independence_rank == static_cast<int>(r.directions.size()));

    // the helix direction set of this manifold is exactly span{e3, e4}
    Eigen::MatrixXd D(4, r.directions.size());
    for (std::size_t i = 0; i < r.directions.size(); ++i) D.col(i) = r.directions[i];
    CHECK(span_distance(D, pt({0, 0, 1, 0})) < 1e-6);
    CHECK(span_distance(D, pt({0, 0, 0, 1})) < 1e-6);

    // every returned direction re-passes check_helix on a 2x finer grid
    const auto fine = make_grid(M.domain(), 40);
    for (const auto& d : r.directions) CHECK(check_helix(M, d, fine, 1e-6).is_helix);
}

TEST_CASE("find_helix_directions negative control and flat case") {
    const Immersion& sph = catalog_get("sphere").immersion;
    const WeakHelixResult rs = find_helix_directions(sph, make_grid(sph.domain(), 20), 1e-6, 8, 42);
    CHECK(rs.independence_rank == 0);
    CHECK(rs.directions.empty());

    const Immersion& pl = catalog_get("plane").immersion;
    const WeakHelixResult rp = find_helix_directions(pl, make_grid(pl.domain(), 10), 1e-6, 8, 42);
    CHECK(rp.independence_rank == 3);
}

TEST_CASE("find_helix_directions is deterministic for a fixed seed") {
    const Immersion& M = catalog_get("helix-cylinder-4d").immersion;
    const auto grid = make_grid(M.domain(), 12);
    const WeakHelixResult a = find_helix_directions(M, grid, 1e-6, 6, 42);
    const WeakHelixResult b = find_helix_directions(M, grid, 1e-6, 6, 42);
    REQUIRE(a.directions.size() == b.directions.size());
    for (std::size_t i = 0; i < a.directions.size(); ++i) {
        CHECK((a.directions[i] - b.directions[i]).norm() == 0.0);
        CHECK(a.thetas[i] == b.thetas[i]);
    }
}

TEST_CASE("helix system residuals vanish on catalog helices") {
    std::mt19937_64 rng(8080);

    struct Instance {
        const char* manifold;
        Eigen::VectorXd d;
    };
    const std::vector<Instance> instances = {
        {"cone", pt({0, 0, 1})},
        {"helix-cylinder-4d", pt({0, 0, 1, 0})},
        {"helix-cylinder-4d", pt({0, 0, kInvSqrt2, kInvSqrt2})},
        {"helix-curve", pt({0, 0, 1})},
        {"plane", pt({kInvSqrt2, 0, kInvSqrt2})},
        {"circle-cylinder-4d", pt({0, 0, kInvSqrt2, kInvSqrt2})},
    };

    for (const auto& inst : instances) {
        const Immersion& M = catalog_get(inst.manifold).immersion;
        int done = 0;
        while (done < 100) {
            const Eigen::VectorXd u = oracles::random_interior_point(M.domain(), rng, 0.15);
            Eigen::VectorXd a(M.dim());
            for (int i = 0; i < M.dim(); ++i) a(i) = 2.0 * oracles::u01(rng) - 1.0;
            if (a.norm() < 0.1) continue;
            const TangentField X = TangentField::constant(M, a);
            const auto [r1, r2] = helix_system_residual(M, u, inst.d, X);
            CHECK(r1 < 1e-7);
            CHECK(r2 < 1e-7);
            ++done;
        }
    }
}

TEST_CASE("helix system residual is the expected closed form on the sphere") {
    // with X the meridian direction the system residuals are sin(v) and
    // cos(v)*|V(T,T)| = cos(v); both clearly nonzero at a generic point
    const Immersion& sph = catalog_get("sphere").immersion;
    const Eigen::VectorXd u = pt({0.6, 0.4});
    const TangentField X = TangentField::parse(sph, {"0", "1"});
    const auto [r1, r2] = helix_system_residual(sph, u, pt({0, 0, 1}), X);
    CHECK(r1 == doctest::Approx(std::sin(0.4)).epsilon(1e-12));
    CHECK(r2 == doctest::Approx(std::cos(0.4)).epsilon(1e-12));
    CHECK(std::max(r1, r2) > 1e-3);
}

TEST_CASE("helix system residual rejects degenerate decompositions") {
    const Immersion& cyl = catalog_get("cylinder").immersion;
    const TangentField X = TangentField::coordinate(cyl, 0);
    // theta = 0: the axis is tangent everywhere
    CHECK_THROWS_AS(helix_system_residual(cyl, pt({0.0, 0.0}), pt({0, 0, 1}), X),
                    DegenerateConfigError);
    // theta = pi/2 at this point
    CHECK_THROWS_AS(helix_system_residual(cyl, pt({0.0, 0.0}), pt({1, 0, 0}), X),
                    DegenerateConfigError);
}

TEST_CASE("direction field derivatives match finite differences of the decomposition") {
    std::mt19937_64 rng(5150);
    for (const char* name : {"cone", "sphere", "helix-cylinder-4d", "helix-curve"}) {
        const Immersion& M = catalog_get(name).immersion;
        const Eigen::VectorXd d =
            M.ambient_dim() == 3 ? pt({0, 0, 1}) : pt({0, 0, kInvSqrt2, kInvSqrt2});
        for (int trial = 0; trial < 10; ++trial) {
            const Eigen::VectorXd u = oracles::random_interior_point(M.domain(), rng, 0.2);
            Eigen::VectorXd a(M.dim());
            for (int i = 0; i < M.dim(); ++i) a(i) = 2.0 * oracles::u01(rng) - 1.0;

            const DirectionDerivatives dd = direction_field_derivative(M, u, a, d);
            const double h = 1e-5;
            auto Tfield = [&](const Eigen::VectorXd& q) {
                return *decompose_direction(M, q, d).tangent_dir;
            };
            auto XiField = [&](const Eigen::VectorXd& q) {
                return *decompose_direction(M, q, d).normal_dir;
            };
            CHECK((dd.dT - oracles::fd_directional(Tfield, u, a, h)).norm() < 1e-6);
            CHECK((dd.dxi - oracles::fd_directional(XiField, u, a, h)).norm() < 1e-6);
        }
    }
}
