#include <doctest.h>

#include <cmath>

#include "rbffr/element.hpp"

using namespace rbffr;
using element::BasisSpec;

TEST_CASE("node_set canonical layouts")
{
    const auto lob3 = node_set(NodeKind::lobatto, 3);
    CHECK(lob3.coords[0] == -1.0);
    CHECK(lob3.coords[1] == 0.0);
    CHECK(lob3.coords[2] == 1.0);

    const auto leg3 = node_set(NodeKind::legendre, 3);
    CHECK(leg3.coords[0] == doctest::Approx(-std::sqrt(3.0 / 5.0)).epsilon(1e-14));
    CHECK(leg3.coords[1] == 0.0);
    CHECK(leg3.coords[2] == doctest::Approx(std::sqrt(3.0 / 5.0)).epsilon(1e-14));

    const auto ui3 = node_set(NodeKind::uniform_internal, 3);
    CHECK(ui3.coords[0] == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(ui3.coords[1] == 0.0);
    CHECK(ui3.coords[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

    const auto ch4 = node_set(NodeKind::chebyshev, 4);
    CHECK(ch4.coords[0] == doctest::Approx(-std::cos(M_PI / 8.0)).epsilon(1e-14));
    CHECK(ch4.coords[1] == doctest::Approx(-std::cos(3.0 * M_PI / 8.0)).epsilon(1e-14));
    CHECK(ch4.coords[2] == doctest::Approx(std::cos(3.0 * M_PI / 8.0)).epsilon(1e-14));
    CHECK(ch4.coords[3] == doctest::Approx(std::cos(M_PI / 8.0)).epsilon(1e-14));

    const auto uf4 = node_set(NodeKind::uniform_full, 4);
    CHECK(uf4.coords.front() == -1.0);
    CHECK(uf4.coords.back() == 1.0);

    CHECK_THROWS_AS(node_set(NodeKind::legendre, 1), linalg::ContractViolation);
    CHECK_THROWS_AS(node_set(NodeKind::legendre, 11), linalg::ContractViolation);
}

TEST_CASE("node sets are increasing and symmetric")
{
    for (NodeKind kind : {NodeKind::legendre, NodeKind::lobatto, NodeKind::chebyshev,
                          NodeKind::uniform_full, NodeKind::uniform_internal}) {
        for (int n = 2; n <= 8; ++n) {
            const auto pts = node_set(kind, n);
            for (int i = 1; i < n; ++i)
                CHECK(pts.coords[static_cast<std::size_t>(i)] >
                      pts.coords[static_cast<std::size_t>(i - 1)]);
            for (int i = 0; i < n; ++i)
                CHECK(pts.coords[static_cast<std::size_t>(i)] ==
                      doctest::Approx(-pts.coords[static_cast<std::size_t>(n - 1 - i)])
                          .epsilon(1e-14));
        }
    }
}

TEST_CASE("quadrature nodes, weights, and exactness")
{
    const auto q1 = quadrature(1);
    CHECK(q1.nodes[0] == 0.0);
    CHECK(q1.weights[0] == 2.0);

    const auto q2 = quadrature(2);
    CHECK(q2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(q2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(q2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));

    const auto q3 = quadrature(3);
    double quartic = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        quartic += q3.weights[i] * std::pow(q3.nodes[i], 4);
    CHECK(quartic == doctest::Approx(0.4).epsilon(1e-14));

    for (int order : {5, 20, 60}) {
        const auto q = quadrature(order);
        double total = 0.0;
        for (double w : q.weights)
            total += w;
        CHECK(total == doctest::Approx(2.0).epsilon(1e-13));
    }
    CHECK_THROWS_AS(quadrature(0), linalg::ContractViolation);
    CHECK_THROWS_AS(quadrature(500), linalg::ContractViolation);
}

TEST_CASE("cardinality: V at the solution points is the identity")
{
    const auto pts = node_set(NodeKind::legendre, 4);
    const std::vector<BasisSpec> specs = {
        BasisSpec::polynomial(pts),
        BasisSpec::rbf_direct(pts, {rbf::Kernel::GA, 0.6, pts.coords}),
        BasisSpec::rbf_ga(pts, pts.coords, 0.05),
    };
    for (const auto& spec : specs) {
        const auto m = element::nodal_basis_matrices(spec, pts.coords);
        CHECK((m.values - linalg::Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("linear Lagrange derivative rows")
{
    const auto spec = BasisSpec::polynomial(node_set(NodeKind::lobatto, 2));
    const auto m = element::nodal_basis_matrices(spec, {-1.0, 1.0});
    CHECK(m.derivs(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(m.derivs(0, 1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.derivs(1, 0) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(m.derivs(1, 1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("flat-limit RBF nodal basis approaches the polynomial one")
{
    const auto pts = node_set(NodeKind::legendre, 4);
    const auto poly = element::nodal_basis_matrices(BasisSpec::polynomial(pts), {-1.0, 1.0});
    const auto flat = element::nodal_basis_matrices(BasisSpec::rbf_ga(pts, pts.coords, 1e-3),
                                                    {-1.0, 1.0});
    CHECK((poly.values - flat.values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("polynomial lobatto n=2 mass matrix")
{
    const auto ops = element::build_operators(BasisSpec::polynomial(node_set(NodeKind::lobatto, 2)));
    CHECK(ops.M(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(ops.M(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(ops.M(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(ops.M(1, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("polynomial lifting equals M^-1 P^T B for every layout")
{
    for (NodeKind kind : {NodeKind::legendre, NodeKind::lobatto, NodeKind::chebyshev,
                          NodeKind::uniform_full, NodeKind::uniform_internal}) {
        for (int n = 2; n <= 5; ++n) {
            const auto ops = element::build_operators(BasisSpec::polynomial(node_set(kind, n)));
            const linalg::Matrix lift = linalg::invert(ops.M) * ops.P.transpose() * ops.B;
            CHECK((lift - ops.C).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("collocated layouts project with unit coordinate rows")
{
    for (NodeKind kind : {NodeKind::lobatto, NodeKind::uniform_full}) {
        const auto ops = element::build_operators(BasisSpec::polynomial(node_set(kind, 4)));
        linalg::Matrix expected = linalg::Matrix::Zero(2, 4);
        expected(0, 0) = 1.0;
        expected(1, 3) = 1.0;
        CHECK((ops.P - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("polynomial operators annihilate and preserve constants")
{
    for (NodeKind kind : {NodeKind::legendre, NodeKind::chebyshev, NodeKind::uniform_internal}) {
        const auto ops = element::build_operators(BasisSpec::polynomial(node_set(kind, 5)));
        const linalg::Vector ones = linalg::Vector::Ones(5);
        CHECK((ops.D * ones).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(((ops.P * ones).array() - 1.0).abs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("RBF constants errors shrink monotonically with eps")
{
    const auto pts = node_set(NodeKind::legendre, 4);
    const linalg::Vector ones = linalg::Vector::Ones(4);
    double prev_d = 1e9, prev_p = 1e9;
    for (double eps : {1.0, 0.5, 0.1, 0.01}) {
        const auto ops = element::build_operators(BasisSpec::rbf_ga(pts, pts.coords, eps));
        const double d_err = (ops.D * ones).cwiseAbs().maxCoeff();
        const double p_err = ((ops.P * ones).array() - 1.0).abs().maxCoeff();
        CHECK(d_err < prev_d);
        CHECK(p_err < prev_p);
        prev_d = d_err;
        prev_p = p_err;
    }
}

TEST_CASE("mass matrices are symmetric positive definite")
{
    const auto pts = node_set(NodeKind::chebyshev, 5);
    const std::vector<BasisSpec> specs = {
        BasisSpec::polynomial(pts),
        BasisSpec::rbf_direct(pts, {rbf::Kernel::GA, 0.7, pts.coords}),
        BasisSpec::rbf_ga(pts, pts.coords, 0.1),
    };
    for (const auto& spec : specs) {
        const auto ops = element::build_operators(spec);
        CHECK((ops.M - ops.M.transpose()).cwiseAbs().maxCoeff() < 1e-13);
        Eigen::SelfAdjointEigenSolver<linalg::Matrix> es(ops.M);
        CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("operators differ between layouts at fixed eps")
{
    std::vector<linalg::Matrix> ds;
    for (NodeKind kind : {NodeKind::legendre, NodeKind::lobatto, NodeKind::chebyshev,
                          NodeKind::uniform_full, NodeKind::uniform_internal}) {
        const auto pts = node_set(kind, 4);
        ds.push_back(element::build_operators(BasisSpec::rbf_ga(pts, pts.coords, 0.5)).D);
    }
    for (std::size_t i = 0; i < ds.size(); ++i)
        for (std::size_t j = i + 1; j < ds.size(); ++j)
            CHECK((ds[i] - ds[j]).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("build_operators validates the quadrature order")
{
    const auto spec = BasisSpec::polynomial(node_set(NodeKind::legendre, 5));
    CHECK_THROWS_AS(element::build_operators(spec, 8), linalg::ContractViolation);
}

TEST_CASE("flat-limit stable operators converge to polynomial operators")
{
    const auto pts = node_set(NodeKind::legendre, 4);
    const auto poly = element::build_operators(BasisSpec::polynomial(pts));
    double prev = 1e9;
    for (double eps : {1e-2, 1e-3}) {
        const auto ga = element::build_operators(BasisSpec::rbf_ga(pts, pts.coords, eps));
        const double gap = (ga.D - poly.D).cwiseAbs().maxCoeff();
        CHECK(gap < prev);
        prev = gap;
    }
}
