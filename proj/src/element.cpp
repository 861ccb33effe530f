#include "rbffr/element.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "rbffr/csv.hpp"

namespace rbffr {

namespace {

// P_n(x) and its derivative by the three-term recurrence.
std::pair<double, double> legendre_with_deriv(int n, double x)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

std::vector<double> legendre_roots(int n)
{
    std::vector<double> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre_with_deriv(n, x);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        roots[static_cast<std::size_t>(i)] = x;
    }
    std::sort(roots.begin(), roots.end());
    // Enforce exact symmetry about 0.
    for (int i = 0; i < n / 2; ++i) {
        const double v = 0.5 * (roots[static_cast<std::size_t>(i)] -
                                roots[static_cast<std::size_t>(n - 1 - i)]);
        roots[static_cast<std::size_t>(i)] = v;
        roots[static_cast<std::size_t>(n - 1 - i)] = -v;
    }
    if (n % 2 == 1) roots[static_cast<std::size_t>(n / 2)] = 0.0;
    return roots;
}

// Interior Lobatto nodes: roots of P'_{n-1}.
std::vector<double> lobatto_interior(int n)
{
    const int m = n - 2;
    std::vector<double> roots(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 1.0) / (n - 1.0));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre_with_deriv(n - 1, x);
            // d/dx P'_{n-1} from the Legendre ODE.
            const double d2p = (2.0 * x * dp - (n - 1.0) * n * p) / (1.0 - x * x);
            const double dx = dp / d2p;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        roots[static_cast<std::size_t>(i)] = x;
    }
    std::sort(roots.begin(), roots.end());
    for (int i = 0; i < m / 2; ++i) {
        const double v = 0.5 * (roots[static_cast<std::size_t>(i)] -
                                roots[static_cast<std::size_t>(m - 1 - i)]);
        roots[static_cast<std::size_t>(i)] = v;
        roots[static_cast<std::size_t>(m - 1 - i)] = -v;
    }
    if (m % 2 == 1) roots[static_cast<std::size_t>(m / 2)] = 0.0;
    return roots;
}

}  // namespace

NodeSet node_set(NodeKind kind, int n)
{
    if (n < 2 || n > 10)
        throw linalg::ContractViolation("node_set: n must be in [2, 10]");
    NodeSet out;
    out.kind = kind;
    switch (kind) {
        case NodeKind::legendre:
            out.coords = legendre_roots(n);
            break;
        case NodeKind::lobatto: {
            out.coords.push_back(-1.0);
            for (double x : lobatto_interior(n)) out.coords.push_back(x);
            out.coords.push_back(1.0);
            break;
        }
        case NodeKind::chebyshev: {
            for (int i = 1; i <= n; ++i)
                out.coords.push_back(-std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * n)));
            for (int i = 0; i < n / 2; ++i) {
                const double v = 0.5 * (out.coords[static_cast<std::size_t>(i)] -
                                        out.coords[static_cast<std::size_t>(n - 1 - i)]);
                out.coords[static_cast<std::size_t>(i)] = v;
                out.coords[static_cast<std::size_t>(n - 1 - i)] = -v;
            }
            if (n % 2 == 1) out.coords[static_cast<std::size_t>(n / 2)] = 0.0;
            break;
        }
        case NodeKind::uniform_full:
            for (int i = 0; i < n; ++i)
                out.coords.push_back(-1.0 + 2.0 * i / (n - 1.0));
            break;
        case NodeKind::uniform_internal:
            for (int i = 1; i <= n; ++i)
                out.coords.push_back(-1.0 + (2.0 * i - 1.0) / n);
            break;
    }
    return out;
}

NodeKind node_kind_from_string(const std::string& name)
{
    if (name == "legendre") return NodeKind::legendre;
    if (name == "lobatto") return NodeKind::lobatto;
    if (name == "chebyshev") return NodeKind::chebyshev;
    if (name == "uniform_full") return NodeKind::uniform_full;
    if (name == "uniform_internal") return NodeKind::uniform_internal;
    throw linalg::ContractViolation("unknown node layout: " + name);
}

std::string to_string(NodeKind kind)
{
    switch (kind) {
        case NodeKind::legendre: return "legendre";
        case NodeKind::lobatto: return "lobatto";
        case NodeKind::chebyshev: return "chebyshev";
        case NodeKind::uniform_full: return "uniform_full";
        case NodeKind::uniform_internal: return "uniform_internal";
    }
    return "?";
}

Quadrature quadrature(int order)
{
    if (order < 1 || order > 200)
        throw linalg::ContractViolation("quadrature: order must be in [1, 200]");
    Quadrature q;
    if (order == 1) {
        q.nodes = {0.0};
        q.weights = {2.0};
        return q;
    }
    q.nodes = legendre_roots(order);
    q.weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        const double x = q.nodes[static_cast<std::size_t>(i)];
        const auto [p, dp] = legendre_with_deriv(order, x);
        (void)p;
        q.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return q;
}

}  // namespace rbffr

namespace rbffr::element {

BasisVariant basis_variant_from_string(const std::string& name)
{
    if (name == "polynomial") return BasisVariant::polynomial;
    if (name == "rbf_direct") return BasisVariant::rbf_direct;
    if (name == "rbf_ga") return BasisVariant::rbf_ga;
    throw linalg::ContractViolation("unknown basis variant: " + name);
}

std::string to_string(BasisVariant v)
{
    switch (v) {
        case BasisVariant::polynomial: return "polynomial";
        case BasisVariant::rbf_direct: return "rbf_direct";
        case BasisVariant::rbf_ga: return "rbf_ga";
    }
    return "?";
}

BasisSpec BasisSpec::polynomial(NodeSet points)
{
    BasisSpec spec;
    spec.variant = BasisVariant::polynomial;
    spec.points = std::move(points);
    return spec;
}

BasisSpec BasisSpec::rbf_direct(NodeSet points, rbf::RbfConfig cfg)
{
    if (cfg.centres.size() != points.coords.size())
        throw linalg::ContractViolation("rbf_direct: |centres| must equal n");
    BasisSpec spec;
    spec.variant = BasisVariant::rbf_direct;
    spec.points = std::move(points);
    spec.rbf = std::move(cfg);
    return spec;
}

BasisSpec BasisSpec::rbf_ga(NodeSet points, std::vector<double> centres, double eps)
{
    if (centres.size() != points.coords.size())
        throw linalg::ContractViolation("rbf_ga: |centres| must equal n");
    BasisSpec spec;
    spec.variant = BasisVariant::rbf_ga;
    spec.points = std::move(points);
    spec.rbf = rbf::RbfConfig{rbf::Kernel::GA, eps, std::move(centres)};
    return spec;
}

namespace {

BasisMatrices lagrange_matrices(const std::vector<double>& nodes,
                                const std::vector<double>& eval_points)
{
    const int n = static_cast<int>(nodes.size());
    const int k = static_cast<int>(eval_points.size());
    BasisMatrices out;
    out.values.resize(k, n);
    out.derivs.resize(k, n);
    for (int q = 0; q < k; ++q) {
        const double x = eval_points[static_cast<std::size_t>(q)];
        for (int i = 0; i < n; ++i) {
            double value = 1.0;
            double deriv = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double denom = nodes[static_cast<std::size_t>(i)] -
                                     nodes[static_cast<std::size_t>(j)];
                double partial = 1.0 / denom;
                for (int l = 0; l < n; ++l) {
                    if (l == i || l == j) continue;
                    partial *= (x - nodes[static_cast<std::size_t>(l)]) /
                               (nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(l)]);
                }
                deriv += partial;
                value *= (x - nodes[static_cast<std::size_t>(j)]) / denom;
            }
            out.values(q, i) = value;
            out.derivs(q, i) = deriv;
        }
    }
    return out;
}

}  // namespace

BasisMatrices nodal_basis_matrices(const BasisSpec& spec, const std::vector<double>& eval_points)
{
    const int n = spec.n();
    const int k = static_cast<int>(eval_points.size());

    if (spec.variant == BasisVariant::polynomial)
        return lagrange_matrices(spec.points.coords, eval_points);

    // The RBF nodal basis expresses the cardinal functions in the chosen
    // (direct or stable) representation, solved once at the solution points.
    linalg::Matrix E(n, n);       // basis values at solution points
    linalg::Matrix Fv(k, n), Fd(k, n);  // basis values/derivs at eval points

    if (spec.variant == BasisVariant::rbf_direct) {
        E = rbf::alternant_matrix(spec.points.coords, spec.rbf);
        const double cond = linalg::condition_number_2(E);
        if (cond > 1e15)
            throw rbf::IllConditionedAlternant(cond);
        for (int q = 0; q < k; ++q) {
            const double x = eval_points[static_cast<std::size_t>(q)];
            for (int j = 0; j < n; ++j) {
                const double c = spec.rbf.centres[static_cast<std::size_t>(j)];
                Fv(q, j) = rbf::kernel_eval(spec.rbf.kernel, spec.rbf.eps, std::abs(x - c));
                Fd(q, j) = rbf::kernel_deriv_x(spec.rbf.kernel, spec.rbf.eps, x, c);
            }
        }
    } else {
        const rbf::StableBasis basis = rbf::stable_basis_build(spec.rbf.centres, spec.rbf.eps);
        for (int i = 0; i < n; ++i) {
            const auto vals = rbf::stable_basis_eval(basis, spec.points.coords[static_cast<std::size_t>(i)]);
            for (int m = 0; m < n; ++m)
                E(i, m) = vals[static_cast<std::size_t>(m)];
        }
        for (int q = 0; q < k; ++q) {
            const double x = eval_points[static_cast<std::size_t>(q)];
            const auto vals = rbf::stable_basis_eval(basis, x);
            const auto ders = rbf::stable_basis_deriv(basis, x);
            for (int m = 0; m < n; ++m) {
                Fv(q, m) = vals[static_cast<std::size_t>(m)];
                Fd(q, m) = ders[static_cast<std::size_t>(m)];
            }
        }
    }

    const linalg::Matrix Einv = linalg::invert(E);
    BasisMatrices out;
    out.values = Fv * Einv;
    out.derivs = Fd * Einv;
    return out;
}

ElementOperators build_operators(const BasisSpec& spec, int quad_order)
{
    const int n = spec.n();
    if (quad_order < 2 * n)
        throw linalg::ContractViolation("build_operators: quadrature order must be >= 2n");

    ElementOperators ops;
    ops.n = n;
    ops.quad_order = quad_order;

    const auto at_points = nodal_basis_matrices(spec, spec.points.coords);
    ops.D = at_points.derivs;

    const auto at_flux = nodal_basis_matrices(spec, {-1.0, 1.0});
    ops.P = at_flux.values;

    const Quadrature quad = quadrature(quad_order);
    const auto at_quad = nodal_basis_matrices(spec, quad.nodes);
    linalg::Vector w = Eigen::Map<const linalg::Vector>(quad.weights.data(),
                                                        static_cast<Eigen::Index>(quad.weights.size()));
    ops.M = at_quad.values.transpose() * w.asDiagonal() * at_quad.values;
    ops.Vq = at_quad.values;
    ops.L2_from_quad = linalg::invert(ops.M) * at_quad.values.transpose() * w.asDiagonal();

    ops.B = linalg::Matrix::Zero(2, 2);
    ops.B(0, 0) = -1.0;
    ops.B(1, 1) = 1.0;

    // The correction-function field is spanned by the degree n-1 polynomial
    // space on the same solution points regardless of the scheme basis; only
    // D, P, and M are swapped for RBF runs. Orthonormalise the polynomial
    // cardinal functions under the quadrature inner product; rows of R are
    // coefficients of xi_i in that cardinal basis. Modified Gram-Schmidt
    // with one reorthogonalisation pass.
    const auto poly_at_quad = lagrange_matrices(spec.points.coords, quad.nodes);
    const auto poly_at_flux = lagrange_matrices(spec.points.coords, {-1.0, 1.0});
    const linalg::Matrix M_corr =
        poly_at_quad.values.transpose() * w.asDiagonal() * poly_at_quad.values;

    linalg::Matrix R = linalg::Matrix::Identity(n, n);
    auto inner = [&](const linalg::Matrix& A, int i, int j) -> double {
        return (A.row(i) * M_corr * A.row(j).transpose()).value();
    };
    for (int i = 0; i < n; ++i) {
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < i; ++j)
                R.row(i) -= inner(R, j, i) * R.row(j);
        const double norm2 = inner(R, i, i);
        if (!(norm2 > 0.0) || std::sqrt(norm2) < 1e-12)
            throw std::runtime_error("build_operators: Gram-Schmidt breakdown (rank loss)");
        R.row(i) /= std::sqrt(norm2);
    }

    // Boundary traces of the orthonormal basis, with outward-normal signs:
    //   sigma_L,i = -xi_i(-1), sigma_R,i = +xi_i(+1).
    const linalg::Vector xi_left = R * poly_at_flux.values.row(0).transpose();
    const linalg::Vector xi_right = R * poly_at_flux.values.row(1).transpose();

    // C[s][f] = sum_i sigma_{f,i} xi_i(x_s); xi values at the solution
    // points are the rows of R (the nodal basis is cardinal there).
    ops.C = linalg::Matrix::Zero(n, 2);
    for (int s = 0; s < n; ++s) {
        double cl = 0.0, cr = 0.0;
        for (int i = 0; i < n; ++i) {
            cl += -xi_left(i) * R(i, s);
            cr += xi_right(i) * R(i, s);
        }
        ops.C(s, 0) = cl;
        ops.C(s, 1) = cr;
    }
    return ops;
}

void dump_operators(const ElementOperators& ops, std::ostream& os)
{
    os << "matrix,row,col,value\n";
    auto block = [&](const char* name, const linalg::Matrix& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                csv::write_row(os, name, static_cast<long>(i), static_cast<long>(j), m(i, j));
    };
    block("D", ops.D);
    block("P", ops.P);
    block("M", ops.M);
    block("C", ops.C);
    block("B", ops.B);
}

}  // namespace rbffr::element
