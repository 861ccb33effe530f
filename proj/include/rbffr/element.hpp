#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rbffr/linalg.hpp"
#include "rbffr/nodes.hpp"
#include "rbffr/rbf.hpp"

namespace rbffr::element {

enum class BasisVariant { polynomial, rbf_direct, rbf_ga };

BasisVariant basis_variant_from_string(const std::string& name);
std::string to_string(BasisVariant v);

/// Approximation-space descriptor. The nodal basis is cardinal at the
/// solution points; for RBF variants the centres may differ from them.
struct BasisSpec {
    BasisVariant variant = BasisVariant::polynomial;
    NodeSet points;          // solution points
    rbf::RbfConfig rbf;      // kernel/eps/centres; unused for polynomial

    static BasisSpec polynomial(NodeSet points);
    static BasisSpec rbf_direct(NodeSet points, rbf::RbfConfig cfg);
    static BasisSpec rbf_ga(NodeSet points, std::vector<double> centres, double eps);

    int n() const { return points.n(); }
};

/// V[k][i] = theta_i(eval_points[k]) and the x-derivative counterpart,
/// where theta_i is cardinal at the solution points.
struct BasisMatrices {
    linalg::Matrix values;
    linalg::Matrix derivs;
};

BasisMatrices nodal_basis_matrices(const BasisSpec& spec, const std::vector<double>& eval_points);

/// Precomputed reference-element matrices.
///   D: n x n differentiation at the solution points
///   P: 2 x n projection to the flux points (row 0 = -1, row 1 = +1)
///   M: n x n mass matrix under the build quadrature
///   C: n x 2 lifting (columns = dg_L/dx, dg_R/dx at the solution points)
///   B = diag(-1, 1)
struct ElementOperators {
    int n = 0;
    linalg::Matrix D;
    linalg::Matrix P;
    linalg::Matrix M;
    linalg::Matrix C;
    linalg::Matrix B;
    /// Vq: quad_order x n basis values at the build-quadrature nodes.
    /// L2_from_quad = M^{-1} Vq^T W maps quadrature-point samples to the
    /// nodal L2 projection; used to de-alias nonlinear fluxes.
    linalg::Matrix Vq;
    linalg::Matrix L2_from_quad;
    int quad_order = 0;
};

ElementOperators build_operators(const BasisSpec& spec, int quad_order = 50);

/// Debug dump, CSV blocks with header `matrix,row,col,value`.
void dump_operators(const ElementOperators& ops, std::ostream& os);

}  // namespace rbffr::element
