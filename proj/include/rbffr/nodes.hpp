#pragma once

#include <string>
#include <vector>

namespace rbffr {

enum class NodeKind { legendre, lobatto, chebyshev, uniform_full, uniform_internal };

/// Ordered reference coordinates in [-1, 1], strictly increasing and
/// symmetric about 0.
struct NodeSet {
    NodeKind kind;
    std::vector<double> coords;

    int n() const { return static_cast<int>(coords.size()); }
};

NodeSet node_set(NodeKind kind, int n);

NodeKind node_kind_from_string(const std::string& name);
std::string to_string(NodeKind kind);

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for polynomials
/// through degree 2*order - 1.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};

Quadrature quadrature(int order);

}  // namespace rbffr
