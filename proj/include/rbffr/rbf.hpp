#pragma once

#include <string>
#include <vector>

#include "rbffr/linalg.hpp"
#include "rbffr/nodes.hpp"

namespace rbffr::rbf {

enum class Kernel { GA, MQ, IQ, IMQ, W13 };

Kernel kernel_from_string(const std::string& name);
std::string to_string(Kernel k);

/// phi(r) for the chosen kernel. W13 ignores eps and vanishes for r >= 1.
double kernel_eval(Kernel kernel, double eps, double r);

/// d/dx phi(|x - c|), closed form; zero at x = c for every kernel.
double kernel_deriv_x(Kernel kernel, double eps, double x, double c);

struct RbfConfig {
    Kernel kernel = Kernel::GA;
    double eps = 1.0;
    std::vector<double> centres;
};

/// A[i][j] = phi(|x_i - c_j|).
linalg::Matrix alternant_matrix(const std::vector<double>& points, const RbfConfig& cfg);

class IllConditionedAlternant : public std::runtime_error {
public:
    explicit IllConditionedAlternant(double cond);
    double condition() const { return cond_; }

private:
    double cond_;
};

/// Expansion coefficients psi such that sum_j psi_j phi(|x_i - c_j|) = values[i].
/// Throws IllConditionedAlternant above cond 1e15; use the stable basis instead.
linalg::Vector interpolate_direct(const linalg::Vector& values,
                                  const std::vector<double>& points, const RbfConfig& cfg);

/// Stabilised flat-Gaussian basis spanning the same space as the direct
/// Gaussians at the given centres. Function m is
///   psi_m(x) = exp(-eps^2 x^2) * sum_j w[m][j] * T_m(2 eps^2 c_j x) / scale_m
/// where T_m(z) is the exponential tail starting at order m and row m of w
/// holds divided-difference weights that annihilate monomials below order m.
struct StableBasis {
    std::vector<double> centres;
    double eps = 1.0;
    linalg::Matrix weights;       // lower triangular, divided-difference rows
    std::vector<double> scales;   // max-abs of each raw function on [-1, 1]

    int n() const { return static_cast<int>(centres.size()); }
};

StableBasis stable_basis_build(const std::vector<double>& centres, double eps);

/// Values (or x-derivatives) of all n stabilised functions at x.
std::vector<double> stable_basis_eval(const StableBasis& basis, double x);
std::vector<double> stable_basis_deriv(const StableBasis& basis, double x);

enum class SweepMode { direct, stable };

struct ConditionRow {
    double eps;
    NodeKind layout;
    int n;
    SweepMode mode;
    double cond;
};

/// Condition number of the basis evaluation matrix at the solution points,
/// per layout and shape parameter.
std::vector<ConditionRow> condition_sweep(const std::vector<NodeKind>& layouts, int n,
                                          const std::vector<double>& eps_grid, SweepMode mode);

}  // namespace rbffr::rbf
