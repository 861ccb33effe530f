#include "rbffr/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rbffr::rbf {

Kernel kernel_from_string(const std::string& name)
{
    if (name == "ga" || name == "gaussian") return Kernel::GA;
    if (name == "mq") return Kernel::MQ;
    if (name == "iq") return Kernel::IQ;
    if (name == "imq") return Kernel::IMQ;
    if (name == "w13") return Kernel::W13;
    throw linalg::ContractViolation("unknown kernel: " + name);
}

std::string to_string(Kernel k)
{
    switch (k) {
        case Kernel::GA: return "ga";
        case Kernel::MQ: return "mq";
        case Kernel::IQ: return "iq";
        case Kernel::IMQ: return "imq";
        case Kernel::W13: return "w13";
    }
    return "?";
}

double kernel_eval(Kernel kernel, double eps, double r)
{
    if (r < 0.0)
        throw linalg::ContractViolation("kernel_eval: radius must be non-negative");
    const double e2r2 = eps * eps * r * r;
    switch (kernel) {
        case Kernel::GA: return std::exp(-e2r2);
        case Kernel::MQ: return std::sqrt(1.0 + e2r2);
        case Kernel::IQ: return 1.0 / (1.0 + e2r2);
        case Kernel::IMQ: return 1.0 / std::sqrt(1.0 + e2r2);
        case Kernel::W13: {
            if (r >= 1.0) return 0.0;
            const double s = 1.0 - r;
            const double s2 = s * s;
            return s2 * s2 * (4.0 * r + 1.0);
        }
    }
    return 0.0;
}

double kernel_deriv_x(Kernel kernel, double eps, double x, double c)
{
    const double d = x - c;
    const double r = std::abs(d);
    const double e2 = eps * eps;
    switch (kernel) {
        case Kernel::GA: return -2.0 * e2 * d * std::exp(-e2 * d * d);
        case Kernel::MQ: return e2 * d / std::sqrt(1.0 + e2 * d * d);
        case Kernel::IQ: {
            const double q = 1.0 + e2 * d * d;
            return -2.0 * e2 * d / (q * q);
        }
        case Kernel::IMQ: {
            const double q = 1.0 + e2 * d * d;
            return -e2 * d / (q * std::sqrt(q));
        }
        case Kernel::W13: {
            // d/dr [(1-r)^4 (4r+1)] = -20 r (1-r)^3, with dr/dx = sign(d)
            if (r >= 1.0) return 0.0;
            const double s = 1.0 - r;
            const double dphidr = -20.0 * r * s * s * s;
            return d >= 0.0 ? dphidr : -dphidr;
        }
    }
    return 0.0;
}

linalg::Matrix alternant_matrix(const std::vector<double>& points, const RbfConfig& cfg)
{
    const auto n = points.size();
    if (n != cfg.centres.size())
        throw linalg::ContractViolation("alternant_matrix: points/centres size mismatch");
    linalg::Matrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                kernel_eval(cfg.kernel, cfg.eps, std::abs(points[i] - cfg.centres[j]));
    return A;
}

IllConditionedAlternant::IllConditionedAlternant(double cond)
    : std::runtime_error("ill-conditioned alternant (cond " + std::to_string(cond) +
                         "); use the stable basis"),
      cond_(cond) {}

linalg::Vector interpolate_direct(const linalg::Vector& values,
                                  const std::vector<double>& points, const RbfConfig& cfg)
{
    if (static_cast<std::size_t>(values.size()) != points.size())
        throw linalg::ContractViolation("interpolate_direct: values/points size mismatch");
    const linalg::Matrix A = alternant_matrix(points, cfg);
    const double cond = linalg::condition_number_2(A);
    if (cond > 1e15)
        throw IllConditionedAlternant(cond);
    return linalg::solve_dense(A, values);
}

namespace {

// Tail of the exponential series, T_m(z) = sum_{k>=m} z^k / k!, summed by its
// own recurrence starting at z^m/m!. Never computed as exp(z) minus a head.
double exp_tail(int m, double z)
{
    if (z == 0.0)
        return m == 0 ? 1.0 : 0.0;
    double term = 1.0;
    for (int k = 1; k <= m; ++k)
        term *= z / k;
    double sum = term;
    for (int k = m + 1; k < m + 400; ++k) {
        term *= z / k;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

linalg::Matrix divided_difference_weights(const std::vector<double>& centres)
{
    const int n = static_cast<int>(centres.size());
    linalg::Matrix w = linalg::Matrix::Zero(n, n);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j <= m; ++j) {
            double denom = 1.0;
            for (int l = 0; l <= m; ++l) {
                if (l == j) continue;
                denom *= centres[j] - centres[l];
            }
            w(m, j) = 1.0 / denom;
        }
    }
    return w;
}

std::vector<double> raw_values(const StableBasis& basis, double x)
{
    const int n = basis.n();
    const double envelope = std::exp(-basis.eps * basis.eps * x * x);
    const double two_e2x = 2.0 * basis.eps * basis.eps * x;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int j = 0; j <= m; ++j)
            s += basis.weights(m, j) * exp_tail(m, two_e2x * basis.centres[static_cast<std::size_t>(j)]);
        out[static_cast<std::size_t>(m)] = envelope * s;
    }
    return out;
}

}  // namespace

StableBasis stable_basis_build(const std::vector<double>& centres, double eps)
{
    if (eps <= 0.0)
        throw linalg::ContractViolation("stable_basis_build: eps must be positive");
    for (std::size_t i = 0; i < centres.size(); ++i)
        for (std::size_t j = i + 1; j < centres.size(); ++j)
            if (centres[i] == centres[j])
                throw linalg::ContractViolation("stable_basis_build: duplicate centres");

    StableBasis basis;
    basis.centres = centres;
    basis.eps = eps;
    basis.weights = divided_difference_weights(centres);
    basis.scales.assign(centres.size(), 1.0);

    // Max-abs normalisation on [-1, 1]; a diagonal rescaling leaves all FR
    // operators unchanged.
    constexpr int kScanPoints = 2001;
    std::vector<double> peak(centres.size(), 0.0);
    for (int q = 0; q < kScanPoints; ++q) {
        const double x = -1.0 + 2.0 * q / (kScanPoints - 1);
        const auto vals = raw_values(basis, x);
        for (std::size_t m = 0; m < vals.size(); ++m)
            peak[m] = std::max(peak[m], std::abs(vals[m]));
    }
    basis.scales = peak;
    return basis;
}

std::vector<double> stable_basis_eval(const StableBasis& basis, double x)
{
    auto vals = raw_values(basis, x);
    for (std::size_t m = 0; m < vals.size(); ++m)
        vals[m] /= basis.scales[m];
    return vals;
}

std::vector<double> stable_basis_deriv(const StableBasis& basis, double x)
{
    const int n = basis.n();
    const double e2 = basis.eps * basis.eps;
    const double envelope = std::exp(-e2 * x * x);
    const double two_e2x = 2.0 * e2 * x;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        double s = 0.0;
        double ds = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double c = basis.centres[static_cast<std::size_t>(j)];
            const double wj = basis.weights(m, j);
            s += wj * exp_tail(m, two_e2x * c);
            // d/dz T_m = T_{m-1}; for m = 0 the tail is exp itself.
            ds += wj * 2.0 * e2 * c * exp_tail(std::max(m - 1, 0), two_e2x * c);
        }
        out[static_cast<std::size_t>(m)] =
            envelope * (ds - 2.0 * e2 * x * s) / basis.scales[static_cast<std::size_t>(m)];
    }
    return out;
}

std::vector<ConditionRow> condition_sweep(const std::vector<NodeKind>& layouts, int n,
                                          const std::vector<double>& eps_grid, SweepMode mode)
{
    std::vector<ConditionRow> rows;
    for (NodeKind layout : layouts) {
        const NodeSet pts = node_set(layout, n);
        for (double eps : eps_grid) {
            if (eps <= 0.0)
                throw linalg::ContractViolation("condition_sweep: eps grid must be positive");
            double cond;
            if (mode == SweepMode::direct) {
                RbfConfig cfg{Kernel::GA, eps, pts.coords};
                cond = linalg::condition_number_2(alternant_matrix(pts.coords, cfg));
            } else {
                const StableBasis basis = stable_basis_build(pts.coords, eps);
                linalg::Matrix E(n, n);
                for (int i = 0; i < n; ++i) {
                    const auto vals = stable_basis_eval(basis, pts.coords[static_cast<std::size_t>(i)]);
                    for (int m = 0; m < n; ++m)
                        E(i, m) = vals[static_cast<std::size_t>(m)];
                }
                cond = linalg::condition_number_2(E);
            }
            rows.push_back({eps, layout, n, mode, cond});
        }
    }
    return rows;
}

}  // namespace rbffr::rbf
