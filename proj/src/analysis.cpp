#include "rbffr/analysis.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace rbffr::analysis {

using std::complex;
using namespace std::complex_literals;

DefectiveModeError::DefectiveModeError(double cond)
    : std::runtime_error("defective mode: eigenvector matrix condition " + std::to_string(cond)),
      cond_(cond) {}

std::vector<double> default_k_hat_grid(int points)
{
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = std::numbers::pi * (i + 1.0) / points;
    return grid;
}

FourierConfig make_fourier_config(const element::BasisSpec& spec, double alpha,
                                  std::vector<double> k_hat_grid)
{
    FourierConfig cfg;
    cfg.ops = element::build_operators(spec);
    cfg.points = spec.points.coords;
    cfg.alpha = alpha;
    cfg.k_hat_grid = std::move(k_hat_grid);
    return cfg;
}

linalg::ComplexMatrix assemble_Q(const FourierConfig& cfg, double k)
{
    const auto& ops = cfg.ops;
    const double a = cfg.alpha;

    linalg::Matrix k_minus = linalg::Matrix::Zero(2, 2);
    k_minus(1, 0) = 1.0 - a;
    linalg::Matrix k_zero = linalg::Matrix::Zero(2, 2);
    k_zero(0, 0) = -a;
    k_zero(1, 1) = -(1.0 - a);
    linalg::Matrix k_plus = linalg::Matrix::Zero(2, 2);
    k_plus(0, 1) = a;

    const linalg::Matrix c_minus = ops.C * k_minus * ops.P;
    const linalg::Matrix c_zero = ops.D + ops.C * k_zero * ops.P;
    const linalg::Matrix c_plus = ops.C * k_plus * ops.P;

    // The K matrices couple C_- to the downstream neighbour and C_+ to the
    // upstream one, so with the Bloch ansatz u_j = v exp(ik j h) the phase
    // factors attach as exp(+ikh) and exp(-ikh) respectively.
    const complex<double> downstream = std::exp(1i * k * cfg.h);
    const complex<double> upstream = std::exp(-1i * k * cfg.h);
    return -(2.0 / cfg.h) *
           (c_minus.cast<complex<double>>() * downstream + c_zero.cast<complex<double>>() +
            upstream * c_plus.cast<complex<double>>());
}

namespace {

linalg::ComplexVector bloch_vector(const FourierConfig& cfg, double k)
{
    const int n = cfg.ops.n;
    linalg::ComplexVector v(n);
    for (int s = 0; s < n; ++s)
        v(s) = std::exp(1i * k * (cfg.h / 2.0) * (cfg.points[static_cast<std::size_t>(s)] + 1.0));
    return v;
}

// Index of the mode whose eigenvector best overlaps the nodal Bloch vector.
int physical_mode_index(const linalg::EigenDecomposition& eig, const linalg::ComplexVector& v)
{
    int best = 0;
    double best_overlap = -1.0;
    double best_im = std::numeric_limits<double>::infinity();
    for (int m = 0; m < eig.eigenvalues.size(); ++m) {
        const auto w = eig.eigenvectors.col(m);
        const double overlap = std::abs(w.dot(v)) / (w.norm() * v.norm());
        const double im = std::abs(eig.eigenvalues(m).imag());
        if (overlap > best_overlap + 1e-12 ||
            (std::abs(overlap - best_overlap) <= 1e-12 && im < best_im)) {
            best = m;
            best_overlap = overlap;
            best_im = im;
        }
    }
    return best;
}

}  // namespace

ModalResult dispersion_dissipation(const FourierConfig& cfg)
{
    const int n = cfg.ops.n;
    ModalResult result;
    result.k_hat = cfg.k_hat_grid;
    result.modes.reserve(cfg.k_hat_grid.size());

    for (double k_hat : cfg.k_hat_grid) {
        const double k = k_hat * n / cfg.h;
        const linalg::ComplexMatrix Q = assemble_Q(cfg, k);
        const auto eig = linalg::eig_complex((1i * Q).eval());
        const int phys = physical_mode_index(eig, bloch_vector(cfg, k));

        std::vector<Mode> modes;
        modes.reserve(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
            Mode mode;
            mode.k_hat = k_hat;
            mode.omega_hat = eig.eigenvalues(m) * cfg.h / static_cast<double>(n);
            mode.physical = (m == phys);
            modes.push_back(mode);
        }
        result.modes.push_back(std::move(modes));
    }
    return result;
}

std::vector<DissipationRow> max_dissipation_sweep(const std::vector<double>& eps_grid,
                                                  const std::vector<int>& n_s_list,
                                                  NodeKind layout, double alpha)
{
    std::vector<DissipationRow> rows;
    for (int n_s : n_s_list) {
        const NodeSet pts = node_set(layout, n_s);
        for (double eps : eps_grid) {
            const auto spec = element::BasisSpec::rbf_ga(pts, pts.coords, eps);
            const FourierConfig cfg = make_fourier_config(spec, alpha, default_k_hat_grid());
            const ModalResult modal = dispersion_dissipation(cfg);
            double diss_max = -std::numeric_limits<double>::infinity();
            for (const auto& per_k : modal.modes)
                for (const auto& mode : per_k)
                    if (mode.physical)
                        diss_max = std::max(diss_max, mode.omega_hat.imag() / mode.k_hat);
            rows.push_back({eps, n_s, diss_max});
        }
    }
    return rows;
}

CombinedEntry combined_analysis(const FourierConfig& cfg, const element::BasisSpec& spec,
                                double k_hat, double t)
{
    const int n = cfg.ops.n;
    const double k = k_hat * n / cfg.h;
    const linalg::ComplexMatrix Q = assemble_Q(cfg, k);
    const auto eig = linalg::eig_complex((1i * Q).eval());  // eigenvalues are omega'

    const double w_cond = linalg::condition_number_2(eig.eigenvectors);
    if (w_cond > 1e12)
        throw DefectiveModeError(w_cond);

    const linalg::ComplexVector u0 = bloch_vector(cfg, k);
    const linalg::ComplexVector beta = linalg::solve_dense(eig.eigenvectors, u0);
    linalg::ComplexVector propagated(n);
    for (int m = 0; m < n; ++m)
        propagated(m) = std::exp(-1i * t * eig.eigenvalues(m)) * beta(m);
    const linalg::ComplexVector u_tilde = eig.eigenvectors * propagated;

    // Exact comparator: the advected Bloch wave at unit speed.
    linalg::ComplexVector u_exact(n);
    for (int s = 0; s < n; ++s)
        u_exact(s) = std::exp(
            1i * k * ((cfg.h / 2.0) * (cfg.points[static_cast<std::size_t>(s)] + 1.0) - t));

    // L2 norms through the scheme's own basis: |v|^2 = v^H M v.
    const linalg::ComplexMatrix M = cfg.ops.M.cast<complex<double>>();
    const double norm_tilde = std::sqrt(std::abs((u_tilde.adjoint() * M * u_tilde).value()));
    const double norm_exact = std::sqrt(std::abs((u_exact.adjoint() * M * u_exact).value()));

    CombinedEntry entry;
    entry.k_hat = k_hat;
    entry.t = t;
    entry.amplification = norm_tilde / norm_exact;
    entry.phase_diff = std::arg((u_tilde.adjoint() * M * u_exact).value());
    (void)spec;
    return entry;
}

SbpReport sbp_report(const element::ElementOperators& ops)
{
    const linalg::Matrix lhs = linalg::Matrix::Ones(1, ops.n) * ops.M * ops.C;
    const linalg::Matrix rhs = linalg::Matrix::Ones(1, ops.n) * ops.P.transpose() * ops.B;
    SbpReport report;
    report.conservation_error = (lhs - rhs).norm();

    const linalg::Matrix lift = linalg::invert(ops.M) * ops.P.transpose() * ops.B;
    Eigen::JacobiSVD<linalg::Matrix> svd(lift - ops.C);
    report.stability_error = svd.singularValues()(0);
    return report;
}

}  // namespace rbffr::analysis
