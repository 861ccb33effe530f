#pragma once

#include <vector>

#include "rbffr/element.hpp"
#include "rbffr/linalg.hpp"

namespace rbffr::analysis {

/// Wavenumber normalisation used throughout: k_hat = k h / n_s with h = 2,
/// so the plotted range (0, pi] spans one wave per solution point.
struct FourierConfig {
    element::ElementOperators ops;
    std::vector<double> points;  // solution-point reference coordinates
    double alpha = 1.0;          // interface upwinding parameter
    double h = 2.0;              // element width
    std::vector<double> k_hat_grid;  // strictly positive
};

FourierConfig make_fourier_config(const element::BasisSpec& spec, double alpha,
                                  std::vector<double> k_hat_grid);

std::vector<double> default_k_hat_grid(int points = 256);

/// Semi-discrete symbol Q(k) = -(2/h)(C_- e^{-ikh} + C_0 + e^{ikh} C_+).
linalg::ComplexMatrix assemble_Q(const FourierConfig& cfg, double k);

struct Mode {
    double k_hat;
    std::complex<double> omega_hat;  // normalised modified frequency
    bool physical;
};

struct ModalResult {
    std::vector<double> k_hat;               // grid
    std::vector<std::vector<Mode>> modes;    // n_s modes per wavenumber
};

/// Eigenmodes of iQ over the k_hat grid. The physical mode maximises the
/// normalised overlap with the nodal Bloch vector; ties break toward the
/// smaller |Im omega|.
ModalResult dispersion_dissipation(const FourierConfig& cfg);

struct DissipationRow {
    double eps;
    int n_s;
    double diss_max;  // max over k_hat of Im(c') = Im(omega_hat)/k_hat, physical mode
};

std::vector<DissipationRow> max_dissipation_sweep(const std::vector<double>& eps_grid,
                                                  const std::vector<int>& n_s_list,
                                                  NodeKind layout, double alpha = 1.0);

struct CombinedEntry {
    double k_hat;
    double t;
    double amplification;  // G
    double phase_diff;     // delta phi
};

class DefectiveModeError : public std::runtime_error {
public:
    explicit DefectiveModeError(double cond);
    double condition() const { return cond_; }

private:
    double cond_;
};

/// Combined (all-mode) amplification and phase difference at a single
/// wavenumber and time, with L2 norms taken through the scheme's own basis.
CombinedEntry combined_analysis(const FourierConfig& cfg, const element::BasisSpec& spec,
                                double k_hat, double t);

struct SbpReport {
    double conservation_error;  // ||1^T M C - 1^T P^T B||_2
    double stability_error;     // ||M^{-1} P^T B - C||_2
};

SbpReport sbp_report(const element::ElementOperators& ops);

}  // namespace rbffr::analysis
