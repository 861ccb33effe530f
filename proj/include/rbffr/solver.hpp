#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rbffr/element.hpp"
#include "rbffr/linalg.hpp"

namespace rbffr::solver {

/// Periodic uniform 1D mesh; element j covers [x_min + j h, x_min + (j+1) h].
struct Mesh1D {
    double x_min = 0.0;
    double x_max = 1.0;
    int elements = 2;

    double h() const { return (x_max - x_min) / elements; }
    double jacobian() const { return 0.5 * h(); }
};

enum class PdeKind { advection_diffusion, burgers };

struct PdeParams {
    PdeKind kind = PdeKind::advection_diffusion;
    double a = 1.0;     // advection speed (ignored by burgers)
    double mu = 0.0;    // diffusion coefficient
    double alpha = 1.0; // interface upwinding parameter in [0, 1]
};

/// Per-element nodal field; row j holds element j's solution-point values.
struct SolutionState {
    Mesh1D mesh;
    element::ElementOperators ops;
    linalg::Matrix u;  // elements x n

    /// Physical coordinate of solution point i in element j.
    double x_of(int j, int i, const std::vector<double>& ref) const
    {
        return mesh.x_min + (j + 0.5 * (ref[static_cast<std::size_t>(i)] + 1.0)) * mesh.h();
    }
};

class BlowUpError : public std::runtime_error {
public:
    BlowUpError(std::size_t step);
    std::size_t step() const { return step_; }

private:
    std::size_t step_;
};

linalg::Matrix rhs_advection_diffusion(const SolutionState& state, const PdeParams& params);
linalg::Matrix rhs_burgers(const SolutionState& state, const PdeParams& params);
linalg::Matrix rhs(const SolutionState& state, const PdeParams& params);

using RhsFn = std::function<linalg::Matrix(const SolutionState&)>;

/// One classical four-stage Runge-Kutta step.
void rk4_step(SolutionState& state, const RhsFn& rhs_fn, double dt);

struct RunConfig {
    Mesh1D mesh;
    element::BasisSpec spec;
    PdeParams params;
    double t_end = 0.0;
    double cfl = 0.4;
    double cfl_diffusive = 0.4;
};

/// The dt rule: cfl*h/(lambda*(2n+1)) with a diffusive cap when mu > 0.
double time_step(const RunConfig& config, double u_max);

/// Integrate from the sampled initial condition to t_end; full steps plus a
/// final partial step that lands exactly on t_end.
SolutionState run_case(const RunConfig& config, const std::function<double(double)>& initial,
                       double* dt_used = nullptr);

enum class ExactCase { sine_adv, gaussian_adv_diff };

double exact_solution(ExactCase which, double x, double t, const PdeParams& params);

struct ErrorNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
};

/// Point-mean norms of u - exact over all solution points; ref_coords are
/// the reference coordinates of the solution points.
ErrorNorms error_norms(const SolutionState& state, const std::vector<double>& ref_coords,
                       const std::function<double(double)>& exact_at);

/// Values at the n offset-uniform reference points per element; the output
/// is globally equispaced with length N*n.
std::vector<double> sample_equispaced(const SolutionState& state, const element::BasisSpec& spec);

struct BurgersEnsembleConfig {
    double rho = 0.1;
    int k_max = 2048;
    double t_end = 0.1;
    double mu = 2e-3;
    std::vector<std::uint64_t> seeds;
};

/// E0(k) = 2/(3 sqrt(pi) rho) (k rho)^4 exp(-(k rho)^2).
double burgers_spectrum_e0(double k, double rho);

/// Random-phase field synthesised from the prescribed spectrum, sampled at
/// the solution points. Same seed gives a bit-identical field.
SolutionState burgers_initial_field(const BurgersEnsembleConfig& cfg, std::uint64_t seed,
                                    const Mesh1D& mesh, const element::BasisSpec& spec);

/// One-sided energy spectrum averaged across runs; entry f of the result is
/// E(f) for integer wavenumbers f = 0 .. L/2.
std::vector<double> energy_spectrum(const std::vector<std::vector<double>>& runs);

/// Advance an existing state in place to t_end (full steps plus a final
/// partial step). Returns the dt used for the full steps.
double integrate(SolutionState& state, const element::BasisSpec& spec, const PdeParams& params,
                 double t_end, double cfl = 0.4, double cfl_diffusive = 0.4);

struct EnsembleSpectra {
    std::vector<double> initial;        // averaged spectrum of the initial fields
    std::vector<double> evolved;        // averaged spectrum at t_end
    std::vector<double> dt_used;        // per-seed dt
};

/// Run the random-phase Burgers ensemble over cfg.seeds and average the
/// equispaced-sample spectra. Seeds may be processed on several threads; the
/// reduction is ordered by seed index, so the result is byte-identical for
/// any thread count.
EnsembleSpectra burgers_ensemble(const BurgersEnsembleConfig& cfg, const Mesh1D& mesh,
                                 const element::BasisSpec& spec, int threads = 1);

}  // namespace rbffr::solver
