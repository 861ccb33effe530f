#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "rbffr/analysis.hpp"

using namespace rbffr;
using element::BasisSpec;

namespace {

analysis::FourierConfig poly_config(int n, double alpha)
{
    const auto spec = BasisSpec::polynomial(node_set(NodeKind::legendre, n));
    return analysis::make_fourier_config(spec, alpha, analysis::default_k_hat_grid());
}

}  // namespace

TEST_CASE("default k_hat grid covers (0, pi]")
{
    const auto grid = analysis::default_k_hat_grid();
    REQUIRE(grid.size() == 256);
    CHECK(grid.front() > 0.0);
    CHECK(grid.back() == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    for (std::size_t i = 1; i < grid.size(); ++i)
        CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("Q annihilates the constant mode at k = 0 (polynomial)")
{
    for (double alpha : {0.0, 0.5, 1.0}) {
        const auto cfg = poly_config(4, alpha);
        const auto Q = analysis::assemble_Q(cfg, 0.0);
        const linalg::ComplexVector ones = linalg::ComplexVector::Ones(4);
        CHECK((Q * ones).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("central interfaces are energy neutral: eigenvalues of iQ are real")
{
    for (int n : {3, 4}) {
        const auto cfg = poly_config(n, 0.5);
        for (double k_hat : {0.3, 1.1, 2.5, 3.1}) {
            const double k = k_hat * n / cfg.h;
            const auto Q = analysis::assemble_Q(cfg, k);
            const auto eig = linalg::eig_complex(
                (std::complex<double>(0.0, 1.0) * Q).eval());
            for (int m = 0; m < n; ++m)
                CHECK(std::abs(eig.eigenvalues(m).imag()) < 1e-10);
        }
    }
}

TEST_CASE("symbol symmetry: Q(-k) is the conjugate of Q(k)")
{
    const auto cfg = poly_config(3, 0.8);
    for (double k : {0.4, 1.7}) {
        const auto Qp = analysis::assemble_Q(cfg, k);
        const auto Qm = analysis::assemble_Q(cfg, -k);
        CHECK((Qm - Qp.conjugate()).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("upwind polynomial dispersion: consistent and non-amplifying")
{
    const auto cfg = poly_config(3, 1.0);
    const auto modal = analysis::dispersion_dissipation(cfg);
    REQUIRE(modal.modes.size() == cfg.k_hat_grid.size());

    for (std::size_t i = 0; i < modal.modes.size(); ++i) {
        REQUIRE(modal.modes[i].size() == 3);
        int physical_count = 0;
        for (const auto& mode : modal.modes[i]) {
            physical_count += mode.physical ? 1 : 0;
            // No growing mode anywhere on the grid.
            CHECK(mode.omega_hat.imag() / mode.k_hat <= 1e-10);
            if (mode.physical && mode.k_hat <= 0.2 * std::numbers::pi)
                CHECK(mode.omega_hat.real() ==
                      doctest::Approx(mode.k_hat).epsilon(0.01));
            if (mode.physical && mode.k_hat <= 0.05 * std::numbers::pi)
                CHECK(std::abs(mode.omega_hat.imag() / mode.k_hat) < 1e-3);
        }
        CHECK(physical_count == 1);
    }
}

TEST_CASE("GA at large eps develops a growing mode")
{
    const auto pts = node_set(NodeKind::legendre, 3);
    const auto spec = BasisSpec::rbf_ga(pts, pts.coords, 1.5);
    const auto cfg = analysis::make_fourier_config(spec, 1.0, analysis::default_k_hat_grid());
    const auto modal = analysis::dispersion_dissipation(cfg);
    double worst = -1e300;
    for (const auto& per_k : modal.modes)
        for (const auto& mode : per_k)
            if (mode.physical)
                worst = std::max(worst, mode.omega_hat.imag() / mode.k_hat);
    CHECK(worst > 0.0);
}

TEST_CASE("max dissipation sweep trends")
{
    const auto rows = analysis::max_dissipation_sweep({0.01, 0.5, 1.5}, {3},
                                                      NodeKind::legendre);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].diss_max <= 1e-8);            // stable flat limit
    CHECK(rows[2].diss_max > rows[0].diss_max); // instability grows with eps
    CHECK(rows[2].diss_max > 0.0);
}

TEST_CASE("proximity-matched eigenvalue tracks are continuous along the grid")
{
    const auto cfg = poly_config(4, 1.0);
    const auto modal = analysis::dispersion_dissipation(cfg);
    const double dk = cfg.k_hat_grid[1] - cfg.k_hat_grid[0];

    std::vector<std::complex<double>> tracks;
    for (const auto& mode : modal.modes.front())
        tracks.push_back(mode.omega_hat);

    for (std::size_t step = 1; step < modal.modes.size(); ++step) {
        std::vector<std::complex<double>> current;
        for (const auto& mode : modal.modes[step])
            current.push_back(mode.omega_hat);
        // Greedy proximity matching of the new eigenvalues to the tracks.
        std::vector<bool> used(current.size(), false);
        for (auto& track : tracks) {
            double best = 1e300;
            std::size_t pick = 0;
            for (std::size_t m = 0; m < current.size(); ++m) {
                if (used[m])
                    continue;
                const double d = std::abs(current[m] - track);
                if (d < best) {
                    best = d;
                    pick = m;
                }
            }
            used[pick] = true;
            // Eigenvalues of the symbol move at O(dk) along the grid.
            CHECK(best < 30.0 * dk);
            track = current[pick];
        }
    }
}

TEST_CASE("combined analysis at t = 0 is the identity")
{
    const auto spec = BasisSpec::polynomial(node_set(NodeKind::legendre, 3));
    const auto cfg = analysis::make_fourier_config(spec, 1.0, analysis::default_k_hat_grid());
    for (double k_hat : {0.2, 1.0, 2.8}) {
        const auto entry = analysis::combined_analysis(cfg, spec, k_hat, 0.0);
        CHECK(entry.amplification == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(entry.phase_diff) < 1e-12);
    }
}

TEST_CASE("combined analysis agrees with the physical mode at small k_hat")
{
    const auto spec = BasisSpec::polynomial(node_set(NodeKind::legendre, 3));
    const double k_hat = 0.05 * std::numbers::pi;
    const auto cfg = analysis::make_fourier_config(spec, 1.0, {k_hat});
    const auto modal = analysis::dispersion_dissipation(cfg);
    std::complex<double> omega_hat;
    for (const auto& mode : modal.modes.front())
        if (mode.physical)
            omega_hat = mode.omega_hat;

    const double t = 1.0;
    const double n = 3.0;
    const double k = k_hat * n / 2.0;
    const std::complex<double> omega = omega_hat * n / 2.0;  // un-normalised
    const auto entry = analysis::combined_analysis(cfg, spec, k_hat, t);

    const double g_pred = std::exp(omega.imag() * t);
    const double dphi_pred = (omega.real() - k) * t;
    CHECK(entry.amplification == doctest::Approx(g_pred).epsilon(0.1));
    if (std::abs(dphi_pred) > 1e-12)
        CHECK(entry.phase_diff == doctest::Approx(dphi_pred).epsilon(0.1).scale(1e-6));
}

TEST_CASE("upwind polynomial combined amplification never exceeds one")
{
    const auto spec = BasisSpec::polynomial(node_set(NodeKind::legendre, 3));
    const auto cfg = analysis::make_fourier_config(spec, 1.0,
                                                   analysis::default_k_hat_grid(32));
    for (double t : {1.0, 2.0})
        for (double k_hat : cfg.k_hat_grid)
            CHECK(analysis::combined_analysis(cfg, spec, k_hat, t).amplification <=
                  1.0 + 1e-10);
}

TEST_CASE("GA eps = 0.5 dissipates less than polynomial at high wavenumbers")
{
    const auto pts = node_set(NodeKind::legendre, 3);
    const auto poly_spec = BasisSpec::polynomial(pts);
    const auto ga_spec = BasisSpec::rbf_ga(pts, pts.coords, 0.5);
    const auto grid = analysis::default_k_hat_grid(32);
    const auto poly_cfg = analysis::make_fourier_config(poly_spec, 1.0, grid);
    const auto ga_cfg = analysis::make_fourier_config(ga_spec, 1.0, grid);
    for (std::size_t i = grid.size() / 2; i < grid.size(); ++i) {
        const double g_poly =
            analysis::combined_analysis(poly_cfg, poly_spec, grid[i], 1.0).amplification;
        const double g_ga =
            analysis::combined_analysis(ga_cfg, ga_spec, grid[i], 1.0).amplification;
        // The trend holds up to one ~0.1% crossing near 3 pi / 4.
        CHECK(g_ga >= g_poly - 5e-3);
    }
}

TEST_CASE("sbp_report: polynomial operators satisfy both lemmas")
{
    for (NodeKind kind : {NodeKind::legendre, NodeKind::lobatto, NodeKind::chebyshev,
                          NodeKind::uniform_full, NodeKind::uniform_internal}) {
        const auto ops = element::build_operators(BasisSpec::polynomial(node_set(kind, 4)));
        const auto report = analysis::sbp_report(ops);
        CHECK(report.conservation_error < 1e-12);
        CHECK(report.stability_error < 1e-12);
    }
}

TEST_CASE("sbp_report: GA errors shrink monotonically with eps")
{
    const auto pts = node_set(NodeKind::legendre, 4);
    double prev_cons = 1e300, prev_stab = 1e300;
    for (double eps : {1.0, 0.5, 0.25, 0.1, 0.05}) {
        const auto ops = element::build_operators(BasisSpec::rbf_ga(pts, pts.coords, eps));
        const auto report = analysis::sbp_report(ops);
        CHECK(report.conservation_error < prev_cons);
        CHECK(report.stability_error < prev_stab);
        prev_cons = report.conservation_error;
        prev_stab = report.stability_error;
    }
}
