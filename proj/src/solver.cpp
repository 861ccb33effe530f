#include "rbffr/solver.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace rbffr::solver {

BlowUpError::BlowUpError(std::size_t step)
    : std::runtime_error("blow-up detected at step " + std::to_string(step)), step_(step) {}

namespace {

linalg::Matrix rhs_pipeline(const SolutionState& state, const PdeParams& params)
{
    const auto& ops = state.ops;
    const linalg::Matrix& U = state.u;
    const int N = static_cast<int>(U.rows());
    const double h = state.mesh.h();
    const double scale = 2.0 / h;
    const bool burgers = params.kind == PdeKind::burgers;

    // Projected states at the flux points: column 0 = left face, 1 = right.
    const linalg::Matrix uF = U * ops.P.transpose();

    // Interface i sits between element i-1 (its right face) and element i
    // (its left face), periodic wrap.
    linalg::Vector u_common(N);
    for (int i = 0; i < N; ++i) {
        const int prev = (i + N - 1) % N;
        u_common(i) = 0.5 * (uF(prev, 1) + uF(i, 0));
    }

    linalg::Matrix jump_u(N, 2);
    for (int i = 0; i < N; ++i) {
        jump_u(i, 0) = u_common(i) - uF(i, 0);
        jump_u(i, 1) = u_common((i + 1) % N) - uF(i, 1);
    }

    const linalg::Matrix grad = scale * (U * ops.D.transpose() + jump_u * ops.C.transpose());

    linalg::Matrix flux(N, ops.n);
    if (burgers) {
        // De-aliased convective flux: evaluate u at the build-quadrature
        // points, square there, and L2-project back onto the basis. The
        // collocated u^2/2 aliases badly on under-resolved fields and
        // blows up on non-Gauss point layouts.
        const linalg::Matrix uQ = U * ops.Vq.transpose();
        flux = (0.5 * uQ.cwiseProduct(uQ)) * ops.L2_from_quad.transpose() - params.mu * grad;
    } else {
        flux = params.a * U - params.mu * grad;
    }

    const linalg::Matrix fF = flux * ops.P.transpose();
    const linalg::Matrix gradF = grad * ops.P.transpose();

    linalg::Vector f_common(N);
    for (int i = 0; i < N; ++i) {
        const int prev = (i + N - 1) % N;
        const double uL = uF(prev, 1);
        const double uR = uF(i, 0);
        double adv;
        if (burgers) {
            const double fL = 0.5 * uL * uL;
            const double fR = 0.5 * uR * uR;
            const double abar = 0.5 * (uL + uR);
            adv = 0.5 * (fL + fR) - 0.5 * std::abs(abar) * (uR - uL);
        } else {
            const double upwind = params.a >= 0.0 ? params.a * uL : params.a * uR;
            const double mean = 0.5 * (params.a * uL + params.a * uR);
            adv = params.alpha * upwind + (1.0 - params.alpha) * mean;
        }
        const double dif = -params.mu * 0.5 * (gradF(prev, 1) + gradF(i, 0));
        f_common(i) = adv + dif;
    }

    linalg::Matrix jump_f(N, 2);
    for (int i = 0; i < N; ++i) {
        jump_f(i, 0) = f_common(i) - fF(i, 0);
        jump_f(i, 1) = f_common((i + 1) % N) - fF(i, 1);
    }

    return -scale * (flux * ops.D.transpose() + jump_f * ops.C.transpose());
}

}  // namespace

linalg::Matrix rhs_advection_diffusion(const SolutionState& state, const PdeParams& params)
{
    PdeParams p = params;
    p.kind = PdeKind::advection_diffusion;
    return rhs_pipeline(state, p);
}

linalg::Matrix rhs_burgers(const SolutionState& state, const PdeParams& params)
{
    PdeParams p = params;
    p.kind = PdeKind::burgers;
    return rhs_pipeline(state, p);
}

linalg::Matrix rhs(const SolutionState& state, const PdeParams& params)
{
    return rhs_pipeline(state, params);
}

void rk4_step(SolutionState& state, const RhsFn& rhs_fn, double dt)
{
    const linalg::Matrix u0 = state.u;
    const linalg::Matrix k1 = rhs_fn(state);
    state.u = u0 + 0.5 * dt * k1;
    const linalg::Matrix k2 = rhs_fn(state);
    state.u = u0 + 0.5 * dt * k2;
    const linalg::Matrix k3 = rhs_fn(state);
    state.u = u0 + dt * k3;
    const linalg::Matrix k4 = rhs_fn(state);
    state.u = u0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double time_step(const RunConfig& config, double u_max)
{
    const int n = config.spec.n();
    const double h = config.mesh.h();
    const double lambda = std::max(std::abs(config.params.a), u_max);
    double dt = config.cfl * h / (std::max(lambda, 1e-12) * (2.0 * n + 1.0));
    if (config.params.mu > 0.0) {
        const double dt_diff = config.cfl_diffusive * h * h /
                               (config.params.mu * (2.0 * n + 1.0) * (2.0 * n + 1.0));
        dt = std::min(dt, dt_diff);
    }
    return dt;
}

SolutionState run_case(const RunConfig& config, const std::function<double(double)>& initial,
                       double* dt_used)
{
    SolutionState state;
    state.mesh = config.mesh;
    state.ops = element::build_operators(config.spec);
    const int N = config.mesh.elements;
    const int n = config.spec.n();
    state.u.resize(N, n);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < n; ++i)
            state.u(j, i) = initial(state.x_of(j, i, config.spec.points.coords));

    if (config.t_end <= 0.0)
        return state;

    const double u_max = state.u.cwiseAbs().maxCoeff();
    const double dt = time_step(config, u_max);
    if (dt_used)
        *dt_used = dt;

    const PdeParams params = config.params;
    RhsFn f = [&params](const SolutionState& s) { return rhs_pipeline(s, params); };

    const auto full_steps = static_cast<std::size_t>(config.t_end / dt);
    double t = 0.0;
    for (std::size_t step = 0; step < full_steps; ++step) {
        rk4_step(state, f, dt);
        t += dt;
        if (!state.u.allFinite())
            throw BlowUpError(step);
    }
    const double rem = config.t_end - t;
    if (rem > 1e-14 * config.t_end) {
        rk4_step(state, f, rem);
        if (!state.u.allFinite())
            throw BlowUpError(full_steps);
    }
    return state;
}

double exact_solution(ExactCase which, double x, double t, const PdeParams& params)
{
    switch (which) {
        case ExactCase::sine_adv:
            return std::sin(x - params.a * t);
        case ExactCase::gaussian_adv_diff: {
            constexpr double L = 20.0;
            const double spread = 1.0 + 4.0 * params.mu * t;
            double s = x - params.a * t;
            s -= L * std::floor((s + 10.0) / L);  // fold into [-10, 10)
            double sum = 0.0;
            for (int m = -3; m <= 3; ++m) {
                const double d = s - m * L;
                sum += std::exp(-d * d / spread);
            }
            return sum / std::sqrt(spread);
        }
    }
    throw linalg::ContractViolation("exact_solution: unknown case");
}

ErrorNorms error_norms(const SolutionState& state, const std::vector<double>& ref_coords,
                       const std::function<double(double)>& exact_at)
{
    const int N = static_cast<int>(state.u.rows());
    const int n = static_cast<int>(state.u.cols());
    ErrorNorms norms;
    double sum_abs = 0.0, sum_sq = 0.0;
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < n; ++i) {
            const double e = state.u(j, i) - exact_at(state.x_of(j, i, ref_coords));
            sum_abs += std::abs(e);
            sum_sq += e * e;
            norms.linf = std::max(norms.linf, std::abs(e));
        }
    }
    const double count = static_cast<double>(N) * n;
    norms.l1 = sum_abs / count;
    norms.l2 = std::sqrt(sum_sq / count);
    return norms;
}

std::vector<double> sample_equispaced(const SolutionState& state, const element::BasisSpec& spec)
{
    const int n = spec.n();
    std::vector<double> ref(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        ref[static_cast<std::size_t>(i)] = -1.0 + (2.0 * i + 1.0) / n;
    const auto mats = element::nodal_basis_matrices(spec, ref);
    const linalg::Matrix samples = state.u * mats.values.transpose();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(samples.size()));
    for (int j = 0; j < samples.rows(); ++j)
        for (int i = 0; i < samples.cols(); ++i)
            out.push_back(samples(j, i));
    return out;
}

double burgers_spectrum_e0(double k, double rho)
{
    const double kr = k * rho;
    const double kr2 = kr * kr;
    return 2.0 / (3.0 * std::sqrt(std::numbers::pi) * rho) * kr2 * kr2 * std::exp(-kr2);
}

SolutionState burgers_initial_field(const BurgersEnsembleConfig& cfg, std::uint64_t seed,
                                    const Mesh1D& mesh, const element::BasisSpec& spec)
{
    if (std::abs(mesh.x_min) > 1e-14 || std::abs(mesh.x_max - 2.0 * std::numbers::pi) > 1e-12)
        throw linalg::ContractViolation("burgers_initial_field: domain must be [0, 2*pi)");

    // One uniform [0,1) phase draw per wavenumber, k = 0, 1, ..., k_max, from
    // a Mersenne-twister stream.
    std::mt19937 gen(static_cast<std::uint32_t>(seed));
    std::vector<double> amplitude(static_cast<std::size_t>(cfg.k_max) + 1);
    std::vector<double> phase(static_cast<std::size_t>(cfg.k_max) + 1);
    for (int k = 0; k <= cfg.k_max; ++k) {
        amplitude[static_cast<std::size_t>(k)] = std::sqrt(2.0 * burgers_spectrum_e0(k, cfg.rho));
        phase[static_cast<std::size_t>(k)] =
            2.0 * std::numbers::pi * (gen() * (1.0 / 4294967296.0));
    }

    SolutionState state;
    state.mesh = mesh;
    state.ops = element::build_operators(spec);
    const int N = mesh.elements;
    const int n = spec.n();
    state.u.resize(N, n);
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = state.x_of(j, i, spec.points.coords);
            double u = 0.0;
            for (int k = 0; k <= cfg.k_max; ++k)
                u += amplitude[static_cast<std::size_t>(k)] *
                     std::cos(k * x + phase[static_cast<std::size_t>(k)]);
            state.u(j, i) = u;
        }
    }
    return state;
}

std::vector<double> energy_spectrum(const std::vector<std::vector<double>>& runs)
{
    if (runs.empty())
        throw linalg::ContractViolation("energy_spectrum: no runs");
    const std::size_t L = runs.front().size();
    for (const auto& run : runs)
        if (run.size() != L)
            throw linalg::ContractViolation("energy_spectrum: run length mismatch");

    const std::size_t half = L / 2;
    std::vector<double> avg(half + 1, 0.0);
    for (const auto& run : runs) {
        for (std::size_t f = 0; f <= half; ++f) {
            double re = 0.0, im = 0.0;
            for (std::size_t m = 0; m < L; ++m) {
                const double ang = -2.0 * std::numbers::pi * static_cast<double>(f) *
                                   static_cast<double>(m) / static_cast<double>(L);
                re += run[m] * std::cos(ang);
                im += run[m] * std::sin(ang);
            }
            const double power = (re * re + im * im) / (static_cast<double>(L) * static_cast<double>(L));
            // One-sided: a pure tone of amplitude a at wavenumber f reports
            // E(f) = a^2 / 2, so the synthesised field reproduces E0.
            avg[f] += (f == 0 || 2 * f == L) ? power : 2.0 * power;
        }
    }
    for (double& e : avg)
        e /= static_cast<double>(runs.size());
    return avg;
}

double integrate(SolutionState& state, const element::BasisSpec& spec, const PdeParams& params,
                 double t_end, double cfl, double cfl_diffusive)
{
    RunConfig config;
    config.mesh = state.mesh;
    config.spec = spec;
    config.params = params;
    config.t_end = t_end;
    config.cfl = cfl;
    config.cfl_diffusive = cfl_diffusive;
    const double dt = time_step(config, state.u.cwiseAbs().maxCoeff());
    if (t_end <= 0.0)
        return dt;

    RhsFn f = [&params](const SolutionState& s) { return rhs_pipeline(s, params); };
    const auto full_steps = static_cast<std::size_t>(t_end / dt);
    double t = 0.0;
    for (std::size_t step = 0; step < full_steps; ++step) {
        rk4_step(state, f, dt);
        t += dt;
        if (!state.u.allFinite())
            throw BlowUpError(step);
    }
    const double rem = t_end - t;
    if (rem > 1e-14 * t_end) {
        rk4_step(state, f, rem);
        if (!state.u.allFinite())
            throw BlowUpError(full_steps);
    }
    return dt;
}

EnsembleSpectra burgers_ensemble(const BurgersEnsembleConfig& cfg, const Mesh1D& mesh,
                                 const element::BasisSpec& spec, int threads)
{
    if (cfg.seeds.empty())
        throw linalg::ContractViolation("burgers_ensemble: no seeds");
    if (threads < 1)
        throw linalg::ContractViolation("burgers_ensemble: threads must be >= 1");

    const std::size_t runs = cfg.seeds.size();
    std::vector<std::vector<double>> initial_samples(runs);
    std::vector<std::vector<double>> evolved_samples(runs);
    std::vector<double> dts(runs, 0.0);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= runs)
                return;
            try {
                SolutionState state = burgers_initial_field(cfg, cfg.seeds[r], mesh, spec);
                initial_samples[r] = sample_equispaced(state, spec);
                PdeParams params;
                params.kind = PdeKind::burgers;
                params.mu = cfg.mu;
                dts[r] = integrate(state, spec, params, cfg.t_end);
                evolved_samples[r] = sample_equispaced(state, spec);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(threads, static_cast<int>(runs));
        pool.reserve(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    EnsembleSpectra out;
    out.initial = energy_spectrum(initial_samples);
    out.evolved = energy_spectrum(evolved_samples);
    out.dt_used = std::move(dts);
    return out;
}

}  // namespace rbffr::solver
