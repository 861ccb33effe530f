#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rbffr/analysis.hpp"
#include "rbffr/csv.hpp"
#include "rbffr/element.hpp"
#include "rbffr/solver.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr int kQuadOrder = 50;

using rbffr::NodeKind;
using rbffr::element::BasisSpec;
using rbffr::element::BasisVariant;

struct Options {
    // Global.
    std::string out = ".";
    int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::uint64_t seed_base = 0;

    // Basis.
    std::string basis = "polynomial";
    std::string kernel = "ga";
    std::vector<double> eps = {0.5};
    std::vector<std::string> layouts = {"legendre"};
    std::string centre_layout;  // empty: centres collocate with the points
    std::vector<int> n_s = {3};

    // Case.
    std::string pde_case = "sine";
    std::vector<int> mesh = {8, 16, 32};
    double t_end = -1.0;  // negative: per-case default
    double alpha = 1.0;
    bool dump_state = false;

    // Fourier extras.
    std::vector<double> times;

    // Burgers.
    int runs = 20;
    int burgers_mesh = 300;
    double mu = 2e-3;
    int k_max = 2048;
};

std::vector<std::string> validate_options(const Options& opt, const std::string& sub)
{
    std::vector<std::string> diagnostics;
    auto bad = [&](const std::string& field, const std::string& why) {
        diagnostics.push_back(field + ": " + why);
    };

    if (opt.threads < 1)
        bad("threads", "must be >= 1");
    if (opt.basis != "polynomial" && opt.basis != "rbf_direct" && opt.basis != "rbf_ga")
        bad("basis", "must be polynomial, rbf_direct, or rbf_ga");
    if (opt.basis != "polynomial") {
        if (opt.eps.empty())
            bad("eps", "required (nonempty list) for rbf variants");
        for (double e : opt.eps)
            if (!(e > 0.0))
                bad("eps", "values must be > 0");
    }
    if (opt.kernel != "ga" && opt.kernel != "mq" && opt.kernel != "iq" &&
        opt.kernel != "imq" && opt.kernel != "w13")
        bad("kernel", "must be one of ga, mq, iq, imq, w13");
    if (opt.basis == "rbf_ga" && opt.kernel != "ga")
        bad("kernel", "rbf_ga supports the ga kernel only");
    if (opt.layouts.empty())
        bad("layout", "list must be nonempty");
    for (const auto& name : opt.layouts) {
        try {
            rbffr::node_kind_from_string(name);
        } catch (const std::exception&) {
            bad("layout", "unknown layout '" + name + "'");
        }
    }
    if (!opt.centre_layout.empty()) {
        try {
            rbffr::node_kind_from_string(opt.centre_layout);
        } catch (const std::exception&) {
            bad("centres", "unknown layout '" + opt.centre_layout + "'");
        }
    }
    if (opt.n_s.empty())
        bad("ns", "list must be nonempty");
    for (int n : opt.n_s)
        if (n < 2 || n > 10)
            bad("ns", "values must lie in [2, 10]");
    if (!(opt.alpha >= 0.0 && opt.alpha <= 1.0))
        bad("alpha", "must lie in [0, 1]");

    if (sub == "convergence") {
        if (opt.mesh.empty())
            bad("mesh", "list must be nonempty");
        for (int N : opt.mesh)
            if (N < 1)
                bad("mesh", "element counts must be >= 1");
        if (opt.pde_case != "sine" && opt.pde_case != "bump")
            bad("case", "must be sine or bump");
    }
    if (sub == "burgers") {
        if (opt.runs < 1)
            bad("runs", "must be >= 1");
        if (opt.burgers_mesh < 1)
            bad("mesh", "must be >= 1");
        if (!(opt.mu > 0.0))
            bad("mu", "must be > 0");
        if (opt.k_max < 1)
            bad("kmax", "must be >= 1");
    }
    if (sub == "fourier")
        for (double t : opt.times)
            if (t < 0.0)
                bad("times", "must be >= 0");
    return diagnostics;
}

BasisSpec make_spec(const Options& opt, NodeKind layout, int n, double eps)
{
    const auto pts = rbffr::node_set(layout, n);
    if (opt.basis == "polynomial")
        return BasisSpec::polynomial(pts);
    const NodeKind centre_kind =
        opt.centre_layout.empty() ? layout : rbffr::node_kind_from_string(opt.centre_layout);
    const auto centres = rbffr::node_set(centre_kind, n).coords;
    if (opt.basis == "rbf_ga")
        return BasisSpec::rbf_ga(pts, centres, eps);
    return BasisSpec::rbf_direct(
        pts, {rbffr::rbf::kernel_from_string(opt.kernel), eps, centres});
}

std::string centre_label(const Options& opt, const std::string& layout)
{
    if (opt.basis == "polynomial")
        return "-";
    return opt.centre_layout.empty() ? layout : opt.centre_layout;
}

std::string json_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\')
            out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

struct Manifest {
    std::vector<std::pair<std::string, std::string>> config;  // echoed key/values
    std::vector<double> dt_used;
    std::vector<std::uint64_t> seeds;
    double wall_seconds = 0.0;
};

void write_manifest(const std::filesystem::path& csv_path, const Manifest& m)
{
    std::ofstream os(csv_path.string() + ".manifest.json", std::ios::binary);
    os << "{\n  \"version\": \"" << kVersion << "\",\n";
    os << "  \"quadrature_order\": " << kQuadOrder << ",\n";
    os << "  \"wall_seconds\": " << rbffr::csv::format_double(m.wall_seconds) << ",\n";
    os << "  \"config\": {";
    for (std::size_t i = 0; i < m.config.size(); ++i) {
        os << (i ? ", " : "") << '"' << json_escape(m.config[i].first) << "\": \""
           << json_escape(m.config[i].second) << '"';
    }
    os << "},\n  \"dt_used\": [";
    for (std::size_t i = 0; i < m.dt_used.size(); ++i)
        os << (i ? ", " : "") << rbffr::csv::format_double(m.dt_used[i]);
    os << "],\n  \"seeds\": [";
    for (std::size_t i = 0; i < m.seeds.size(); ++i)
        os << (i ? ", " : "") << m.seeds[i];
    os << "]\n}\n";
}

std::vector<std::pair<std::string, std::string>> echo_common(const Options& opt,
                                                             const std::string& sub)
{
    std::vector<std::pair<std::string, std::string>> echo;
    echo.emplace_back("subcommand", sub);
    echo.emplace_back("basis", opt.basis);
    echo.emplace_back("kernel", opt.kernel);
    std::ostringstream eps;
    for (std::size_t i = 0; i < opt.eps.size(); ++i)
        eps << (i ? " " : "") << rbffr::csv::format_double(opt.eps[i]);
    echo.emplace_back("eps", eps.str());
    std::ostringstream layouts;
    for (std::size_t i = 0; i < opt.layouts.size(); ++i)
        layouts << (i ? " " : "") << opt.layouts[i];
    echo.emplace_back("layout", layouts.str());
    echo.emplace_back("centres", opt.centre_layout.empty() ? "points" : opt.centre_layout);
    std::ostringstream ns;
    for (std::size_t i = 0; i < opt.n_s.size(); ++i)
        ns << (i ? " " : "") << opt.n_s[i];
    echo.emplace_back("ns", ns.str());
    echo.emplace_back("threads", std::to_string(opt.threads));
    return echo;
}

std::ofstream open_csv(const std::filesystem::path& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open output file " + path.string());
    return os;
}

// --- convergence ------------------------------------------------------------

int run_convergence(const Options& opt)
{
    using namespace rbffr;
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path out_dir(opt.out);
    std::filesystem::create_directories(out_dir);
    const auto csv_path = out_dir / "convergence.csv";
    auto os = open_csv(csv_path);
    os << "case,basis,kernel,eps,layout,centres,n_s,N,dx,L1,L2,Linf,t_end\n";

    const bool sine = opt.pde_case == "sine";
    solver::PdeParams params;
    params.kind = solver::PdeKind::advection_diffusion;
    params.a = 1.0;
    params.mu = sine ? 0.0 : 0.1;
    params.alpha = opt.alpha;
    const double t_end = opt.t_end >= 0.0 ? opt.t_end : (sine ? 2.0 * std::numbers::pi : 10.0);
    const double x_min = sine ? -std::numbers::pi : -10.0;
    const double x_max = sine ? std::numbers::pi : 10.0;
    const auto exact_case =
        sine ? solver::ExactCase::sine_adv : solver::ExactCase::gaussian_adv_diff;

    const std::vector<double> eps_list =
        opt.basis == "polynomial" ? std::vector<double>{0.0} : opt.eps;

    Manifest manifest;
    manifest.config = echo_common(opt, "convergence");
    manifest.config.emplace_back("case", opt.pde_case);
    manifest.config.emplace_back("t_end", rbffr::csv::format_double(t_end));
    manifest.config.emplace_back("alpha", rbffr::csv::format_double(opt.alpha));

    for (const auto& layout_name : opt.layouts) {
        const NodeKind layout = node_kind_from_string(layout_name);
        for (int n : opt.n_s) {
            for (double eps : eps_list) {
                for (int N : opt.mesh) {
                    const auto spec = make_spec(opt, layout, n, eps);
                    solver::RunConfig config;
                    config.mesh = {x_min, x_max, N};
                    config.spec = spec;
                    config.params = params;
                    config.t_end = t_end;
                    double dt = 0.0;
                    const auto state = solver::run_case(
                        config,
                        [&](double x) { return solver::exact_solution(exact_case, x, 0.0, params); },
                        &dt);
                    manifest.dt_used.push_back(dt);
                    const auto norms = solver::error_norms(
                        state, spec.points.coords,
                        [&](double x) { return solver::exact_solution(exact_case, x, t_end, params); });
                    csv::write_row(os, opt.pde_case, opt.basis, opt.kernel, eps, layout_name,
                                   centre_label(opt, layout_name), n, N, config.mesh.h(),
                                   norms.l1, norms.l2, norms.linf, t_end);

                    if (opt.dump_state) {
                        std::ostringstream name;
                        name << "state_" << opt.pde_case << '_' << layout_name << "_n" << n
                             << "_N" << N << "_eps" << csv::format_double(eps) << ".csv";
                        auto ds = open_csv(out_dir / name.str());
                        ds << "element,node,x,u\n";
                        for (int j = 0; j < N; ++j)
                            for (int i = 0; i < n; ++i)
                                csv::write_row(ds, j, i, state.x_of(j, i, spec.points.coords),
                                               state.u(j, i));
                    }
                }
            }
        }
    }
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(csv_path, manifest);
    return 0;
}

// --- fourier ----------------------------------------------------------------

int run_fourier(const Options& opt)
{
    using namespace rbffr;
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path out_dir(opt.out);
    std::filesystem::create_directories(out_dir);

    const std::vector<double> eps_list =
        opt.basis == "polynomial" ? std::vector<double>{0.0} : opt.eps;
    const NodeKind layout = node_kind_from_string(opt.layouts.front());
    const auto grid = analysis::default_k_hat_grid();

    for (int n : opt.n_s) {
        for (double eps : eps_list) {
            const auto spec = make_spec(opt, layout, n, eps);
            const auto cfg = analysis::make_fourier_config(spec, opt.alpha, grid);

            std::ostringstream tag;
            tag << "n" << n << "_eps" << csv::format_double(eps);

            const auto disp_path = out_dir / ("dispersion_" + tag.str() + ".csv");
            auto os = open_csv(disp_path);
            os << "k_hat,mode,re_c,im_c,is_physical\n";
            const auto modal = analysis::dispersion_dissipation(cfg);
            for (const auto& per_k : modal.modes) {
                int m = 0;
                for (const auto& mode : per_k) {
                    csv::write_row(os, mode.k_hat, m++, mode.omega_hat.real() / mode.k_hat,
                                   mode.omega_hat.imag() / mode.k_hat, mode.physical ? 1 : 0);
                }
            }
            Manifest manifest;
            manifest.config = echo_common(opt, "fourier");
            manifest.config.emplace_back("alpha", csv::format_double(opt.alpha));
            manifest.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            write_manifest(disp_path, manifest);

            if (!opt.times.empty()) {
                const auto comb_path = out_dir / ("combined_" + tag.str() + ".csv");
                auto cs = open_csv(comb_path);
                cs << "k_hat,t,G,dphi\n";
                for (double t : opt.times)
                    for (double k_hat : grid) {
                        const auto entry = analysis::combined_analysis(cfg, spec, k_hat, t);
                        csv::write_row(cs, entry.k_hat, entry.t, entry.amplification,
                                       entry.phase_diff);
                    }
                manifest.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                write_manifest(comb_path, manifest);
            }
        }
    }

    if (opt.basis != "polynomial" && opt.eps.size() > 1) {
        const auto diss_path = out_dir / "diss_max.csv";
        auto ds = open_csv(diss_path);
        ds << "eps,n_s,diss_max\n";
        for (const auto& row : analysis::max_dissipation_sweep(opt.eps, opt.n_s, layout, opt.alpha))
            csv::write_row(ds, row.eps, row.n_s, row.diss_max);
        Manifest manifest;
        manifest.config = echo_common(opt, "fourier");
        manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(diss_path, manifest);
    }
    return 0;
}

// --- sbp --------------------------------------------------------------------

int run_sbp(const Options& opt)
{
    using namespace rbffr;
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path out_dir(opt.out);
    std::filesystem::create_directories(out_dir);
    const auto csv_path = out_dir / "sbp.csv";
    auto os = open_csv(csv_path);
    os << "eps,n_s,layout,cons_err,stab_err\n";

    const std::vector<double> eps_list =
        opt.basis == "polynomial" ? std::vector<double>{0.0} : opt.eps;
    for (const auto& layout_name : opt.layouts) {
        const NodeKind layout = node_kind_from_string(layout_name);
        for (int n : opt.n_s) {
            for (double eps : eps_list) {
                const auto ops = element::build_operators(make_spec(opt, layout, n, eps));
                const auto report = analysis::sbp_report(ops);
                csv::write_row(os, eps, n, layout_name, report.conservation_error,
                               report.stability_error);
            }
        }
    }
    Manifest manifest;
    manifest.config = echo_common(opt, "sbp");
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(csv_path, manifest);
    return 0;
}

// --- condition ---------------------------------------------------------------

int run_condition(const Options& opt)
{
    using namespace rbffr;
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path out_dir(opt.out);
    std::filesystem::create_directories(out_dir);
    const auto csv_path = out_dir / "condition.csv";
    auto os = open_csv(csv_path);
    os << "eps,layout,n,mode,cond\n";

    std::vector<NodeKind> layouts;
    for (const auto& name : opt.layouts)
        layouts.push_back(node_kind_from_string(name));

    for (int n : opt.n_s) {
        for (rbf::SweepMode mode : {rbf::SweepMode::direct, rbf::SweepMode::stable}) {
            for (const auto& row : rbf::condition_sweep(layouts, n, opt.eps, mode))
                csv::write_row(os, row.eps, to_string(row.layout), row.n,
                               row.mode == rbf::SweepMode::direct ? "direct" : "stable",
                               row.cond);
        }
    }
    Manifest manifest;
    manifest.config = echo_common(opt, "condition");
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(csv_path, manifest);
    return 0;
}

// --- burgers ----------------------------------------------------------------

int run_burgers(const Options& opt)
{
    using namespace rbffr;
    const auto start = std::chrono::steady_clock::now();
    const std::filesystem::path out_dir(opt.out);
    std::filesystem::create_directories(out_dir);

    solver::BurgersEnsembleConfig cfg;
    cfg.k_max = opt.k_max;
    cfg.mu = opt.mu;
    if (opt.t_end >= 0.0)
        cfg.t_end = opt.t_end;
    for (int r = 0; r < opt.runs; ++r)
        cfg.seeds.push_back(opt.seed_base + static_cast<std::uint64_t>(r));

    const solver::Mesh1D mesh{0.0, 2.0 * std::numbers::pi, opt.burgers_mesh};
    const NodeKind layout = node_kind_from_string(opt.layouts.front());
    const int n = opt.n_s.front();
    const double eps = opt.basis == "polynomial" ? 0.0 : opt.eps.front();
    const auto spec = make_spec(opt, layout, n, eps);

    const auto result = solver::burgers_ensemble(cfg, mesh, spec, opt.threads);

    Manifest manifest;
    manifest.config = echo_common(opt, "burgers");
    manifest.config.emplace_back("mesh", std::to_string(opt.burgers_mesh));
    manifest.config.emplace_back("mu", csv::format_double(cfg.mu));
    manifest.config.emplace_back("t_end", csv::format_double(cfg.t_end));
    manifest.config.emplace_back("kmax", std::to_string(cfg.k_max));
    manifest.seeds = cfg.seeds;
    manifest.dt_used = result.dt_used;

    const auto write_spectrum = [&](const std::filesystem::path& path,
                                    const std::vector<double>& spectrum) {
        auto os = open_csv(path);
        os << "f,E\n";
        for (std::size_t f = 0; f < spectrum.size(); ++f)
            csv::write_row(os, static_cast<int>(f), spectrum[f]);
        manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(path, manifest);
    };
    write_spectrum(out_dir / "spectrum_initial.csv", result.initial);
    write_spectrum(out_dir / "spectrum.csv", result.evolved);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"1D flux-reconstruction solver and analysis toolkit"};
    app.set_config("--config")->configurable(false);
    app.fallthrough();

    Options opt;
    app.add_option("--out", opt.out, "Output directory")->capture_default_str();
    app.add_option("--threads", opt.threads, "Worker thread count")->capture_default_str();
    app.add_option("--seed-base", opt.seed_base, "First ensemble seed")->capture_default_str();
    app.add_option("--basis", opt.basis, "polynomial | rbf_direct | rbf_ga")
        ->capture_default_str();
    app.add_option("--kernel", opt.kernel, "ga | mq | iq | imq | w13")->capture_default_str();
    app.add_option("--eps", opt.eps, "Shape parameter list")->capture_default_str();
    app.add_option("--layout", opt.layouts, "Solution-point layout list")->capture_default_str();
    app.add_option("--centres", opt.centre_layout,
                   "Centre layout (default: collocated with the points)");
    app.add_option("--ns", opt.n_s, "Solution points per element (list)")->capture_default_str();
    app.add_option("--alpha", opt.alpha, "Interface upwinding parameter")->capture_default_str();

    auto* convergence = app.add_subcommand("convergence", "Mesh-refinement error sweeps");
    convergence->add_option("--case", opt.pde_case, "sine | bump")->capture_default_str();
    convergence->add_option("--mesh", opt.mesh, "Element count list")->capture_default_str();
    convergence->add_option("--t-end", opt.t_end, "Final time override");
    convergence->add_flag("--dump-state", opt.dump_state, "Write per-run state CSVs");

    auto* fourier = app.add_subcommand("fourier", "Dispersion/dissipation and combined analysis");
    fourier->add_option("--times", opt.times, "Times for the combined analysis");

    app.add_subcommand("sbp", "Conservation/stability diagnostics");
    app.add_subcommand("condition", "Basis conditioning sweeps");

    auto* burgers = app.add_subcommand("burgers", "Random-phase Burgers ensemble spectra");
    burgers->add_option("--runs", opt.runs, "Ensemble size")->capture_default_str();
    burgers->add_option("--mesh", opt.burgers_mesh, "Element count")->capture_default_str();
    burgers->add_option("--mu", opt.mu, "Viscosity")->capture_default_str();
    burgers->add_option("--t-end", opt.t_end, "Final time override");
    burgers->add_option("--kmax", opt.k_max, "Highest synthesised wavenumber")
        ->capture_default_str();

    auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
    std::string validate_for = "convergence";
    validate->add_option("--for", validate_for, "Subcommand the config targets")
        ->capture_default_str();
    validate->add_option("--case", opt.pde_case, "sine | bump");
    validate->add_option("--mesh", opt.mesh, "Element count list");
    validate->add_option("--runs", opt.runs, "Ensemble size");
    validate->add_option("--mu", opt.mu, "Viscosity");
    validate->add_option("--kmax", opt.k_max, "Highest synthesised wavenumber");
    validate->add_option("--times", opt.times, "Times for the combined analysis");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "validate") {
        const auto diagnostics = validate_options(opt, validate_for);
        for (const auto& d : diagnostics)
            std::cout << d << '\n';
        if (diagnostics.empty())
            std::cout << "ok\n";
        return diagnostics.empty() ? 0 : 2;
    }

    const auto diagnostics = validate_options(opt, sub);
    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics)
            std::cerr << "config error: " << d << '\n';
        return 2;
    }

    try {
        if (sub == "convergence")
            return run_convergence(opt);
        if (sub == "fourier")
            return run_fourier(opt);
        if (sub == "sbp")
            return run_sbp(opt);
        if (sub == "condition")
            return run_condition(opt);
        if (sub == "burgers")
            return run_burgers(opt);
    } catch (const rbffr::linalg::ContractViolation& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const rbffr::solver::BlowUpError& e) {
        std::cerr << "runtime failure (" << sub << "): " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure (" << sub << "): " << e.what() << '\n';
        return 3;
    }
    return 2;
}
