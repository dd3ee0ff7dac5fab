// krylab command line driver: identity suites, barrier certification,
// epsilon sweeps, boundary profile fits and the coarse grid solver, with CSV
// and SVG outputs.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <iostream>

#include "krylab/config.hpp"
#include "krylab/grid.hpp"
#include "krylab/harness.hpp"
#include "krylab/report.hpp"

using namespace krylab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNoConvergence = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    long samples = 0;
    std::string alpha = "auto";
    std::string beta = "auto";
};

Config load_config(const CommonArgs& args) {
    if (args.config_path.empty()) return Config::parse_text("", "<empty>");
    return Config::parse_file(args.config_path);
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!std::filesystem::is_directory(dir))
        fail(ErrKind::io, "output directory is not writable: " + dir);
}

DomainSpec domain_from_config(const Config& cfg) {
    std::string kind = cfg.get("domain", "kind", "ball");
    int n = int(cfg.get_long("domain", "n", 2));
    if (kind == "ball") return DomainSpec::ball(n);
    if (kind == "ellipsoid") {
        auto axes = cfg.get_list("domain", "axes");
        if (int(axes.size()) != n) fail(ErrKind::config, "[domain] axes must list n semi-axes");
        return DomainSpec::ellipsoid(n, axes);
    }
    if (kind == "perturbed-ball") {
        Perturbation p;
        p.i = int(cfg.get_long("domain", "perturb_i", 0));
        p.j = int(cfg.get_long("domain", "perturb_j", n - 1));
        p.amp = cfg.get_double("domain", "perturb_amp", 0.1);
        p.holomorphic = cfg.get("domain", "perturb_kind", "holo") == "holo";
        return DomainSpec::perturbed(n, {p});
    }
    fail(ErrKind::config, "unknown domain kind: " + kind);
}

std::vector<double> g_from_config(const Config& cfg) {
    std::string g = cfg.get("sweep", "g", "t^2");
    if (g.rfind("t^", 0) == 0) {
        int m = std::stoi(g.substr(2));
        std::vector<double> c(m + 1, 0.0);
        c[m] = 1.0;
        return c;
    }
    if (cfg.has("sweep", "g_coeffs")) return cfg.get_list("sweep", "g_coeffs");
    try {
        return {std::stod(g)};
    } catch (const std::exception&) {
        fail(ErrKind::config, "bad [sweep] g spec: " + g);
    }
}

std::vector<std::string> common_cols() { return {"version", "seed", "config_hash"}; }

void append_common(std::vector<std::string>& row, std::uint64_t seed, const std::string& hash) {
    row.push_back(tool_version());
    row.push_back(CsvTable::num(long(seed)));
    row.push_back(hash);
}

int cmd_identities(const CommonArgs& args) {
    Config cfg = load_config(args);
    ensure_out_dir(args.out_dir);
    SuiteOptions opt;
    opt.samples = args.samples > 0 ? int(args.samples) : int(cfg.get_long("identities", "samples", 200));
    opt.seed = args.seed;
    opt.fault_injection = cfg.get_double("identities", "fault_injection", 0.0);
    IdentitySuiteResult res = run_identity_suite(opt);

    std::vector<std::string> cols = {"instance", "n", "operator", "check", "residual", "tol", "pass"};
    for (auto& c : common_cols()) cols.push_back(c);
    CsvTable csv(cols);
    std::string hash = config_hash(cfg);
    for (auto& r : res.rows) {
        std::vector<std::string> row = {CsvTable::num(r.id),       CsvTable::num(long(r.n)),
                                        r.op,                      r.check,
                                        CsvTable::num(r.residual), CsvTable::num(r.tol),
                                        r.pass ? "1" : "0"};
        append_common(row, args.seed, hash);
        csv.add_row(std::move(row));
    }
    csv.write(args.out_dir + "/identities.csv");
    std::cout << "identities: " << res.rows.size() << " checks, "
              << (res.pass ? "all passed" : "FAILURES") << " in " << res.runtime_sec << " s\n";
    return res.pass ? kExitOk : kExitCheckFailed;
}

int cmd_barrier(const CommonArgs& args) {
    Config cfg = load_config(args);
    ensure_out_dir(args.out_dir);
    DefiningFunction dom = make_domain(domain_from_config(cfg));
    int samples = args.samples > 0 ? int(args.samples) : int(cfg.get_long("barrier", "samples", 10000));

    double alpha, beta;
    if (args.alpha == "auto") {
        AlphaSearchResult sr = search_alpha(dom, identity_field(dom.n), 2000, args.seed);
        if (!sr.found) {
            std::cerr << "no admissible alpha on the dyadic grid\n";
            return kExitConfig;
        }
        alpha = sr.alpha;
        beta = sr.beta;
    } else {
        alpha = std::stod(args.alpha);
        beta = args.beta == "auto" ? alpha * alpha / 10.0 : std::stod(args.beta);
    }
    LOperator L = build_l(dom, identity_field(dom.n), BarrierParams{alpha, beta});
    BarrierCheckReport rep = barrier_lemma_check(L, samples, args.seed);
    BarrierCheckReport rep4 = barrier_lemma_check(L, 4 * samples, args.seed);
    double stability = std::abs(rep4.c_emp - rep.c_emp) / std::max(rep4.c_emp, 1e-30);

    std::vector<std::string> cols = {"metric", "value", "n", "alpha", "beta", "samples"};
    for (auto& c : common_cols()) cols.push_back(c);
    CsvTable csv(cols);
    std::string hash = config_hash(cfg);
    auto put = [&](const std::string& m, double v, int ns) {
        std::vector<std::string> row = {m,
                                        CsvTable::num(v),
                                        CsvTable::num(long(dom.n)),
                                        CsvTable::num(alpha),
                                        CsvTable::num(beta),
                                        CsvTable::num(long(ns))};
        append_common(row, args.seed, hash);
        csv.add_row(std::move(row));
    };
    put("worst_margin", rep.worst_margin, samples);
    put("c_emp", rep.c_emp, samples);
    put("c_emp_4x", rep4.c_emp, 4 * samples);
    put("c_stability", stability, 4 * samples);
    csv.write(args.out_dir + "/barrier.csv");
    bool pass = rep.pass && rep4.pass && stability <= 0.2;
    std::cout << "barrier: alpha=" << alpha << " worst margin " << rep.worst_margin << " c(n) "
              << rep4.c_emp << (pass ? " certified" : " FAILED") << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const CommonArgs& args) {
    Config cfg = load_config(args);
    ensure_out_dir(args.out_dir);
    SweepOptions opt;
    opt.n = int(cfg.get_long("sweep", "n", 2));
    opt.g_coeffs = g_from_config(cfg);
    opt.boundary_constant = cfg.get_double("sweep", "boundary_constant", 0.0);
    if (cfg.has("sweep", "eps")) opt.eps_list = cfg.get_list("sweep", "eps");
    if (cfg.has("sweep", "delta")) {
        opt.deltas = {0.0};
        for (double d : cfg.get_list("sweep", "delta")) opt.deltas.push_back(d);
    }
    if (opt.eps_list.empty()) {
        std::cerr << "usage error: empty eps list\n";
        return kExitConfig;
    }
    SweepResult res = run_sweep(opt);

    std::vector<std::string> cols = {"eps", "sup_grad", "M", "ma_residual"};
    for (double d : opt.deltas) cols.push_back("sup_d2_delta_" + CsvTable::num(d));
    for (auto& c : common_cols()) cols.push_back(c);
    CsvTable csv(cols);
    std::string hash = config_hash(cfg);
    PlotSeries series{"sup |D2 u| over Omega", {}, {}};
    for (auto& r : res.rows) {
        std::vector<std::string> row = {CsvTable::num(r.eps), CsvTable::num(r.norms.sup_grad),
                                        CsvTable::num(r.norms.boundary_normal_normal),
                                        CsvTable::num(r.ma_residual)};
        for (double v : r.norms.sup_d2) row.push_back(CsvTable::num(v));
        append_common(row, args.seed, hash);
        csv.add_row(std::move(row));
        series.x.push_back(r.eps);
        series.y.push_back(r.norms.sup_d2.empty() ? 0.0 : r.norms.sup_d2.front());
    }
    csv.write(args.out_dir + "/sweep.csv");
    if (!write_svg_plot(args.out_dir + "/sweep.svg", "second derivative bound vs eps", {series},
                        true))
        std::cerr << "warning: single-point plot emitted\n";
    std::cout << "sweep: " << res.rows.size() << " rows written\n";
    return kExitOk;
}

int cmd_profile(const CommonArgs& args) {
    Config cfg = load_config(args);
    ensure_out_dir(args.out_dir);
    int n = int(cfg.get_long("profile", "n", 2));
    DefiningFunction dom = make_domain(DomainSpec::ball(n));
    int field_index = int(cfg.get_long("profile", "field", 0));
    auto fields = standard_fields(n);
    if (field_index < 0 || field_index >= int(fields.size())) {
        std::cerr << "field index out of range\n";
        return kExitConfig;
    }
    std::vector<double> eps_list = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    if (cfg.has("profile", "eps")) eps_list = cfg.get_list("profile", "eps");
    auto g = g_from_config(cfg);
    CVec p(n, 0.0);
    p[n - 1] = 1.0;

    std::vector<std::string> cols = {"eps", "C1", "C2", "C4", "M", "flagged", "min_slope"};
    for (auto& c : common_cols()) cols.push_back(c);
    CsvTable csv(cols);
    std::string hash = config_hash(cfg);
    bool ok = true;
    for (double eps : eps_list) {
        RadialProblem rp;
        rp.n = n;
        rp.g_coeffs = g;
        rp.eps = eps;
        RadialSolution sol = solve_radial(rp);
        ProfileFit fit = boundary_profile(sol, dom, p, fields[field_index]);
        ok = ok && !fit.flagged;
        std::vector<std::string> row = {CsvTable::num(eps),      CsvTable::num(fit.C1),
                                        CsvTable::num(fit.C2),   CsvTable::num(fit.C4),
                                        CsvTable::num(fit.M),    fit.flagged ? "1" : "0",
                                        CsvTable::num(fit.min_tangential_slope)};
        append_common(row, args.seed, hash);
        csv.add_row(std::move(row));
    }
    csv.write(args.out_dir + "/profile.csv");
    std::cout << "profile: " << eps_list.size() << " rows written\n";
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_grid(const CommonArgs& args) {
    Config cfg = load_config(args);
    ensure_out_dir(args.out_dir);
    GridProblem gp;
    gp.N = int(cfg.get_long("grid", "N", 13));
    double eps = cfg.get_double("grid", "eps", 0.0);
    auto g = g_from_config(cfg);
    RadialProblem rp;
    rp.n = 2;
    rp.g_coeffs = g;
    rp.eps = eps;
    RadialSolution oracle = solve_radial(rp);
    gp.boundary = [&](const CVec&) { return rp.boundary_constant; };
    gp.rhs = [&](const CVec& z) {
        double t = std::norm(z[0]) + std::norm(z[1]);
        return rp.g(t) + eps;
    };
    GridField field = solve_grid2(gp);
    double err = field.sup_error([&](const CVec& z) { return oracle.u(z); });

    std::vector<std::string> cols = {"N", "sup_error_vs_radial", "residual", "sweeps", "converged"};
    for (auto& c : common_cols()) cols.push_back(c);
    CsvTable csv(cols);
    std::string hash = config_hash(cfg);
    std::vector<std::string> row = {CsvTable::num(long(field.N)), CsvTable::num(err),
                                    CsvTable::num(field.residual), CsvTable::num(long(field.sweeps)),
                                    field.converged ? "1" : "0"};
    append_common(row, args.seed, hash);
    csv.add_row(std::move(row));
    csv.write(args.out_dir + "/grid.csv");

    // node export: coordinates + value
    CsvTable nodes({"x1", "y1", "x2", "y2", "value"});
    for (auto& [z, v] : field.interior_nodes())
        nodes.add_row({CsvTable::num(z[0].real()), CsvTable::num(z[0].imag()),
                       CsvTable::num(z[1].real()), CsvTable::num(z[1].imag()), CsvTable::num(v)});
    nodes.write(args.out_dir + "/grid_field.csv");
    std::cout << "grid: N=" << field.N << " sup error " << err << " residual " << field.residual
              << "\n";
    if (!field.converged) return kExitNoConvergence;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"krylab: verification laboratory for the degenerate complex Monge-Ampere "
                 "Dirichlet problem"};
    app.require_subcommand(1);
    CommonArgs args;
    app.add_option("--config", args.config_path, "configuration file (flat [section] key = value)");
    app.add_option("--seed", args.seed, "random seed recorded in every output row");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_option("--samples", args.samples, "sample-count override");
    app.add_option("--alpha", args.alpha, "barrier exponent alpha or 'auto'");
    app.add_option("--beta", args.beta, "barrier shift beta or 'auto'");

    auto sub_id = app.add_subcommand(
        "identities", "run the bracket/commutation/operator identity suite\n"
                      "CSV: instance,n,operator,check,residual,tol,pass,version,seed,config_hash");
    auto sub_bar = app.add_subcommand(
        "barrier", "certify the extended barrier inequality by dense sampling\n"
                   "CSV: metric,value,n,alpha,beta,samples,version,seed,config_hash");
    auto sub_sweep = app.add_subcommand(
        "sweep", "solve the radial family over an eps list and report norms\n"
                 "CSV: eps,sup_grad,M,ma_residual,sup_d2_delta_*,version,seed,config_hash");
    auto sub_prof = app.add_subcommand(
        "profile", "fit boundary profile constants along a tangential field\n"
                   "CSV: eps,C1,C2,C4,M,flagged,min_slope,version,seed,config_hash");
    auto sub_grid = app.add_subcommand(
        "grid", "coarse monotone grid solve on the ball in C^2\n"
                "CSV: N,sup_error_vs_radial,residual,sweeps,converged,version,seed,config_hash");

    CLI11_PARSE(app, argc, argv);
    try {
        if (sub_id->parsed()) return cmd_identities(args);
        if (sub_bar->parsed()) return cmd_barrier(args);
        if (sub_sweep->parsed()) return cmd_sweep(args);
        if (sub_prof->parsed()) return cmd_profile(args);
        if (sub_grid->parsed()) return cmd_grid(args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrKind::config:
            case ErrKind::io: return kExitConfig;
            case ErrKind::non_convergence: return kExitNoConvergence;
            default: return kExitCheckFailed;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}
