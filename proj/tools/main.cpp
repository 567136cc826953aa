#include <cmath>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "switchgame/closedform.hpp"
#include "switchgame/hitting.hpp"
#include "switchgame/io.hpp"
#include "switchgame/montecarlo.hpp"
#include "switchgame/qvi.hpp"

using namespace switchgame;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadSpec = 1;
constexpr int kExitClassification = 2;
constexpr int kExitVerifyFailed = 3;
constexpr int kExitSolver = 4;

struct Options {
    std::string input;
    std::string out_dir;
    std::string solution_file;
    int grid = 64;
    int points = 400;
    long paths = 10000;
    double dt = 1e-3;
    double horizon = 0.0;
    std::uint64_t seed = 1;
    int threads = 0;
    int regime_i = 1, regime_j = 1;
    long trace = 0;
    double xmin = 0.0, xmax = 0.0;
    bool antithetic = false;
    bool single_diffusion = false;
};

GameSpec load_and_validate(const Options& opt) {
    GameSpec spec = load_spec(opt.input);
    const ValidationReport report = validate(spec);
    if (!report.empty()) {
        std::cerr << "invalid spec:\n";
        for (const auto& r : report) std::cerr << "  - " << r << "\n";
        std::exit(kExitBadSpec);
    }
    return spec;
}

Solution classify_and_build(const GameSpec& spec) {
    Classification cls;
    try {
        cls = classify(spec);
    } catch (const std::invalid_argument& e) {
        std::cerr << "classification error: " << e.what() << "\n";
        std::exit(kExitClassification);
    }
    try {
        return build(spec, cls.order, cls.costs);
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        std::exit(kExitSolver);
    }
}

std::pair<double, double> value_range(const Solution& sol, double xmin, double xmax) {
    if (xmin > 0.0 && xmax > xmin) return {xmin, xmax};
    double lo = 0.01, hi = 100.0;
    std::vector<double> th;
    if (sol.thresholds.x_star) th.push_back(*sol.thresholds.x_star);
    if (sol.thresholds.x_a) th.push_back(*sol.thresholds.x_a);
    if (sol.thresholds.x_b) th.push_back(*sol.thresholds.x_b);
    if (!th.empty()) {
        lo = *std::min_element(th.begin(), th.end()) / 10.0;
        hi = *std::max_element(th.begin(), th.end()) * 10.0;
    }
    return {lo, hi};
}

void write_values_csv(const Solution& sol, const std::string& path, double lo, double hi,
                      int n) {
    CsvWriter csv(path, {"x", "v11", "v12", "v21", "v22"});
    const double step = std::log(hi / lo) / (n - 1);
    for (int k = 0; k < n; ++k) {
        const double x = lo * std::exp(step * k);
        csv.row_values({x, sol.value[0][0](x), sol.value[0][1](x), sol.value[1][0](x),
                        sol.value[1][1](x)});
    }
}

void write_thresholds_csv(const Solution& sol, const std::string& path) {
    CsvWriter csv(path, {"name", "value"});
    if (sol.thresholds.x_star) csv.row({"x_star", format_full(*sol.thresholds.x_star)});
    if (sol.thresholds.x_a) csv.row({"x_a", format_full(*sol.thresholds.x_a)});
    if (sol.thresholds.x_b) csv.row({"x_b", format_full(*sol.thresholds.x_b)});
    if (sol.thresholds.lambda) csv.row({"lambda", format_full(*sol.thresholds.lambda)});
}

void write_regions_txt(const Solution& sol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    out << "case: " << to_string(sol.order) << " / " << to_string(sol.costs) << "\n";
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out << "S_max(" << i + 1 << "," << j + 1
                << ") = " << sol.region_max[i][j].describe() << "\n";
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out << "S_min(" << i + 1 << "," << j + 1
                << ") = " << sol.region_min[i][j].describe() << "\n";
}

int run_solve(const Options& opt) {
    const GameSpec spec = load_and_validate(opt);
    const Solution sol = classify_and_build(spec);
    fs::create_directories(opt.out_dir);
    save_solution(sol, opt.out_dir + "/solution.json");
    const auto [lo, hi] = value_range(sol, opt.xmin, opt.xmax);
    write_values_csv(sol, opt.out_dir + "/solution.csv", lo, hi, opt.points);
    write_thresholds_csv(sol, opt.out_dir + "/thresholds.csv");
    write_regions_txt(sol, opt.out_dir + "/regions.txt");
    std::cout << "case " << to_string(sol.order) << "/" << to_string(sol.costs)
              << ", v(x0) = " << format_full(sol.value[0][0](spec.x0)) << " (regime 1,1)\n";
    return kExitOk;
}

int run_sweep(const Options& opt) {
    const GameSpec spec = load_and_validate(opt);
    const Solution sol = classify_and_build(spec);
    fs::create_directories(opt.out_dir);
    const auto [lo, hi] = value_range(sol, opt.xmin, opt.xmax);
    write_values_csv(sol, opt.out_dir + "/sweep.csv", lo, hi, opt.points);
    std::cout << "wrote " << opt.points << " samples on [" << lo << ", " << hi << "]\n";
    return kExitOk;
}

int run_verify(const Options& opt) {
    const GameSpec spec = load_and_validate(opt);
    Solution sol;
    std::string sol_path = opt.solution_file;
    if (sol_path.empty() && fs::exists(opt.out_dir + "/solution.json"))
        sol_path = opt.out_dir + "/solution.json";
    if (!sol_path.empty()) {
        try {
            sol = load_solution(sol_path);
        } catch (const std::exception& e) {
            std::cerr << "cannot load solution: " << e.what() << "\n";
            return kExitBadSpec;
        }
    } else {
        sol = classify_and_build(spec);
    }

    GridSpec grid;
    grid.points = opt.points;
    const QviReport rep = verify(spec, sol, grid);
    fs::create_directories(opt.out_dir);
    CsvWriter csv(opt.out_dir + "/qvi_report.csv",
                  {"x", "regime_i", "regime_j", "G", "v_minus_M", "v_minus_N", "tag"});
    for (const QviPoint& p : rep.points)
        csv.row({format_full(p.x), std::to_string(p.i + 1), std::to_string(p.j + 1),
                 format_full(p.generator_residual), format_full(p.obstacle_max),
                 format_full(p.obstacle_min), to_string(p.tag)});

    const double fit = worst_fit_jump(sol);
    std::cout << "worst residual " << format_full(rep.worst_residual) << ", worst fit jump "
              << format_full(fit) << ", violations " << rep.violations << "\n";
    if (rep.worst_residual > kQviTol || fit > kSmoothTol || rep.violations > 0) {
        std::cerr << "verification FAILED\n";
        return kExitVerifyFailed;
    }
    std::cout << "verification passed\n";
    return kExitOk;
}

int run_simulate(const Options& opt) {
    const GameSpec spec = load_and_validate(opt);
    const Solution sol = classify_and_build(spec);
    const ThresholdStrategy strat = strategy_from(sol);
    SimConfig cfg;
    cfg.paths = opt.paths;
    cfg.dt = opt.dt;
    cfg.horizon = opt.horizon;
    cfg.seed = opt.seed;
    cfg.threads = opt.threads;
    cfg.antithetic = opt.antithetic;

    fs::create_directories(opt.out_dir);
    CsvWriter csv(opt.out_dir + "/estimates.csv",
                  {"regime_i", "regime_j", "estimate", "std_error", "closed_form",
                   "abs_error", "sigmas"});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const Estimate est = simulate_payoff(spec, i, j, strat, cfg);
            const double cf = sol.value[i][j](spec.x0);
            const double err = std::fabs(est.mean - cf);
            csv.row({std::to_string(i + 1), std::to_string(j + 1), format_full(est.mean),
                     format_full(est.std_error), format_full(cf), format_full(err),
                     format_full(est.std_error > 0 ? err / est.std_error : 0.0)});
        }
    if (opt.trace > 0) {
        std::vector<TraceRow> trace;
        simulate_stats(spec, opt.regime_i - 1, opt.regime_j - 1, strat, cfg, &trace,
                       opt.trace);
        CsvWriter tcsv(opt.out_dir + "/trace.csv",
                       {"path", "t", "x", "regime_i", "regime_j", "cumulative_payoff"});
        for (const TraceRow& r : trace)
            tcsv.row({std::to_string(r.path), format_full(r.t), format_full(r.x),
                      std::to_string(r.i + 1), std::to_string(r.j + 1),
                      format_full(r.cumulative_payoff)});
    }
    std::cout << "wrote estimates.csv (seed " << opt.seed << ", " << opt.paths
              << " paths, dt " << opt.dt << ")\n";
    return kExitOk;
}

int run_search(const Options& opt) {
    const GameSpec spec = load_and_validate(opt);
    HittingOptions hopts;
    hopts.single_diffusion = opt.single_diffusion;
    const SearchGrids grids = default_grids(spec, opt.grid);
    SearchResult res;
    try {
        res = threshold_search(spec, spec.x0, opt.regime_i - 1, opt.regime_j - 1, grids,
                               hopts);
    } catch (const std::exception& e) {
        std::cerr << "search error: " << e.what() << "\n";
        return kExitSolver;
    }
    fs::create_directories(opt.out_dir);
    CsvWriter csv(opt.out_dir + "/surface.csv", {"y21", "x12_prime", "x12", "value"});
    for (const SurfaceRow& r : res.surface)
        csv.row_values({r.y21, r.x12_prime, r.x12, r.value});
    std::ofstream sum(opt.out_dir + "/search.txt", std::ios::binary);
    sum << "best y21 = " << format_full(res.best.y21) << "\n"
        << "best x12_prime = " << format_full(res.best.x12_prime) << "\n"
        << "best x12 = " << format_full(res.best.x12) << "\n"
        << "value (min-max) = " << format_full(res.value) << "\n"
        << "value (max-min) = " << format_full(res.maxmin_value) << "\n"
        << "gap = " << format_full(res.minmax_gap) << "\n";
    std::cout << "best tuple (" << res.best.y21 << ", " << res.best.x12_prime << ", "
              << res.best.x12 << "), value " << res.value << ", gap " << res.minmax_gap
              << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explicit solver, verifier and simulator for the two-player "
                 "switching game on a GBM"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", opt.input, "problem JSON file")->required();
        cmd->add_option("--out", opt.out_dir, "output directory")->required();
        cmd->add_option("--grid", opt.grid, "grid points per search axis");
        cmd->add_option("--points", opt.points, "sample points for CSV grids");
        cmd->add_option("--paths", opt.paths, "Monte Carlo paths");
        cmd->add_option("--seed", opt.seed, "RNG seed");
        cmd->add_option("--dt", opt.dt, "simulation time step");
        cmd->add_option("--horizon", opt.horizon, "simulation horizon (0 = default)");
        cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
        cmd->add_option("--regime", opt.regime_i, "start regime of player I (1 or 2)");
        cmd->add_option("--regime2", opt.regime_j, "start regime of player II (1 or 2)");
        cmd->add_flag("--antithetic", opt.antithetic, "antithetic path pairs");
    };

    CLI::App* solve = app.add_subcommand("solve", "build the explicit solution");
    CLI::App* verify_cmd = app.add_subcommand("verify", "check the QVI residuals");
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo payoff estimates");
    CLI::App* search = app.add_subcommand("search", "threshold grid search");
    CLI::App* sweep = app.add_subcommand("sweep", "emit value samples for plotting");
    for (CLI::App* cmd : {solve, verify_cmd, simulate, search, sweep}) add_common(cmd);
    solve->add_option("--xmin", opt.xmin, "left end of the sample grid");
    solve->add_option("--xmax", opt.xmax, "right end of the sample grid");
    sweep->add_option("--xmin", opt.xmin, "left end of the sample grid");
    sweep->add_option("--xmax", opt.xmax, "right end of the sample grid");
    verify_cmd->add_option("--solution", opt.solution_file,
                           "solution JSON to verify (default <out>/solution.json)");
    simulate->add_option("--trace", opt.trace, "dump traces for this many paths (max 100)");
    search->add_flag("--single-diffusion", opt.single_diffusion,
                     "use regime (1,1)'s diffusion for every leg");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve) return run_solve(opt);
        if (*verify_cmd) return run_verify(opt);
        if (*simulate) return run_simulate(opt);
        if (*search) return run_search(opt);
        if (*sweep) return run_sweep(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadSpec;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
