// smv: command-line front end for square-root min-vol NMF.
//
//   smv generate --config gen.cfg --out dir [--seed N]
//   smv solve    --x X.txt --rank r [--solver sqrt-minvol|minvol-baseline] ... --out dir
//   smv sweep    --config sweep.cfg [--jobs N] [--out dir] [--seed N]
//   smv pca      --x X.txt [--w-star W.txt] [--w-hat W.txt] --out pca.csv
//
// Exit codes: 0 success, 2 input/config error, 3 numerical fault.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "smv/config.hpp"
#include "smv/error.hpp"
#include "smv/experiment.hpp"
#include "smv/matrix.hpp"
#include "smv/metrics.hpp"
#include "smv/sqrt_minvol.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw smv::InvalidInput("cannot create output directory '" + dir + "'");
    }
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream os(path);
    if (!os) throw smv::InvalidInput("cannot write '" + path.string() + "'");
    return os;
}

struct GenerateArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

int cmd_generate(const GenerateArgs& a)
{
    const smv::ConfigDoc doc = smv::ConfigDoc::load(a.config);
    smv::GeneratorSpec spec = smv::generator_from_config(doc);
    doc.reject_unknown({"generator"});
    if (a.seed) spec.seed = *a.seed;

    const smv::Instance inst = smv::make_instance(spec);
    ensure_dir(a.out);
    const fs::path dir(a.out);
    smv::save_matrix((dir / "X.txt").string(), inst.X);
    smv::save_matrix((dir / "W_star.txt").string(), inst.truth.W_star);
    smv::save_matrix((dir / "H_star.txt").string(), inst.truth.H_star);
    smv::save_matrix((dir / "X_star.txt").string(), inst.truth.X_star);
    auto manifest = open_out(dir / "manifest.txt");
    smv::write_manifest(manifest, spec);
    std::cout << "generated " << spec.kind << " instance (" << inst.X.rows() << " x "
              << inst.X.cols() << ", seed " << spec.seed << ") in " << a.out << '\n';
    return 0;
}

struct SolveArgs {
    std::string x;
    std::size_t rank = 0;
    std::string solver = "sqrt-minvol";
    std::optional<double> lambda;
    std::optional<double> lambda_tilde;
    smv::SolverSettings settings;
    std::string schedule = "scaled";
    std::string w_star;
    std::string x_star;
    std::string out = "solve_out";
};

void report_metrics(const SolveArgs& a, const smv::DenseMatrix& w, const smv::DenseMatrix& h)
{
    if (!a.x_star.empty()) {
        const auto xs = smv::load_matrix(a.x_star);
        std::cout << "rel_rmse_X = " << smv::format_double(smv::rel_rmse_X(xs, w, h)) << '\n';
    }
    if (!a.w_star.empty()) {
        const auto ws = smv::load_matrix(a.w_star);
        std::cout << "rel_rmse_W = " << smv::format_double(smv::rel_rmse_W(ws, w)) << '\n';
    }
}

int cmd_solve(SolveArgs a)
{
    const smv::SolverKind kind = smv::parse_solver(a.solver);
    a.settings.schedule = smv::parse_lambda_schedule(a.schedule);
    const smv::DenseMatrix x = smv::load_matrix(a.x);
    ensure_dir(a.out);
    const fs::path dir(a.out);

    if (kind == smv::SolverKind::minvol_baseline) {
        if (a.lambda && a.lambda_tilde) {
            throw smv::InvalidParameter("give either --lambda or --lambda-tilde, not both");
        }
        if (!a.lambda && !a.lambda_tilde) a.lambda_tilde = 0.1;
        const smv::BaselineRun run = smv::run_baseline(x, a.rank, a.settings, a.lambda_tilde, a.lambda);
        std::cout << "solver = minvol-baseline, rank = " << a.rank;
        if (a.lambda_tilde) std::cout << ", lambda_tilde = " << smv::format_double(*a.lambda_tilde);
        std::cout << ", lambda = " << smv::format_double(run.lambda) << '\n';
        if (run.heuristic_lambda && *run.heuristic_lambda <= 0.0) {
            std::cerr << "warning: heuristic lambda = " << smv::format_double(*run.heuristic_lambda)
                      << " <= 0 (log det at the SNPA start is not positive); using its magnitude\n";
        }
        auto trace = open_out(dir / "trace.csv");
        trace << "sweep,objective\n";
        for (std::size_t i = 0; i < run.state.objective_history.size(); ++i) {
            trace << i << ',' << smv::format_double(run.state.objective_history[i]) << '\n';
        }
        smv::save_matrix((dir / "W.txt").string(), run.state.W);
        smv::save_matrix((dir / "H.txt").string(), run.state.H);
        std::cout << "sweeps = " << run.state.sweeps << ", final objective = "
                  << smv::format_double(run.state.objective_history.back()) << '\n';
        report_metrics(a, run.state.W, run.state.H);
        return 0;
    }

    if (a.lambda_tilde) {
        throw smv::InvalidParameter("--lambda-tilde applies to minvol-baseline only");
    }
    const double lambda = a.lambda.value_or(1.0);
    std::optional<smv::GroundTruthRef> truth;
    if (!a.w_star.empty() && !a.x_star.empty()) {
        truth = smv::GroundTruthRef{smv::load_matrix(a.w_star), smv::load_matrix(a.x_star)};
    }
    std::cout << "solver = sqrt-minvol, rank = " << a.rank
              << ", lambda = " << smv::format_double(lambda)
              << ", schedule = " << smv::to_string(a.settings.schedule) << '\n';
    try {
        const smv::SqrtResult res = smv::sqrt_minvol(x, a.rank, a.settings.sqrt_config(lambda), truth);
        auto trace = open_out(dir / "trace.csv");
        res.trace.write_csv(trace);
        smv::save_matrix((dir / "W.txt").string(), res.factors.W);
        smv::save_matrix((dir / "H.txt").string(), res.factors.H);
        std::cout << "outer iterations = " << res.outer_iterations
                  << (res.converged ? " (converged)" : " (budget reached)")
                  << ", final f_eps = " << smv::format_double(res.trace.rows.back().f_eps) << '\n';
        report_metrics(a, res.factors.W, res.factors.H);
    } catch (const smv::SolveFault& e) {
        auto trace = open_out(dir / "trace.csv");
        e.trace().write_csv(trace);
        throw;
    }
    return 0;
}

struct SweepArgs {
    std::string config;
    std::size_t jobs = 1;
    std::string out;
    std::optional<std::uint64_t> seed;
};

int cmd_sweep(const SweepArgs& a)
{
    const smv::ConfigDoc doc = smv::ConfigDoc::load(a.config);
    smv::ExperimentSpec spec = smv::experiment_from_config(doc);
    if (!a.out.empty()) spec.output_dir = a.out;
    if (a.seed) spec.base_seed = *a.seed;
    std::cout << "sweep: " << smv::to_string(spec.solver) << ", " << spec.cell_count()
              << " cells, " << a.jobs << " job(s)\n";
    const auto records = smv::run_sweep(spec, a.jobs);
    smv::write_sweep_outputs(spec, records);
    std::size_t faults = 0;
    for (const auto& r : records) faults += r.status != "ok";
    std::cout << "wrote " << spec.output_dir << "/sweep.csv and summary.csv";
    if (faults) std::cout << " (" << faults << " faulted cell(s))";
    std::cout << '\n';
    return 0;
}

struct PcaArgs {
    std::string x;
    std::string w_star;
    std::string w_hat;
    std::string out;
};

int cmd_pca(const PcaArgs& a)
{
    const smv::DenseMatrix x = smv::load_matrix(a.x);
    std::vector<smv::DenseMatrix> overlays;
    std::vector<std::string> labels;
    if (!a.w_star.empty()) {
        overlays.push_back(smv::load_matrix(a.w_star));
        labels.push_back("W_star");
    }
    if (!a.w_hat.empty()) {
        overlays.push_back(smv::load_matrix(a.w_hat));
        labels.push_back("W_hat");
    }
    const smv::Pca2d pca = smv::pca_2d(x, overlays);
    const fs::path out(a.out);
    if (out.has_parent_path()) ensure_dir(out.parent_path().string());
    auto os = open_out(out);
    smv::write_pca_csv(os, pca, "X", labels);
    std::cout << "captured variance ratio = " << smv::format_double(pca.captured_variance_ratio())
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Square-root min-vol NMF: generate, solve, sweep, pca"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Write a synthetic instance (X, W*, H*, X*, manifest)");
    g->add_option("--config", gen.config, "Generator config file")->required();
    g->add_option("--out", gen.out, "Output directory")->required();
    g->add_option("--seed", gen.seed, "Override the config seed");

    SolveArgs sol;
    auto* s = app.add_subcommand("solve", "Run one solver on a data matrix");
    s->add_option("--x", sol.x, "Data matrix file")->required();
    s->add_option("--rank", sol.rank, "Factorization rank r")->required();
    s->add_option("--solver", sol.solver, "sqrt-minvol or minvol-baseline");
    s->add_option("--lambda", sol.lambda, "Penalty weight (sqrt-minvol default 1)");
    s->add_option("--lambda-tilde", sol.lambda_tilde, "Baseline relative weight");
    s->add_option("--delta", sol.settings.delta, "log det shift")->capture_default_str();
    s->add_option("--epsilon", sol.settings.epsilon, "Smoothing of the square root")
        ->capture_default_str();
    s->add_option("--max-outer", sol.settings.max_outer, "Outer iteration budget")
        ->capture_default_str();
    s->add_option("--tol", sol.settings.tol, "Relative objective stopping tolerance");
    s->add_option("--inner-sweeps", sol.settings.inner_sweeps, "Min-vol sweeps per outer step")
        ->capture_default_str();
    s->add_option("--lambda-schedule", sol.schedule, "scaled or compounding")
        ->capture_default_str();
    s->add_option("--w-star", sol.w_star, "Ground-truth W for rel-RMSE(W)");
    s->add_option("--x-star", sol.x_star, "Noiseless X for rel-RMSE(X)");
    s->add_option("--out", sol.out, "Output directory")->capture_default_str();

    SweepArgs sw;
    auto* w = app.add_subcommand("sweep", "Run a declarative (sigma, lambda) sweep");
    w->add_option("--config", sw.config, "Sweep spec file")->required();
    w->add_option("--jobs", sw.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    w->add_option("--out", sw.out, "Override the output directory");
    w->add_option("--seed", sw.seed, "Override the base seed");

    PcaArgs pc;
    auto* p = app.add_subcommand("pca", "Project columns onto their top-2 principal subspace");
    p->add_option("--x", pc.x, "Data matrix file")->required();
    p->add_option("--w-star", pc.w_star, "Overlay: ground-truth W");
    p->add_option("--w-hat", pc.w_hat, "Overlay: estimated W");
    p->add_option("--out", pc.out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*s) return cmd_solve(sol);
        if (*w) return cmd_sweep(sw);
        if (*p) return cmd_pca(pc);
    } catch (const smv::InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const smv::InvalidParameter& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const smv::UndefinedMetric& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const smv::Error& e) {
        std::cerr << "numerical fault: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
