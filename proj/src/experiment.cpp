#include "smv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <thread>

#include "smv/metrics.hpp"

namespace smv {

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SolverKind parse_solver(const std::string& name)
{
    if (name == "sqrt-minvol") return SolverKind::sqrt_minvol;
    if (name == "minvol-baseline") return SolverKind::minvol_baseline;
    throw InvalidParameter("unknown solver '" + name +
                           "' (expected sqrt-minvol or minvol-baseline)");
}

std::string to_string(SolverKind kind)
{
    return kind == SolverKind::sqrt_minvol ? "sqrt-minvol" : "minvol-baseline";
}

LambdaSchedule parse_lambda_schedule(const std::string& name)
{
    if (name == "scaled") return LambdaSchedule::scaled;
    if (name == "compounding") return LambdaSchedule::compounding;
    throw InvalidParameter("unknown lambda schedule '" + name +
                           "' (expected scaled or compounding)");
}

std::string to_string(LambdaSchedule schedule)
{
    return schedule == LambdaSchedule::scaled ? "scaled" : "compounding";
}

SqrtConfig SolverSettings::sqrt_config(double lambda) const
{
    SqrtConfig c;
    c.lambda = lambda;
    c.delta = delta;
    c.epsilon = epsilon;
    c.max_outer = max_outer;
    c.tol_rel_f = tol.value_or(1e-9);
    c.schedule = schedule;
    c.inner.delta = delta;
    c.inner.outer_sweeps = inner_sweeps;
    c.inner.inner_iters_per_block = inner_iters;
    c.inner.inner_tol = inner_tol;
    return c;
}

MinvolConfig SolverSettings::baseline_config(double lambda) const
{
    MinvolConfig c;
    c.lambda = lambda;
    c.delta = delta;
    c.outer_sweeps = max_outer;
    c.tol_rel_obj = tol.value_or(1e-7);
    c.inner_iters_per_block = inner_iters;
    c.inner_tol = inner_tol;
    return c;
}

BaselineRun run_baseline(const DenseMatrix& x, std::size_t r, const SolverSettings& settings,
                         std::optional<double> lambda_tilde, std::optional<double> lambda)
{
    BaselineRun run;
    run.init = snpa(x, r);
    if (lambda) {
        run.lambda = *lambda;
    } else {
        run.heuristic_lambda = lambda_from_init(x, run.init.W0, run.init.H0,
                                                lambda_tilde.value_or(0.0), settings.delta);
        // log det at the start can be negative; the weight uses its magnitude.
        run.lambda = std::abs(*run.heuristic_lambda);
    }
    run.state = minvol(x, r, run.init.W0, run.init.H0, settings.baseline_config(run.lambda));
    return run;
}

void ExperimentSpec::validate() const
{
    if (sigma_grid.empty()) throw InvalidParameter("sweep: sigma grid is empty");
    if (lambda_grid.empty()) throw InvalidParameter("sweep: lambda grid is empty");
    if (replicates < 1) throw InvalidParameter("sweep: replicates must be >= 1");
    for (double s : sigma_grid) {
        if (!(s >= 0.0)) throw InvalidParameter("sweep: sigma values must be >= 0");
    }
    for (double l : lambda_grid) {
        if (!(l >= 0.0)) throw InvalidParameter("sweep: lambda values must be >= 0");
    }
    const std::size_t m = generator.kind == "paper-4x4" ? 4 : generator.m;
    const std::size_t r = effective_rank();
    if (r == 0 || r > std::min(m, generator.n)) {
        throw InvalidParameter("sweep: rank must satisfy 0 < r <= min(m, n)");
    }
}

std::size_t ExperimentSpec::effective_rank() const
{
    if (rank) return rank;
    return generator.kind == "paper-4x4" ? 4 : generator.r;
}

GeneratorSpec generator_from_config(const ConfigDoc& doc)
{
    GeneratorSpec g;
    if (!doc.has_section("generator")) {
        throw ConfigError(doc.source(), 0, "missing [generator] section");
    }
    if (auto v = doc.get_string("generator", "kind")) g.kind = *v;
    if (auto v = doc.get_count("generator", "m")) g.m = *v;
    if (auto v = doc.get_count("generator", "r")) g.r = *v;
    if (auto v = doc.get_count("generator", "n")) g.n = *v;
    if (auto v = doc.get_double("generator", "alpha")) g.alpha = *v;
    if (auto v = doc.get_double("generator", "sigma")) g.sigma = *v;
    if (auto v = doc.get_count("generator", "seed")) g.seed = *v;
    if (auto v = doc.get_string("generator", "noise")) {
        try {
            g.noise = parse_noise_model(*v);
        } catch (const InvalidParameter& e) {
            throw ConfigError(doc.source(), 0, e.what());
        }
    }
    if (g.kind != "paper-4x4" && g.kind != "random-uniform") {
        throw ConfigError(doc.source(), 0, "unknown generator kind '" + g.kind + "'");
    }
    if (!(g.alpha > 0.0)) throw ConfigError(doc.source(), 0, "alpha must be > 0");
    if (!(g.sigma >= 0.0)) throw ConfigError(doc.source(), 0, "sigma must be >= 0");
    if (g.n == 0 || g.m == 0 || g.r == 0) {
        throw ConfigError(doc.source(), 0, "m, r and n must be >= 1");
    }
    return g;
}

SolverSettings settings_from_config(const ConfigDoc& doc)
{
    SolverSettings s;
    const std::string sec = "solver";
    if (auto v = doc.get_double(sec, "delta")) s.delta = *v;
    if (auto v = doc.get_double(sec, "epsilon")) s.epsilon = *v;
    if (auto v = doc.get_count(sec, "max_outer")) s.max_outer = *v;
    if (auto v = doc.get_double(sec, "tol")) s.tol = *v;
    if (auto v = doc.get_count(sec, "inner_sweeps")) s.inner_sweeps = *v;
    if (auto v = doc.get_count(sec, "inner_iters")) s.inner_iters = *v;
    if (auto v = doc.get_double(sec, "inner_tol")) s.inner_tol = *v;
    if (auto v = doc.get_string(sec, "lambda_schedule")) {
        try {
            s.schedule = parse_lambda_schedule(*v);
        } catch (const InvalidParameter& e) {
            throw ConfigError(doc.source(), 0, e.what());
        }
    }
    if (!(s.delta > 0.0)) throw ConfigError(doc.source(), 0, "delta must be > 0");
    if (!(s.epsilon > 0.0)) throw ConfigError(doc.source(), 0, "epsilon must be > 0");
    if (s.max_outer < 1 || s.inner_sweeps < 1 || s.inner_iters < 1) {
        throw ConfigError(doc.source(), 0, "iteration budgets must be >= 1");
    }
    return s;
}

ExperimentSpec experiment_from_config(const ConfigDoc& doc)
{
    ExperimentSpec spec;
    spec.generator = generator_from_config(doc);
    spec.settings = settings_from_config(doc);
    if (!doc.has_section("sweep")) {
        throw ConfigError(doc.source(), 0, "missing [sweep] section");
    }
    const std::string sec = "sweep";
    if (auto v = doc.get_string(sec, "solver")) {
        try {
            spec.solver = parse_solver(*v);
        } catch (const InvalidParameter& e) {
            throw ConfigError(doc.source(), 0, e.what());
        }
    }
    auto sigma = doc.get_list(sec, "sigma");
    if (!sigma) throw ConfigError(doc.source(), 0, "[sweep] needs a 'sigma' list");
    spec.sigma_grid = *sigma;

    const bool has_lambda = doc.has(sec, "lambda");
    const bool has_tilde = doc.has(sec, "lambda_tilde");
    if (spec.solver == SolverKind::sqrt_minvol) {
        if (!has_lambda || has_tilde) {
            throw ConfigError(doc.source(), 0, "sqrt-minvol sweeps need 'lambda' (not lambda_tilde)");
        }
        spec.lambda_grid = *doc.get_list(sec, "lambda");
    } else {
        if (!has_tilde || has_lambda) {
            throw ConfigError(doc.source(), 0,
                              "minvol-baseline sweeps need 'lambda_tilde' (not lambda)");
        }
        spec.lambda_grid = *doc.get_list(sec, "lambda_tilde");
    }
    if (auto v = doc.get_count(sec, "replicates")) spec.replicates = *v;
    if (auto v = doc.get_count(sec, "base_seed")) spec.base_seed = *v;
    if (auto v = doc.get_count(sec, "rank")) spec.rank = *v;
    if (auto v = doc.get_string("output", "dir")) spec.output_dir = *v;
    doc.reject_unknown({"generator", "sweep", "solver", "output"});
    try {
        spec.validate();
    } catch (const InvalidParameter& e) {
        throw ConfigError(doc.source(), 0, e.what());
    }
    return spec;
}

std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t replicate)
{
    return derive_seed(base_seed, {static_cast<std::uint64_t>(replicate)});
}

namespace {

std::string sanitize(std::string s)
{
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    return s;
}

}  // namespace

SweepRecord run_cell(const ExperimentSpec& spec, std::size_t sigma_index,
                     std::size_t lambda_index, std::size_t replicate)
{
    const auto start = std::chrono::steady_clock::now();
    SweepRecord rec;
    rec.solver = spec.solver;
    rec.sigma = spec.sigma_grid.at(sigma_index);
    rec.lambda = spec.lambda_grid.at(lambda_index);
    rec.replicate = replicate;
    rec.seed = replicate_seed(spec.base_seed, replicate);

    try {
        GeneratorSpec g = spec.generator;
        g.sigma = rec.sigma;
        g.seed = rec.seed;
        const Instance inst = make_instance(g);
        const std::size_t r = spec.effective_rank();
        DenseMatrix w;
        DenseMatrix h;
        if (spec.solver == SolverKind::sqrt_minvol) {
            const SqrtResult res = sqrt_minvol(inst.X, r, spec.settings.sqrt_config(rec.lambda));
            rec.final_obj = res.trace.rows.back().f_eps;
            rec.outer_iters = res.outer_iterations;
            w = res.factors.W;
            h = res.factors.H;
        } else {
            const BaselineRun run = run_baseline(inst.X, r, spec.settings, rec.lambda, std::nullopt);
            rec.final_obj = run.state.objective_history.back();
            rec.outer_iters = run.state.sweeps;
            w = run.state.W;
            h = run.state.H;
        }
        if (w.cols() == inst.truth.W_star.cols()) {
            rec.rel_rmse_W = rel_rmse_W(inst.truth.W_star, w);
        }
        rec.rel_rmse_X = rel_rmse_X(inst.truth.X_star, w, h);
    } catch (const Error& e) {
        rec.status = sanitize(std::string("fault: ") + e.what());
        rec.final_obj.reset();
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec, std::size_t jobs)
{
    spec.validate();
    const std::size_t n_lambda = spec.lambda_grid.size();
    const std::size_t total = spec.cell_count();
    std::vector<SweepRecord> records(total);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
            const std::size_t replicate = idx % spec.replicates;
            const std::size_t lambda_index = (idx / spec.replicates) % n_lambda;
            const std::size_t sigma_index = idx / (spec.replicates * n_lambda);
            records[idx] = run_cell(spec, sigma_index, lambda_index, replicate);
        }
    };

    jobs = std::max<std::size_t>(1, std::min(jobs, total));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (std::size_t t = 0; t < jobs; ++t) {
            pool.emplace_back(worker);
        }
    }
    return records;
}

std::vector<SummaryRow> summarize(const ExperimentSpec& spec,
                                  const std::vector<SweepRecord>& records)
{
    std::vector<SummaryRow> rows;
    const std::size_t n_lambda = spec.lambda_grid.size();
    for (std::size_t s = 0; s < spec.sigma_grid.size(); ++s) {
        SummaryRow row;
        row.sigma = spec.sigma_grid[s];
        for (std::size_t l = 0; l < n_lambda; ++l) {
            double sum_x = 0.0, sum_w = 0.0;
            std::size_t cnt_x = 0, cnt_w = 0;
            for (std::size_t q = 0; q < spec.replicates; ++q) {
                const SweepRecord& rec = records.at((s * n_lambda + l) * spec.replicates + q);
                if (rec.status != "ok") continue;
                if (rec.rel_rmse_X) {
                    sum_x += *rec.rel_rmse_X;
                    ++cnt_x;
                }
                if (rec.rel_rmse_W) {
                    sum_w += *rec.rel_rmse_W;
                    ++cnt_w;
                }
            }
            if (cnt_x) {
                const double mean = sum_x / static_cast<double>(cnt_x);
                if (!row.min_rel_rmse_X || mean < *row.min_rel_rmse_X) {
                    row.min_rel_rmse_X = mean;
                    row.best_lambda_X = spec.lambda_grid[l];
                }
            }
            if (cnt_w) {
                const double mean = sum_w / static_cast<double>(cnt_w);
                if (!row.min_rel_rmse_W || mean < *row.min_rel_rmse_W) {
                    row.min_rel_rmse_W = mean;
                    row.best_lambda_W = spec.lambda_grid[l];
                }
            }
        }
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records)
{
    os << kSweepCsvHeader << '\n';
    char wall[32];
    for (const auto& r : records) {
        std::snprintf(wall, sizeof(wall), "%.3f", r.wall_ms);
        os << to_string(r.solver) << ',' << format_double(r.sigma) << ','
           << format_double(r.lambda) << ',' << r.replicate << ',' << r.seed << ','
           << opt(r.rel_rmse_X) << ',' << opt(r.rel_rmse_W) << ',' << opt(r.final_obj) << ','
           << r.outer_iters << ',' << r.status << ',' << wall << '\n';
    }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows)
{
    os << kSummaryCsvHeader << '\n';
    for (const auto& r : rows) {
        os << format_double(r.sigma) << ',' << opt(r.min_rel_rmse_X) << ',' << opt(r.best_lambda_X)
           << ',' << opt(r.min_rel_rmse_W) << ',' << opt(r.best_lambda_W) << '\n';
    }
}

void write_sweep_outputs(const ExperimentSpec& spec, const std::vector<SweepRecord>& records)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(spec.output_dir, ec);
    if (ec) {
        throw InvalidInput("cannot create output directory '" + spec.output_dir +
                           "': " + ec.message());
    }
    const fs::path dir(spec.output_dir);
    std::ofstream sweep(dir / "sweep.csv");
    std::ofstream summary(dir / "summary.csv");
    if (!sweep || !summary) {
        throw InvalidInput("cannot write CSV files in '" + spec.output_dir + "'");
    }
    write_sweep_csv(sweep, records);
    write_summary_csv(summary, summarize(spec, records));
}

void write_manifest(std::ostream& os, const GeneratorSpec& spec)
{
    os << "kind = " << spec.kind << '\n'
       << "m = " << spec.m << '\n'
       << "r = " << spec.r << '\n'
       << "n = " << spec.n << '\n'
       << "alpha = " << format_double(spec.alpha) << '\n'
       << "sigma = " << format_double(spec.sigma) << '\n'
       << "noise = " << to_string(spec.noise) << '\n'
       << "seed = " << spec.seed << '\n';
}

}  // namespace smv
