#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smv/config.hpp"
#include "smv/datagen.hpp"
#include "smv/minvol.hpp"
#include "smv/snpa.hpp"
#include "smv/sqrt_minvol.hpp"

namespace smv {

enum class SolverKind { sqrt_minvol, minvol_baseline };

SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind kind);
LambdaSchedule parse_lambda_schedule(const std::string& name);
std::string to_string(LambdaSchedule schedule);

/// Solver knobs shared by the CLI and sweep specs ([solver] section).
struct SolverSettings {
    double delta = 0.1;
    double epsilon = 0.1;
    // Outer budget: MM iterations (sqrt-minvol) or sweeps (baseline).
    std::size_t max_outer = 200;
    // Relative stopping tolerance on f_eps (sqrt-minvol) or the min-vol objective (baseline).
    std::optional<double> tol;
    std::size_t inner_sweeps = 20;
    std::size_t inner_iters = 50;
    double inner_tol = 1e-9;
    LambdaSchedule schedule = LambdaSchedule::scaled;

    SqrtConfig sqrt_config(double lambda) const;
    // Baseline defaults: 100 sweeps, tol 1e-7, unless overridden.
    MinvolConfig baseline_config(double lambda) const;
};

struct BaselineRun {
    SnpaResult init;
    // Signed value of the lambda_tilde heuristic (unset when lambda was given).
    std::optional<double> heuristic_lambda;
    // Weight the solver ran with.
    double lambda = 0.0;
    MinvolState state;
};

/// SNPA start, lambda = |lambda_from_init(lambda_tilde)| (or `lambda` directly
/// when given), then the min-vol solver.
BaselineRun run_baseline(const DenseMatrix& x, std::size_t r, const SolverSettings& settings,
                         std::optional<double> lambda_tilde, std::optional<double> lambda);

struct ExperimentSpec {
    GeneratorSpec generator;
    std::vector<double> sigma_grid;
    // lambda for sqrt-minvol, lambda_tilde for the baseline.
    std::vector<double> lambda_grid;
    SolverKind solver = SolverKind::sqrt_minvol;
    std::size_t rank = 0;  // 0: the generator's r
    std::size_t replicates = 1;
    std::uint64_t base_seed = 1;
    SolverSettings settings;
    std::string output_dir = "sweep_out";

    void validate() const;
    std::size_t effective_rank() const;
    std::size_t cell_count() const
    {
        return sigma_grid.size() * lambda_grid.size() * replicates;
    }
};

/// [generator] section: kind, m, r, n, alpha, sigma, noise, seed.
GeneratorSpec generator_from_config(const ConfigDoc& doc);
/// [solver] section.
SolverSettings settings_from_config(const ConfigDoc& doc);
/// [generator], [sweep], [solver], [output]; rejects unknown keys.
ExperimentSpec experiment_from_config(const ConfigDoc& doc);

struct SweepRecord {
    SolverKind solver = SolverKind::sqrt_minvol;
    double sigma = 0.0;
    double lambda = 0.0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    std::optional<double> rel_rmse_X;
    std::optional<double> rel_rmse_W;
    std::optional<double> final_obj;
    std::size_t outer_iters = 0;
    std::string status = "ok";
    double wall_ms = 0.0;
};

struct SummaryRow {
    double sigma = 0.0;
    std::optional<double> min_rel_rmse_X;
    std::optional<double> best_lambda_X;
    std::optional<double> min_rel_rmse_W;
    std::optional<double> best_lambda_W;
};

/// Seed of replicate q; shared by every sigma and lambda of that replicate.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t replicate);

/// One grid cell. Solver faults are caught and reported through `status`.
SweepRecord run_cell(const ExperimentSpec& spec, std::size_t sigma_index,
                     std::size_t lambda_index, std::size_t replicate);

/// All cells on a pool of `jobs` threads; the result is ordered by
/// (sigma, lambda, replicate) grid index regardless of completion order.
std::vector<SweepRecord> run_sweep(const ExperimentSpec& spec, std::size_t jobs);

/// Per sigma: the replicate-averaged rel-RMSE minimized over lambda (first
/// grid entry wins ties). Faulted cells are ignored.
std::vector<SummaryRow> summarize(const ExperimentSpec& spec,
                                  const std::vector<SweepRecord>& records);

inline constexpr const char* kSweepCsvHeader =
    "solver,sigma,lambda,replicate,seed,rel_rmse_X,rel_rmse_W,final_obj,outer_iters,status,"
    "wall_ms";
inline constexpr const char* kSummaryCsvHeader =
    "sigma,min_rel_rmse_X,best_lambda_X,min_rel_rmse_W,best_lambda_W";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Writes sweep.csv and summary.csv into spec.output_dir (created if needed).
void write_sweep_outputs(const ExperimentSpec& spec, const std::vector<SweepRecord>& records);

/// Manifest of a generated instance (`key = value` lines).
void write_manifest(std::ostream& os, const GeneratorSpec& spec);

std::string format_double(double v);

}  // namespace smv
