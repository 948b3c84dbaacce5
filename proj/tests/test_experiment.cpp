#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "smv/config.hpp"
#include "smv/experiment.hpp"

namespace {

smv::ConfigDoc parse(const std::string& text)
{
    std::istringstream is(text);
    return smv::ConfigDoc::parse(is, "test.cfg");
}

std::string error_of(const std::string& text)
{
    try {
        smv::experiment_from_config(parse(text));
    } catch (const smv::ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kSmallSweep = R"(
[generator]
kind = paper-4x4
n = 60

[sweep]
solver = sqrt-minvol
sigma = 1e-2, 1e-3
lambda = 1, 0.1, 0.01
replicates = 2
base_seed = 9

[solver]
max_outer = 5
inner_sweeps = 5
)";

std::string without_wall(const std::vector<smv::SweepRecord>& records)
{
    std::ostringstream os;
    smv::write_sweep_csv(os, records);
    std::istringstream in(os.str());
    std::string line, out;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
}

}  // namespace

TEST(ConfigDoc, ParsesSectionsListsAndComments)
{
    const auto doc = parse("# top\n[a]\nx = 1.5  # trailing\nname = hello\n\n; other\n[b]\nl = 1, 2.5 ,3e-1\nn = 42\n");
    EXPECT_EQ(*doc.get_double("a", "x"), 1.5);
    EXPECT_EQ(*doc.get_string("a", "name"), "hello");
    EXPECT_EQ(*doc.get_list("b", "l"), (std::vector<double>{1, 2.5, 0.3}));
    EXPECT_EQ(*doc.get_count("b", "n"), 42u);
    EXPECT_FALSE(doc.get_double("a", "missing").has_value());
    EXPECT_NO_THROW(doc.reject_unknown({"a", "b"}));
}

TEST(ConfigDoc, LineAnchoredErrors)
{
    auto message = [](const std::string& text, auto&& use) {
        try {
            auto doc = parse(text);
            use(doc);
        } catch (const smv::ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    auto nothing = [](const smv::ConfigDoc&) {};
    EXPECT_EQ(message("[a]\nx = 1\nx = 2\n", nothing).rfind("test.cfg:3:", 0), 0u);
    EXPECT_EQ(message("[a]\n[a\n", nothing).rfind("test.cfg:2:", 0), 0u);
    EXPECT_EQ(message("x = 1\n", nothing).rfind("test.cfg:1:", 0), 0u);
    EXPECT_EQ(message("[a]\njunk\n", nothing).rfind("test.cfg:2:", 0), 0u);
    EXPECT_EQ(message("[a]\n[b]\n[a]\n", nothing).rfind("test.cfg:3:", 0), 0u);
    EXPECT_EQ(message("[a]\n\nx = abc\n", [](const smv::ConfigDoc& d) { d.get_double("a", "x"); })
                  .rfind("test.cfg:3:", 0),
              0u);
    EXPECT_EQ(message("[a]\nx = -3\n", [](const smv::ConfigDoc& d) { d.get_count("a", "x"); })
                  .rfind("test.cfg:2:", 0),
              0u);
    EXPECT_EQ(message("[a]\nl = 1,,2\n", [](const smv::ConfigDoc& d) { d.get_list("a", "l"); })
                  .rfind("test.cfg:2:", 0),
              0u);
    EXPECT_EQ(message("[a]\nx = 1\ny = 2\n",
                      [](const smv::ConfigDoc& d) {
                          d.get_double("a", "x");
                          d.reject_unknown({"a"});
                      })
                  .rfind("test.cfg:3:", 0),
              0u);
}

TEST(ExperimentSpec, LoadsFromConfig)
{
    const auto spec = smv::experiment_from_config(parse(kSmallSweep));
    EXPECT_EQ(spec.generator.kind, "paper-4x4");
    EXPECT_EQ(spec.generator.n, 60u);
    EXPECT_EQ(spec.sigma_grid, (std::vector<double>{1e-2, 1e-3}));
    EXPECT_EQ(spec.lambda_grid, (std::vector<double>{1, 0.1, 0.01}));
    EXPECT_EQ(spec.replicates, 2u);
    EXPECT_EQ(spec.base_seed, 9u);
    EXPECT_EQ(spec.settings.max_outer, 5u);
    EXPECT_EQ(spec.effective_rank(), 4u);
    EXPECT_EQ(spec.cell_count(), 12u);
}

TEST(ExperimentSpec, RejectsBadSpecs)
{
    EXPECT_NE(error_of("[generator]\nkind = paper-4x4\n[sweep]\nsigma = 0.1\n"), "");
    EXPECT_NE(error_of("[generator]\nkind = paper-4x4\n[sweep]\nlambda = 1\n"), "");
    EXPECT_NE(error_of("[generator]\nkind = nope\n[sweep]\nsigma = 0.1\nlambda = 1\n"), "");
    EXPECT_NE(error_of("[generator]\n[sweep]\nsigma = 0.1\nlambda = 1\nreplicates = 0\n"), "");
    EXPECT_NE(error_of("[generator]\n[sweep]\nsigma = -0.1\nlambda = 1\n"), "");
    EXPECT_NE(error_of("[generator]\n[sweep]\nsolver = minvol-baseline\nsigma = 0.1\nlambda = 1\n"), "");
    EXPECT_NE(error_of("[generator]\n[sweep]\nsigma = 0.1\nlambda = 1\n[extra]\nx = 1\n"), "");
    const std::string unknown = error_of("[generator]\n[sweep]\nsigma = 0.1\nlambda = 1\nlamda = 2\n");
    EXPECT_EQ(unknown.rfind("test.cfg:5:", 0), 0u) << unknown;
    EXPECT_EQ(error_of("[generator]\n[sweep]\nsigma = 0.1\nlambda = 1\n"), "");
}

TEST(Sweep, OrderedByGridIndexAndSharedSeeds)
{
    const auto spec = smv::experiment_from_config(parse(kSmallSweep));
    const auto records = smv::run_sweep(spec, 1);
    ASSERT_EQ(records.size(), spec.cell_count());
    std::size_t idx = 0;
    for (double s : spec.sigma_grid)
        for (double l : spec.lambda_grid)
            for (std::size_t q = 0; q < spec.replicates; ++q) {
                const auto& r = records[idx++];
                EXPECT_EQ(r.sigma, s);
                EXPECT_EQ(r.lambda, l);
                EXPECT_EQ(r.replicate, q);
                EXPECT_EQ(r.seed, smv::replicate_seed(spec.base_seed, q));
                EXPECT_EQ(r.status, "ok");
                ASSERT_TRUE(r.rel_rmse_X && r.rel_rmse_W);
                EXPECT_GE(*r.rel_rmse_X, 0.0);
                EXPECT_GE(*r.rel_rmse_W, 0.0);
            }
}

TEST(Sweep, JobCountDoesNotChangeResults)
{
    const auto spec = smv::experiment_from_config(parse(kSmallSweep));
    EXPECT_EQ(without_wall(smv::run_sweep(spec, 1)), without_wall(smv::run_sweep(spec, 8)));
}

TEST(Sweep, SummaryMatchesRecomputation)
{
    const auto spec = smv::experiment_from_config(parse(kSmallSweep));
    const auto records = smv::run_sweep(spec, 2);
    const auto summary = smv::summarize(spec, records);
    ASSERT_EQ(summary.size(), spec.sigma_grid.size());
    for (std::size_t s = 0; s < spec.sigma_grid.size(); ++s) {
        double best_x = std::numeric_limits<double>::infinity(), best_w = best_x;
        double arg_x = 0, arg_w = 0;
        for (std::size_t l = 0; l < spec.lambda_grid.size(); ++l) {
            double mx = 0, mw = 0;
            for (const auto& r : records) {
                if (r.sigma == spec.sigma_grid[s] && r.lambda == spec.lambda_grid[l]) {
                    mx += *r.rel_rmse_X / spec.replicates;
                    mw += *r.rel_rmse_W / spec.replicates;
                }
            }
            if (mx < best_x) {
                best_x = mx;
                arg_x = spec.lambda_grid[l];
            }
            if (mw < best_w) {
                best_w = mw;
                arg_w = spec.lambda_grid[l];
            }
        }
        EXPECT_EQ(summary[s].sigma, spec.sigma_grid[s]);
        EXPECT_NEAR(*summary[s].min_rel_rmse_X, best_x, 1e-15);
        EXPECT_NEAR(*summary[s].min_rel_rmse_W, best_w, 1e-15);
        EXPECT_EQ(*summary[s].best_lambda_X, arg_x);
        EXPECT_EQ(*summary[s].best_lambda_W, arg_w);
    }
}

TEST(Sweep, CellFaultIsRecordedNotThrown)
{
    auto spec = smv::experiment_from_config(parse(kSmallSweep));
    spec.rank = 7;  // more than m = 4; run_cell itself does not validate
    const auto rec = smv::run_cell(spec, 0, 0, 0);
    EXPECT_EQ(rec.status.rfind("fault: ", 0), 0u);
    EXPECT_EQ(rec.status.find(','), std::string::npos);
    EXPECT_FALSE(rec.rel_rmse_X.has_value());
    std::ostringstream os;
    smv::write_sweep_csv(os, {rec});
    std::istringstream in(os.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, smv::kSweepCsvHeader);
    EXPECT_EQ(std::count(row.begin(), row.end(), ','), 10);
}

TEST(Sweep, BaselineCellsUseLambdaTilde)
{
    const auto spec = smv::experiment_from_config(parse(R"(
[generator]
n = 60
seed = 3
[sweep]
solver = minvol-baseline
sigma = 1e-2
lambda_tilde = 1e-2, 1e-3
[solver]
max_outer = 20
)"));
    const auto records = smv::run_sweep(spec, 1);
    ASSERT_EQ(records.size(), 2u);
    for (const auto& r : records) {
        EXPECT_EQ(r.solver, smv::SolverKind::minvol_baseline);
        EXPECT_EQ(r.status, "ok");
        EXPECT_TRUE(r.final_obj.has_value());
    }
    EXPECT_EQ(records[0].lambda, 1e-2);
}

TEST(Names, SolverAndSchedule)
{
    EXPECT_EQ(smv::parse_solver("sqrt-minvol"), smv::SolverKind::sqrt_minvol);
    EXPECT_EQ(smv::to_string(smv::SolverKind::minvol_baseline), "minvol-baseline");
    EXPECT_THROW(smv::parse_solver("nmf"), smv::InvalidParameter);
    EXPECT_EQ(smv::parse_lambda_schedule("compounding"), smv::LambdaSchedule::compounding);
    EXPECT_THROW(smv::parse_lambda_schedule("x"), smv::InvalidParameter);
    EXPECT_EQ(smv::format_double(0.1), "0.10000000000000001");
}

TEST(Baseline, NegativeLogDetUsesMagnitude)
{
    // Seed 1 at sigma 0.01: the SNPA start has log det(W0'W0 + 0.1 I) < 0.
    smv::GeneratorSpec g;
    g.sigma = 0.01;
    g.seed = 1;
    const auto inst = smv::make_instance(g);
    smv::SolverSettings s;
    s.max_outer = 10;
    const auto a = smv::run_baseline(inst.X, 4, s, 1e-2, std::nullopt);
    ASSERT_TRUE(a.heuristic_lambda.has_value());
    EXPECT_LT(*a.heuristic_lambda, 0.0);
    EXPECT_EQ(a.lambda, -*a.heuristic_lambda);
    const auto b = smv::run_baseline(inst.X, 4, s, 1e-4, std::nullopt);
    EXPECT_NEAR(b.lambda, a.lambda * 1e-2, 1e-15 * a.lambda);
    EXPECT_NE(a.state.W, b.state.W);
    const auto c = smv::run_baseline(inst.X, 4, s, std::nullopt, 0.5);
    EXPECT_FALSE(c.heuristic_lambda.has_value());
    EXPECT_EQ(c.lambda, 0.5);
}
