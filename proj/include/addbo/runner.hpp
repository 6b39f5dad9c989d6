#ifndef ADDBO_RUNNER_HPP
#define ADDBO_RUNNER_HPP

#include <string>
#include <vector>

#include "addbo/config.hpp"

namespace addbo {

inline constexpr const char* kVersion = "0.1.0";

/// One per-step line of a replicate CSV; the column set and order are fixed.
struct ResultRow {
    std::uint64_t seed = 0;
    std::string strategy;
    int t = 0;
    double y = 0.0;
    double r = 0.0;
    double R = 0.0;
    double S = 0.0;
    double info_gain_cum = 0.0;
    double beta = 0.0;
    double wall_ms = 0.0;
};

std::string result_csv_header();
std::string render_result_csv(const Trace& trace);
std::vector<ResultRow> parse_result_csv(const std::string& text);
std::vector<ResultRow> read_result_csv(const std::string& path);

struct AggregateRow {
    std::string strategy;
    int T = 0;
    double mean_S_T = 0.0;
    double stderr_S_T = 0.0;
    double mean_RT_over_T = 0.0;
    double stderr_RT_over_T = 0.0;
};

struct JobOutcome {
    std::string strategy;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::string filename;
    Trace trace; // empty when the job failed
};

struct ExperimentOutput {
    std::vector<JobOutcome> jobs;
    std::vector<AggregateRow> aggregate;
    std::string aggregate_path;
    std::string manifest_path;
    bool all_ok = false;
};

/// Resolve a strategy block against the experiment-level settings and the
/// oracle's true decomposition.
StrategyConfig make_strategy_config(const ExperimentConfig& cfg, const StrategyEntry& entry,
                                    const Decomposition& known_decomposition);

/// Run strategies x replicates on a worker pool (threads <= 0 picks the
/// hardware count), then write per-replicate CSVs, the aggregate CSV, and the
/// manifest in deterministic (strategy, seed) order. Failed replicates are
/// recorded in the manifest; completed ones are kept.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                int threads = 0);

/// Field-wise comparison of two result CSVs: numeric fields within
/// |a - b| <= tol * max(1, |a|, |b|) (nan matches nan), everything else
/// byte-exact. On mismatch, fills `message` when given.
bool csv_equal_numeric(const std::string& path_a, const std::string& path_b, double tol,
                       std::string* message = nullptr);

} // namespace addbo

#endif
