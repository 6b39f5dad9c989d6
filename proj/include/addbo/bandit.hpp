#ifndef ADDBO_BANDIT_HPP
#define ADDBO_BANDIT_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "addbo/acquisition.hpp"
#include "addbo/direct.hpp"
#include "addbo/gp.hpp"
#include "addbo/kernels.hpp"
#include "addbo/rng.hpp"

namespace addbo {

/// Partition of {0..D-1} into disjoint groups of bounded size. Canonical
/// form: indices sorted within each group, groups sorted by first index.
class Decomposition {
public:
    /// max_group_dim = 0 skips the size bound check
    Decomposition(std::vector<std::vector<int>> groups, int ambient_dim, int max_group_dim = 0);

    static Decomposition single_group(int ambient_dim);

    const std::vector<std::vector<int>>& groups() const { return groups_; }
    int ambient_dim() const { return ambient_dim_; }
    int num_groups() const { return static_cast<int>(groups_.size()); }
    int max_group_size() const;

    bool operator==(const Decomposition& other) const {
        return ambient_dim_ == other.ambient_dim_ && groups_ == other.groups_;
    }

private:
    std::vector<std::vector<int>> groups_;
    int ambient_dim_;
};

/// Uniformly random partition into ceil(D/d) groups with sizes as equal as
/// possible, each of size at most d.
Decomposition random_decomposition(int D, int d, Rng& rng);

/// Additive kernel over the decomposition's groups with shared parameters.
AdditiveKernel make_additive_kernel(const Decomposition& decomp, const KernelSpec& spec);

/// Black-box objective on [0,1]^dim. `value` is the noiseless function; the
/// run loop adds observation noise. Regret columns require the optimum.
struct Oracle {
    int dim = 0;
    std::function<double(const Eigen::VectorXd&)> value;
    std::optional<double> optimum_value;
    std::optional<Eigen::VectorXd> optimum_point;
};

enum class StrategyKind { add_gp_ucb, gp_ucb, seq_one_group, seq_cycle, ei, random };

std::string to_string(StrategyKind kind);
StrategyKind strategy_kind_from_string(const std::string& s);

struct StrategyConfig {
    StrategyKind kind = StrategyKind::add_gp_ucb;
    BetaSchedule beta;           // dim fields are filled in by run()
    direct::DirectConfig direct; // max_evals = total acquisition budget per step
    std::optional<Decomposition> decomposition; // known decomposition
    int learn_d = 0;    // group size bound when the decomposition is learned
    int n_init = 10;
    int n_cyc = 25;
    double bandwidth_floor = 1e-5; // acquisition bandwidth before the first refit
    int ml_num_candidates = -1;    // decomposition-search width; -1 means D
    double eta = 0.1;
    KernelSpec kernel; // initial shared kernel parameters
    HyperSearchSpace hyper;
    /// off by default so traces (and the CSVs built from them) are
    /// bit-identical across reruns
    bool measure_wall_time = false;
    std::string label;
};

struct TraceRow {
    int t = 0; // global query index, 1..n_init+T
    bool init_phase = false;
    Eigen::VectorXd x;
    double y = 0.0;
    double f_value = 0.0; // noiseless oracle value
    double r = 0.0;       // instantaneous regret (nan when optimum unknown)
    double R = 0.0;       // cumulative regret
    double S = 0.0;       // simple regret (best observed value when optimum unknown)
    double beta = 0.0;    // 0 on initialization rows
    double info_inc = 0.0;
    double info_cum = 0.0;
    double jitter = 0.0;
    double min_raw_variance = 0.0;
    int fits_in_step = 0; // posterior factorizations used by this step
    long acq_evals = 0;   // acquisition evaluations used by this step
    double wall_ms = 0.0;
};

struct RefitRecord {
    int t = 0; // post-initialization step index of the refit
    double sigma = 0.0;
    double bandwidth = 0.0;
    double log_marginal = 0.0;
    std::optional<Decomposition> decomposition; // present when it was re-learned
};

struct Trace {
    std::string strategy_label;
    std::uint64_t seed = 0;
    bool regret_available = false;
    std::vector<TraceRow> rows;
    std::vector<RefitRecord> refits;
    /// nonempty when the run aborted mid-loop; rows hold the partial trace
    std::string error;

    bool ok() const { return error.empty(); }
};

struct StepResult {
    Eigen::VectorXd x;
    long acq_evals = 0;
};

/// Maximize each group's UCB independently with DiRect and combine the
/// coordinates. The total budget is split evenly across groups (floor, with
/// the remainder going to the leading groups).
StepResult step_add_gp_ucb(const PosteriorState& state, const BetaSchedule& beta,
                           const direct::DirectConfig& cfg, int t);

/// Maximize the full-posterior UCB over [0,1]^D with the whole budget.
StepResult step_gp_ucb(const PosteriorState& state, const BetaSchedule& beta,
                       const direct::DirectConfig& cfg, int t);

/// Re-optimize one group's UCB, carrying all other coordinates over.
StepResult step_seq_group(const PosteriorState& state, int active_group,
                          const Eigen::VectorXd& carry, const BetaSchedule& beta,
                          const direct::DirectConfig& cfg, int t);

StepResult step_ei(const PosteriorState& state, const direct::DirectConfig& cfg,
                   double incumbent);

Eigen::VectorXd step_random(Rng& rng, int dim);

/// 1/2 log(1 + eta^-2 sigma^2_{t-1}(x)) from the state *before* (x, y) is
/// incorporated.
double info_gain_increment(const PosteriorState& state, const Eigen::VectorXd& x);

/// Among `num_candidates` random partitions plus the incumbent, return the
/// one with the largest marginal likelihood under the shared kernel
/// parameters. Ties keep the earliest candidate (incumbent first).
Decomposition decomposition_search(const Dataset& data, const Decomposition& incumbent, int d,
                                   int num_candidates, const KernelSpec& shared_params,
                                   const NoiseModel& noise, Rng& rng);

/// Run one strategy for n_init random queries plus T acquisition steps.
/// Deterministic given (oracle, cfg, T, seed). Invalid arguments throw; a
/// failure inside the loop (oracle or acquisition) aborts the run and
/// returns the partial trace with `error` set.
Trace run(const Oracle& oracle, const StrategyConfig& cfg, int T, std::uint64_t seed);

} // namespace addbo

#endif
