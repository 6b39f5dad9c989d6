#ifndef ADDBO_ACQUISITION_HPP
#define ADDBO_ACQUISITION_HPP

#include <Eigen/Core>

#include "addbo/gp.hpp"

namespace addbo {

enum class BetaKind { theoretical_add, theoretical_full, practical };

/// Exploration-weight schedule. `group_dim` is the group-size bound of the
/// decomposition in use (equal to `dim_full` for a full-kernel run).
struct BetaSchedule {
    BetaKind kind = BetaKind::practical;
    double delta = 0.1;  // confidence parameter, theoretical kinds only
    double coeff = 0.2;  // practical kind only
    int dim_full = 1;    // D
    int group_dim = 1;   // d
    int num_groups = 1;  // M
};

/// beta_t for step t >= 1 (t counts post-initialization steps).
double beta_value(const BetaSchedule& schedule, int t);

double ucb(const PosteriorState& state, const BetaSchedule& beta, int t,
           const Eigen::VectorXd& x);

double add_ucb_group(const PosteriorState& state, const BetaSchedule& beta, int t, int j,
                     const Eigen::VectorXd& z);

/// (mu - best) Phi(u) + sigma phi(u); collapses to max(mu - best, 0) at sigma = 0.
double expected_improvement(const PosteriorState& state, const Eigen::VectorXd& x,
                            double incumbent);

/// Bundles the per-step ingredients of an acquisition evaluation.
struct AcquisitionQuery {
    const PosteriorState& state;
    int t;
    BetaSchedule beta;

    double ucb(const Eigen::VectorXd& x) const { return addbo::ucb(state, beta, t, x); }
    double add_ucb_group(int j, const Eigen::VectorXd& z) const {
        return addbo::add_ucb_group(state, beta, t, j, z);
    }
};

} // namespace addbo

#endif
