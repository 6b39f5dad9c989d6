#include "addbo/acquisition.hpp"

#include <cmath>
#include <stdexcept>

namespace addbo {

double beta_value(const BetaSchedule& s, int t) {
    if (t < 1) throw std::invalid_argument("beta_value: t must be >= 1");
    const double td = static_cast<double>(t);
    switch (s.kind) {
    case BetaKind::practical:
        return s.coeff * s.group_dim * std::log(2.0 * td);
    case BetaKind::theoretical_add:
        return 2.0 * std::log(s.num_groups * M_PI * M_PI * td * td / (2.0 * s.delta)) +
               2.0 * s.group_dim * std::log(s.dim_full * td * td * td);
    case BetaKind::theoretical_full:
        return 2.0 * std::log(2.0 * td * td * M_PI * M_PI / s.delta) +
               2.0 * s.dim_full * std::log(s.dim_full * td * td * td);
    }
    throw std::logic_error("beta_value: unknown schedule kind");
}

double ucb(const PosteriorState& state, const BetaSchedule& beta, int t,
           const Eigen::VectorXd& x) {
    const PosteriorMoments m = state.full(x);
    return m.mean + std::sqrt(beta_value(beta, t)) * std::sqrt(m.variance);
}

double add_ucb_group(const PosteriorState& state, const BetaSchedule& beta, int t, int j,
                     const Eigen::VectorXd& z) {
    const PosteriorMoments m = state.group(j, z);
    return m.mean + std::sqrt(beta_value(beta, t)) * std::sqrt(m.variance);
}

double expected_improvement(const PosteriorState& state, const Eigen::VectorXd& x,
                            double incumbent) {
    if (!std::isfinite(incumbent))
        throw std::invalid_argument("expected_improvement: incumbent must be finite");
    const PosteriorMoments m = state.full(x);
    const double sigma = std::sqrt(m.variance);
    const double gap = m.mean - incumbent;
    if (sigma <= 0.0) return std::max(gap, 0.0);
    const double u = gap / sigma;
    const double cdf = 0.5 * std::erfc(-u / M_SQRT2);
    const double pdf = std::exp(-0.5 * u * u) / std::sqrt(2.0 * M_PI);
    return std::max(0.0, gap * cdf + sigma * pdf);
}

} // namespace addbo
