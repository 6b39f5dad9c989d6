#ifndef ADDBO_GP_HPP
#define ADDBO_GP_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "addbo/kernels.hpp"

namespace addbo {

/// Query points (rows of X, in [0,1]^D) with their noisy observations.
struct Dataset {
    Eigen::MatrixXd X; // n x D
    Eigen::VectorXd Y; // n

    Dataset() = default;
    Dataset(Eigen::MatrixXd x, Eigen::VectorXd y);

    int size() const { return static_cast<int>(X.rows()); }
    int dim() const { return static_cast<int>(X.cols()); }
};

struct NoiseModel {
    double eta; // observation noise standard deviation

    explicit NoiseModel(double e);
    double variance() const { return eta * eta; }
};

struct FitOptions {
    /// subtract mean(Y) before fitting and add it back to posterior means;
    /// the offset is split evenly across groups so group means still sum to
    /// the full mean
    bool center_y = false;
    double jitter_initial = 1e-10;
    double jitter_max = 1e-4;
};

struct PosteriorMoments {
    double mean = 0.0;
    double variance = 0.0;     // clamped at 0
    double raw_variance = 0.0; // pre-clamp value, for numerical-health tracking
};

/// Lower-triangular factor of A (+ jitter I if needed). Walks the jitter
/// ladder jitter_initial, x10 per retry, up to jitter_max; throws naming the
/// final jitter tried if every attempt fails. jitter_used reports the value
/// actually added (0 when none was needed).
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& A, const FitOptions& opts,
                                     double* jitter_used);

/// Cholesky factorization attempts performed on the calling thread (cost
/// instrumentation for the one-factorization-per-step accounting).
std::uint64_t factorization_count();
void reset_factorization_count();

/// Immutable posterior snapshot over K = k(X, X) + eta^2 I with a cached
/// triangular factor; answers full and group-wise queries, reusing the one
/// factor for every group.
class PosteriorState {
public:
    static PosteriorState fit(Dataset data, AdditiveKernel kernel, NoiseModel noise,
                              FitOptions opts = {});

    PosteriorMoments full(const Eigen::VectorXd& x) const;
    PosteriorMoments group(int j, const Eigen::VectorXd& z) const;

    /// -1/2 Yc' K^{-1} Yc - 1/2 log det K - n/2 log 2pi over the fitted
    /// (possibly centered) targets; uses the cached factor
    double log_marginal_likelihood() const;

    int size() const { return data_.size(); }
    bool empty() const { return data_.size() == 0; }
    const Dataset& data() const { return data_; }
    const AdditiveKernel& kernel() const { return kernel_; }
    const NoiseModel& noise() const { return noise_; }
    const Eigen::MatrixXd& chol() const { return chol_; }
    const Eigen::VectorXd& alpha() const { return alpha_; }
    double jitter_used() const { return jitter_used_; }
    double y_offset() const { return y_offset_; }

    /// smallest pre-clamp variance produced by any query on this state; a
    /// value below -1e-6 signals a numerical-health problem
    double min_raw_variance() const { return health_->load(); }

private:
    PosteriorState(Dataset data, AdditiveKernel kernel, NoiseModel noise)
        : data_(std::move(data)), kernel_(std::move(kernel)), noise_(noise),
          health_(std::make_shared<std::atomic<double>>(0.0)) {}

    double quad_form_variance(double prior_var, const Eigen::VectorXd& k_vec,
                              PosteriorMoments& out) const;
    void record_health(double raw_variance) const;

    Dataset data_;
    AdditiveKernel kernel_;
    NoiseModel noise_;
    Eigen::MatrixXd chol_;  // lower-triangular factor of K (empty when n = 0)
    Eigen::VectorXd alpha_; // K^{-1} (Y - offset)
    double y_offset_ = 0.0;
    double jitter_used_ = 0.0;
    std::shared_ptr<std::atomic<double>> health_; // shared across copies
};

/// Convenience wrapper: fit then evaluate the marginal likelihood.
double log_marginal_likelihood(const Dataset& data, const AdditiveKernel& kernel,
                               const NoiseModel& noise, const FitOptions& opts = {});

/// Log-uniform grid bounds for the shared (scale, bandwidth) pair.
struct HyperSearchSpace {
    double sigma_min = 1e-3;
    double sigma_max = 1e9;
    double h_min = 1e-3;
    double h_max = 10.0;
    int grid = 10; // per-axis grid size
};

struct HyperOptResult {
    AdditiveKernel kernel;
    NoiseModel noise;
    double log_marginal;
    int evaluated;
};

/// Deterministic grid search over shared (scale, bandwidth). The template's
/// own parameters are candidate 0; at most `budget` candidates are scored.
HyperOptResult optimize_hyperparams(const Dataset& data, const AdditiveKernel& kernel_template,
                                    const NoiseModel& noise, const HyperSearchSpace& space,
                                    int budget, const FitOptions& opts = {});

} // namespace addbo

#endif
