#include "addbo/gp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace addbo {

namespace {

// thread_local so each worker's per-step accounting is isolated
thread_local std::uint64_t g_factorizations = 0;

} // namespace

std::uint64_t factorization_count() { return g_factorizations; }
void reset_factorization_count() { g_factorizations = 0; }

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y) : X(std::move(x)), Y(std::move(y)) {
    if (X.rows() != Y.size())
        throw std::invalid_argument("Dataset: X row count != Y length");
    for (int i = 0; i < X.rows(); ++i)
        for (int j = 0; j < X.cols(); ++j)
            if (!(X(i, j) >= 0.0 && X(i, j) <= 1.0))
                throw std::invalid_argument("Dataset: X entries must lie in [0,1]");
}

NoiseModel::NoiseModel(double e) : eta(e) {
    if (!(e > 0.0)) throw std::invalid_argument("NoiseModel: eta must be positive");
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& A, const FitOptions& opts,
                                     double* jitter_used) {
    double jitter = 0.0;
    while (true) {
        Eigen::MatrixXd B = A;
        if (jitter > 0.0) B.diagonal().array() += jitter;
        ++g_factorizations;
        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() == Eigen::Success) {
            if (jitter_used) *jitter_used = jitter;
            return llt.matrixL();
        }
        if (jitter == 0.0) {
            jitter = opts.jitter_initial;
        } else if (jitter * 10.0 <= opts.jitter_max * (1.0 + 1e-12)) {
            jitter *= 10.0;
        } else {
            std::ostringstream msg;
            msg << "Cholesky factorization failed even with jitter " << jitter;
            throw std::runtime_error(msg.str());
        }
    }
}

PosteriorState PosteriorState::fit(Dataset data, AdditiveKernel kernel, NoiseModel noise,
                                   FitOptions opts) {
    if (data.size() > 0 && data.dim() != kernel.ambient_dim())
        throw std::invalid_argument("fit: dataset dimension != kernel ambient_dim");
    PosteriorState st(std::move(data), std::move(kernel), noise);
    const int n = st.data_.size();
    if (n == 0) return st; // prior-only state, no factor

    Eigen::VectorXd y = st.data_.Y;
    if (opts.center_y) {
        st.y_offset_ = y.mean();
        y.array() -= st.y_offset_;
    }

    Eigen::MatrixXd K = st.kernel_.gram(st.data_.X);
    K.diagonal().array() += noise.variance();
    st.chol_ = cholesky_with_jitter(K, opts, &st.jitter_used_);
    // alpha = K^{-1} y via the two triangular solves
    Eigen::VectorXd tmp = st.chol_.triangularView<Eigen::Lower>().solve(y);
    st.alpha_ = st.chol_.triangularView<Eigen::Lower>().transpose().solve(tmp);
    return st;
}

void PosteriorState::record_health(double raw_variance) const {
    double cur = health_->load(std::memory_order_relaxed);
    while (raw_variance < cur &&
           !health_->compare_exchange_weak(cur, raw_variance, std::memory_order_relaxed)) {
    }
}

double PosteriorState::quad_form_variance(double prior_var, const Eigen::VectorXd& k_vec,
                                          PosteriorMoments& out) const {
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k_vec);
    out.raw_variance = prior_var - v.squaredNorm();
    out.variance = std::max(0.0, out.raw_variance);
    record_health(out.raw_variance);
    return out.variance;
}

PosteriorMoments PosteriorState::full(const Eigen::VectorXd& x) const {
    if (x.size() != kernel_.ambient_dim())
        throw std::invalid_argument("posterior_full: point dimension != ambient_dim");
    PosteriorMoments m;
    const double prior = kernel_.diag();
    if (empty()) {
        m.mean = 0.0;
        m.variance = m.raw_variance = prior;
        return m;
    }
    const Eigen::VectorXd k_x = kernel_.cross_cov_full(x, data_.X);
    m.mean = k_x.dot(alpha_) + y_offset_;
    quad_form_variance(prior, k_x, m);
    return m;
}

PosteriorMoments PosteriorState::group(int j, const Eigen::VectorXd& z) const {
    if (j < 0 || j >= kernel_.num_groups())
        throw std::invalid_argument("posterior_group: invalid group index");
    PosteriorMoments m;
    const double prior = kernel_diag(kernel_.group(j).base());
    if (empty()) {
        m.mean = 0.0;
        m.variance = m.raw_variance = prior;
        return m;
    }
    const Eigen::VectorXd k_z = kernel_.cross_cov_group(j, z, data_.X);
    // the offset is distributed evenly so group means still sum to the full mean
    m.mean = k_z.dot(alpha_) + y_offset_ / kernel_.num_groups();
    quad_form_variance(prior, k_z, m);
    return m;
}

double PosteriorState::log_marginal_likelihood() const {
    if (empty())
        throw std::invalid_argument("log_marginal_likelihood: dataset is empty");
    const int n = data_.size();
    Eigen::VectorXd y = data_.Y;
    y.array() -= y_offset_;
    const double quad = y.dot(alpha_);
    const double logdet = 2.0 * chol_.diagonal().array().log().sum();
    return -0.5 * quad - 0.5 * logdet - 0.5 * n * std::log(2.0 * M_PI);
}

double log_marginal_likelihood(const Dataset& data, const AdditiveKernel& kernel,
                               const NoiseModel& noise, const FitOptions& opts) {
    return PosteriorState::fit(data, kernel, noise, opts).log_marginal_likelihood();
}

HyperOptResult optimize_hyperparams(const Dataset& data, const AdditiveKernel& kernel_template,
                                    const NoiseModel& noise, const HyperSearchSpace& space,
                                    int budget, const FitOptions& opts) {
    if (budget < 1) throw std::invalid_argument("optimize_hyperparams: budget must be >= 1");
    if (data.size() == 0)
        throw std::invalid_argument("optimize_hyperparams: dataset is empty");

    std::vector<std::pair<double, double>> candidates;
    candidates.emplace_back(kernel_diag(kernel_template.group(0).base()),
                            kernel_bandwidth(kernel_template.group(0).base()));
    const int g = std::max(1, space.grid);
    auto grid_value = [g](double lo, double hi, int i) {
        if (g == 1) return lo;
        const double t = static_cast<double>(i) / static_cast<double>(g - 1);
        return std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    };
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            candidates.emplace_back(grid_value(space.sigma_min, space.sigma_max, i),
                                    grid_value(space.h_min, space.h_max, j));

    const int limit = std::min<int>(budget, static_cast<int>(candidates.size()));
    bool any_ok = false;
    double best_ml = 0.0;
    std::pair<double, double> best = candidates.front();
    for (int c = 0; c < limit; ++c) {
        const auto [sigma, h] = candidates[static_cast<std::size_t>(c)];
        try {
            const double ml =
                log_marginal_likelihood(data, kernel_template.with_params(sigma, h), noise, opts);
            if (!std::isfinite(ml)) continue;
            if (!any_ok || ml > best_ml) {
                any_ok = true;
                best_ml = ml;
                best = {sigma, h};
            }
        } catch (const std::runtime_error&) {
            // factorization failure for this candidate; skip it
        }
    }
    if (!any_ok)
        throw std::runtime_error("optimize_hyperparams: every candidate failed factorization");
    return HyperOptResult{kernel_template.with_params(best.first, best.second), noise, best_ml,
                          limit};
}

} // namespace addbo
