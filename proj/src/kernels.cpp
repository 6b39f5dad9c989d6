#include "addbo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace addbo {

namespace {

void check_same_dim(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("kernel arguments have mismatched dimensions");
}

} // namespace

SeKernel::SeKernel(double scale, double bandwidth) : scale_(scale), bandwidth_(bandwidth) {
    if (!(scale > 0.0)) throw std::invalid_argument("SeKernel: scale must be positive");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("SeKernel: bandwidth must be positive");
}

double SeKernel::eval_r2(double r2) const {
    return scale_ * std::exp(-r2 / (2.0 * bandwidth_ * bandwidth_));
}

double SeKernel::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    check_same_dim(x, y);
    return eval_r2((x - y).squaredNorm());
}

MaternKernel::MaternKernel(double smoothness, double bandwidth, double scale)
    : smoothness_(smoothness), bandwidth_(bandwidth), scale_(scale) {
    if (!(smoothness > 0.0)) throw std::invalid_argument("MaternKernel: smoothness must be positive");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("MaternKernel: bandwidth must be positive");
    if (!(scale > 0.0)) throw std::invalid_argument("MaternKernel: scale must be positive");
}

double MaternKernel::eval_r(double r) const {
    if (r < 1e-12 * bandwidth_) return scale_; // r -> 0 limit
    const double u = std::sqrt(2.0 * smoothness_) * r / bandwidth_;
    if (smoothness_ == 0.5) return scale_ * std::exp(-u);
    if (smoothness_ == 1.5) return scale_ * (1.0 + u) * std::exp(-u);
    if (smoothness_ == 2.5) return scale_ * (1.0 + u + u * u / 3.0) * std::exp(-u);
    return eval_bessel_form(r);
}

double MaternKernel::eval_bessel_form(double r) const {
    if (r < 1e-12 * bandwidth_) return scale_;
    const double u = std::sqrt(2.0 * smoothness_) * r / bandwidth_;
    if (u > 690.0) return 0.0; // K_nu underflows; u^nu * K_nu would be inf * 0
    const double c = std::pow(2.0, 1.0 - smoothness_) / std::tgamma(smoothness_);
    return scale_ * c * std::pow(u, smoothness_) * std::cyl_bessel_k(smoothness_, u);
}

double MaternKernel::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    check_same_dim(x, y);
    return eval_r((x - y).norm());
}

BaseKernel KernelSpec::make() const {
    if (kind == Kind::se) return SeKernel(scale, bandwidth);
    return MaternKernel(smoothness, bandwidth, scale);
}

double kernel_eval(const BaseKernel& k, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return std::visit([&](const auto& kk) { return kk.eval(x, y); }, k);
}

double kernel_diag(const BaseKernel& k) {
    return std::visit([](const auto& kk) { return kk.scale(); }, k);
}

double kernel_bandwidth(const BaseKernel& k) {
    return std::visit([](const auto& kk) { return kk.bandwidth(); }, k);
}

BaseKernel kernel_with_params(const BaseKernel& k, double scale, double bandwidth) {
    if (std::holds_alternative<SeKernel>(k)) return SeKernel(scale, bandwidth);
    const auto& m = std::get<MaternKernel>(k);
    return MaternKernel(m.smoothness(), bandwidth, scale);
}

GroupKernel::GroupKernel(BaseKernel base, std::vector<int> indices)
    : base_(std::move(base)), indices_(std::move(indices)) {
    if (indices_.empty()) throw std::invalid_argument("GroupKernel: index set is empty");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
        if (indices_[i] < 0)
            throw std::invalid_argument("GroupKernel: negative coordinate index");
        if (i > 0 && indices_[i] <= indices_[i - 1])
            throw std::invalid_argument("GroupKernel: indices must be strictly increasing");
    }
}

Eigen::VectorXd GroupKernel::project(const Eigen::VectorXd& x) const {
    Eigen::VectorXd z(dim());
    for (int i = 0; i < dim(); ++i) {
        const int idx = indices_[static_cast<std::size_t>(i)];
        if (idx >= x.size())
            throw std::invalid_argument("GroupKernel: point dimension too small for group indices");
        z[i] = x[idx];
    }
    return z;
}

double GroupKernel::eval_projected(const Eigen::VectorXd& zx, const Eigen::VectorXd& zy) const {
    if (zx.size() != dim() || zy.size() != dim())
        throw std::invalid_argument("GroupKernel: projected point has wrong dimension");
    return kernel_eval(base_, zx, zy);
}

double GroupKernel::eval_ambient(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    return eval_projected(project(x), project(y));
}

AdditiveKernel::AdditiveKernel(std::vector<GroupKernel> groups, int ambient_dim)
    : groups_(std::move(groups)), ambient_dim_(ambient_dim) {
    if (ambient_dim_ <= 0) throw std::invalid_argument("AdditiveKernel: ambient_dim must be positive");
    if (groups_.empty()) throw std::invalid_argument("AdditiveKernel: needs at least one group");
    std::vector<char> seen(static_cast<std::size_t>(ambient_dim_), 0);
    for (const auto& g : groups_) {
        for (int idx : g.indices()) {
            if (idx >= ambient_dim_)
                throw std::invalid_argument("AdditiveKernel: group index exceeds ambient_dim");
            if (seen[static_cast<std::size_t>(idx)])
                throw std::invalid_argument("AdditiveKernel: group index sets must be disjoint");
            seen[static_cast<std::size_t>(idx)] = 1;
        }
    }
}

AdditiveKernel AdditiveKernel::full(BaseKernel base, int ambient_dim) {
    std::vector<int> all(static_cast<std::size_t>(ambient_dim));
    for (int i = 0; i < ambient_dim; ++i) all[static_cast<std::size_t>(i)] = i;
    std::vector<GroupKernel> gs;
    gs.emplace_back(std::move(base), std::move(all));
    return AdditiveKernel(std::move(gs), ambient_dim);
}

double AdditiveKernel::eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    if (x.size() != ambient_dim_ || y.size() != ambient_dim_)
        throw std::invalid_argument("AdditiveKernel: point dimension != ambient_dim");
    double s = 0.0;
    for (const auto& g : groups_) s += g.eval_ambient(x, y);
    return s;
}

double AdditiveKernel::diag() const {
    double s = 0.0;
    for (const auto& g : groups_) s += kernel_diag(g.base());
    return s;
}

Eigen::MatrixXd AdditiveKernel::gram(const Eigen::MatrixXd& X) const {
    const int n = static_cast<int>(X.rows());
    Eigen::MatrixXd K(n, n);
    if (n == 0) return K;
    if (X.cols() != ambient_dim_)
        throw std::invalid_argument("AdditiveKernel: X column count != ambient_dim");
    for (int p = 0; p < n; ++p) {
        const Eigen::VectorXd xp = X.row(p);
        for (int q = 0; q <= p; ++q) {
            const double v = eval(xp, X.row(q));
            K(p, q) = v;
            K(q, p) = v;
        }
    }
    return K;
}

Eigen::VectorXd AdditiveKernel::cross_cov_group(int j, const Eigen::VectorXd& z,
                                                const Eigen::MatrixXd& X) const {
    if (j < 0 || j >= num_groups()) throw std::invalid_argument("AdditiveKernel: invalid group index");
    const auto& g = groups_[static_cast<std::size_t>(j)];
    if (z.size() != g.dim())
        throw std::invalid_argument("AdditiveKernel: group point has wrong dimension");
    const int n = static_cast<int>(X.rows());
    Eigen::VectorXd v(n);
    for (int p = 0; p < n; ++p) v[p] = g.eval_projected(z, g.project(X.row(p)));
    return v;
}

Eigen::VectorXd AdditiveKernel::cross_cov_full(const Eigen::VectorXd& x,
                                               const Eigen::MatrixXd& X) const {
    const int n = static_cast<int>(X.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int p = 0; p < n; ++p) v[p] = eval(x, X.row(p));
    return v;
}

AdditiveKernel AdditiveKernel::with_params(double scale, double bandwidth) const {
    std::vector<GroupKernel> gs;
    gs.reserve(groups_.size());
    for (const auto& g : groups_)
        gs.emplace_back(kernel_with_params(g.base(), scale, bandwidth), g.indices());
    return AdditiveKernel(std::move(gs), ambient_dim_);
}

AdditiveKernel AdditiveKernel::with_bandwidth(double bandwidth) const {
    std::vector<GroupKernel> gs;
    gs.reserve(groups_.size());
    for (const auto& g : groups_)
        gs.emplace_back(kernel_with_params(g.base(), kernel_diag(g.base()), bandwidth),
                        g.indices());
    return AdditiveKernel(std::move(gs), ambient_dim_);
}

Eigen::MatrixXd gram(const BaseKernel& k, const Eigen::MatrixXd& X) {
    const int n = static_cast<int>(X.rows());
    Eigen::MatrixXd K(n, n);
    for (int p = 0; p < n; ++p) {
        const Eigen::VectorXd xp = X.row(p);
        for (int q = 0; q <= p; ++q) {
            const double v = kernel_eval(k, xp, X.row(q));
            K(p, q) = v;
            K(q, p) = v;
        }
    }
    return K;
}

} // namespace addbo
