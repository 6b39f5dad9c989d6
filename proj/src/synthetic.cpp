#include "addbo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "addbo/rng.hpp"

namespace addbo {

namespace {

constexpr double kWeights[3] = {0.1, 0.1, 0.8};

void validate_spec(const SyntheticSpec& spec) {
    if (spec.ambient_dim < 1 || spec.group_dim < 1 || spec.num_groups < 1)
        throw std::invalid_argument("SyntheticSpec: dimensions must be positive");
    if (spec.group_dim * spec.num_groups > spec.ambient_dim)
        throw std::invalid_argument("SyntheticSpec: requires d * M <= D");
    if (spec.centers) {
        if (spec.centers->size() != 3)
            throw std::invalid_argument("SyntheticSpec: exactly three centers expected");
        for (const auto& v : *spec.centers) {
            if (v.size() != spec.group_dim)
                throw std::invalid_argument("SyntheticSpec: center dimension != group_dim");
            for (int i = 0; i < v.size(); ++i)
                if (!(v[i] >= 0.0 && v[i] <= 1.0))
                    throw std::invalid_argument("SyntheticSpec: centers must lie in [0,1]^d");
        }
    }
}

std::vector<Eigen::VectorXd> draw_centers(int dim, double h, Rng& rng) {
    std::vector<Eigen::VectorXd> centers;
    const double min_sep = 10.0 * h;
    int attempts = 0;
    while (centers.size() < 3) {
        if (++attempts > 100000)
            throw std::runtime_error("synthetic: could not draw separated mode centers");
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = rng.uniform(0.15, 0.85);
        bool ok = true;
        for (const auto& c : centers)
            if ((v - c).norm() < min_sep) {
                ok = false;
                break;
            }
        if (ok) centers.push_back(std::move(v));
    }
    return centers;
}

// deterministic coordinate-descent polish with shrinking step
void refine(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd& x,
            double& fx, double radius) {
    const int dim = static_cast<int>(x.size());
    double step = radius;
    while (step > 1e-14) {
        bool improved = false;
        for (int i = 0; i < dim; ++i) {
            for (double s : {step, -step}) {
                Eigen::VectorXd cand = x;
                cand[i] = std::clamp(cand[i] + s, 0.0, 1.0);
                const double fc = f(cand);
                if (fc > fx) {
                    fx = fc;
                    x = cand;
                    improved = true;
                }
            }
        }
        if (!improved) step /= 3.0;
    }
}

} // namespace

double synthetic_bandwidth(int group_dim) {
    return 0.01 * std::pow(static_cast<double>(group_dim), 0.1);
}

BumpFunction::BumpFunction(std::vector<Eigen::VectorXd> centers, double bandwidth)
    : centers_(std::move(centers)), bandwidth_(bandwidth), max_value_(0.0) {
    if (centers_.size() != 3) throw std::invalid_argument("BumpFunction: three centers expected");
    if (!(bandwidth_ > 0.0)) throw std::invalid_argument("BumpFunction: bandwidth must be positive");
    for (const auto& c : centers_)
        if (c.size() != centers_[0].size())
            throw std::invalid_argument("BumpFunction: centers have mixed dimensions");

    // the 0.8-weighted mode dominates when the centers are separated, but a
    // multi-start keeps the certificate honest for hand-picked centers
    const auto f = [this](const Eigen::VectorXd& x) { return (*this)(x); };
    bool first = true;
    for (const auto& c : centers_) {
        Eigen::VectorXd x = c;
        double fx = f(x);
        refine(f, x, fx, bandwidth_);
        if (first || fx > max_value_) {
            first = false;
            max_value_ = fx;
            maximizer_ = x;
        }
    }
}

double BumpFunction::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) throw std::invalid_argument("BumpFunction: wrong input dimension");
    const double inv2h2 = 1.0 / (2.0 * bandwidth_ * bandwidth_);
    double expo[3];
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        expo[i] = std::log(kWeights[i]) - (x - centers_[static_cast<std::size_t>(i)]).squaredNorm() * inv2h2;
        m = std::max(m, expo[i]);
    }
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += std::exp(expo[i] - m);
    return -dim() * std::log(bandwidth_) + m + std::log(s);
}

BumpFunction build_fdtilde(const SyntheticSpec& spec) {
    validate_spec(spec);
    const double h = synthetic_bandwidth(spec.group_dim);
    if (spec.centers) return BumpFunction(*spec.centers, h);
    Rng rng = Rng::from_stream(spec.seed, 0x5eed);
    return BumpFunction(draw_centers(spec.group_dim, h, rng), h);
}

CompositeFunction::CompositeFunction(BumpFunction bump, std::vector<std::vector<int>> groups,
                                     int ambient_dim)
    : bump_(std::move(bump)), groups_(std::move(groups)), ambient_dim_(ambient_dim),
      full_decomposition_(Decomposition::single_group(1)), f_opt_(0.0) {
    const int d = bump_.dim();
    std::vector<char> used(static_cast<std::size_t>(ambient_dim_), 0);
    for (auto& g : groups_) {
        std::sort(g.begin(), g.end());
        if (static_cast<int>(g.size()) != d)
            throw std::invalid_argument("CompositeFunction: group size != bump dimension");
        for (int idx : g) {
            if (idx < 0 || idx >= ambient_dim_ || used[static_cast<std::size_t>(idx)])
                throw std::invalid_argument("CompositeFunction: invalid or repeated coordinate");
            used[static_cast<std::size_t>(idx)] = 1;
        }
    }

    // unused coordinates are chunked into extra groups so strategies get a
    // full partition; their values never affect the function
    std::vector<std::vector<int>> all_groups = groups_;
    std::vector<int> leftovers;
    for (int i = 0; i < ambient_dim_; ++i)
        if (!used[static_cast<std::size_t>(i)]) leftovers.push_back(i);
    for (std::size_t pos = 0; pos < leftovers.size(); pos += static_cast<std::size_t>(d))
        all_groups.emplace_back(leftovers.begin() + static_cast<std::ptrdiff_t>(pos),
                                leftovers.begin() +
                                    static_cast<std::ptrdiff_t>(std::min(pos + static_cast<std::size_t>(d),
                                                                         leftovers.size())));
    full_decomposition_ = Decomposition(std::move(all_groups), ambient_dim_, d);

    x_opt_ = Eigen::VectorXd::Constant(ambient_dim_, 0.5);
    const Eigen::VectorXd& zopt = bump_.maximizer();
    for (const auto& g : groups_)
        for (int i = 0; i < d; ++i) x_opt_[g[static_cast<std::size_t>(i)]] = zopt[i];
    f_opt_ = static_cast<double>(groups_.size()) * bump_.max_value();
}

double CompositeFunction::operator()(const Eigen::VectorXd& x) const {
    if (x.size() != ambient_dim_)
        throw std::invalid_argument("CompositeFunction: wrong input dimension");
    double s = 0.0;
    Eigen::VectorXd z(bump_.dim());
    for (const auto& g : groups_) {
        for (std::size_t i = 0; i < g.size(); ++i) z[static_cast<int>(i)] = x[g[i]];
        s += bump_(z);
    }
    return s;
}

Oracle CompositeFunction::oracle() const {
    Oracle o;
    o.dim = ambient_dim_;
    CompositeFunction self = *this;
    o.value = [self](const Eigen::VectorXd& x) { return self(x); };
    o.optimum_value = f_opt_;
    o.optimum_point = x_opt_;
    return o;
}

CompositeFunction build_composite(const SyntheticSpec& spec) {
    validate_spec(spec);
    BumpFunction bump = build_fdtilde(spec);
    Rng rng = Rng::from_stream(spec.seed, 0x6e0);
    std::vector<int> perm(static_cast<std::size_t>(spec.ambient_dim));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    std::vector<std::vector<int>> groups;
    for (int j = 0; j < spec.num_groups; ++j)
        groups.emplace_back(perm.begin() + j * spec.group_dim,
                            perm.begin() + (j + 1) * spec.group_dim);
    return CompositeFunction(std::move(bump), std::move(groups), spec.ambient_dim);
}

} // namespace addbo
