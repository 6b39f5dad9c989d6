#ifndef ADDBO_SYNTHETIC_HPP
#define ADDBO_SYNTHETIC_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "addbo/bandit.hpp"

namespace addbo {

/// Parameters of the synthetic additive test function: M groups of d
/// coordinates drawn from `seed`, each carrying a three-mode bump function
/// with bandwidth 0.01 * d^0.1.
struct SyntheticSpec {
    int ambient_dim = 10;  // D
    int group_dim = 3;     // d
    int num_groups = 3;    // M
    std::uint64_t seed = 0;
    std::optional<std::vector<Eigen::VectorXd>> centers; // explicit v1, v2, v3
};

double synthetic_bandwidth(int group_dim); // 0.01 * d^0.1

/// log of a 0.1/0.1/0.8-weighted sum of three Gaussian bumps at v1, v2, v3,
/// evaluated with a stable log-sum-exp. Auto-drawn centers are uniform in
/// [0.15, 0.85]^d and pairwise separated by at least 10 bandwidths.
class BumpFunction {
public:
    BumpFunction(std::vector<Eigen::VectorXd> centers, double bandwidth);

    double operator()(const Eigen::VectorXd& x) const;

    int dim() const { return static_cast<int>(centers_[0].size()); }
    double bandwidth() const { return bandwidth_; }
    const std::vector<Eigen::VectorXd>& centers() const { return centers_; }

    /// argmax (near the 0.8-weighted mode) refined by deterministic
    /// multi-start coordinate search
    const Eigen::VectorXd& maximizer() const { return maximizer_; }
    double max_value() const { return max_value_; }

private:
    std::vector<Eigen::VectorXd> centers_;
    double bandwidth_;
    Eigen::VectorXd maximizer_;
    double max_value_;
};

BumpFunction build_fdtilde(const SyntheticSpec& spec);

/// Sum of the bump function over M disjoint random coordinate groups; the
/// remaining D - d*M coordinates do not contribute.
class CompositeFunction {
public:
    CompositeFunction(BumpFunction bump, std::vector<std::vector<int>> groups, int ambient_dim);

    double operator()(const Eigen::VectorXd& x) const;

    int dim() const { return ambient_dim_; }
    const BumpFunction& bump() const { return bump_; }
    /// the M contributing groups (sorted index lists)
    const std::vector<std::vector<int>>& groups() const { return groups_; }
    /// contributing groups plus the unused coordinates chunked into groups of
    /// size <= d: the decomposition handed to strategies that know the truth
    const Decomposition& full_decomposition() const { return full_decomposition_; }

    const Eigen::VectorXd& optimum_point() const { return x_opt_; }
    double optimum_value() const { return f_opt_; }

    Oracle oracle() const;

private:
    BumpFunction bump_;
    std::vector<std::vector<int>> groups_;
    int ambient_dim_;
    Decomposition full_decomposition_;
    Eigen::VectorXd x_opt_;
    double f_opt_;
};

CompositeFunction build_composite(const SyntheticSpec& spec);

} // namespace addbo

#endif
