#ifndef ADDBO_KERNELS_HPP
#define ADDBO_KERNELS_HPP

#include <variant>
#include <vector>

#include <Eigen/Core>

namespace addbo {

/// Squared-exponential covariance: k(x, x') = scale * exp(-r^2 / (2 h^2)).
class SeKernel {
public:
    SeKernel(double scale, double bandwidth);

    double scale() const { return scale_; }
    double bandwidth() const { return bandwidth_; }

    double eval_r2(double r2) const;
    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

private:
    double scale_;
    double bandwidth_;
};

/// Matern covariance: scale * 2^{1-nu}/Gamma(nu) * u^nu K_nu(u), u = sqrt(2 nu) r / h.
/// nu in {1/2, 3/2, 5/2} uses the closed forms; other nu goes through the
/// modified Bessel function. r below 1e-12 * h is treated as r = 0.
class MaternKernel {
public:
    MaternKernel(double smoothness, double bandwidth, double scale);

    double smoothness() const { return smoothness_; }
    double bandwidth() const { return bandwidth_; }
    double scale() const { return scale_; }

    double eval_r(double r) const;
    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

    // general Bessel-form evaluation, also valid at half-integer nu (test hook)
    double eval_bessel_form(double r) const;

private:
    double smoothness_;
    double bandwidth_;
    double scale_;
};

using BaseKernel = std::variant<SeKernel, MaternKernel>;

/// Serializable kernel description, as it appears in experiment configs.
struct KernelSpec {
    enum class Kind { se, matern };
    Kind kind = Kind::se;
    double scale = 1.0;
    double bandwidth = 0.1;
    double smoothness = 2.5; // matern only

    BaseKernel make() const;
    KernelSpec with_params(double s, double h) const {
        KernelSpec out = *this;
        out.scale = s;
        out.bandwidth = h;
        return out;
    }
};

double kernel_eval(const BaseKernel& k, const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double kernel_diag(const BaseKernel& k); // value at r = 0
double kernel_bandwidth(const BaseKernel& k);
BaseKernel kernel_with_params(const BaseKernel& k, double scale, double bandwidth);

/// A base kernel acting on a subset of coordinates, identified by a
/// strictly increasing index list.
class GroupKernel {
public:
    GroupKernel(BaseKernel base, std::vector<int> indices);

    const BaseKernel& base() const { return base_; }
    const std::vector<int>& indices() const { return indices_; }
    int dim() const { return static_cast<int>(indices_.size()); }

    Eigen::VectorXd project(const Eigen::VectorXd& x) const;
    /// evaluate on two already-projected points
    double eval_projected(const Eigen::VectorXd& zx, const Eigen::VectorXd& zy) const;
    /// evaluate on two ambient points
    double eval_ambient(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

private:
    BaseKernel base_;
    std::vector<int> indices_;
};

/// Sum of group kernels over pairwise-disjoint coordinate sets. The union of
/// the index sets may be a strict subset of {0..D-1}.
class AdditiveKernel {
public:
    AdditiveKernel(std::vector<GroupKernel> groups, int ambient_dim);

    /// single group spanning all of {0..D-1}
    static AdditiveKernel full(BaseKernel base, int ambient_dim);

    int ambient_dim() const { return ambient_dim_; }
    int num_groups() const { return static_cast<int>(groups_.size()); }
    const GroupKernel& group(int j) const { return groups_[static_cast<std::size_t>(j)]; }
    const std::vector<GroupKernel>& groups() const { return groups_; }

    double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
    double diag() const; // k(x, x) = sum of group scales

    /// n x n Gram matrix over the rows of X
    Eigen::MatrixXd gram(const Eigen::MatrixXd& X) const;

    /// p-th entry = k^{(j)}(z, X^{(j)}_p); z lives in the group's coordinates
    Eigen::VectorXd cross_cov_group(int j, const Eigen::VectorXd& z,
                                    const Eigen::MatrixXd& X) const;

    /// k(x, X_p) for all rows p (sum over groups)
    Eigen::VectorXd cross_cov_full(const Eigen::VectorXd& x, const Eigen::MatrixXd& X) const;

    /// same groups, every base kernel rebuilt with the shared (scale, bandwidth)
    AdditiveKernel with_params(double scale, double bandwidth) const;
    AdditiveKernel with_bandwidth(double bandwidth) const;

private:
    std::vector<GroupKernel> groups_;
    int ambient_dim_;
};

/// Gram matrix of a plain base kernel over full rows of X.
Eigen::MatrixXd gram(const BaseKernel& k, const Eigen::MatrixXd& X);

} // namespace addbo

#endif
