#ifndef ADDBO_DIRECT_HPP
#define ADDBO_DIRECT_HPP

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace addbo {
namespace direct {

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Hyperrectangle of the subdivision tree. `value` is the objective being
/// maximized, evaluated at `center`; `diameter` is ||half_widths||_2,
/// computed canonically from the per-axis trisection counts so every member
/// of a size class carries the identical double.
struct Rectangle {
    Eigen::VectorXd center;
    Eigen::VectorXd half_widths;
    double value = 0.0;
    double diameter = 0.0;
    int depth = 0;                // trisections applied since the root box
    long id = 0;                  // creation index, used for tie-breaking
    std::vector<int> axis_splits; // per-axis trisection counts
};

struct DirectConfig {
    int max_evals = 1000;  // objective-evaluation budget
    double epsilon = 1e-4; // potential-optimality slack
    int max_depth = 50;    // rectangles deeper than this are retired
};

struct DirectResult {
    Eigen::VectorXd x_best;
    double f_best = 0.0;
    int evals_used = 0;
};

/// ||half_widths||_2 for a box with the given trisection counts, summed in
/// sorted order so equal size classes agree bitwise.
double class_diameter(const std::vector<int>& axis_splits);

/// Indices (into `rects`) of the potentially optimal members of `subset`:
/// the lower-right convex hull of (diameter, -value) whose members can
/// improve on f_best by the epsilon slack (relative, floored at 1e-8).
/// Always contains a rectangle of maximal diameter; within a diameter class
/// the best value wins, then the lowest creation index. Returned largest
/// diameter first.
std::vector<std::size_t> potentially_optimal(const std::vector<Rectangle>& rects,
                                             const std::vector<std::size_t>& subset,
                                             double f_best, double epsilon);
std::vector<std::size_t> potentially_optimal(const std::vector<Rectangle>& rects, double f_best,
                                             double epsilon);

struct TrisectResult {
    std::array<Rectangle, 3> children; // low / middle / high along the split axis
    int split_axis = 0;
    int new_evals = 2; // middle child inherits the parent's center value
};

/// Split along the lowest-indexed axis of maximal half-width into thirds;
/// children tile the parent exactly.
TrisectResult trisect(const Rectangle& r, const Objective& f, long first_child_id);

/// Budgeted global maximization of f over [0,1]^dim (minimizes -f in the
/// classic formulation). Deterministic for deterministic f. Throws on a
/// non-finite objective value, naming the point. `final_rects`, when given,
/// receives the leaf partition at termination.
DirectResult maximize(const Objective& f, int dim, const DirectConfig& cfg,
                      std::vector<Rectangle>* final_rects = nullptr);

} // namespace direct
} // namespace addbo

#endif
