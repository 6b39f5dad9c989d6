#include "addbo/direct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace addbo {
namespace direct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double checked_eval(const Objective& f, const Eigen::VectorXd& x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "direct: non-finite objective value at (";
        for (int i = 0; i < x.size(); ++i) msg << (i ? ", " : "") << x[i];
        msg << ")";
        throw std::runtime_error(msg.str());
    }
    return v;
}

} // namespace

double class_diameter(const std::vector<int>& axis_splits) {
    std::vector<int> sorted = axis_splits;
    std::sort(sorted.begin(), sorted.end());
    double s = 0.0;
    for (int a : sorted) s += 0.25 * std::pow(9.0, -static_cast<double>(a));
    return std::sqrt(s);
}

std::vector<std::size_t> potentially_optimal(const std::vector<Rectangle>& rects,
                                             const std::vector<std::size_t>& subset,
                                             double f_best, double epsilon) {
    if (subset.empty()) throw std::invalid_argument("potentially_optimal: empty rectangle set");

    // representative per diameter class: best value, then lowest id
    std::vector<std::size_t> order = subset;
    std::sort(order.begin(), order.end(), [&rects](std::size_t a, std::size_t b) {
        const Rectangle& ra = rects[a];
        const Rectangle& rb = rects[b];
        if (ra.diameter != rb.diameter) return ra.diameter < rb.diameter;
        if (ra.value != rb.value) return ra.value > rb.value;
        return ra.id < rb.id;
    });
    struct Candidate {
        std::size_t idx;
        double d;
        double g; // minimized form, -value
    };
    std::vector<Candidate> cands;
    for (std::size_t i : order) {
        if (!cands.empty() && cands.back().d == rects[i].diameter) continue;
        cands.push_back({i, rects[i].diameter, -rects[i].value});
    }

    const double g_min = -f_best;
    const double slack = std::max(epsilon * std::fabs(g_min), 1e-8);

    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const Candidate& c = cands[i];
        double k_lo = 0.0;
        double k_up = kInf;
        for (std::size_t j = 0; j < cands.size(); ++j) {
            if (j == i) continue;
            const Candidate& o = cands[j];
            if (o.d < c.d)
                k_lo = std::max(k_lo, (c.g - o.g) / (c.d - o.d));
            else
                k_up = std::min(k_up, (o.g - c.g) / (o.d - c.d));
        }
        if (k_lo > k_up || k_up <= 0.0) continue;
        if (k_up < kInf && c.g - k_up * c.d > g_min - slack) continue;
        out.push_back(c.idx);
    }

    // largest rectangles first, so a budget cutoff mid-round keeps exploring
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> potentially_optimal(const std::vector<Rectangle>& rects, double f_best,
                                             double epsilon) {
    std::vector<std::size_t> all(rects.size());
    for (std::size_t i = 0; i < rects.size(); ++i) all[i] = i;
    return potentially_optimal(rects, all, f_best, epsilon);
}

TrisectResult trisect(const Rectangle& r, const Objective& f, long first_child_id) {
    const int dim = static_cast<int>(r.half_widths.size());
    int axis = 0;
    for (int i = 1; i < dim; ++i)
        if (r.half_widths[i] > r.half_widths[axis]) axis = i; // lowest index on ties

    const double step = 2.0 * r.half_widths[axis] / 3.0;
    Eigen::VectorXd hw = r.half_widths;
    hw[axis] /= 3.0;
    std::vector<int> splits = r.axis_splits;
    splits[static_cast<std::size_t>(axis)] += 1;
    const double diam = class_diameter(splits);

    auto make_child = [&](double offset, double value, long id) {
        Rectangle c;
        c.center = r.center;
        c.center[axis] += offset;
        c.half_widths = hw;
        c.value = value;
        c.diameter = diam;
        c.depth = r.depth + 1;
        c.id = id;
        c.axis_splits = splits;
        return c;
    };

    TrisectResult res;
    res.split_axis = axis;
    res.children[1] = make_child(0.0, r.value, r.id); // middle keeps the parent's sample
    res.children[0] = make_child(-step, 0.0, first_child_id);
    res.children[0].value = checked_eval(f, res.children[0].center);
    res.children[2] = make_child(step, 0.0, first_child_id + 1);
    res.children[2].value = checked_eval(f, res.children[2].center);
    res.new_evals = 2;
    return res;
}

DirectResult maximize(const Objective& f, int dim, const DirectConfig& cfg,
                      std::vector<Rectangle>* final_rects) {
    if (dim < 1) throw std::invalid_argument("direct::maximize: dim must be >= 1");
    if (cfg.max_evals < 1) throw std::invalid_argument("direct::maximize: max_evals must be >= 1");

    std::vector<Rectangle> rects;
    Rectangle root;
    root.center = Eigen::VectorXd::Constant(dim, 0.5);
    root.half_widths = Eigen::VectorXd::Constant(dim, 0.5);
    root.axis_splits.assign(static_cast<std::size_t>(dim), 0);
    root.value = checked_eval(f, root.center);
    root.diameter = class_diameter(root.axis_splits);
    root.depth = 0;
    root.id = 0;
    rects.push_back(std::move(root));

    int evals = 1;
    long next_id = 1;
    std::size_t best_idx = 0;

    std::vector<std::size_t> active;
    while (evals + 2 <= cfg.max_evals) {
        // active = splittable; rectangles at max depth are retired but remain leaves
        active.clear();
        for (std::size_t i = 0; i < rects.size(); ++i)
            if (rects[i].depth < cfg.max_depth) active.push_back(i);
        if (active.empty()) break;

        const std::vector<std::size_t> po =
            potentially_optimal(rects, active, rects[best_idx].value, cfg.epsilon);

        bool split_any = false;
        for (std::size_t idx : po) {
            if (evals + 2 > cfg.max_evals) break;
            TrisectResult tri = trisect(rects[idx], f, next_id);
            next_id += 2;
            evals += tri.new_evals;
            rects[idx] = std::move(tri.children[1]); // middle child replaces the parent
            rects.push_back(std::move(tri.children[0]));
            rects.push_back(std::move(tri.children[2]));
            for (std::size_t k : {rects.size() - 2, rects.size() - 1})
                if (rects[k].value > rects[best_idx].value) best_idx = k;
            split_any = true;
        }
        if (!split_any) break;
    }

    DirectResult res;
    res.x_best = rects[best_idx].center;
    res.f_best = rects[best_idx].value;
    res.evals_used = evals;
    if (final_rects) *final_rects = std::move(rects);
    return res;
}

} // namespace direct
} // namespace addbo
