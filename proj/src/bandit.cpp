#include "addbo/bandit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace addbo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd stack_rows(const std::vector<Eigen::VectorXd>& xs, int dim) {
    Eigen::MatrixXd X(static_cast<int>(xs.size()), dim);
    for (std::size_t i = 0; i < xs.size(); ++i) X.row(static_cast<int>(i)) = xs[i];
    return X;
}

Eigen::VectorXd stack_values(const std::vector<double>& ys) {
    Eigen::VectorXd Y(static_cast<int>(ys.size()));
    for (std::size_t i = 0; i < ys.size(); ++i) Y[static_cast<int>(i)] = ys[i];
    return Y;
}

} // namespace

Decomposition::Decomposition(std::vector<std::vector<int>> groups, int ambient_dim,
                             int max_group_dim)
    : groups_(std::move(groups)), ambient_dim_(ambient_dim) {
    if (ambient_dim_ <= 0) throw std::invalid_argument("Decomposition: ambient_dim must be positive");
    for (auto& g : groups_) {
        if (g.empty()) throw std::invalid_argument("Decomposition: empty group");
        std::sort(g.begin(), g.end());
        if (max_group_dim > 0 && static_cast<int>(g.size()) > max_group_dim)
            throw std::invalid_argument("Decomposition: group exceeds the size bound");
    }
    std::sort(groups_.begin(), groups_.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<char> seen(static_cast<std::size_t>(ambient_dim_), 0);
    int count = 0;
    for (const auto& g : groups_) {
        for (int idx : g) {
            if (idx < 0 || idx >= ambient_dim_)
                throw std::invalid_argument("Decomposition: coordinate index out of range");
            if (seen[static_cast<std::size_t>(idx)])
                throw std::invalid_argument("Decomposition: coordinate appears twice");
            seen[static_cast<std::size_t>(idx)] = 1;
            ++count;
        }
    }
    if (count != ambient_dim_)
        throw std::invalid_argument("Decomposition: groups must partition {0..D-1}");
}

Decomposition Decomposition::single_group(int ambient_dim) {
    std::vector<int> all(static_cast<std::size_t>(ambient_dim));
    std::iota(all.begin(), all.end(), 0);
    return Decomposition({all}, ambient_dim);
}

int Decomposition::max_group_size() const {
    std::size_t m = 0;
    for (const auto& g : groups_) m = std::max(m, g.size());
    return static_cast<int>(m);
}

Decomposition random_decomposition(int D, int d, Rng& rng) {
    if (D < 1 || d < 1) throw std::invalid_argument("random_decomposition: D and d must be >= 1");
    const int M = (D + d - 1) / d;
    std::vector<int> perm(static_cast<std::size_t>(D));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const int base = D / M;
    const int rem = D % M;
    std::vector<std::vector<int>> groups;
    int pos = 0;
    for (int j = 0; j < M; ++j) {
        const int size = base + (j < rem ? 1 : 0);
        groups.emplace_back(perm.begin() + pos, perm.begin() + pos + size);
        pos += size;
    }
    return Decomposition(std::move(groups), D, d);
}

AdditiveKernel make_additive_kernel(const Decomposition& decomp, const KernelSpec& spec) {
    std::vector<GroupKernel> gs;
    gs.reserve(static_cast<std::size_t>(decomp.num_groups()));
    for (const auto& g : decomp.groups()) gs.emplace_back(spec.make(), g);
    return AdditiveKernel(std::move(gs), decomp.ambient_dim());
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::add_gp_ucb: return "add_gp_ucb";
    case StrategyKind::gp_ucb: return "gp_ucb";
    case StrategyKind::seq_one_group: return "seq_one_group";
    case StrategyKind::seq_cycle: return "seq_cycle";
    case StrategyKind::ei: return "ei";
    case StrategyKind::random: return "random";
    }
    throw std::logic_error("to_string: unknown strategy kind");
}

StrategyKind strategy_kind_from_string(const std::string& s) {
    if (s == "add_gp_ucb") return StrategyKind::add_gp_ucb;
    if (s == "gp_ucb") return StrategyKind::gp_ucb;
    if (s == "seq_one_group") return StrategyKind::seq_one_group;
    if (s == "seq_cycle") return StrategyKind::seq_cycle;
    if (s == "ei") return StrategyKind::ei;
    if (s == "random") return StrategyKind::random;
    throw std::invalid_argument("unknown strategy kind: " + s);
}

StepResult step_add_gp_ucb(const PosteriorState& state, const BetaSchedule& beta,
                           const direct::DirectConfig& cfg, int t) {
    const AdditiveKernel& kern = state.kernel();
    const int M = kern.num_groups();
    if (cfg.max_evals < M)
        throw std::invalid_argument("step_add_gp_ucb: budget smaller than the group count");
    const int base = cfg.max_evals / M;
    const int rem = cfg.max_evals % M;

    StepResult res;
    res.x = Eigen::VectorXd::Constant(kern.ambient_dim(), 0.5);
    for (int j = 0; j < M; ++j) {
        direct::DirectConfig group_cfg = cfg;
        group_cfg.max_evals = base + (j < rem ? 1 : 0);
        const auto& g = kern.group(j);
        const auto acq = [&](const Eigen::VectorXd& z) {
            return add_ucb_group(state, beta, t, j, z);
        };
        const direct::DirectResult r = direct::maximize(acq, g.dim(), group_cfg);
        res.acq_evals += r.evals_used;
        for (int i = 0; i < g.dim(); ++i) res.x[g.indices()[static_cast<std::size_t>(i)]] = r.x_best[i];
    }
    return res;
}

StepResult step_gp_ucb(const PosteriorState& state, const BetaSchedule& beta,
                       const direct::DirectConfig& cfg, int t) {
    const auto acq = [&](const Eigen::VectorXd& x) { return ucb(state, beta, t, x); };
    const direct::DirectResult r = direct::maximize(acq, state.kernel().ambient_dim(), cfg);
    return StepResult{r.x_best, r.evals_used};
}

StepResult step_seq_group(const PosteriorState& state, int active_group,
                          const Eigen::VectorXd& carry, const BetaSchedule& beta,
                          const direct::DirectConfig& cfg, int t) {
    const AdditiveKernel& kern = state.kernel();
    if (active_group < 0 || active_group >= kern.num_groups())
        throw std::invalid_argument("step_seq_group: invalid group index");
    const auto& g = kern.group(active_group);
    const auto acq = [&](const Eigen::VectorXd& z) {
        return add_ucb_group(state, beta, t, active_group, z);
    };
    const direct::DirectResult r = direct::maximize(acq, g.dim(), cfg);
    StepResult res;
    res.x = carry;
    res.acq_evals = r.evals_used;
    for (int i = 0; i < g.dim(); ++i) res.x[g.indices()[static_cast<std::size_t>(i)]] = r.x_best[i];
    return res;
}

StepResult step_ei(const PosteriorState& state, const direct::DirectConfig& cfg,
                   double incumbent) {
    const auto acq = [&](const Eigen::VectorXd& x) {
        return expected_improvement(state, x, incumbent);
    };
    const direct::DirectResult r = direct::maximize(acq, state.kernel().ambient_dim(), cfg);
    return StepResult{r.x_best, r.evals_used};
}

Eigen::VectorXd step_random(Rng& rng, int dim) { return rng.uniform_vector(dim); }

double info_gain_increment(const PosteriorState& state, const Eigen::VectorXd& x) {
    const double s2 = state.full(x).variance;
    return 0.5 * std::log1p(s2 / state.noise().variance());
}

Decomposition decomposition_search(const Dataset& data, const Decomposition& incumbent, int d,
                                   int num_candidates, const KernelSpec& shared_params,
                                   const NoiseModel& noise, Rng& rng) {
    if (data.size() == 0) throw std::invalid_argument("decomposition_search: dataset is empty");
    const int D = incumbent.ambient_dim();
    FitOptions opts;
    opts.center_y = true;

    Decomposition best = incumbent;
    double best_ml = -kInf;
    bool any_ok = false;
    auto consider = [&](const Decomposition& cand) {
        try {
            const double ml =
                log_marginal_likelihood(data, make_additive_kernel(cand, shared_params), noise, opts);
            if (std::isfinite(ml) && (!any_ok || ml > best_ml)) {
                any_ok = true;
                best_ml = ml;
                best = cand;
            }
        } catch (const std::runtime_error&) {
            // factorization failure; skip the candidate
        }
    };
    consider(incumbent);
    for (int c = 0; c < num_candidates; ++c) consider(random_decomposition(D, d, rng));
    return best;
}

Trace run(const Oracle& oracle, const StrategyConfig& cfg, int T, std::uint64_t seed) {
    if (T < 1) throw std::invalid_argument("run: T must be >= 1");
    if (cfg.n_init < 1) throw std::invalid_argument("run: n_init must be >= 1");
    if (cfg.n_cyc < 1) throw std::invalid_argument("run: n_cyc must be >= 1");
    if (!oracle.value) throw std::invalid_argument("run: oracle has no objective");
    const int D = oracle.dim;
    if (D < 1) throw std::invalid_argument("run: oracle dimension must be >= 1");

    Rng rng = Rng::from_stream(seed, 0);
    const NoiseModel noise(cfg.eta);
    const bool grouped = cfg.kind == StrategyKind::add_gp_ucb ||
                         cfg.kind == StrategyKind::seq_one_group ||
                         cfg.kind == StrategyKind::seq_cycle;

    bool learn = false;
    Decomposition decomp = Decomposition::single_group(D);
    if (grouped) {
        if (cfg.decomposition) {
            if (cfg.decomposition->ambient_dim() != D)
                throw std::invalid_argument("run: decomposition dimension != oracle dimension");
            decomp = *cfg.decomposition;
        } else {
            if (cfg.learn_d < 1)
                throw std::invalid_argument("run: learned decomposition needs learn_d >= 1");
            learn = true;
            decomp = random_decomposition(D, cfg.learn_d, rng);
        }
    }

    BetaSchedule beta = cfg.beta;
    beta.dim_full = D;
    beta.group_dim = learn ? cfg.learn_d : decomp.max_group_size();
    beta.num_groups = decomp.num_groups();

    KernelSpec params = cfg.kernel; // shared (sigma, h), revised at refits
    FitOptions fit_opts;
    fit_opts.center_y = true;

    Trace trace;
    trace.strategy_label = cfg.label.empty() ? to_string(cfg.kind) : cfg.label;
    trace.seed = seed;
    trace.regret_available = oracle.optimum_value.has_value();
    trace.rows.reserve(static_cast<std::size_t>(cfg.n_init + T));

    std::vector<Eigen::VectorXd> xs;
    std::vector<double> ys;
    double R_cum = 0.0;
    double S_min = kInf;
    double best_y = -kInf;
    Eigen::VectorXd best_x;
    double info_cum = 0.0;
    int global_t = 0;

    auto record_query = [&](const Eigen::VectorXd& x, bool init, double beta_t, double info_inc,
                            double jitter, double min_raw, int fits, long acq, double wall) {
        const double fval = oracle.value(x);
        const double y = fval + cfg.eta * rng.gaussian();
        xs.push_back(x);
        ys.push_back(y);
        if (y > best_y) {
            best_y = y;
            best_x = x;
        }
        TraceRow row;
        row.t = ++global_t;
        row.init_phase = init;
        row.x = x;
        row.y = y;
        row.f_value = fval;
        if (trace.regret_available) {
            row.r = *oracle.optimum_value - fval;
            R_cum += row.r;
            S_min = std::min(S_min, row.r);
            row.R = R_cum;
            row.S = S_min;
        } else {
            row.r = kNaN;
            row.R = kNaN;
            row.S = best_y; // best-observed fallback when the optimum is unknown
        }
        row.beta = beta_t;
        info_cum += info_inc;
        row.info_inc = info_inc;
        row.info_cum = info_cum;
        row.jitter = jitter;
        row.min_raw_variance = min_raw;
        row.fits_in_step = fits;
        row.acq_evals = acq;
        row.wall_ms = wall;
        trace.rows.push_back(std::move(row));
        return y;
    };

    try {
        for (int i = 0; i < cfg.n_init; ++i)
            record_query(rng.uniform_vector(D), true, 0.0, 0.0, 0.0, 0.0, 0, 0, 0.0);

        // sequential-baseline bookkeeping
        const int M = decomp.num_groups();
        const int seq_per_group = T / M;
        Eigen::VectorXd seq_base = best_x;
        Eigen::VectorXd x_prev = best_x;
        int seq_prev_active = -1;
        double phase_best_y = -kInf;
        Eigen::VectorXd phase_best_x;

        bool refit_done = false;
        for (int t = 1; t <= T; ++t) {
            const auto started = std::chrono::steady_clock::now();
            KernelSpec step_params = params;
            if (!refit_done) step_params.bandwidth = cfg.bandwidth_floor;
            const AdditiveKernel kern = make_additive_kernel(decomp, step_params);

            const std::uint64_t fits_before = factorization_count();
            const PosteriorState state = PosteriorState::fit(
                Dataset(stack_rows(xs, D), stack_values(ys)), kern, noise, fit_opts);

            StepResult step;
            double beta_t = 0.0;
            switch (cfg.kind) {
            case StrategyKind::add_gp_ucb:
                beta_t = beta_value(beta, t);
                step = step_add_gp_ucb(state, beta, cfg.direct, t);
                break;
            case StrategyKind::gp_ucb:
                beta_t = beta_value(beta, t);
                step = step_gp_ucb(state, beta, cfg.direct, t);
                break;
            case StrategyKind::seq_one_group: {
                beta_t = beta_value(beta, t);
                const int active = seq_per_group > 0 ? std::min(M - 1, (t - 1) / seq_per_group) : M - 1;
                if (active != seq_prev_active) {
                    if (seq_prev_active >= 0 && phase_best_y > -kInf) {
                        for (int idx : decomp.groups()[static_cast<std::size_t>(seq_prev_active)])
                            seq_base[idx] = phase_best_x[idx];
                    }
                    seq_prev_active = active;
                    phase_best_y = -kInf;
                }
                step = step_seq_group(state, active, seq_base, beta, cfg.direct, t);
                break;
            }
            case StrategyKind::seq_cycle: {
                beta_t = beta_value(beta, t);
                const int active = (t - 1) % M;
                step = step_seq_group(state, active, x_prev, beta, cfg.direct, t);
                break;
            }
            case StrategyKind::ei:
                step = step_ei(state, cfg.direct, best_y);
                break;
            case StrategyKind::random:
                step.x = step_random(rng, D);
                break;
            }
            const int fits_in_step = static_cast<int>(factorization_count() - fits_before);
            const double info_inc = info_gain_increment(state, step.x);

            double wall = 0.0;
            if (cfg.measure_wall_time) {
                wall = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                 started)
                           .count();
            }
            const double y = record_query(step.x, false, beta_t, info_inc, state.jitter_used(),
                                          state.min_raw_variance(), fits_in_step, step.acq_evals, wall);

            if (cfg.kind == StrategyKind::seq_one_group && y > phase_best_y) {
                phase_best_y = y;
                phase_best_x = step.x;
            }
            x_prev = step.x;

            if (t % cfg.n_cyc == 0) {
                const Dataset all(stack_rows(xs, D), stack_values(ys));
                const int hyper_budget = cfg.hyper.grid * cfg.hyper.grid + 1;
                const HyperOptResult hres = optimize_hyperparams(
                    all, make_additive_kernel(decomp, params), noise, cfg.hyper, hyper_budget, fit_opts);
                params = params.with_params(kernel_diag(hres.kernel.group(0).base()),
                                            kernel_bandwidth(hres.kernel.group(0).base()));
                RefitRecord rec;
                rec.t = t;
                rec.sigma = params.scale;
                rec.bandwidth = params.bandwidth;
                rec.log_marginal = hres.log_marginal;
                if (learn) {
                    const int width = cfg.ml_num_candidates >= 0 ? cfg.ml_num_candidates : D;
                    decomp = decomposition_search(all, decomp, cfg.learn_d, width, params, noise, rng);
                    rec.decomposition = decomp;
                }
                trace.refits.push_back(std::move(rec));
                refit_done = true;
            }
        }
    } catch (const std::exception& e) {
        // abort with the partial trace flushed
        trace.error = e.what();
    }
    return trace;
}

} // namespace addbo
