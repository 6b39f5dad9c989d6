#include "addbo/runner.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace addbo {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_field_double(const std::string& s, const std::string& what) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("bad numeric CSV field for " + what + ": '" + s + "'");
    }
}

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

double sample_stderr(const std::vector<double>& vals, double mean) {
    const std::size_t n = vals.size();
    if (n < 2) return 0.0;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

} // namespace

std::string result_csv_header() {
    return "seed,strategy,t,y_t,r_t,R_t,S_t,info_gain_cum,beta_t,wall_ms";
}

std::string render_result_csv(const Trace& trace) {
    std::ostringstream out;
    out << result_csv_header() << "\n";
    for (const TraceRow& row : trace.rows) {
        out << trace.seed << ',' << trace.strategy_label << ',' << row.t << ','
            << format_double(row.y) << ',' << format_double(row.r) << ','
            << format_double(row.R) << ',' << format_double(row.S) << ','
            << format_double(row.info_cum) << ',' << format_double(row.beta) << ','
            << format_double(row.wall_ms) << "\n";
    }
    return out.str();
}

std::vector<ResultRow> parse_result_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("result CSV is empty");
    if (line != result_csv_header())
        throw std::runtime_error("result CSV has an unexpected header: " + line);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10) throw std::runtime_error("result CSV row has wrong field count");
        ResultRow r;
        r.seed = static_cast<std::uint64_t>(std::stoull(f[0]));
        r.strategy = f[1];
        r.t = std::stoi(f[2]);
        r.y = parse_field_double(f[3], "y_t");
        r.r = parse_field_double(f[4], "r_t");
        r.R = parse_field_double(f[5], "R_t");
        r.S = parse_field_double(f[6], "S_t");
        r.info_gain_cum = parse_field_double(f[7], "info_gain_cum");
        r.beta = parse_field_double(f[8], "beta_t");
        r.wall_ms = parse_field_double(f[9], "wall_ms");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_result_csv(const std::string& path) {
    return parse_result_csv(read_file(path));
}

StrategyConfig make_strategy_config(const ExperimentConfig& cfg, const StrategyEntry& entry,
                                    const Decomposition& known_decomposition) {
    StrategyConfig s;
    s.kind = entry.kind;
    s.beta.kind = entry.beta_kind;
    s.beta.coeff = entry.beta_coeff;
    s.beta.delta = entry.beta_delta;
    const bool grouped = entry.kind == StrategyKind::add_gp_ucb ||
                         entry.kind == StrategyKind::seq_one_group ||
                         entry.kind == StrategyKind::seq_cycle;
    if (grouped) {
        if (entry.decomposition_known)
            s.decomposition = known_decomposition;
        else
            s.learn_d = entry.learn_d;
        s.direct.max_evals = cfg.resolved_budget_additive();
    } else {
        s.direct.max_evals = cfg.resolved_budget_full();
    }
    s.direct.epsilon = cfg.direct_epsilon;
    s.n_init = entry.n_init;
    s.n_cyc = entry.n_cyc;
    s.bandwidth_floor = entry.bandwidth_floor;
    s.ml_num_candidates = entry.ml_candidates;
    s.eta = cfg.eta;
    s.kernel = cfg.kernel;
    s.hyper = cfg.hyper;
    s.measure_wall_time = cfg.timing;
    s.label = entry.label;
    return s;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                int threads) {
    fs::create_directories(out_dir);

    const CompositeFunction composite = build_composite(cfg.function);
    const Oracle oracle = composite.oracle();
    const Decomposition known = composite.full_decomposition();

    struct Job {
        StrategyConfig strategy;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (const StrategyEntry& entry : cfg.strategies) {
        const StrategyConfig s = make_strategy_config(cfg, entry, known);
        for (int rep = 0; rep < cfg.replicates; ++rep)
            jobs.push_back({s, cfg.base_seed + static_cast<std::uint64_t>(rep)});
    }

    ExperimentOutput out;
    out.jobs.resize(jobs.size());

    int pool = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    pool = std::max(1, std::min<int>(pool, static_cast<int>(jobs.size())));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            JobOutcome& res = out.jobs[i];
            res.strategy = jobs[i].strategy.label;
            res.seed = jobs[i].seed;
            try {
                res.trace = run(oracle, jobs[i].strategy, cfg.T, jobs[i].seed);
                res.ok = res.trace.ok();
                res.error = res.trace.error;
            } catch (const std::exception& e) {
                res.ok = false;
                res.error = e.what();
            }
        }
    };
    std::vector<std::thread> team;
    for (int i = 1; i < pool; ++i) team.emplace_back(worker);
    worker();
    for (auto& th : team) th.join();

    // write per-replicate files in deterministic (strategy, seed) order;
    // aborted runs still flush their partial rows
    for (JobOutcome& job : out.jobs) {
        if (job.trace.rows.empty()) continue;
        job.filename = sanitize_label(job.strategy) + "_seed" + std::to_string(job.seed) + ".csv";
        write_file((fs::path(out_dir) / job.filename).string(), render_result_csv(job.trace));
    }

    // aggregate over completed replicates, strategies in config order
    for (const StrategyEntry& entry : cfg.strategies) {
        std::vector<double> finals_S;
        std::vector<double> finals_RT;
        for (const JobOutcome& job : out.jobs) {
            if (!job.ok || job.strategy != entry.label || job.trace.rows.empty()) continue;
            const TraceRow& last = job.trace.rows.back();
            finals_S.push_back(last.S);
            finals_RT.push_back(last.R / last.t);
        }
        if (finals_S.empty()) continue;
        AggregateRow row;
        row.strategy = entry.label;
        row.T = cfg.T;
        row.mean_S_T = 0.0;
        for (double v : finals_S) row.mean_S_T += v;
        row.mean_S_T /= static_cast<double>(finals_S.size());
        row.stderr_S_T = sample_stderr(finals_S, row.mean_S_T);
        row.mean_RT_over_T = 0.0;
        for (double v : finals_RT) row.mean_RT_over_T += v;
        row.mean_RT_over_T /= static_cast<double>(finals_RT.size());
        row.stderr_RT_over_T = sample_stderr(finals_RT, row.mean_RT_over_T);
        out.aggregate.push_back(std::move(row));
    }

    {
        std::ostringstream agg;
        agg << "strategy,T,mean_S_T,stderr_S_T,mean_RT_over_T,stderr_RT_over_T\n";
        for (const AggregateRow& row : out.aggregate)
            agg << row.strategy << ',' << row.T << ',' << format_double(row.mean_S_T) << ','
                << format_double(row.stderr_S_T) << ',' << format_double(row.mean_RT_over_T)
                << ',' << format_double(row.stderr_RT_over_T) << "\n";
        out.aggregate_path = (fs::path(out_dir) / "aggregate.csv").string();
        write_file(out.aggregate_path, agg.str());
    }

    {
        std::ostringstream man;
        man << "addbo_version = " << kVersion << "\n";
        man << "config_hash = " << config_hash(cfg) << "\n";
        man << "base_seed = " << cfg.base_seed << "\n";
        man << "replicates = " << cfg.replicates << "\n";
        man << "horizon_T = " << cfg.T << "\n";
        for (const JobOutcome& job : out.jobs) {
            man << "job strategy=" << job.strategy << " seed=" << job.seed << " status="
                << (job.ok ? "ok" : "failed");
            if (!job.filename.empty()) man << " file=" << job.filename;
            if (!job.ok) man << " error=" << job.error;
            man << "\n";
        }
        out.manifest_path = (fs::path(out_dir) / "manifest.txt").string();
        write_file(out.manifest_path, man.str());
    }

    out.all_ok = true;
    for (const JobOutcome& job : out.jobs) out.all_ok = out.all_ok && job.ok;
    return out;
}

bool csv_equal_numeric(const std::string& path_a, const std::string& path_b, double tol,
                       std::string* message) {
    std::istringstream a(read_file(path_a));
    std::istringstream b(read_file(path_b));
    std::string la, lb;
    int lineno = 0;
    while (true) {
        const bool ga = static_cast<bool>(std::getline(a, la));
        const bool gb = static_cast<bool>(std::getline(b, lb));
        ++lineno;
        if (!ga && !gb) return true;
        if (ga != gb) {
            if (message) *message = "line " + std::to_string(lineno) + ": files have different lengths";
            return false;
        }
        const auto fa = split_csv_line(la);
        const auto fb = split_csv_line(lb);
        if (fa.size() != fb.size()) {
            if (message) *message = "line " + std::to_string(lineno) + ": field counts differ";
            return false;
        }
        for (std::size_t i = 0; i < fa.size(); ++i) {
            if (fa[i] == fb[i]) continue;
            double va = 0.0, vb = 0.0;
            bool numeric = true;
            try {
                va = parse_field_double(fa[i], "field");
                vb = parse_field_double(fb[i], "field");
            } catch (const std::exception&) {
                numeric = false;
            }
            const bool both_nan = numeric && std::isnan(va) && std::isnan(vb);
            const bool close =
                numeric && !both_nan &&
                std::fabs(va - vb) <= tol * std::max({1.0, std::fabs(va), std::fabs(vb)});
            if (!(both_nan || close)) {
                if (message)
                    *message = "line " + std::to_string(lineno) + " field " + std::to_string(i + 1) +
                               ": '" + fa[i] + "' vs '" + fb[i] + "'";
                return false;
            }
        }
    }
}

} // namespace addbo
