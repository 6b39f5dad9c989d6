#include "addbo/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace addbo {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// dotted-key -> raw value text; tracks which keys were consumed so leftovers
// can be reported as unknown
class KeyMap {
public:
    void insert(const std::string& key, const std::string& value) {
        if (values_.count(key)) throw ConfigError("duplicate config key: " + key);
        values_[key] = value;
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        return it->second;
    }

    double get_double(const std::string& key, double fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected a number, got '" + it->second + "'");
        }
    }

    long long get_int(const std::string& key, long long fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing text");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": expected an integer, got '" + it->second + "'");
        }
    }

    bool get_bool(const std::string& key, bool fallback) {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        consumed_.insert(it->first);
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw ConfigError("config key " + key + ": expected true/false, got '" + it->second + "'");
    }

    std::vector<std::string> unconsumed() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!consumed_.count(k)) out.push_back(k);
        return out;
    }

    int max_strategy_index() const {
        int max_idx = -1;
        for (const auto& [k, v] : values_) {
            if (k.rfind("strategy[", 0) != 0) continue;
            const auto close = k.find(']');
            if (close == std::string::npos) throw ConfigError("malformed strategy key: " + k);
            try {
                max_idx = std::max(max_idx, std::stoi(k.substr(9, close - 9)));
            } catch (const std::exception&) {
                throw ConfigError("malformed strategy key: " + k);
            }
        }
        return max_idx;
    }

private:
    std::map<std::string, std::string> values_;
    std::set<std::string> consumed_;
};

void flatten_json(const nlohmann::json& j, const std::string& prefix, KeyMap& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_json(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten_json(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else if (j.is_string()) {
        out.insert(prefix, j.get<std::string>());
    } else if (j.is_boolean()) {
        out.insert(prefix, j.get<bool>() ? "true" : "false");
    } else if (j.is_number_integer() || j.is_number_unsigned()) {
        out.insert(prefix, std::to_string(j.get<long long>()));
    } else if (j.is_number_float()) {
        out.insert(prefix, format_double(j.get<double>()));
    } else {
        throw ConfigError("config key " + prefix + ": unsupported JSON value");
    }
}

KeyMap load_keys(const std::string& text) {
    KeyMap keys;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config JSON parse error: ") + e.what());
        }
        flatten_json(j, "", keys);
        return keys;
    }
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        keys.insert(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return keys;
}

StrategyEntry parse_strategy(KeyMap& keys, int i) {
    const std::string p = "strategy[" + std::to_string(i) + "].";
    StrategyEntry e;
    const std::string kind = keys.get_string(p + "kind", "");
    if (kind.empty()) throw ConfigError("missing " + p + "kind");
    try {
        e.kind = strategy_kind_from_string(kind);
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("config: ") + ex.what());
    }
    const std::string bk = keys.get_string(p + "beta.kind", "practical");
    e.beta_kind = beta_kind_from_string(bk);
    e.beta_coeff = keys.get_double(p + "beta.coeff", 0.2);
    e.beta_delta = keys.get_double(p + "beta.delta", 0.1);
    // "known", "learn:<d>", or a bare group size <d> meaning learn
    const std::string decomp = keys.get_string(p + "decomposition", "known");
    if (decomp == "known") {
        e.decomposition_known = true;
    } else {
        std::string num = decomp;
        if (decomp.rfind("learn:", 0) == 0) num = decomp.substr(6);
        try {
            std::size_t pos = 0;
            e.learn_d = std::stoi(num, &pos);
            if (pos != num.size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw ConfigError("config: decomposition must be 'known', 'learn:<d>' or a group size, got '" +
                              decomp + "'");
        }
        e.decomposition_known = false;
        if (e.learn_d < 1) throw ConfigError("config: learn group size must be >= 1");
    }
    e.n_init = static_cast<int>(keys.get_int(p + "n_init", 10));
    e.n_cyc = static_cast<int>(keys.get_int(p + "n_cyc", 25));
    e.bandwidth_floor = keys.get_double(p + "bandwidth_floor", 1e-5);
    e.ml_candidates = static_cast<int>(keys.get_int(p + "ml_candidates", -1));
    e.label = keys.get_string(p + "label", "");
    if (e.n_init < 1) throw ConfigError("config: n_init must be >= 1");
    if (e.n_cyc < 1) throw ConfigError("config: n_cyc must be >= 1");
    return e;
}

std::string default_label(const StrategyEntry& e) {
    const bool grouped = e.kind == StrategyKind::add_gp_ucb ||
                         e.kind == StrategyKind::seq_one_group ||
                         e.kind == StrategyKind::seq_cycle;
    if (!grouped) return to_string(e.kind);
    if (e.decomposition_known) return to_string(e.kind) + "-known";
    return to_string(e.kind) + "-learn" + std::to_string(e.learn_d);
}

} // namespace

int ExperimentConfig::resolved_budget_full() const {
    if (budget_full > 0) return budget_full;
    return std::min(5000, 100 * function.ambient_dim);
}

int ExperimentConfig::resolved_budget_additive() const {
    return std::max(1, static_cast<int>(std::lround(additive_fraction * resolved_budget_full())));
}

ExperimentConfig parse_config_text(const std::string& text) {
    KeyMap keys = load_keys(text);
    ExperimentConfig cfg;

    cfg.function.ambient_dim = static_cast<int>(keys.get_int("function.D", 10));
    cfg.function.group_dim = static_cast<int>(keys.get_int("function.dtilde", 3));
    cfg.function.num_groups = static_cast<int>(keys.get_int("function.Mtilde", 3));
    cfg.function.seed = static_cast<std::uint64_t>(keys.get_int("function.seed", 0));
    if (cfg.function.ambient_dim < 1 || cfg.function.group_dim < 1 || cfg.function.num_groups < 1)
        throw ConfigError("config: function dimensions must be positive");
    if (cfg.function.group_dim * cfg.function.num_groups > cfg.function.ambient_dim)
        throw ConfigError("config: function requires dtilde * Mtilde <= D");

    cfg.eta = keys.get_double("noise.eta", 0.1);
    if (!(cfg.eta > 0.0)) throw ConfigError("config: noise.eta must be positive");

    cfg.T = static_cast<int>(keys.get_int("loop.T", 100));
    cfg.replicates = static_cast<int>(keys.get_int("loop.replicates", 10));
    cfg.base_seed = static_cast<std::uint64_t>(keys.get_int("loop.base_seed", 0));
    if (cfg.T < 1) throw ConfigError("config: loop.T must be >= 1");
    if (cfg.replicates < 1) throw ConfigError("config: loop.replicates must be >= 1");

    cfg.budget_full = static_cast<int>(keys.get_int("budget.full", 0));
    cfg.additive_fraction = keys.get_double("budget.additive_fraction", 0.9);
    if (cfg.budget_full < 0) throw ConfigError("config: budget.full must be >= 1");
    if (!(cfg.additive_fraction > 0.0 && cfg.additive_fraction <= 1.0))
        throw ConfigError("config: budget.additive_fraction must be in (0, 1]");

    // direct.max_evals, when present, overrides budget.full
    if (keys.has("direct.max_evals"))
        cfg.budget_full = static_cast<int>(keys.get_int("direct.max_evals", 0));
    cfg.direct_epsilon = keys.get_double("direct.epsilon", 1e-4);
    if (cfg.direct_epsilon < 0.0) throw ConfigError("config: direct.epsilon must be >= 0");

    const std::string kk = keys.get_string("kernel.kind", "se");
    if (kk == "se") {
        cfg.kernel.kind = KernelSpec::Kind::se;
    } else if (kk == "matern") {
        cfg.kernel.kind = KernelSpec::Kind::matern;
    } else {
        throw ConfigError("config: kernel.kind must be se or matern, got '" + kk + "'");
    }
    cfg.kernel.scale = keys.get_double("kernel.scale", 1.0);
    cfg.kernel.bandwidth = keys.get_double("kernel.bandwidth", 0.1);
    cfg.kernel.smoothness = keys.get_double("kernel.smoothness", 2.5);
    if (!(cfg.kernel.scale > 0.0 && cfg.kernel.bandwidth > 0.0 && cfg.kernel.smoothness > 0.0))
        throw ConfigError("config: kernel parameters must be positive");

    cfg.hyper.sigma_min = keys.get_double("hyper.sigma_min", 1e-3);
    cfg.hyper.sigma_max = keys.get_double("hyper.sigma_max", 1e9);
    cfg.hyper.h_min = keys.get_double("hyper.h_min", 1e-3);
    cfg.hyper.h_max = keys.get_double("hyper.h_max", 10.0);
    cfg.hyper.grid = static_cast<int>(keys.get_int("hyper.grid", 10));
    if (!(cfg.hyper.sigma_min > 0.0 && cfg.hyper.sigma_max >= cfg.hyper.sigma_min))
        throw ConfigError("config: bad hyper sigma bounds");
    if (!(cfg.hyper.h_min > 0.0 && cfg.hyper.h_max >= cfg.hyper.h_min))
        throw ConfigError("config: bad hyper bandwidth bounds");
    if (cfg.hyper.grid < 1) throw ConfigError("config: hyper.grid must be >= 1");

    cfg.timing = keys.get_bool("output.timing", false);

    const int max_idx = keys.max_strategy_index();
    if (max_idx < 0) throw ConfigError("config: at least one strategy block is required");
    for (int i = 0; i <= max_idx; ++i) {
        StrategyEntry e = parse_strategy(keys, i);
        if (e.label.empty()) e.label = default_label(e);
        cfg.strategies.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < cfg.strategies.size(); ++i)
        for (std::size_t j = i + 1; j < cfg.strategies.size(); ++j)
            if (cfg.strategies[i].label == cfg.strategies[j].label)
                throw ConfigError("config: duplicate strategy label '" + cfg.strategies[i].label +
                                  "' (set strategy[i].label to disambiguate)");

    const auto leftover = keys.unconsumed();
    if (!leftover.empty()) {
        std::string msg = "config: unknown keys:";
        for (const auto& k : leftover) msg += " " + k;
        throw ConfigError(msg);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string beta_kind_to_string(BetaKind k) {
    switch (k) {
    case BetaKind::theoretical_add: return "theoretical_add";
    case BetaKind::theoretical_full: return "theoretical_full";
    case BetaKind::practical: return "practical";
    }
    throw std::logic_error("beta_kind_to_string: unknown kind");
}

BetaKind beta_kind_from_string(const std::string& s) {
    if (s == "theoretical_add") return BetaKind::theoretical_add;
    if (s == "theoretical_full") return BetaKind::theoretical_full;
    if (s == "practical") return BetaKind::practical;
    throw ConfigError("unknown beta kind: " + s);
}

std::string canonical_config_text(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "function.D = " << cfg.function.ambient_dim << "\n";
    out << "function.dtilde = " << cfg.function.group_dim << "\n";
    out << "function.Mtilde = " << cfg.function.num_groups << "\n";
    out << "function.seed = " << cfg.function.seed << "\n";
    out << "noise.eta = " << format_double(cfg.eta) << "\n";
    out << "loop.T = " << cfg.T << "\n";
    out << "loop.replicates = " << cfg.replicates << "\n";
    out << "loop.base_seed = " << cfg.base_seed << "\n";
    out << "budget.full = " << cfg.resolved_budget_full() << "\n";
    out << "budget.additive_fraction = " << format_double(cfg.additive_fraction) << "\n";
    out << "direct.epsilon = " << format_double(cfg.direct_epsilon) << "\n";
    out << "kernel.kind = " << (cfg.kernel.kind == KernelSpec::Kind::se ? "se" : "matern") << "\n";
    out << "kernel.scale = " << format_double(cfg.kernel.scale) << "\n";
    out << "kernel.bandwidth = " << format_double(cfg.kernel.bandwidth) << "\n";
    out << "kernel.smoothness = " << format_double(cfg.kernel.smoothness) << "\n";
    out << "hyper.sigma_min = " << format_double(cfg.hyper.sigma_min) << "\n";
    out << "hyper.sigma_max = " << format_double(cfg.hyper.sigma_max) << "\n";
    out << "hyper.h_min = " << format_double(cfg.hyper.h_min) << "\n";
    out << "hyper.h_max = " << format_double(cfg.hyper.h_max) << "\n";
    out << "hyper.grid = " << cfg.hyper.grid << "\n";
    out << "output.timing = " << (cfg.timing ? "true" : "false") << "\n";
    for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
        const StrategyEntry& e = cfg.strategies[i];
        const std::string p = "strategy[" + std::to_string(i) + "].";
        out << p << "kind = " << to_string(e.kind) << "\n";
        out << p << "beta.kind = " << beta_kind_to_string(e.beta_kind) << "\n";
        out << p << "beta.coeff = " << format_double(e.beta_coeff) << "\n";
        out << p << "beta.delta = " << format_double(e.beta_delta) << "\n";
        out << p << "decomposition = "
            << (e.decomposition_known ? std::string("known") : "learn:" + std::to_string(e.learn_d))
            << "\n";
        out << p << "n_init = " << e.n_init << "\n";
        out << p << "n_cyc = " << e.n_cyc << "\n";
        out << p << "bandwidth_floor = " << format_double(e.bandwidth_floor) << "\n";
        out << p << "ml_candidates = " << e.ml_candidates << "\n";
        out << p << "label = " << e.label << "\n";
    }
    return out.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = canonical_config_text(cfg);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

} // namespace addbo
