#ifndef ADDBO_CONFIG_HPP
#define ADDBO_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "addbo/bandit.hpp"
#include "addbo/synthetic.hpp"

namespace addbo {

/// Configuration-level failure (bad key, bad value, missing file). The CLI
/// maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One strategy block of the experiment config.
struct StrategyEntry {
    StrategyKind kind = StrategyKind::add_gp_ucb;
    BetaKind beta_kind = BetaKind::practical;
    double beta_coeff = 0.2;
    double beta_delta = 0.1;
    bool decomposition_known = true; // add/seq kinds: true = oracle's decomposition
    int learn_d = 0;                 // group size bound when learning
    int n_init = 10;
    int n_cyc = 25;
    double bandwidth_floor = 1e-5;
    int ml_candidates = -1; // -1 resolves to D at run time
    std::string label;      // defaults to a kind-derived label
};

struct ExperimentConfig {
    SyntheticSpec function;
    double eta = 0.1;
    int T = 100;
    int replicates = 10;
    std::uint64_t base_seed = 0;
    int budget_full = 0; // 0 resolves to min(5000, 100 D)
    double additive_fraction = 0.9;
    double direct_epsilon = 1e-4;
    KernelSpec kernel;
    HyperSearchSpace hyper;
    bool timing = false; // real wall_ms breaks byte-identical reruns
    std::vector<StrategyEntry> strategies;

    int resolved_budget_full() const;
    int resolved_budget_additive() const;
};

/// Parse a config document: flat `section.key = value` lines (# comments), or
/// a JSON object with the same dotted structure when the text starts with '{'.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Fixed-order flat rendering of every resolved key; reruns of one config
/// produce the identical text.
std::string canonical_config_text(const ExperimentConfig& cfg);

/// FNV-1a 64-bit hash of the canonical text, in hex.
std::string config_hash(const ExperimentConfig& cfg);

/// Shortest decimal representation that round-trips (to_chars); "nan"/"inf"
/// for non-finite values.
std::string format_double(double v);

std::string beta_kind_to_string(BetaKind k);
BetaKind beta_kind_from_string(const std::string& s);

} // namespace addbo

#endif
