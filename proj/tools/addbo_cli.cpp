#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "addbo/config.hpp"
#include "addbo/runner.hpp"
#include "addbo/synthetic.hpp"

namespace {

void print_vector(std::ostream& out, const Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) out << (i ? "," : "") << addbo::format_double(v[i]);
}

void print_synth_fixture(std::ostream& out, const addbo::SyntheticSpec& spec) {
    const addbo::CompositeFunction f = addbo::build_composite(spec);
    out << "D = " << spec.ambient_dim << "\n";
    out << "dtilde = " << spec.group_dim << "\n";
    out << "Mtilde = " << spec.num_groups << "\n";
    out << "seed = " << spec.seed << "\n";
    out << "h = " << addbo::format_double(f.bump().bandwidth()) << "\n";
    for (std::size_t i = 0; i < f.bump().centers().size(); ++i) {
        out << "v" << (i + 1) << " = ";
        print_vector(out, f.bump().centers()[i]);
        out << "\n";
    }
    for (std::size_t j = 0; j < f.groups().size(); ++j) {
        out << "group[" << j << "] = ";
        const auto& g = f.groups()[j];
        for (std::size_t i = 0; i < g.size(); ++i) out << (i ? "," : "") << g[i];
        out << "\n";
    }
    out << "f_group_max = " << addbo::format_double(f.bump().max_value()) << "\n";
    out << "x_opt = ";
    print_vector(out, f.optimum_point());
    out << "\n";
    out << "f_opt = " << addbo::format_double(f.optimum_value()) << "\n";
}

int resolve_threads(int flag_value) {
    if (const char* env = std::getenv("ADDBO_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
            // fall through to the flag / default
        }
    }
    return flag_value;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Additive-model Bayesian optimization and GP-bandit benchmark harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed_override = -1;
    int replicates_override = -1;
    int threads = 0;
    auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
    run_cmd->add_option("--config", config_path, "config file (flat key/value or JSON)")->required();
    run_cmd->add_option("--out", out_dir, "output directory")->required();
    run_cmd->add_option("--seed", seed_override, "override loop.base_seed");
    run_cmd->add_option("--replicates", replicates_override, "override loop.replicates");
    run_cmd->add_option("--threads", threads,
                        "worker pool size (default: hardware threads; ADDBO_THREADS overrides)");

    int synth_D = 10, synth_d = 3, synth_M = 3;
    long long synth_seed = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Print the synthetic-function fixture");
    synth_cmd->add_option("--D", synth_D, "ambient dimension")->required();
    synth_cmd->add_option("--dtilde", synth_d, "group dimension")->required();
    synth_cmd->add_option("--Mtilde", synth_M, "number of contributing groups")->required();
    synth_cmd->add_option("--seed", synth_seed, "fixture seed");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a config file without running");
    validate_cmd->add_option("--config", validate_path, "config file")->required();

    std::string cmp_a, cmp_b;
    double cmp_tol = 1e-12;
    auto* compare_cmd = app.add_subcommand("compare", "Numerically compare two result CSVs");
    compare_cmd->add_option("--a", cmp_a, "first CSV")->required();
    compare_cmd->add_option("--b", cmp_b, "second CSV")->required();
    compare_cmd->add_option("--tol", cmp_tol, "relative tolerance (default 1e-12)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            addbo::ExperimentConfig cfg = addbo::parse_config_file(config_path);
            if (seed_override >= 0) cfg.base_seed = static_cast<std::uint64_t>(seed_override);
            if (replicates_override > 0) cfg.replicates = replicates_override;
            const addbo::ExperimentOutput out =
                addbo::run_experiment(cfg, out_dir, resolve_threads(threads));
            for (const auto& job : out.jobs) {
                std::cout << "replicate strategy=" << job.strategy << " seed=" << job.seed
                          << (job.ok ? " ok" : " FAILED: " + job.error) << "\n";
            }
            std::cout << "aggregate: " << out.aggregate_path << "\n";
            std::cout << "manifest: " << out.manifest_path << "\n";
            return out.all_ok ? 0 : 1;
        }
        if (*synth_cmd) {
            addbo::SyntheticSpec spec;
            spec.ambient_dim = synth_D;
            spec.group_dim = synth_d;
            spec.num_groups = synth_M;
            spec.seed = static_cast<std::uint64_t>(synth_seed);
            print_synth_fixture(std::cout, spec);
            return 0;
        }
        if (*validate_cmd) {
            const addbo::ExperimentConfig cfg = addbo::parse_config_file(validate_path);
            std::cout << "config ok: " << cfg.strategies.size() << " strategies, T=" << cfg.T
                      << ", replicates=" << cfg.replicates << ", hash=" << addbo::config_hash(cfg)
                      << "\n";
            return 0;
        }
        if (*compare_cmd) {
            std::string msg;
            if (addbo::csv_equal_numeric(cmp_a, cmp_b, cmp_tol, &msg)) {
                std::cout << "equal within tolerance " << addbo::format_double(cmp_tol) << "\n";
                return 0;
            }
            std::cout << "differ: " << msg << "\n";
            return 1;
        }
    } catch (const addbo::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
