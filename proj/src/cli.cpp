#include "pcmci/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pcmci/bench.hpp"
#include "pcmci/discovery.hpp"
#include "pcmci/errors.hpp"
#include "pcmci/scm.hpp"
#include "pcmci/verification.hpp"

namespace pcmci {

namespace {

class GenerationFailure : public std::runtime_error {
public:
    explicit GenerationFailure(const std::string& what) : std::runtime_error(what) {}
};

int default_jobs() {
    if (const char* env = std::getenv("PCMCI_JOBS")) {
        try {
            return std::max(1, std::stoi(env));
        } catch (const std::exception&) {
            throw InvalidInput("PCMCI_JOBS must be an integer");
        }
    }
    return 1;
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write '" + path + "'");
    f << text;
}

struct DiscoverArgs {
    std::string input;
    int tau_max = 1;
    double alpha = 0.01;
    std::string method = "pcmci+";
    std::string rule = "majority";
    std::string ci_test = "parcorr";
    std::string model;
    std::string output;
};

int cmd_discover(const DiscoverArgs& a, std::ostream& out, std::ostream& err) {
    DiscoveryConfig cfg{method_from_string(a.method), rule_from_string(a.rule), a.tau_max, a.alpha};
    cfg.validate();
    std::optional<Dataset> data;
    if (!a.input.empty()) data = read_csv_file(a.input);
    const auto start = std::chrono::steady_clock::now();
    DiscoveryResult res;
    std::vector<std::string> names;
    if (a.ci_test == "parcorr") {
        if (!data) throw InvalidInput("--input is required with the parcorr test");
        if (data->n_samples() <= cfg.tau_max + 10) {
            throw InsufficientData("T = " + std::to_string(data->n_samples()) + " must exceed tau_max + 10");
        }
        res = discover_parcorr(*data, cfg);
        names = data->var_names;
    } else if (a.ci_test == "oracle") {
        if (a.model.empty()) throw InvalidInput("--model is required with the oracle test");
        const ScmModel model = model_from_json(read_json_file(a.model));
        if (data && data->n_vars() != model.n_vars) throw InvalidInput("model and data differ in variable count");
        res = discover_oracle(to_lagged_dag(model), cfg);
        names = data ? data->var_names : default_var_names(model.n_vars);
    } else {
        throw InvalidInput("unknown CI test '" + a.ci_test + "'");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json j = graph_to_json(res.graph, names);
    nlohmann::json config = cfg.to_json();
    config["ci_test"] = a.ci_test;
    config["input"] = a.input;
    if (!a.model.empty()) config["model"] = a.model;
    j["config"] = config;
    j["p_max"] = link_table_to_json(res.skeleton.p_max);
    j["val_at_pmax"] = link_table_to_json(res.skeleton.val_at_pmax);
    j["acyclic"] = res.acyclic;
    write_text(a.output, j.dump(2) + "\n", out);
    err << "discovery finished in " << secs << " s (" << res.n_evaluations << " CI tests)\n";
    return kExitOk;
}

struct SimulateArgs {
    std::string spec;
    int n_vars = 5;
    double autocorr = 0.95;
    std::string setup = "linear-gaussian";
    int max_lag = 5;
    int t_len = 500;
    int burn_in = kDefaultBurnIn;
    std::uint64_t seed = 0;
    int max_retries = 100;
    std::string output;
    std::string model_output;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.output.empty()) throw InvalidInput("--output is required");
    std::optional<ScmModel> fixed;
    if (!a.spec.empty()) fixed = model_from_json(read_json_file(a.spec));
    GenConfig gen;
    gen.n_vars = a.n_vars;
    gen.autocorr = a.autocorr;
    gen.setup = setup_from_string(a.setup);
    gen.max_lag = a.max_lag;
    if (!fixed) gen.validate();
    for (int k = 0; k < a.max_retries; ++k) {
        Rng rng(a.seed ^ static_cast<std::uint64_t>(k));
        const ScmModel model = fixed ? *fixed : draw_model(gen, rng);
        const auto data = simulate(model, a.t_len, a.burn_in, rng);
        if (!data) continue;
        write_csv_file(a.output, *data);
        std::string model_path = a.model_output;
        if (model_path.empty()) {
            std::filesystem::path p(a.output);
            p.replace_extension(".model.json");
            model_path = p.string();
        }
        write_text(model_path, model_to_json(model).dump(2) + "\n", out);
        err << "wrote " << a.output << " and " << model_path << " after " << k << " redraws\n";
        return kExitOk;
    }
    throw GenerationFailure("no stationary simulation after " + std::to_string(a.max_retries) + " attempts");
}

struct BenchArgs {
    std::string config;
    int jobs = 0;
    int realizations = 0;
    std::optional<std::uint64_t> seed;
    bool oracle = false;
    bool include_runtime = false;
    std::string output_csv;
    std::string output_json;
};

int cmd_benchmark(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    BenchConfig cfg = a.config.empty() ? BenchConfig{} : BenchConfig::from_json(read_json_file(a.config));
    cfg.jobs = a.jobs > 0 ? a.jobs : default_jobs();
    if (a.realizations > 0) cfg.n_realizations = a.realizations;
    if (a.seed) cfg.base_seed = *a.seed;
    if (a.oracle) cfg.oracle = true;
    cfg.validate();
    const SweepResult res = run_sweep(cfg);
    const std::string csv = sweep_to_csv(res, a.include_runtime);
    if (a.output_csv.empty() && a.output_json.empty()) {
        out << csv;
    } else {
        if (!a.output_csv.empty()) write_text(a.output_csv, csv, out);
        if (!a.output_json.empty()) write_text(a.output_json, sweep_to_json(res, cfg, a.include_runtime).dump(2) + "\n", out);
    }
    int failed = 0;
    for (const auto& row : res.rows) {
        failed += row.n_failed;
        err << method_name(row.method) << " N=" << row.cell.n_vars << " T=" << row.cell.t_len << " a=" << row.cell.autocorr
            << " tau_max=" << row.cell.tau_max << " alpha=" << row.cell.alpha << ": median runtime " << row.median_runtime
            << " s\n";
    }
    if (failed > 0) err << failed << " realizations failed (see JSON errors)\n";
    return kExitOk;
}

struct VerifyArgs {
    std::string suite;
    int n_instances = 0;
    std::uint64_t seed = 0;
    int jobs = 0;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    int n = a.n_instances;
    if (n <= 0) {
        n = a.suite == "effect-size" ? 100 : a.suite == "calibration" ? 500 : 200;
    }
    const SuiteResult r = run_suite(a.suite, n, a.seed, a.jobs > 0 ? a.jobs : default_jobs());
    nlohmann::json j = r.to_json();
    out << j.dump(2) << "\n";
    if (!r.passed()) {
        err << "suite " << r.suite << " failed on " << r.n_failed << " of " << r.n_checked << " checks\n";
        return kExitPropertyFailure;
    }
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal discovery for stationary time series (PCMCI+, PCMCI+0, PC-stable)", "pcmciplus"};
    app.require_subcommand(1);

    DiscoverArgs da;
    auto* disc = app.add_subcommand("discover", "Estimate a time series graph from a CSV dataset");
    disc->add_option("--input", da.input, "CSV dataset (header optional)");
    disc->add_option("--tau-max", da.tau_max, "Maximum time lag")->required();
    disc->add_option("--alpha", da.alpha, "Significance level");
    disc->add_option("--method", da.method, "pc | pcmci0 | pcmci+");
    disc->add_option("--rule", da.rule, "none | conservative | majority");
    disc->add_option("--ci-test", da.ci_test, "parcorr | oracle");
    disc->add_option("--model", da.model, "Ground-truth model JSON for the oracle test");
    disc->add_option("--output", da.output, "Output JSON path (default: stdout)");

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
    sim->add_option("--spec", sa.spec, "Model JSON; otherwise a random model is drawn");
    sim->add_option("--n-vars", sa.n_vars, "Variables of a random model");
    sim->add_option("--autocorr", sa.autocorr, "Autocorrelation ceiling a");
    sim->add_option("--setup", sa.setup, "linear-gaussian | linear-mixed | nonlinear-mixed");
    sim->add_option("--max-lag", sa.max_lag, "Largest lag of random cross-links");
    sim->add_option("-T,--T,--t-len", sa.t_len, "Time series length")->required();
    sim->add_option("--burn-in", sa.burn_in, "Discarded initial steps");
    sim->add_option("--seed", sa.seed, "Random seed");
    sim->add_option("--max-retries", sa.max_retries, "Redraws before giving up");
    sim->add_option("--output", sa.output, "Output CSV path")->required();
    sim->add_option("--model-output", sa.model_output, "Model JSON path (default: next to the CSV)");

    BenchArgs ba;
    std::uint64_t bench_seed = 0;
    auto* bench = app.add_subcommand("benchmark", "Run a seeded benchmark sweep");
    bench->add_option("--config", ba.config, "Benchmark config JSON");
    bench->add_option("--jobs", ba.jobs, "Parallel jobs (default: PCMCI_JOBS or 1)");
    bench->add_option("--realizations", ba.realizations, "Override n_realizations");
    auto* seed_opt = bench->add_option("--seed", bench_seed, "Override base seed");
    bench->add_flag("--oracle", ba.oracle, "Use the d-separation oracle instead of data");
    bench->add_flag("--include-runtime", ba.include_runtime, "Put runtime columns into the result tables");
    bench->add_option("--output-csv", ba.output_csv, "Summary CSV path");
    bench->add_option("--output-json", ba.output_json, "Summary JSON path");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Run a property suite");
    ver->add_option("--suite", va.suite, "oracle-consistency | lagged-ancestry | order-independence | effect-size | calibration")
        ->required();
    ver->add_option("--n-instances", va.n_instances, "Instances (default per suite)");
    ver->add_option("--seed", va.seed, "Random seed");
    ver->add_option("--jobs", va.jobs, "Parallel jobs (default: PCMCI_JOBS or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (disc->parsed()) return cmd_discover(da, out, err);
        if (sim->parsed()) return cmd_simulate(sa, out, err);
        if (bench->parsed()) {
            if (seed_opt->count() > 0) ba.seed = bench_seed;
            return cmd_benchmark(ba, out, err);
        }
        if (ver->parsed()) return cmd_verify(va, out, err);
    } catch (const InsufficientData& e) {
        err << "error: insufficient data: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const GenerationFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitGenerationFailure;
    }
    return kExitInputError;
}

}  // namespace pcmci
