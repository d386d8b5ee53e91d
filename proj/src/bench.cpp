#include "pcmci/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "pcmci/errors.hpp"
#include "pcmci/parallel.hpp"

namespace pcmci {

void BenchConfig::validate() const {
    if (autocorr.empty() || n_vars.empty() || t_len.empty() || tau_max.empty() || alpha.empty() || methods.empty()) {
        throw InvalidInput("every sweep axis needs at least one value");
    }
    if (n_realizations < 1) throw InvalidInput("n_realizations must be >= 1");
    if (max_retries < 1) throw InvalidInput("max_retries must be >= 1");
    for (double a : autocorr) {
        if (!(a >= 0.0 && a < 1.0)) throw InvalidInput("autocorrelation must lie in [0, 1)");
    }
    for (int n : n_vars) {
        if (n < 1) throw InvalidInput("n_vars must be positive");
    }
    for (int t : tau_max) {
        if (t < 1) throw InvalidInput("tau_max must be >= 1");
    }
    for (double a : alpha) {
        if (!(a > 0.0 && a < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
    }
    for (int t : t_len) {
        if (t < 1) throw InvalidInput("T must be positive");
    }
}

nlohmann::json BenchConfig::to_json() const {
    std::vector<std::string> ms;
    for (Method m : methods) ms.push_back(method_name(m));
    return {{"autocorr", autocorr},
            {"n_vars", n_vars},
            {"t_len", t_len},
            {"tau_max", tau_max},
            {"alpha", alpha},
            {"methods", ms},
            {"rule", rule_name(rule)},
            {"setup", setup_name(setup)},
            {"scoring", scoring_name(scoring)},
            {"n_realizations", n_realizations},
            {"base_seed", base_seed},
            {"burn_in", burn_in},
            {"max_retries", max_retries},
            {"oracle", oracle}};
}

BenchConfig BenchConfig::from_json(const nlohmann::json& j) {
    BenchConfig c;
    try {
        if (j.contains("autocorr")) c.autocorr = j["autocorr"].get<std::vector<double>>();
        if (j.contains("n_vars")) c.n_vars = j["n_vars"].get<std::vector<int>>();
        if (j.contains("t_len")) c.t_len = j["t_len"].get<std::vector<int>>();
        if (j.contains("tau_max")) c.tau_max = j["tau_max"].get<std::vector<int>>();
        if (j.contains("alpha")) c.alpha = j["alpha"].get<std::vector<double>>();
        if (j.contains("methods")) {
            c.methods.clear();
            for (const auto& m : j["methods"]) c.methods.push_back(method_from_string(m.get<std::string>()));
        }
        if (j.contains("rule")) c.rule = rule_from_string(j["rule"].get<std::string>());
        if (j.contains("setup")) c.setup = setup_from_string(j["setup"].get<std::string>());
        if (j.contains("scoring")) c.scoring = scoring_from_string(j["scoring"].get<std::string>());
        if (j.contains("n_realizations")) c.n_realizations = j["n_realizations"].get<int>();
        if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
        if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
        if (j.contains("burn_in")) c.burn_in = j["burn_in"].get<int>();
        if (j.contains("max_retries")) c.max_retries = j["max_retries"].get<int>();
        if (j.contains("oracle")) c.oracle = j["oracle"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed benchmark config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json CellPoint::to_json() const {
    return {{"autocorr", autocorr}, {"n_vars", n_vars}, {"t_len", t_len}, {"tau_max", tau_max}, {"alpha", alpha}};
}

std::vector<CellPoint> sweep_cells(const BenchConfig& cfg) {
    std::vector<CellPoint> cells;
    for (double a : cfg.autocorr) {
        for (int n : cfg.n_vars) {
            for (int t : cfg.t_len) {
                for (int tau : cfg.tau_max) {
                    for (double al : cfg.alpha) cells.push_back({a, n, t, tau, al});
                }
            }
        }
    }
    return cells;
}

std::uint64_t realization_seed(std::uint64_t base_seed, std::size_t cell_index, int realization) {
    return base_seed ^ splitmix64(splitmix64(cell_index) ^ static_cast<std::uint64_t>(realization));
}

std::optional<Realization> draw_realization(const BenchConfig& cfg, const CellPoint& cell, std::uint64_t seed) {
    GenConfig gen;
    gen.n_vars = cell.n_vars;
    gen.autocorr = cell.autocorr;
    gen.max_lag = std::min(5, cell.tau_max);
    gen.setup = cfg.setup;
    for (int k = 0; k < cfg.max_retries; ++k) {
        Rng rng(seed ^ static_cast<std::uint64_t>(k));
        Realization r;
        r.seed = seed;
        r.retries = k;
        r.model = draw_model(gen, rng);
        if (cfg.oracle) {
            if (!is_stationary(r.model)) continue;
            return r;
        }
        r.data = simulate(r.model, cell.t_len, cfg.burn_in, rng);
        if (r.data) return r;
    }
    return std::nullopt;
}

JobResult run_cell(const BenchConfig& cfg, const CellPoint& cell, std::size_t cell_index, Method method,
                   int realization) {
    JobResult out;
    out.cell_index = cell_index;
    out.method = method;
    out.realization = realization;
    out.seed = realization_seed(cfg.base_seed, cell_index, realization);
    const auto real = draw_realization(cfg, cell, out.seed);
    if (!real) {
        out.error = "retry budget exhausted";
        out.retries = cfg.max_retries;
        return out;
    }
    out.retries = real->retries;
    const DiscoveryConfig dc{method, cfg.rule, cell.tau_max, cell.alpha};
    try {
        const auto start = std::chrono::steady_clock::now();
        DiscoveryResult res =
            cfg.oracle ? discover_oracle(to_lagged_dag(real->model), dc) : discover_parcorr(*real->data, dc);
        const auto stop = std::chrono::steady_clock::now();
        MetricsReport rep = evaluate(res.graph, true_graph(real->model, cell.tau_max), cfg.scoring);
        rep.runtime_seconds = std::chrono::duration<double>(stop - start).count();
        out.report = rep;
        out.graph = std::move(res.graph);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

SweepResult run_sweep(const BenchConfig& cfg) {
    cfg.validate();
    const std::vector<CellPoint> cells = sweep_cells(cfg);
    struct Spec {
        std::size_t cell;
        Method method;
        int realization;
    };
    std::vector<Spec> specs;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (Method m : cfg.methods) {
            for (int r = 0; r < cfg.n_realizations; ++r) specs.push_back({c, m, r});
        }
    }
    SweepResult res;
    res.jobs.resize(specs.size());
    parallel_for(specs.size(), cfg.jobs, [&](std::size_t k) {
        const Spec& s = specs[k];
        res.jobs[k] = run_cell(cfg, cells[s.cell], s.cell, s.method, s.realization);
    });

    std::size_t k = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (Method m : cfg.methods) {
            SweepRow row;
            row.cell = cells[c];
            row.method = m;
            std::vector<MetricsReport> reports;
            for (int r = 0; r < cfg.n_realizations; ++r, ++k) {
                const JobResult& j = res.jobs[k];
                if (j.report) {
                    reports.push_back(*j.report);
                } else {
                    ++row.n_failed;
                }
            }
            row.n_ok = static_cast<int>(reports.size());
            if (!reports.empty()) {
                row.summary = aggregate(reports);
                std::vector<double> rt;
                for (const auto& rep : reports) rt.push_back(rep.runtime_seconds);
                std::sort(rt.begin(), rt.end());
                const std::size_t h = rt.size() / 2;
                row.median_runtime = rt.size() % 2 ? rt[h] : 0.5 * (rt[h - 1] + rt[h]);
            }
            res.rows.push_back(std::move(row));
        }
    }
    return res;
}

std::string sweep_to_csv(const SweepResult& r, bool include_runtime) {
    std::ostringstream out;
    out.precision(17);
    out << "autocorr,n_vars,t_len,tau_max,alpha,method,n_ok,n_failed";
    for (const std::string& f : metric_fields()) {
        if (f == "runtime_seconds" && !include_runtime) continue;
        out << ',' << f << "_mean," << f << "_stderr";
    }
    if (include_runtime) out << ",runtime_median";
    out << '\n';
    for (const SweepRow& row : r.rows) {
        out << row.cell.autocorr << ',' << row.cell.n_vars << ',' << row.cell.t_len << ',' << row.cell.tau_max << ','
            << row.cell.alpha << ',' << method_name(row.method) << ',' << row.n_ok << ',' << row.n_failed;
        for (const std::string& f : metric_fields()) {
            if (f == "runtime_seconds" && !include_runtime) continue;
            out << ',';
            auto it = row.summary.fields.find(f);
            if (it != row.summary.fields.end() && it->second.mean) out << *it->second.mean;
            out << ',';
            if (it != row.summary.fields.end() && it->second.std_error) out << *it->second.std_error;
        }
        if (include_runtime) out << ',' << row.median_runtime;
        out << '\n';
    }
    return out.str();
}

nlohmann::json sweep_to_json(const SweepResult& r, const BenchConfig& cfg, bool include_runtime) {
    nlohmann::json rows = nlohmann::json::array();
    for (const SweepRow& row : r.rows) {
        nlohmann::json fields = nlohmann::json::object();
        for (const auto& [name, fs] : row.summary.fields) {
            if (name == "runtime_seconds" && !include_runtime) continue;
            fields[name] = {{"mean", fs.mean ? nlohmann::json(*fs.mean) : nlohmann::json(nullptr)},
                            {"stderr", fs.std_error ? nlohmann::json(*fs.std_error) : nlohmann::json(nullptr)},
                            {"count", fs.count}};
        }
        nlohmann::json jr{{"cell", row.cell.to_json()},
                          {"method", method_name(row.method)},
                          {"n_ok", row.n_ok},
                          {"n_failed", row.n_failed},
                          {"metrics", fields}};
        if (include_runtime) jr["runtime_median"] = row.median_runtime;
        rows.push_back(jr);
    }
    nlohmann::json errors = nlohmann::json::array();
    for (const JobResult& j : r.jobs) {
        if (!j.error.empty()) {
            errors.push_back({{"cell", j.cell_index},
                              {"method", method_name(j.method)},
                              {"realization", j.realization},
                              {"error", j.error}});
        }
    }
    return {{"config", cfg.to_json()}, {"rows", rows}, {"errors", errors}};
}

}  // namespace pcmci
