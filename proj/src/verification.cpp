#include "pcmci/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "pcmci/discovery.hpp"
#include "pcmci/errors.hpp"
#include "pcmci/parallel.hpp"
#include "pcmci/reference_cpdag.hpp"

namespace pcmci {

namespace {

std::vector<std::vector<VarLag>> lagged_parents(const ScmModel& model, int tau_max) {
    std::vector<std::vector<VarLag>> out(model.n_vars);
    for (int j = 0; j < model.n_vars; ++j) {
        if (model.autocoeffs[j] != 0.0 && tau_max >= 1) out[j].push_back({j, 1});
    }
    for (const ScmLink& l : model.links) {
        if (l.lag >= 1 && l.lag <= tau_max) out[l.target].push_back({l.source, l.lag});
    }
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
}

std::vector<VarLag> sorted_copy(std::vector<VarLag> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<int> inverse(const std::vector<int>& perm) {
    std::vector<int> inv(perm.size());
    for (std::size_t v = 0; v < perm.size(); ++v) inv[perm[v]] = static_cast<int>(v);
    return inv;
}

Rng instance_rng(std::uint64_t seed, std::uint64_t suite_tag, std::size_t k) {
    return Rng(splitmix64(seed ^ splitmix64(suite_tag * 0x100000001b3ull + k)));
}

struct InstanceOutcome {
    int checked = 0;
    int failed = 0;
    std::optional<nlohmann::json> counterexample;
};

SuiteResult reduce(const std::string& name, int n_instances, const std::vector<InstanceOutcome>& outs) {
    SuiteResult r;
    r.suite = name;
    r.n_instances = n_instances;
    for (const auto& o : outs) {
        r.n_checked += o.checked;
        r.n_failed += o.failed;
        if (o.counterexample && !r.counterexample) r.counterexample = o.counterexample;
    }
    return r;
}

nlohmann::json instance_json(const ScmModel& model, int tau_max) {
    return {{"model", model_to_json(model)}, {"tau_max", tau_max}};
}

}  // namespace

std::vector<std::vector<VarLag>> ancestral_lagged_parents(const ScmModel& model, int tau_max) {
    const int n = model.n_vars;
    const auto parents = lagged_parents(model, tau_max);
    std::vector<std::vector<int>> contemp_parents(n);
    for (const ScmLink& l : model.links) {
        if (l.lag == 0) contemp_parents[l.target].push_back(l.source);
    }
    std::vector<std::vector<VarLag>> out(n);
    for (int j = 0; j < n; ++j) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{j};
        seen[j] = 1;
        std::set<VarLag> acc;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            acc.insert(parents[v].begin(), parents[v].end());
            for (int p : contemp_parents[v]) {
                if (!seen[p]) {
                    seen[p] = 1;
                    stack.push_back(p);
                }
            }
        }
        out[j].assign(acc.begin(), acc.end());
    }
    return out;
}

OracleInstance draw_oracle_instance(Rng& rng) {
    std::uniform_int_distribution<int> n_dist(3, 5);
    std::uniform_int_distribution<int> tau_dist(1, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    OracleInstance inst;
    GenConfig cfg;
    cfg.n_vars = n_dist(rng);
    inst.tau_max = tau_dist(rng);
    cfg.max_lag = inst.tau_max;
    cfg.autocorr = 0.5;
    const double fracs[] = {0.3, 0.5, 0.7};
    cfg.frac_contemporaneous = fracs[std::uniform_int_distribution<int>(0, 2)(rng)];
    int links = std::uniform_int_distribution<int>(cfg.n_vars - 1, 2 * cfg.n_vars)(rng);
    while (true) {
        cfg.n_cross_links = links;
        try {
            cfg.validate();
            break;
        } catch (const InvalidInput&) {
            --links;
        }
    }
    inst.model = draw_model(cfg, rng);
    for (double& a : inst.model.autocoeffs) {
        if (unit(rng) < 0.3) a = 0.0;
    }
    return inst;
}

ScmModel permute_model(const ScmModel& model, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != model.n_vars) throw InvalidInput("permutation size mismatch");
    ScmModel out = model;
    for (int v = 0; v < model.n_vars; ++v) {
        out.autocoeffs[perm[v]] = model.autocoeffs[v];
        out.noise[perm[v]] = model.noise[v];
    }
    for (ScmLink& l : out.links) {
        l.source = perm[l.source];
        l.target = perm[l.target];
    }
    return out;
}

bool same_marks(const TimeSeriesGraph& a, const TimeSeriesGraph& b) {
    if (a.n_vars() != b.n_vars() || a.tau_max() != b.tau_max()) return false;
    for (int i = 0; i < a.n_vars(); ++i) {
        for (int j = 0; j < a.n_vars(); ++j) {
            for (int tau = 0; tau <= a.tau_max(); ++tau) {
                if (a.mark(i, j, tau) != b.mark(i, j, tau)) return false;
            }
        }
    }
    return true;
}

KsResult ks_uniform(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("KS test needs at least one value");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double u = std::clamp(values[k], 0.0, 1.0);
        d = std::max({d, (k + 1) / n - u, u - k / n});
    }
    // Asymptotic Kolmogorov distribution with the Stephens small-sample correction.
    const double sn = std::sqrt(n);
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double p = 1.0;
    if (lambda >= 0.2) {
        double sum = 0.0;
        for (int k = 1; k <= 200; ++k) {
            const double term = std::exp(-2.0 * k * k * lambda * lambda);
            sum += (k % 2 == 1 ? term : -term);
            if (term < 1e-300) break;
        }
        p = std::clamp(2.0 * sum, 0.0, 1.0);
    }
    return {d, p};
}

nlohmann::json SuiteResult::to_json() const {
    nlohmann::json j{{"suite", suite},
                     {"n_instances", n_instances},
                     {"n_checked", n_checked},
                     {"n_failed", n_failed},
                     {"passed", passed()},
                     {"detail", detail}};
    if (counterexample) j["counterexample"] = *counterexample;
    return j;
}

SuiteResult verify_oracle_consistency(int n_instances, std::uint64_t seed, int jobs) {
    std::vector<InstanceOutcome> outs(n_instances);
    parallel_for(outs.size(), jobs, [&](std::size_t k) {
        Rng rng = instance_rng(seed, 1, k);
        const OracleInstance inst = draw_oracle_instance(rng);
        const TimeSeriesGraph truth = true_graph(inst.model, inst.tau_max);
        const TimeSeriesGraph expected = reference_cpdag(truth);
        DiscoveryConfig cfg{Method::PCMCIplus, ColliderRule::Conservative, inst.tau_max, 0.01};
        const DiscoveryResult res = discover_oracle(to_lagged_dag(inst.model), cfg);
        InstanceOutcome& o = outs[k];
        o.checked = 1;
        const bool skeleton_ok = same_skeleton(res.graph, truth);
        const bool cpdag_ok = same_marks(res.graph, expected) && res.graph.ambiguous_triples().empty();
        if (!skeleton_ok || !cpdag_ok) {
            o.failed = 1;
            nlohmann::json ce = instance_json(inst.model, inst.tau_max);
            ce["skeleton_ok"] = skeleton_ok;
            ce["estimated"] = graph_to_json(res.graph, default_var_names(truth.n_vars()));
            ce["expected"] = graph_to_json(expected, default_var_names(truth.n_vars()));
            o.counterexample = ce;
        }
    });
    SuiteResult r = reduce("oracle-consistency", n_instances, outs);
    r.detail = "PCMCI+ with oracle CI and conservative rule: skeleton equals truth and graph equals reference CPDAG";
    return r;
}

SuiteResult verify_lagged_ancestry(int n_instances, std::uint64_t seed, int jobs) {
    std::vector<InstanceOutcome> outs(n_instances);
    parallel_for(outs.size(), jobs, [&](std::size_t k) {
        Rng rng = instance_rng(seed, 1, k);
        const OracleInstance inst = draw_oracle_instance(rng);
        const LaggedDag dag = to_lagged_dag(inst.model);
        OracleCiTest ci(dag, window_lag(Method::PCMCIplus, inst.tau_max));
        const LaggedParentSets lagged = lagged_phase(inst.model.n_vars, inst.tau_max, 0.01, ci);
        const auto expected = ancestral_lagged_parents(inst.model, inst.tau_max);
        InstanceOutcome& o = outs[k];
        o.checked = 1;
        for (int j = 0; j < inst.model.n_vars; ++j) {
            if (sorted_copy(lagged.parents[j]) != expected[j]) {
                o.failed = 1;
                nlohmann::json ce = instance_json(inst.model, inst.tau_max);
                ce["variable"] = j;
                o.counterexample = ce;
                break;
            }
        }
    });
    SuiteResult r = reduce("lagged-ancestry", n_instances, outs);
    r.detail = "lagged phase with oracle CI equals lagged parents of each variable and its contemporaneous ancestors";
    return r;
}

SuiteResult verify_order_independence(int n_instances, std::uint64_t seed, int n_permutations, int jobs) {
    const Method methods[] = {Method::PC, Method::PCMCIplus0, Method::PCMCIplus};
    const ColliderRule rules[] = {ColliderRule::None, ColliderRule::Conservative, ColliderRule::Majority};
    std::vector<InstanceOutcome> outs(n_instances);
    parallel_for(outs.size(), jobs, [&](std::size_t k) {
        Rng rng = instance_rng(seed, 1, k);
        const OracleInstance inst = draw_oracle_instance(rng);
        Rng perm_rng = instance_rng(seed, 2, k);
        std::vector<std::vector<int>> perms;
        for (int p = 0; p < n_permutations; ++p) {
            std::vector<int> perm(inst.model.n_vars);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), perm_rng);
            perms.push_back(perm);
        }
        InstanceOutcome& o = outs[k];
        const LaggedDag dag = to_lagged_dag(inst.model);
        for (Method m : methods) {
            for (ColliderRule rule : rules) {
                const DiscoveryConfig cfg{m, rule, inst.tau_max, 0.01};
                const TimeSeriesGraph base = discover_oracle(dag, cfg).graph;
                for (const auto& perm : perms) {
                    ++o.checked;
                    const DiscoveryResult res = discover_oracle(to_lagged_dag(permute_model(inst.model, perm)), cfg);
                    if (relabel(res.graph, inverse(perm)) == base) continue;
                    ++o.failed;
                    if (!o.counterexample) {
                        nlohmann::json ce = instance_json(inst.model, inst.tau_max);
                        ce["method"] = method_name(m);
                        ce["rule"] = rule_name(rule);
                        ce["permutation"] = perm;
                        o.counterexample = ce;
                    }
                }
            }
        }
    });
    SuiteResult r = reduce("order-independence", n_instances, outs);
    r.detail = "oracle CI, every method and collider rule, " + std::to_string(n_permutations) + " permutations per instance";
    return r;
}

SuiteResult verify_effect_size(int n_instances, std::uint64_t seed, int jobs) {
    std::vector<InstanceOutcome> outs(n_instances);
    parallel_for(outs.size(), jobs, [&](std::size_t k) {
        Rng rng = instance_rng(seed, 3, k);
        std::uniform_int_distribution<int> n_dist(3, 8);
        const double autos[] = {0.5, 0.8, 0.95};
        GenConfig cfg;
        cfg.n_vars = n_dist(rng);
        cfg.autocorr = autos[std::uniform_int_distribution<int>(0, 2)(rng)];
        ScmModel model;
        for (int attempt = 0;; ++attempt) {
            model = draw_model(cfg, rng);
            if (is_stationary(model)) break;
            if (attempt > 1000) throw InvalidInput("no stationary model drawn");
        }
        const int tau_max = std::max(1, model.max_lag());
        const auto parents = lagged_parents(model, tau_max);
        const auto b = ancestral_lagged_parents(model, tau_max);
        const LaggedCovariance cov = analytic_covariance(model, tau_max);
        InstanceOutcome& o = outs[k];
        for (const ScmLink& l : model.links) {
            if (l.lag != 0) continue;
            const int i = l.source;
            const int j = l.target;
            auto missing_from = [](const std::vector<VarLag>& xs, const std::vector<VarLag>& ys) {
                return std::any_of(xs.begin(), xs.end(),
                                   [&](const VarLag& v) { return !std::binary_search(ys.begin(), ys.end(), v); });
            };
            if (!missing_from(parents[i], parents[j]) || !missing_from(parents[j], b[i])) continue;
            std::set<VarLag> both(b[i].begin(), b[i].end());
            both.insert(b[j].begin(), b[j].end());
            const VarLag xi{i, 0};
            const VarLag xj{j, 0};
            const double full = std::abs(population_partial_correlation(cov, xi, xj, {both.begin(), both.end()}));
            const double only_j = std::abs(population_partial_correlation(cov, xi, xj, b[j]));
            const double only_i = std::abs(population_partial_correlation(cov, xi, xj, b[i]));
            ++o.checked;
            if (!(full > std::min(only_i, only_j) + 1e-12)) {
                ++o.failed;
                if (!o.counterexample) {
                    nlohmann::json ce = instance_json(model, tau_max);
                    ce["link"] = {i, j};
                    ce["rho_both"] = full;
                    ce["rho_j"] = only_j;
                    ce["rho_i"] = only_i;
                    o.counterexample = ce;
                }
            }
        }
    });
    SuiteResult r = reduce("effect-size", n_instances, outs);
    r.detail = "population |rho(i;j|B_j,B_i)| > min(|rho(i;j|B_j)|, |rho(i;j|B_i)|) + 1e-12";
    return r;
}

SuiteResult verify_calibration(int n_instances, std::uint64_t seed, int t_len, int jobs) {
    std::vector<double> pvals(n_instances);
    parallel_for(pvals.size(), jobs, [&](std::size_t k) {
        Rng rng = instance_rng(seed, 4, k);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::MatrixXd x(t_len, 3);
        for (int t = 0; t < t_len; ++t) {
            for (int c = 0; c < 3; ++c) x(t, c) = gauss(rng);
        }
        ParCorrTest test(Dataset(x, default_var_names(3)), 0);
        const VarLag z[] = {{2, 0}};
        pvals[k] = test.run({0, 0}, {1, 0}, z).p_value;
    });
    const KsResult ks = ks_uniform(pvals);
    const double rejections =
        static_cast<double>(std::count_if(pvals.begin(), pvals.end(), [](double p) { return p <= 0.05; })) /
        n_instances;
    SuiteResult r;
    r.suite = "calibration";
    r.n_instances = n_instances;
    r.n_checked = 2;
    r.n_failed = (ks.p_value < 0.01 ? 1 : 0) + (rejections < 0.03 || rejections > 0.07 ? 1 : 0);
    r.detail = "KS D=" + std::to_string(ks.statistic) + " p=" + std::to_string(ks.p_value) +
               ", rejection rate at 0.05 = " + std::to_string(rejections);
    return r;
}

SuiteResult run_suite(const std::string& name, int n_instances, std::uint64_t seed, int jobs) {
    if (n_instances < 1) throw InvalidInput("n_instances must be positive");
    if (name == "oracle-consistency") return verify_oracle_consistency(n_instances, seed, jobs);
    if (name == "lagged-ancestry") return verify_lagged_ancestry(n_instances, seed, jobs);
    if (name == "order-independence") return verify_order_independence(n_instances, seed, 5, jobs);
    if (name == "effect-size") return verify_effect_size(n_instances, seed, jobs);
    if (name == "calibration") return verify_calibration(n_instances, seed, 200, jobs);
    throw InvalidInput("unknown suite '" + name + "'");
}

}  // namespace pcmci
