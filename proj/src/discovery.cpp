#include "pcmci/discovery.hpp"

#include <cmath>

#include "pcmci/errors.hpp"

namespace pcmci {

void DiscoveryConfig::validate() const {
    if (tau_max < 1) throw InvalidInput("tau_max must be >= 1 (the lagged phase needs at least one lag)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
}

nlohmann::json DiscoveryConfig::to_json() const {
    return {{"method", method_name(method)}, {"rule", rule_name(rule)}, {"tau_max", tau_max}, {"alpha", alpha}};
}

DiscoveryResult discover(int n_vars, const DiscoveryConfig& cfg, CiTest& ci) {
    cfg.validate();
    if (ci.max_lag() < window_lag(cfg.method, cfg.tau_max)) {
        throw InvalidInput("CI test window is shorter than the method requires");
    }
    CachedCiTest cached(ci);
    DiscoveryResult res;
    const LaggedParentSets* lagged = nullptr;
    if (cfg.method != Method::PC) {
        res.lagged = lagged_phase(n_vars, cfg.tau_max, cfg.alpha, cached);
        lagged = &*res.lagged;
    }
    res.skeleton = contemp_phase(n_vars, cfg.tau_max, cfg.alpha, cached, cfg.method, lagged);
    ColliderResult col = collider_phase(res.skeleton, cfg.rule, cached, cfg.alpha, cfg.method, lagged);
    res.verdicts = std::move(col.verdicts);
    res.graph = rule_phase(std::move(col.graph));
    res.n_tests = cached.calls();
    res.n_evaluations = cached.evaluations();
    res.acyclic = res.graph.contemporaneous_acyclic();
    return res;
}

DiscoveryResult discover_parcorr(const Dataset& data, const DiscoveryConfig& cfg) {
    cfg.validate();
    ParCorrTest test(data, window_lag(cfg.method, cfg.tau_max));
    return discover(data.n_vars(), cfg, test);
}

DiscoveryResult discover_oracle(const LaggedDag& dag, const DiscoveryConfig& cfg) {
    cfg.validate();
    if (dag.max_lag() > cfg.tau_max) throw InvalidInput("tau_max is smaller than the largest model lag");
    OracleCiTest test(dag, window_lag(cfg.method, cfg.tau_max));
    return discover(dag.n_vars, cfg, test);
}

nlohmann::json link_table_to_json(const LinkTable& t) {
    nlohmann::json out = nlohmann::json::array();
    for (int i = 0; i < t.n_vars(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < t.n_vars(); ++j) {
            nlohmann::json cell = nlohmann::json::array();
            for (int tau = 0; tau <= t.tau_max(); ++tau) {
                const double v = (i == j && tau == 0) ? std::nan("") : t.get(i, j, tau);
                cell.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
            }
            row.push_back(cell);
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace pcmci
