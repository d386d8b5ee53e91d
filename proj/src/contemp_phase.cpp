#include <algorithm>
#include <cmath>

#include "pcmci/errors.hpp"
#include "pcmci/skeleton.hpp"

namespace pcmci {

std::vector<VarLag> build_conditions(Method method, VarLag x, int j, std::span<const VarLag> s,
                                     const LaggedParentSets* lagged, int max_lag) {
    const VarLag y{j, 0};
    std::vector<VarLag> z(s.begin(), s.end());
    if (method != Method::PC) {
        if (lagged == nullptr) throw InvalidInput("lagged parent sets required for this method");
        for (const VarLag& v : lagged->parents[j]) z.push_back(v);
        if (method == Method::PCMCIplus) {
            for (const VarLag& v : lagged->parents[x.var]) z.push_back(shifted(v, x.lag));
        }
    }
    std::erase_if(z, [&](const VarLag& v) { return v == x || v == y || v.lag > max_lag; });
    std::sort(z.begin(), z.end());
    z.erase(std::unique(z.begin(), z.end()), z.end());
    return z;
}

std::vector<VarLag> adjacency_pool(const TimeSeriesGraph& g, int j, Method method, const LinkTable& i_min) {
    std::vector<VarLag> pool = method == Method::PC ? g.full_adjacencies(j) : g.contemporaneous_adjacencies(j);
    std::sort(pool.begin(), pool.end(), [&](const VarLag& u, const VarLag& v) {
        const double iu = i_min.get(u.var, j, u.lag);
        const double iv = i_min.get(v.var, j, v.lag);
        if (iu != iv) return iu > iv;
        return u < v;
    });
    return pool;
}

std::vector<std::vector<VarLag>> subsets_of_size(const std::vector<VarLag>& items, int p) {
    std::vector<std::vector<VarLag>> out;
    const int n = static_cast<int>(items.size());
    if (p < 0 || p > n) return out;
    std::vector<int> idx(p);
    for (int k = 0; k < p; ++k) idx[k] = k;
    while (true) {
        std::vector<VarLag> s;
        for (int k : idx) s.push_back(items[k]);
        out.push_back(std::move(s));
        int k = p - 1;
        while (k >= 0 && idx[k] == n - p + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int m = k + 1; m < p; ++m) idx[m] = idx[m - 1] + 1;
    }
    return out;
}

SkeletonResult contemp_phase(int n_vars, int tau_max, double alpha, CiTest& ci, Method method,
                             const LaggedParentSets* lagged) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
    if (method != Method::PC) {
        if (lagged == nullptr) throw InvalidInput("PCMCI+ variants require lagged parent sets");
        if (lagged->n_vars != n_vars || lagged->tau_max != tau_max) {
            throw InvalidInput("lagged parent sets do not match the graph dimensions");
        }
    }

    SkeletonResult res;
    res.graph = method == Method::PC ? new_full_graph(n_vars, tau_max)
                                     : new_full_graph(n_vars, tau_max, lagged->parents);
    if (method != Method::PC) res.sepsets = lagged->sepsets;
    res.i_min = LinkTable(n_vars, tau_max, std::numeric_limits<double>::infinity());
    LinkTable p_max(n_vars, tau_max);
    LinkTable val(n_vars, tau_max);
    const int max_lag = window_lag(method, tau_max);

    for (int p = 0;; ++p) {
        std::vector<std::vector<VarLag>> pools(n_vars);
        std::vector<std::vector<VarLag>> pairs(n_vars);
        for (int j = 0; j < n_vars; ++j) {
            pools[j] = adjacency_pool(res.graph, j, method, res.i_min);
            pairs[j] = adjacency_pool(res.graph, j, Method::PC, res.i_min);
        }
        bool any = false;
        for (int j = 0; j < n_vars; ++j) {
            const VarLag y{j, 0};
            for (const VarLag& x : pairs[j]) {
                if (!res.graph.adjacent(x, y)) continue;
                std::vector<VarLag> candidates;
                for (const VarLag& v : pools[j]) {
                    if (v != x) candidates.push_back(v);
                }
                if (static_cast<int>(candidates.size()) < p) continue;
                any = true;
                for (const auto& s : subsets_of_size(candidates, p)) {
                    const std::vector<VarLag> z = build_conditions(method, x, j, s, lagged, max_lag);
                    const CiOutcome out = ci.run(x, y, z);
                    ++res.n_tests;
                    const double cur = res.i_min.get(x.var, j, x.lag);
                    res.i_min.set(x.var, j, x.lag, std::min(std::abs(out.statistic), cur));
                    const double prev = p_max.get(x.var, j, x.lag);
                    if (std::isnan(prev) || out.p_value > prev) {
                        p_max.set(x.var, j, x.lag, out.p_value);
                        val.set(x.var, j, x.lag, out.statistic);
                    }
                    if (out.p_value > alpha) {
                        res.graph.set_mark(x.var, j, x.lag, LinkMark::Absent);
                        res.sepsets.store(x, y, s);
                        break;
                    }
                }
            }
        }
        if (!any) break;
    }

    res.p_max = p_max;
    res.val_at_pmax = val;
    if (method != Method::PC) {
        for (int i = 0; i < n_vars; ++i) {
            for (int j = 0; j < n_vars; ++j) {
                for (int tau = 1; tau <= tau_max; ++tau) {
                    if (!std::isnan(res.p_max.get(i, j, tau))) continue;
                    res.p_max.set(i, j, tau, lagged->p_max.get(i, j, tau));
                    res.val_at_pmax.set(i, j, tau, lagged->val_at_pmax.get(i, j, tau));
                }
            }
        }
    }
    return res;
}

}  // namespace pcmci
