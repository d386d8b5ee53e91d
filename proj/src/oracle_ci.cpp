#include <algorithm>
#include <deque>

#include "pcmci/citests.hpp"
#include "pcmci/errors.hpp"

namespace pcmci {

int LaggedDag::max_lag() const {
    int m = 0;
    for (const auto& ps : parents) {
        for (const VarLag& p : ps) m = std::max(m, p.lag);
    }
    return m;
}

int default_unroll_depth(const LaggedDag& dag) { return (dag.n_vars + 2) * std::max(1, dag.max_lag()); }

bool d_separated(const LaggedDag& dag, VarLag x, VarLag y, std::span<const VarLag> z, int depth) {
    const int n = dag.n_vars;
    auto check = [&](VarLag v) {
        if (v.var < 0 || v.var >= n || v.lag < 0) throw InvalidInput("node " + to_string(v) + " is not in the graph");
    };
    check(x);
    check(y);
    if (x == y) throw InvalidInput("d-separation endpoints must differ");
    int lo = std::min(x.lag, y.lag);
    int hi = std::max(x.lag, y.lag);
    for (const VarLag& v : z) {
        check(v);
        if (v == x || v == y) throw InvalidInput("conditioning set contains an endpoint");
        lo = std::min(lo, v.lag);
        hi = std::max(hi, v.lag);
    }
    // Stationarity lets the query be shifted so its latest node sits at lag 0.
    const int last = hi - lo + std::max(0, depth);
    const int n_nodes = n * (last + 1);
    auto id = [&](VarLag v) { return (v.lag - lo) * n + v.var; };

    std::vector<std::vector<VarLag>> children(n);
    for (int j = 0; j < n; ++j) {
        for (const VarLag& p : dag.parents[j]) children[p.var].push_back({j, p.lag});
    }

    std::vector<char> in_z(n_nodes, 0);
    std::vector<char> anc(n_nodes, 0);
    std::deque<int> queue;
    for (const VarLag& v : z) {
        in_z[id(v)] = 1;
        if (!anc[id(v)]) {
            anc[id(v)] = 1;
            queue.push_back(id(v));
        }
    }
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        const int var = cur % n;
        const int lag = cur / n;
        for (const VarLag& p : dag.parents[var]) {
            const int pl = lag + p.lag;
            if (pl > last) continue;
            const int pid = pl * n + p.var;
            if (!anc[pid]) {
                anc[pid] = 1;
                queue.push_back(pid);
            }
        }
    }

    // State 0: arrived from a child (moving up), 1: arrived from a parent (moving down).
    std::vector<char> seen(2 * static_cast<std::size_t>(n_nodes), 0);
    std::deque<std::pair<int, int>> frontier;
    const int target = id(y);
    frontier.emplace_back(id(x), 0);
    seen[2 * id(x)] = 1;
    auto push = [&](int node, int state) {
        if (!seen[2 * node + state]) {
            seen[2 * node + state] = 1;
            frontier.emplace_back(node, state);
        }
    };
    while (!frontier.empty()) {
        const auto [cur, state] = frontier.front();
        frontier.pop_front();
        if (cur == target) return false;
        const int var = cur % n;
        const int lag = cur / n;
        const bool conditioned = in_z[cur];
        const bool go_up = state == 0 ? !conditioned : static_cast<bool>(anc[cur]);
        const bool go_down = !conditioned;
        if (go_up) {
            for (const VarLag& p : dag.parents[var]) {
                const int pl = lag + p.lag;
                if (pl <= last) push(pl * n + p.var, 0);
            }
        }
        if (go_down) {
            for (const VarLag& c : children[var]) {
                const int cl = lag - c.lag;
                if (cl >= 0) push(cl * n + c.var, 1);
            }
        }
    }
    return true;
}

OracleCiTest::OracleCiTest(LaggedDag dag, int max_query_lag, int depth)
    : dag_(std::move(dag)), max_query_lag_(max_query_lag), depth_(depth < 0 ? default_unroll_depth(dag_) : depth) {
    if (static_cast<int>(dag_.parents.size()) != dag_.n_vars) throw InvalidInput("parent lists do not match n_vars");
}

CiOutcome OracleCiTest::run(VarLag x, VarLag y, std::span<const VarLag> z) {
    if (d_separated(dag_, x, y, z, depth_)) return {0.0, 1.0};
    return {1.0, 0.0};
}

}  // namespace pcmci
