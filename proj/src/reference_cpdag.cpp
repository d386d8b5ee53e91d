#include "pcmci/reference_cpdag.hpp"

#include <algorithm>
#include <set>

#include "pcmci/errors.hpp"

namespace pcmci {

namespace {

void require_directed(const TimeSeriesGraph& g) {
    for (int i = 0; i < g.n_vars(); ++i) {
        for (int j = 0; j < g.n_vars(); ++j) {
            const LinkMark m = g.mark(i, j, 0);
            if (m == LinkMark::Unoriented || m == LinkMark::Conflict) {
                throw InvalidInput("true graph must be fully oriented");
            }
        }
    }
}

// Orients a - b as a -> b; returns true when an undirected edge changed.
bool orient(TimeSeriesGraph& g, int a, int b) {
    if (g.contemporaneous(a, b) != LinkMark::Unoriented) return false;
    g.set_mark(a, b, 0, LinkMark::DirectedToLater);
    return true;
}

bool undirected(const TimeSeriesGraph& g, int a, int b) { return g.contemporaneous(a, b) == LinkMark::Unoriented; }
bool arrow(const TimeSeriesGraph& g, int a, int b) { return g.contemporaneous(a, b) == LinkMark::DirectedToLater; }
bool adj0(const TimeSeriesGraph& g, int a, int b) { return a != b && g.contemporaneous(a, b) != LinkMark::Absent; }

bool meek_step(TimeSeriesGraph& g) {
    const int n = g.n_vars();
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            if (!undirected(g, k, j)) continue;
            // R1: a -> k - j, a and j non-adjacent (a may be lagged)
            for (int a = 0; a < n; ++a) {
                for (int tau = 0; tau <= g.tau_max(); ++tau) {
                    if (tau == 0 && (a == k || a == j)) continue;
                    if (!g.directed({a, tau}, {k, 0})) continue;
                    if (g.adjacent({a, tau}, {j, 0})) continue;
                    if (orient(g, k, j)) return true;
                }
            }
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (!undirected(g, a, b)) continue;
            for (int c = 0; c < n; ++c) {
                if (c == a || c == b) continue;
                // R2: a -> c -> b
                if (arrow(g, a, c) && arrow(g, c, b) && orient(g, a, b)) return true;
            }
            // R3: a - c -> b, a - d -> b, c and d non-adjacent
            for (int c = 0; c < n; ++c) {
                for (int d = c + 1; d < n; ++d) {
                    if (c == a || c == b || d == a || d == b) continue;
                    if (undirected(g, a, c) && arrow(g, c, b) && undirected(g, a, d) && arrow(g, d, b) &&
                        !adj0(g, c, d) && orient(g, a, b)) {
                        return true;
                    }
                }
            }
            // R4: a - c -> d -> b, c and b non-adjacent, a and d adjacent
            for (int c = 0; c < n; ++c) {
                for (int d = 0; d < n; ++d) {
                    if (c == d || c == a || c == b || d == a || d == b) continue;
                    if (undirected(g, a, c) && arrow(g, c, d) && arrow(g, d, b) && !adj0(g, c, b) && adj0(g, a, d) &&
                        orient(g, a, b)) {
                        return true;
                    }
                }
            }
        }
    }
    return false;
}

}  // namespace

std::vector<Triple> v_structures(const TimeSeriesGraph& g) {
    std::vector<Triple> out;
    const int n = g.n_vars();
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            if (j == k || !arrow(g, j, k)) continue;
            for (int a = 0; a < n; ++a) {
                for (int tau = 0; tau <= g.tau_max(); ++tau) {
                    const VarLag left{a, tau};
                    if (tau == 0 && (a == k || a == j || !arrow(g, a, k))) continue;
                    if (tau > 0 && g.mark(a, k, tau) == LinkMark::Absent) continue;
                    if (tau == 0 && a > j) continue;
                    if (g.adjacent(left, {j, 0})) continue;
                    out.push_back(canonical_triple(Triple{left, {k, 0}, {j, 0}}));
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TimeSeriesGraph reference_cpdag(const TimeSeriesGraph& truth) {
    require_directed(truth);
    TimeSeriesGraph g = truth;
    g.clear_ambiguous();
    const int n = g.n_vars();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (truth.contemporaneous(i, j) != LinkMark::Absent) g.set_mark(i, j, 0, LinkMark::Unoriented);
        }
    }
    for (const Triple& v : v_structures(truth)) {
        g.set_mark(v.right.var, v.middle.var, 0, LinkMark::DirectedToLater);
        if (v.left.lag == 0) g.set_mark(v.left.var, v.middle.var, 0, LinkMark::DirectedToLater);
    }
    while (meek_step(g)) {
    }
    return g;
}

std::vector<TimeSeriesGraph> markov_equivalence_class(const TimeSeriesGraph& truth) {
    require_directed(truth);
    const int n = truth.n_vars();
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (truth.contemporaneous(i, j) != LinkMark::Absent) edges.emplace_back(i, j);
        }
    }
    if (edges.size() > 20) throw InvalidInput("too many contemporaneous edges for exhaustive enumeration");
    const std::vector<Triple> target = v_structures(truth);
    std::vector<TimeSeriesGraph> out;
    const unsigned long total = 1ul << edges.size();
    for (unsigned long mask = 0; mask < total; ++mask) {
        TimeSeriesGraph g = truth;
        g.clear_ambiguous();
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto [i, j] = edges[e];
            g.set_mark(i, j, 0, (mask >> e) & 1ul ? LinkMark::DirectedToEarlier : LinkMark::DirectedToLater);
        }
        if (!g.contemporaneous_acyclic()) continue;
        if (v_structures(g) != target) continue;
        out.push_back(std::move(g));
    }
    return out;
}

TimeSeriesGraph cpdag_from_class(const std::vector<TimeSeriesGraph>& members) {
    if (members.empty()) throw InvalidInput("equivalence class is empty");
    TimeSeriesGraph g = members.front();
    const int n = g.n_vars();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const LinkMark m = g.contemporaneous(i, j);
            if (m == LinkMark::Absent) continue;
            for (const auto& other : members) {
                if (other.contemporaneous(i, j) != m) {
                    g.set_mark(i, j, 0, LinkMark::Unoriented);
                    break;
                }
            }
        }
    }
    return g;
}

}  // namespace pcmci
