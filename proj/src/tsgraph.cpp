#include "pcmci/tsgraph.hpp"

#include <algorithm>
#include <queue>

#include "pcmci/errors.hpp"

namespace pcmci {

std::string to_string(VarLag v) {
    return "(" + std::to_string(v.var) + ", -" + std::to_string(v.lag) + ")";
}

std::string_view mark_string(LinkMark m) {
    switch (m) {
        case LinkMark::Absent: return "";
        case LinkMark::DirectedToLater: return "-->";
        case LinkMark::DirectedToEarlier: return "<--";
        case LinkMark::Unoriented: return "o-o";
        case LinkMark::Conflict: return "x-x";
    }
    return "";
}

LinkMark mark_from_string(std::string_view s) {
    if (s.empty()) return LinkMark::Absent;
    if (s == "-->") return LinkMark::DirectedToLater;
    if (s == "<--") return LinkMark::DirectedToEarlier;
    if (s == "o-o") return LinkMark::Unoriented;
    if (s == "x-x") return LinkMark::Conflict;
    throw InvalidInput("unknown link mark '" + std::string(s) + "'");
}

LinkMark mirrored(LinkMark m) {
    if (m == LinkMark::DirectedToLater) return LinkMark::DirectedToEarlier;
    if (m == LinkMark::DirectedToEarlier) return LinkMark::DirectedToLater;
    return m;
}

Triple canonical_triple(const Triple& t) {
    if (t.left.lag == 0 && t.right.var < t.left.var) return Triple{t.right, t.middle, t.left};
    return t;
}

TimeSeriesGraph::TimeSeriesGraph(int n_vars, int tau_max) : n_vars_(n_vars), tau_max_(tau_max) {
    if (n_vars < 1) throw InvalidInput("n_vars must be >= 1");
    if (tau_max < 0) throw InvalidInput("tau_max must be >= 0");
    marks_.assign(static_cast<std::size_t>(n_vars) * n_vars * (tau_max + 1), LinkMark::Absent);
}

std::size_t TimeSeriesGraph::index(int i, int j, int tau) const {
    return (static_cast<std::size_t>(i) * n_vars_ + j) * (tau_max_ + 1) + tau;
}

void TimeSeriesGraph::check_slot(int i, int j, int tau) const {
    if (i < 0 || i >= n_vars_ || j < 0 || j >= n_vars_ || tau < 0 || tau > tau_max_) {
        throw InvalidInput("link slot (" + std::to_string(i) + ", " + std::to_string(j) + ", " +
                           std::to_string(tau) + ") out of range");
    }
}

LinkMark TimeSeriesGraph::mark(int i, int j, int tau) const {
    check_slot(i, j, tau);
    return marks_[index(i, j, tau)];
}

void TimeSeriesGraph::set_mark(int i, int j, int tau, LinkMark m) {
    check_slot(i, j, tau);
    if (tau > 0) {
        if (m != LinkMark::Absent && m != LinkMark::DirectedToLater) {
            throw InvalidInput("lagged links can only be absent or directed forward in time");
        }
        marks_[index(i, j, tau)] = m;
        return;
    }
    if (i == j) {
        if (m != LinkMark::Absent) throw InvalidInput("no self-links at lag 0");
        return;
    }
    marks_[index(i, j, 0)] = m;
    marks_[index(j, i, 0)] = mirrored(m);
}

bool TimeSeriesGraph::adjacent(VarLag a, VarLag b) const {
    if (a.lag < b.lag) std::swap(a, b);
    const int tau = a.lag - b.lag;
    if (tau > tau_max_) return false;
    if (tau == 0 && a.var == b.var) return false;
    return mark(a.var, b.var, tau) != LinkMark::Absent;
}

bool TimeSeriesGraph::directed(VarLag a, VarLag b) const {
    if (a.lag < b.lag) return false;
    const int tau = a.lag - b.lag;
    if (tau > tau_max_) return false;
    if (tau == 0 && a.var == b.var) return false;
    return mark(a.var, b.var, tau) == LinkMark::DirectedToLater;
}

std::vector<VarLag> TimeSeriesGraph::contemporaneous_adjacencies(int j) const {
    check_slot(0, j, 0);
    std::vector<VarLag> out;
    for (int i = 0; i < n_vars_; ++i) {
        if (i != j && marks_[index(i, j, 0)] != LinkMark::Absent) out.push_back({i, 0});
    }
    return out;
}

std::vector<VarLag> TimeSeriesGraph::lagged_adjacencies(int j) const {
    check_slot(0, j, 0);
    std::vector<VarLag> out;
    for (int i = 0; i < n_vars_; ++i) {
        for (int tau = 1; tau <= tau_max_; ++tau) {
            if (marks_[index(i, j, tau)] != LinkMark::Absent) out.push_back({i, tau});
        }
    }
    return out;
}

std::vector<VarLag> TimeSeriesGraph::full_adjacencies(int j) const {
    std::vector<VarLag> out = lagged_adjacencies(j);
    for (const VarLag& v : contemporaneous_adjacencies(j)) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

int TimeSeriesGraph::count_links() const {
    int count = 0;
    for (int i = 0; i < n_vars_; ++i) {
        for (int j = 0; j < n_vars_; ++j) {
            for (int tau = 0; tau <= tau_max_; ++tau) {
                if (tau == 0 && j <= i) continue;
                if (marks_[index(i, j, tau)] != LinkMark::Absent) ++count;
            }
        }
    }
    return count;
}

int TimeSeriesGraph::count_marks(LinkMark m) const {
    const bool directed_query = m == LinkMark::DirectedToLater || m == LinkMark::DirectedToEarlier;
    int count = 0;
    for (int i = 0; i < n_vars_; ++i) {
        for (int j = 0; j < n_vars_; ++j) {
            for (int tau = 1; tau <= tau_max_; ++tau) {
                if (marks_[index(i, j, tau)] == m) ++count;
            }
            if (j <= i) continue;
            const LinkMark here = marks_[index(i, j, 0)];
            const bool here_directed = here == LinkMark::DirectedToLater || here == LinkMark::DirectedToEarlier;
            if (directed_query ? here_directed : here == m) ++count;
        }
    }
    return count;
}

std::set<std::pair<int, int>> TimeSeriesGraph::conflicts() const {
    std::set<std::pair<int, int>> out;
    for (int i = 0; i < n_vars_; ++i) {
        for (int j = i + 1; j < n_vars_; ++j) {
            if (marks_[index(i, j, 0)] == LinkMark::Conflict) out.insert({i, j});
        }
    }
    return out;
}

void TimeSeriesGraph::add_ambiguous(const Triple& t) { ambiguous_.insert(canonical_triple(t)); }

bool TimeSeriesGraph::is_ambiguous(const Triple& t) const {
    return ambiguous_.count(canonical_triple(t)) > 0;
}

std::vector<TriplePattern> TimeSeriesGraph::enumerate_triples(TripleKind kind) const {
    std::vector<TriplePattern> out;
    const int n = n_vars_;
    auto contemp = [&](int a, int b) { return marks_[index(a, b, 0)]; };

    switch (kind) {
        case TripleKind::Collider:
            for (int k = 0; k < n; ++k) {
                for (int j = 0; j < n; ++j) {
                    if (j == k || contemp(k, j) != LinkMark::Unoriented) continue;
                    for (int i = 0; i < n; ++i) {
                        for (int tau = 1; tau <= tau_max_; ++tau) {
                            if (mark(i, k, tau) != LinkMark::DirectedToLater) continue;
                            if (adjacent({i, tau}, {j, 0})) continue;
                            out.push_back({Triple{{i, tau}, {k, 0}, {j, 0}}, std::nullopt});
                        }
                        if (i < j && i != k && contemp(i, k) == LinkMark::Unoriented && !adjacent({i, 0}, {j, 0})) {
                            out.push_back({Triple{{i, 0}, {k, 0}, {j, 0}}, std::nullopt});
                        }
                    }
                }
            }
            break;
        case TripleKind::R1:
            for (int k = 0; k < n; ++k) {
                for (int j = 0; j < n; ++j) {
                    if (j == k || contemp(k, j) != LinkMark::Unoriented) continue;
                    for (int i = 0; i < n; ++i) {
                        for (int tau = 0; tau <= tau_max_; ++tau) {
                            if (tau == 0 && (i == k || i == j)) continue;
                            if (mark(i, k, tau) != LinkMark::DirectedToLater) continue;
                            if (adjacent({i, tau}, {j, 0})) continue;
                            out.push_back({Triple{{i, tau}, {k, 0}, {j, 0}}, std::nullopt});
                        }
                    }
                }
            }
            break;
        case TripleKind::R2:
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (i == j || contemp(i, j) != LinkMark::Unoriented) continue;
                    for (int k = 0; k < n; ++k) {
                        if (k == i || k == j) continue;
                        if (contemp(i, k) == LinkMark::DirectedToLater && contemp(k, j) == LinkMark::DirectedToLater) {
                            out.push_back({Triple{{i, 0}, {k, 0}, {j, 0}}, std::nullopt});
                        }
                    }
                }
            }
            break;
        case TripleKind::R3:
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    if (i == j || contemp(i, j) != LinkMark::Unoriented) continue;
                    std::vector<int> mids;
                    for (int k = 0; k < n; ++k) {
                        if (k == i || k == j) continue;
                        if (contemp(i, k) == LinkMark::Unoriented && contemp(k, j) == LinkMark::DirectedToLater) {
                            mids.push_back(k);
                        }
                    }
                    for (std::size_t a = 0; a < mids.size(); ++a) {
                        for (std::size_t b = a + 1; b < mids.size(); ++b) {
                            if (contemp(mids[a], mids[b]) != LinkMark::Absent) continue;
                            out.push_back({Triple{{i, 0}, {mids[a], 0}, {j, 0}},
                                           Triple{{i, 0}, {mids[b], 0}, {j, 0}}});
                        }
                    }
                }
            }
            break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool TimeSeriesGraph::contemporaneous_acyclic() const {
    std::vector<int> indegree(n_vars_, 0);
    for (int i = 0; i < n_vars_; ++i) {
        for (int j = 0; j < n_vars_; ++j) {
            if (i != j && marks_[index(i, j, 0)] == LinkMark::DirectedToLater) ++indegree[j];
        }
    }
    std::queue<int> ready;
    for (int v = 0; v < n_vars_; ++v) {
        if (indegree[v] == 0) ready.push(v);
    }
    int visited = 0;
    while (!ready.empty()) {
        const int v = ready.front();
        ready.pop();
        ++visited;
        for (int j = 0; j < n_vars_; ++j) {
            if (j != v && marks_[index(v, j, 0)] == LinkMark::DirectedToLater && --indegree[j] == 0) ready.push(j);
        }
    }
    return visited == n_vars_;
}

TimeSeriesGraph new_full_graph(int n_vars, int tau_max,
                               const std::optional<std::vector<std::vector<VarLag>>>& lagged_adjacencies) {
    TimeSeriesGraph g(n_vars, tau_max);
    if (lagged_adjacencies) {
        if (static_cast<int>(lagged_adjacencies->size()) != n_vars) {
            throw InvalidInput("lagged adjacency list must have one entry per variable");
        }
        for (int j = 0; j < n_vars; ++j) {
            for (const VarLag& src : (*lagged_adjacencies)[j]) {
                if (src.lag < 1 || src.lag > tau_max || src.var < 0 || src.var >= n_vars) {
                    throw InvalidInput("lagged adjacency " + to_string(src) + " is outside lags 1.." +
                                       std::to_string(tau_max));
                }
                g.set_mark(src.var, j, src.lag, LinkMark::DirectedToLater);
            }
        }
    } else {
        for (int i = 0; i < n_vars; ++i) {
            for (int j = 0; j < n_vars; ++j) {
                for (int tau = 1; tau <= tau_max; ++tau) g.set_mark(i, j, tau, LinkMark::DirectedToLater);
            }
        }
    }
    for (int i = 0; i < n_vars; ++i) {
        for (int j = i + 1; j < n_vars; ++j) g.set_mark(i, j, 0, LinkMark::Unoriented);
    }
    return g;
}

TimeSeriesGraph relabel(const TimeSeriesGraph& g, const std::vector<int>& perm) {
    const int n = g.n_vars();
    if (static_cast<int>(perm.size()) != n) throw InvalidInput("permutation size mismatch");
    TimeSeriesGraph out(n, g.tau_max());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int tau = 0; tau <= g.tau_max(); ++tau) {
                if (tau == 0 && i == j) continue;
                out.set_mark(perm[i], perm[j], tau, g.mark(i, j, tau));
            }
        }
    }
    for (const Triple& t : g.ambiguous_triples()) {
        out.add_ambiguous(Triple{{perm[t.left.var], t.left.lag},
                                 {perm[t.middle.var], t.middle.lag},
                                 {perm[t.right.var], t.right.lag}});
    }
    return out;
}

bool same_skeleton(const TimeSeriesGraph& a, const TimeSeriesGraph& b) {
    if (a.n_vars() != b.n_vars() || a.tau_max() != b.tau_max()) return false;
    for (int i = 0; i < a.n_vars(); ++i) {
        for (int j = 0; j < a.n_vars(); ++j) {
            for (int tau = 0; tau <= a.tau_max(); ++tau) {
                const bool ea = a.mark(i, j, tau) != LinkMark::Absent;
                const bool eb = b.mark(i, j, tau) != LinkMark::Absent;
                if (ea != eb) return false;
            }
        }
    }
    return true;
}

nlohmann::json graph_to_json(const TimeSeriesGraph& g, const std::vector<std::string>& var_names) {
    nlohmann::json j;
    j["n_vars"] = g.n_vars();
    j["tau_max"] = g.tau_max();
    j["var_names"] = var_names;
    nlohmann::json marks = nlohmann::json::array();
    for (int i = 0; i < g.n_vars(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < g.n_vars(); ++k) {
            nlohmann::json lags = nlohmann::json::array();
            for (int tau = 0; tau <= g.tau_max(); ++tau) lags.push_back(std::string(mark_string(g.mark(i, k, tau))));
            row.push_back(std::move(lags));
        }
        marks.push_back(std::move(row));
    }
    j["graph"] = std::move(marks);
    nlohmann::json triples = nlohmann::json::array();
    for (const Triple& t : g.ambiguous_triples()) {
        triples.push_back({{t.left.var, t.left.lag}, {t.middle.var, t.middle.lag}, {t.right.var, t.right.lag}});
    }
    j["ambiguous_triples"] = std::move(triples);
    return j;
}

TimeSeriesGraph graph_from_json(const nlohmann::json& j) {
    const int n = j.at("n_vars").get<int>();
    const int tau_max = j.at("tau_max").get<int>();
    TimeSeriesGraph g(n, tau_max);
    const auto& marks = j.at("graph");
    if (static_cast<int>(marks.size()) != n) throw InvalidInput("graph array has wrong first dimension");
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            for (int tau = 0; tau <= tau_max; ++tau) {
                const LinkMark m = mark_from_string(marks.at(i).at(k).at(tau).get<std::string>());
                if (tau == 0) {
                    if (i == k && m != LinkMark::Absent) throw InvalidInput("self-link at lag 0");
                    if (i != k && g.mark(i, k, 0) != LinkMark::Absent && g.mark(i, k, 0) != m) {
                        throw InvalidInput("contemporaneous marks are not mirrored");
                    }
                    if (i < k) g.set_mark(i, k, 0, m);
                } else {
                    g.set_mark(i, k, tau, m);
                }
            }
        }
    }
    // second pass checks the mirror half read above
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) {
            if (mark_from_string(marks.at(i).at(k).at(0).get<std::string>()) != g.mark(i, k, 0)) {
                throw InvalidInput("contemporaneous marks are not mirrored");
            }
        }
    }
    if (j.contains("ambiguous_triples")) {
        for (const auto& t : j.at("ambiguous_triples")) {
            g.add_ambiguous(Triple{{t.at(0).at(0).get<int>(), t.at(0).at(1).get<int>()},
                                   {t.at(1).at(0).get<int>(), t.at(1).at(1).get<int>()},
                                   {t.at(2).at(0).get<int>(), t.at(2).at(1).get<int>()}});
        }
    }
    return g;
}

}  // namespace pcmci
