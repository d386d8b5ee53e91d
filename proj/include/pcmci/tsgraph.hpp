#ifndef PCMCI_TSGRAPH_HPP
#define PCMCI_TSGRAPH_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace pcmci {

/// Node X^var_{t-lag} of a time series graph, relative to the reference time t.
struct VarLag {
    int var = 0;
    int lag = 0;

    auto operator<=>(const VarLag&) const = default;
};

/// The node shifted further into the past by `by` steps.
inline VarLag shifted(VarLag v, int by) { return VarLag{v.var, v.lag + by}; }

std::string to_string(VarLag v);

/// Mark of the link slot (i, j, tau), read as X^i_{t-tau} ? X^j_t.
enum class LinkMark : std::uint8_t {
    Absent,
    DirectedToLater,    // "-->"  X^i_{t-tau} -> X^j_t
    DirectedToEarlier,  // "<--"  only at tau = 0
    Unoriented,         // "o-o"  only at tau = 0
    Conflict,           // "x-x"  only at tau = 0
};

std::string_view mark_string(LinkMark m);
LinkMark mark_from_string(std::string_view s);
LinkMark mirrored(LinkMark m);

/// X^left ? X^middle ? X^right with the middle and right node always at lag 0.
struct Triple {
    VarLag left;
    VarLag middle;
    VarLag right;

    auto operator<=>(const Triple&) const = default;
};

enum class TripleKind { Collider, R1, R2, R3 };

/// One entry of a triple enumeration. R3 patterns carry the second triple
/// X^i_t o-o X^l_t -> X^j_t in `partner`.
struct TriplePattern {
    Triple triple;
    std::optional<Triple> partner;

    auto operator<=>(const TriplePattern&) const = default;
};

class TimeSeriesGraph {
public:
    TimeSeriesGraph() = default;
    /// Empty graph (every slot Absent).
    TimeSeriesGraph(int n_vars, int tau_max);

    int n_vars() const { return n_vars_; }
    int tau_max() const { return tau_max_; }

    LinkMark mark(int i, int j, int tau) const;
    /// Writes the slot and, at tau = 0, its mirror (j, i, 0).
    void set_mark(int i, int j, int tau, LinkMark m);

    /// Contemporaneous mark read from the perspective of the ordered pair (i, j).
    LinkMark contemporaneous(int i, int j) const { return mark(i, j, 0); }

    /// Stationarity-aware adjacency between two arbitrary nodes.
    bool adjacent(VarLag a, VarLag b) const;
    /// True iff X^a is known to point into X^b (time order or a directed contemporaneous mark).
    bool directed(VarLag a, VarLag b) const;

    /// {(i, 0) : mark(i, j, 0) != Absent}, sorted.
    std::vector<VarLag> contemporaneous_adjacencies(int j) const;
    /// Lagged sources (i, tau > 0) with a link into X^j_t plus the contemporaneous adjacencies, sorted.
    std::vector<VarLag> full_adjacencies(int j) const;
    /// Lagged sources only, sorted.
    std::vector<VarLag> lagged_adjacencies(int j) const;

    /// Number of filled link slots: lagged slots plus unordered contemporaneous pairs.
    int count_links() const;
    /// Lagged slots with mark m plus unordered contemporaneous pairs with mark m
    /// (either direction counts for a directed query).
    int count_marks(LinkMark m) const;

    /// Unordered contemporaneous pairs (i < j) marked Conflict.
    std::set<std::pair<int, int>> conflicts() const;

    const std::set<Triple>& ambiguous_triples() const { return ambiguous_; }
    void add_ambiguous(const Triple& t);
    bool is_ambiguous(const Triple& t) const;
    void clear_ambiguous() { ambiguous_.clear(); }

    std::vector<TriplePattern> enumerate_triples(TripleKind kind) const;

    /// True iff the directed contemporaneous marks contain no cycle.
    bool contemporaneous_acyclic() const;

    bool operator==(const TimeSeriesGraph& other) const = default;

private:
    std::size_t index(int i, int j, int tau) const;
    void check_slot(int i, int j, int tau) const;

    int n_vars_ = 0;
    int tau_max_ = 0;
    std::vector<LinkMark> marks_;
    std::set<Triple> ambiguous_;
};

/// Ambiguous triples are stored with the endpoints of contemporaneous triples ordered.
Triple canonical_triple(const Triple& t);

/// Fully connected graph (PC) or lagged links from the given per-target sets plus
/// all contemporaneous pairs Unoriented (PCMCI+ variants).
TimeSeriesGraph new_full_graph(int n_vars, int tau_max,
                               const std::optional<std::vector<std::vector<VarLag>>>& lagged_adjacencies = std::nullopt);

/// Graph with variable v renamed to perm[v].
TimeSeriesGraph relabel(const TimeSeriesGraph& g, const std::vector<int>& perm);

/// Same adjacencies in both graphs (marks ignored).
bool same_skeleton(const TimeSeriesGraph& a, const TimeSeriesGraph& b);

nlohmann::json graph_to_json(const TimeSeriesGraph& g, const std::vector<std::string>& var_names);
TimeSeriesGraph graph_from_json(const nlohmann::json& j);

}  // namespace pcmci

#endif  // PCMCI_TSGRAPH_HPP
