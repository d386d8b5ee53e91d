#include <algorithm>
#include <map>
#include <set>

#include "pcmci/errors.hpp"
#include "pcmci/orientation.hpp"

namespace pcmci {

std::string rule_name(ColliderRule r) {
    switch (r) {
        case ColliderRule::None: return "none";
        case ColliderRule::Conservative: return "conservative";
        case ColliderRule::Majority: return "majority";
    }
    return "";
}

ColliderRule rule_from_string(const std::string& s) {
    if (s == "none") return ColliderRule::None;
    if (s == "conservative") return ColliderRule::Conservative;
    if (s == "majority") return ColliderRule::Majority;
    throw InvalidInput("unknown collider rule '" + s + "'");
}

Decision decide(ColliderRule rule, double n_k) {
    if (rule == ColliderRule::Conservative) {
        if (n_k == 0.0) return Decision::Collider;
        if (n_k == 1.0) return Decision::NonCollider;
        return Decision::Ambiguous;
    }
    if (rule == ColliderRule::Majority) {
        if (n_k < 0.5) return Decision::Collider;
        if (n_k > 0.5) return Decision::NonCollider;
        return Decision::Ambiguous;
    }
    throw InvalidInput("rule 'none' has no fraction threshold");
}

int apply_proposals(TimeSeriesGraph& g, const std::vector<std::pair<int, int>>& proposals) {
    // bit 1: lower index points to higher, bit 2: the reverse
    std::map<std::pair<int, int>, int> wanted;
    for (const auto& [from, to] : proposals) {
        const auto key = std::minmax(from, to);
        wanted[key] |= from < to ? 1 : 2;
    }
    int changed = 0;
    for (const auto& [key, dirs] : wanted) {
        if (g.contemporaneous(key.first, key.second) != LinkMark::Unoriented) continue;
        const LinkMark m = dirs == 3 ? LinkMark::Conflict : dirs == 1 ? LinkMark::DirectedToLater : LinkMark::DirectedToEarlier;
        g.set_mark(key.first, key.second, 0, m);
        ++changed;
    }
    return changed;
}

namespace {

std::vector<std::vector<VarLag>> all_subsets(const std::vector<VarLag>& items) {
    std::vector<std::vector<VarLag>> out;
    for (int p = 0; p <= static_cast<int>(items.size()); ++p) {
        for (auto& s : subsets_of_size(items, p)) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

ColliderResult collider_phase(const SkeletonResult& skel, ColliderRule rule, CiTest& ci, double alpha, Method method,
                              const LaggedParentSets* lagged) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
    if (method != Method::PC && lagged == nullptr) throw InvalidInput("PCMCI+ variants require lagged parent sets");
    ColliderResult res;
    res.graph = skel.graph;
    res.graph.clear_ambiguous();
    const TimeSeriesGraph& skeleton = skel.graph;
    const int n = skeleton.n_vars();
    const int max_lag = window_lag(method, skeleton.tau_max());

    std::vector<std::vector<VarLag>> pools(n);
    if (rule != ColliderRule::None) {
        for (int j = 0; j < n; ++j) pools[j] = adjacency_pool(skeleton, j, method, skel.i_min);
    }

    std::vector<std::pair<int, int>> proposals;
    for (const TriplePattern& pat : skeleton.enumerate_triples(TripleKind::Collider)) {
        const Triple& t = pat.triple;
        TripleVerdict verdict{t, std::nullopt, Decision::Ambiguous};
        if (rule == ColliderRule::None) {
            const std::vector<VarLag>* sep = skel.sepsets.find(t.left, t.right);
            const bool in_sep = sep != nullptr && std::find(sep->begin(), sep->end(), t.middle) != sep->end();
            verdict.decision = in_sep ? Decision::NonCollider : Decision::Collider;
        } else {
            // (S, Z) pairs; for tau = 0 the subsets drawn around the left endpoint use its lagged set
            std::set<std::pair<std::vector<VarLag>, std::vector<VarLag>>> candidates;
            auto add_from = [&](VarLag owner, VarLag other) {
                std::vector<VarLag> items;
                for (const VarLag& v : pools[owner.var]) {
                    if (v != other) items.push_back(v);
                }
                for (auto& s : all_subsets(items)) {
                    std::sort(s.begin(), s.end());
                    std::vector<VarLag> z = build_conditions(method, other, owner.var, s, lagged, max_lag);
                    candidates.emplace(std::move(s), std::move(z));
                }
            };
            add_from(t.right, t.left);
            if (t.left.lag == 0) add_from(t.left, t.right);
            int separating = 0;
            int containing = 0;
            for (const auto& [s, z] : candidates) {
                if (ci.run(t.left, t.right, z).p_value > alpha) {
                    ++separating;
                    if (std::find(s.begin(), s.end(), t.middle) != s.end()) ++containing;
                }
            }
            if (separating > 0) {
                verdict.n_k = static_cast<double>(containing) / separating;
                verdict.decision = decide(rule, *verdict.n_k);
            }
        }
        if (verdict.decision == Decision::Ambiguous) {
            res.graph.add_ambiguous(t);
        } else if (verdict.decision == Decision::Collider) {
            proposals.emplace_back(t.right.var, t.middle.var);
            if (t.left.lag == 0) proposals.emplace_back(t.left.var, t.middle.var);
        }
        res.verdicts.push_back(verdict);
    }
    apply_proposals(res.graph, proposals);
    return res;
}

}  // namespace pcmci
