#ifndef PCMCI_ORIENTATION_HPP
#define PCMCI_ORIENTATION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcmci/citests.hpp"
#include "pcmci/skeleton.hpp"
#include "pcmci/tsgraph.hpp"

namespace pcmci {

enum class ColliderRule { None, Conservative, Majority };

std::string rule_name(ColliderRule r);
ColliderRule rule_from_string(const std::string& s);

enum class Decision { Collider, NonCollider, Ambiguous };

struct TripleVerdict {
    Triple triple;
    std::optional<double> n_k;
    Decision decision = Decision::Ambiguous;
};

/// Decision of the rule for a fraction n_k of separating subsets containing the middle node.
Decision decide(ColliderRule rule, double n_k);

struct ColliderResult {
    TimeSeriesGraph graph;
    std::vector<TripleVerdict> verdicts;
};

/// Orients unshielded colliders of the skeleton. Proposals are applied together; a link proposed
/// in both directions becomes Conflict.
ColliderResult collider_phase(const SkeletonResult& skel, ColliderRule rule, CiTest& ci, double alpha, Method method,
                              const LaggedParentSets* lagged);

/// Applies R1, R2, R3 in sweeps until no rule orients another link.
TimeSeriesGraph rule_phase(TimeSeriesGraph g);

/// Orients every (from, to) contemporaneous proposal on currently unoriented links; returns the number
/// of links changed.
int apply_proposals(TimeSeriesGraph& g, const std::vector<std::pair<int, int>>& proposals);

}  // namespace pcmci

#endif  // PCMCI_ORIENTATION_HPP
