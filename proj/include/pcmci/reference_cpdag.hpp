#ifndef PCMCI_REFERENCE_CPDAG_HPP
#define PCMCI_REFERENCE_CPDAG_HPP

#include <vector>

#include "pcmci/tsgraph.hpp"

namespace pcmci {

/// CPDAG of a true time series graph: contemporaneous skeleton, v-structures (lagged or
/// contemporaneous first parent), then Meek rules R1-R4 with lagged links as background knowledge.
TimeSeriesGraph reference_cpdag(const TimeSeriesGraph& truth);

/// Every acyclic orientation of the contemporaneous skeleton with the same v-structures as truth.
std::vector<TimeSeriesGraph> markov_equivalence_class(const TimeSeriesGraph& truth);

/// Link directed iff it has the same direction in every member, otherwise Unoriented.
TimeSeriesGraph cpdag_from_class(const std::vector<TimeSeriesGraph>& members);

/// Unshielded colliders a -> k_t <- j_t of a fully directed graph, with canonical endpoint order.
std::vector<Triple> v_structures(const TimeSeriesGraph& g);

}  // namespace pcmci

#endif  // PCMCI_REFERENCE_CPDAG_HPP
