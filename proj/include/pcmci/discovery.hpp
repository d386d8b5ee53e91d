#ifndef PCMCI_DISCOVERY_HPP
#define PCMCI_DISCOVERY_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include <json.hpp>

#include "pcmci/citests.hpp"
#include "pcmci/dataset.hpp"
#include "pcmci/orientation.hpp"
#include "pcmci/skeleton.hpp"

namespace pcmci {

struct DiscoveryConfig {
    Method method = Method::PCMCIplus;
    ColliderRule rule = ColliderRule::Majority;
    int tau_max = 1;
    double alpha = 0.01;

    void validate() const;
    nlohmann::json to_json() const;
};

struct DiscoveryResult {
    TimeSeriesGraph graph;
    SkeletonResult skeleton;
    std::optional<LaggedParentSets> lagged;
    std::vector<TripleVerdict> verdicts;
    std::size_t n_tests = 0;        // CI queries issued by the phases
    std::size_t n_evaluations = 0;  // distinct queries actually computed
    bool acyclic = true;
};

/// Runs the lagged phase (PCMCI+ variants), the skeleton phase, the collider phase and the rule phase.
DiscoveryResult discover(int n_vars, const DiscoveryConfig& cfg, CiTest& ci);

DiscoveryResult discover_parcorr(const Dataset& data, const DiscoveryConfig& cfg);
DiscoveryResult discover_oracle(const LaggedDag& dag, const DiscoveryConfig& cfg);

/// Link-slot table as a nested [i][j][tau] JSON array with null for undefined entries.
nlohmann::json link_table_to_json(const LinkTable& t);

}  // namespace pcmci

#endif  // PCMCI_DISCOVERY_HPP
