#ifndef PCMCI_TEST_HELPERS_HPP
#define PCMCI_TEST_HELPERS_HPP

#include <filesystem>
#include <random>
#include <string>

#include "pcmci/scm.hpp"
#include "pcmci/tsgraph.hpp"

namespace pcmci::testing {

inline std::string fixture(const std::string& name) { return std::string(PCMCI_FIXTURE_DIR) + "/" + name; }

inline ScmLink lin(int target, int source, int lag, double c = 0.4) {
    return ScmLink{target, source, lag, c, CouplingFunc::Linear};
}

/// X0_{t-1} -> X1_t -> X2_t (contemporaneous), no autodependency.
inline ScmModel chain_model() {
    ScmModel m = empty_model(3);
    m.links = {lin(1, 0, 1, 0.5), lin(2, 1, 0, 0.5)};
    return m;
}

/// Random graph with every kind of mark, for structural properties.
inline TimeSeriesGraph random_graph(Rng& rng, int n, int tau_max, double density = 0.4) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TimeSeriesGraph g(n, tau_max);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int tau = 1; tau <= tau_max; ++tau) {
                if (u(rng) < density) g.set_mark(i, j, tau, LinkMark::DirectedToLater);
            }
            if (i < j && u(rng) < density + 0.2) {
                const double r = u(rng);
                g.set_mark(i, j, 0,
                           r < 0.55   ? LinkMark::Unoriented
                           : r < 0.75 ? LinkMark::DirectedToLater
                           : r < 0.95 ? LinkMark::DirectedToEarlier
                                     : LinkMark::Conflict);
            }
        }
    }
    return g;
}

/// Fresh directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
    auto p = std::filesystem::temp_directory_path() / ("pcmci_test_" + tag);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace pcmci::testing

#endif  // PCMCI_TEST_HELPERS_HPP
