#ifndef PCMCI_SKELETON_HPP
#define PCMCI_SKELETON_HPP

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pcmci/citests.hpp"
#include "pcmci/tsgraph.hpp"

namespace pcmci {

enum class Method { PC, PCMCIplus0, PCMCIplus };

std::string method_name(Method m);
Method method_from_string(const std::string& s);

/// Common sample window for a run: 2 tau_max for PCMCI+ (shifted source conditions), tau_max otherwise.
int window_lag(Method m, int tau_max);

/// Real-valued table over link slots (i, j, tau); contemporaneous slots are shared by (i, j) and (j, i).
class LinkTable {
public:
    LinkTable() = default;
    LinkTable(int n_vars, int tau_max, double fill = std::numeric_limits<double>::quiet_NaN());

    double get(int i, int j, int tau) const { return values_[index(i, j, tau)]; }
    void set(int i, int j, int tau, double v) { values_[index(i, j, tau)] = v; }
    int n_vars() const { return n_vars_; }
    int tau_max() const { return tau_max_; }

    bool operator==(const LinkTable& other) const;

private:
    std::size_t index(int i, int j, int tau) const;

    int n_vars_ = 0;
    int tau_max_ = 0;
    std::vector<double> values_;
};

/// Separating sets keyed by the unordered node pair.
class SepSetStore {
public:
    void store(VarLag a, VarLag b, std::vector<VarLag> s);
    const std::vector<VarLag>* find(VarLag a, VarLag b) const;
    bool contains(VarLag a, VarLag b) const { return find(a, b) != nullptr; }
    std::size_t size() const { return sets_.size(); }
    const std::map<std::pair<VarLag, VarLag>, std::vector<VarLag>>& entries() const { return sets_; }

    bool operator==(const SepSetStore&) const = default;

private:
    std::map<std::pair<VarLag, VarLag>, std::vector<VarLag>> sets_;
};

/// Output of the lagged phase.
struct LaggedParentSets {
    int n_vars = 0;
    int tau_max = 0;
    /// parents[j] sorted by I^min descending, ties by ascending (var, lag).
    std::vector<std::vector<VarLag>> parents;
    LinkTable i_min;
    LinkTable p_max;
    LinkTable val_at_pmax;
    /// Conditions that removed each lagged candidate.
    SepSetStore sepsets;
    std::size_t n_tests = 0;
};

LaggedParentSets lagged_phase(int n_vars, int tau_max, double alpha, CiTest& ci);

struct SkeletonResult {
    TimeSeriesGraph graph;
    SepSetStore sepsets;
    LinkTable i_min;
    LinkTable p_max;
    LinkTable val_at_pmax;
    std::size_t n_tests = 0;
};

/// Conditioning set of the variant for testing X^x.var_{t-x.lag} against X^j_t given S;
/// sorted, deduplicated, endpoints removed and lags beyond max_lag dropped.
std::vector<VarLag> build_conditions(Method method, VarLag x, int j, std::span<const VarLag> s,
                                     const LaggedParentSets* lagged, int max_lag);

SkeletonResult contemp_phase(int n_vars, int tau_max, double alpha, CiTest& ci, Method method,
                             const LaggedParentSets* lagged);

/// Adjacency pool A(X^j_t) of the variant in canonical order (I^min descending, ties by (var, lag)).
std::vector<VarLag> adjacency_pool(const TimeSeriesGraph& g, int j, Method method, const LinkTable& i_min);

/// All size-p subsets of items in lexicographic index order.
std::vector<std::vector<VarLag>> subsets_of_size(const std::vector<VarLag>& items, int p);

}  // namespace pcmci

#endif  // PCMCI_SKELETON_HPP
