#ifndef PCMCI_VERIFICATION_HPP
#define PCMCI_VERIFICATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcmci/scm.hpp"
#include "pcmci/tsgraph.hpp"

namespace pcmci {

/// Union of the lagged parents (lag <= tau_max) of X^j_t and of its contemporaneous ancestors.
std::vector<std::vector<VarLag>> ancestral_lagged_parents(const ScmModel& model, int tau_max);

/// Random linear structure for oracle suites: N in {3,4,5}, tau_max in {1,2}. Returns tau_max.
struct OracleInstance {
    ScmModel model;
    int tau_max = 1;
};
OracleInstance draw_oracle_instance(Rng& rng);

/// Model with variable v renamed to perm[v].
ScmModel permute_model(const ScmModel& model, const std::vector<int>& perm);

/// Equal link marks in every slot (ambiguous triples ignored).
bool same_marks(const TimeSeriesGraph& a, const TimeSeriesGraph& b);

/// One-sample Kolmogorov-Smirnov test against U[0, 1]: statistic D and asymptotic p-value.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_uniform(std::vector<double> values);

struct SuiteResult {
    std::string suite;
    int n_instances = 0;
    int n_checked = 0;
    int n_failed = 0;
    std::string detail;
    std::optional<nlohmann::json> counterexample;

    bool passed() const { return n_failed == 0 && n_checked > 0; }
    nlohmann::json to_json() const;
};

/// Skeleton and CPDAG of PCMCI+ (oracle CI, conservative rule) against the truth.
SuiteResult verify_oracle_consistency(int n_instances, std::uint64_t seed, int jobs = 1);
/// Lagged phase output equals the ancestral_lagged_parents of the model.
SuiteResult verify_lagged_ancestry(int n_instances, std::uint64_t seed, int jobs = 1);
/// All methods and rules give the same graph after relabeling under random variable permutations.
SuiteResult verify_order_independence(int n_instances, std::uint64_t seed, int n_permutations = 5, int jobs = 1);
/// Population partial correlations of both-sided conditioning exceed the smaller one-sided values.
SuiteResult verify_effect_size(int n_instances, std::uint64_t seed, int jobs = 1);
/// ParCorr p-values on independent Gaussian data are uniform; rejection rate near alpha.
SuiteResult verify_calibration(int n_instances, std::uint64_t seed, int t_len = 200, int jobs = 1);

/// Dispatches on oracle-consistency, lagged-ancestry, order-independence, effect-size, calibration.
SuiteResult run_suite(const std::string& name, int n_instances, std::uint64_t seed, int jobs = 1);

}  // namespace pcmci

#endif  // PCMCI_VERIFICATION_HPP
