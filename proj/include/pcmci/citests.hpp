#ifndef PCMCI_CITESTS_HPP
#define PCMCI_CITESTS_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcmci/dataset.hpp"
#include "pcmci/tsgraph.hpp"

namespace pcmci {

struct CiOutcome {
    double statistic = 0.0;
    double p_value = 1.0;

    bool operator==(const CiOutcome&) const = default;
};

/// Conditional-independence test X _||_ Y | Z over lagged nodes of a stationary process.
class CiTest {
public:
    virtual ~CiTest() = default;
    virtual CiOutcome run(VarLag x, VarLag y, std::span<const VarLag> z) = 0;
    virtual std::string name() const = 0;
    /// Largest lag a node may carry in a query.
    virtual int max_lag() const = 0;
};

/// Student-t two-sided p-value for a partial correlation r with the given degrees of freedom.
double parcorr_p_value(double r, int dof);

/// Partial correlation of OLS residuals (intercept included) on one shared sample window.
class ParCorrTest : public CiTest {
public:
    /// Uses n = T - window_lag samples for every test.
    ParCorrTest(const Dataset& data, int window_lag);

    CiOutcome run(VarLag x, VarLag y, std::span<const VarLag> z) override;
    std::string name() const override { return "parcorr"; }
    int max_lag() const override { return window_lag_; }
    int n_samples() const { return n_; }

private:
    Eigen::Index column(VarLag v) const;

    int n_vars_;
    int window_lag_;
    int n_;
    Eigen::MatrixXd gram_;  // centered cross-products of all (var, lag) columns
};

CiOutcome parcorr_test(VarLag x, VarLag y, std::span<const VarLag> z, const Dataset& data, int tau_max);

/// Parent lists of a stationary lagged DAG: parents[j] holds the sources (i, tau) of X^j_t.
struct LaggedDag {
    int n_vars = 0;
    std::vector<std::vector<VarLag>> parents;

    int max_lag() const;
};

/// d-separation on the time series graph unrolled over lags [0, Q + depth], Q the largest queried lag.
bool d_separated(const LaggedDag& dag, VarLag x, VarLag y, std::span<const VarLag> z, int depth);

/// Past steps unrolled beyond the queried window by default.
int default_unroll_depth(const LaggedDag& dag);

/// Exact CI oracle: p = 1, statistic 0 when d-separated, else p = 0, statistic 1.
class OracleCiTest : public CiTest {
public:
    explicit OracleCiTest(LaggedDag dag, int max_query_lag, int depth = -1);

    CiOutcome run(VarLag x, VarLag y, std::span<const VarLag> z) override;
    std::string name() const override { return "oracle"; }
    int max_lag() const override { return max_query_lag_; }
    const LaggedDag& dag() const { return dag_; }

private:
    LaggedDag dag_;
    int max_query_lag_;
    int depth_;
};

/// Memoizes another test on the canonical key (min(x,y), max(x,y), sorted Z). Thread-safe.
class CachedCiTest : public CiTest {
public:
    explicit CachedCiTest(CiTest& inner) : inner_(inner) {}

    CiOutcome run(VarLag x, VarLag y, std::span<const VarLag> z) override;
    std::string name() const override { return inner_.name(); }
    int max_lag() const override { return inner_.max_lag(); }

    std::size_t calls() const { return calls_; }
    std::size_t evaluations() const { return evaluations_; }

private:
    CiTest& inner_;
    std::mutex mutex_;
    std::map<std::vector<VarLag>, CiOutcome> cache_;
    std::size_t calls_ = 0;
    std::size_t evaluations_ = 0;
};

/// Sorted copy of z without duplicates.
std::vector<VarLag> canonical_conditions(std::span<const VarLag> z);

}  // namespace pcmci

#endif  // PCMCI_CITESTS_HPP
