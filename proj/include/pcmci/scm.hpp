#ifndef PCMCI_SCM_HPP
#define PCMCI_SCM_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pcmci/citests.hpp"
#include "pcmci/dataset.hpp"
#include "pcmci/tsgraph.hpp"

namespace pcmci {

using Rng = std::mt19937_64;

/// splitmix64 finalizer, used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

enum class CouplingFunc { Linear, F2 };
enum class NoiseDist { Gaussian, Weibull };
enum class Setup { LinearGaussian, LinearMixed, NonlinearMixed };

std::string setup_name(Setup s);
Setup setup_from_string(const std::string& s);

/// Cross-link X^source_{t-lag} -> X^target_t with coefficient and coupling function.
struct ScmLink {
    int target = 0;
    int source = 0;
    int lag = 0;
    double coeff = 0.0;
    CouplingFunc func = CouplingFunc::Linear;

    bool operator==(const ScmLink&) const = default;
};

struct NoiseSpec {
    NoiseDist dist = NoiseDist::Gaussian;
    double std = 1.0;

    bool operator==(const NoiseSpec&) const = default;
};

/// X^j_t = a_j X^j_{t-1} + sum_i c_i f_i(X^i_{t-tau_i}) + eta^j_t
struct ScmModel {
    int n_vars = 0;
    std::vector<ScmLink> links;
    std::vector<double> autocoeffs;
    std::vector<NoiseSpec> noise;

    /// Throws InvalidInput on duplicate links, self-links, contemporaneous cycles or out-of-range parameters.
    void validate() const;
    int max_lag() const;
    bool is_linear() const;
    /// Variable order consistent with the contemporaneous links.
    std::vector<int> topological_order() const;

    bool operator==(const ScmModel&) const = default;
};

/// Model with only noise terms and no coupling.
ScmModel empty_model(int n_vars, double noise_std = 1.0);

struct GenConfig {
    int n_vars = 5;
    double autocorr = 0.95;
    std::optional<int> n_cross_links;
    double frac_contemporaneous = 0.3;
    int min_lag = 1;
    int max_lag = 5;
    double coeff_min = 0.1;
    double coeff_max = 0.5;
    double std_min = 0.5;
    double std_max = 2.0;
    Setup setup = Setup::LinearGaussian;

    /// floor(1.5 N), or 1 for N = 2, unless set explicitly.
    int cross_links() const;
    void validate() const;
};

ScmModel draw_model(const GenConfig& cfg, Rng& rng);

double f2(double x);

/// Simulates T steps after burn_in; nullopt if the path diverges (non-finite or |x| > 1e4).
std::optional<Dataset> simulate(const ScmModel& model, int t_len, int burn_in, Rng& rng);

constexpr int kDefaultBurnIn = 500;
constexpr double kDivergenceBound = 1e4;

TimeSeriesGraph true_graph(const ScmModel& model, int tau_max);

/// Lagged DAG of the model including autodependencies with a_j != 0.
LaggedDag to_lagged_dag(const ScmModel& model);

/// Spectral radius of the companion matrix of the reduced-form VAR of a linear model.
double spectral_radius(const ScmModel& model);
bool is_stationary(const ScmModel& model);

nlohmann::json model_to_json(const ScmModel& model);
ScmModel model_from_json(const nlohmann::json& j);

/// Stationary autocovariances gamma[h] = Cov(X_t, X_{t-h}) for h = 0..max_lag.
struct LaggedCovariance {
    std::vector<Eigen::MatrixXd> gamma;

    /// Cov(X^a.var_{t-a.lag}, X^b.var_{t-b.lag}).
    double cov(VarLag a, VarLag b) const;
    Eigen::MatrixXd covariance(const std::vector<VarLag>& nodes) const;
};

LaggedCovariance analytic_covariance(const ScmModel& model, int max_lag);

/// Population partial correlation of x and y given z under a lagged covariance.
double population_partial_correlation(const LaggedCovariance& cov, VarLag x, VarLag y, const std::vector<VarLag>& z);

}  // namespace pcmci

#endif  // PCMCI_SCM_HPP
