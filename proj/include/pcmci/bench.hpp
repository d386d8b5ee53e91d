#ifndef PCMCI_BENCH_HPP
#define PCMCI_BENCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcmci/discovery.hpp"
#include "pcmci/metrics.hpp"
#include "pcmci/scm.hpp"

namespace pcmci {

struct BenchConfig {
    std::vector<double> autocorr{0.95};
    std::vector<int> n_vars{5};
    std::vector<int> t_len{500};
    std::vector<int> tau_max{5};
    std::vector<double> alpha{0.01};
    std::vector<Method> methods{Method::PCMCIplus, Method::PC};
    ColliderRule rule = ColliderRule::Majority;
    Setup setup = Setup::LinearGaussian;
    ScoringMode scoring = ScoringMode::CpdagAware;
    int n_realizations = 10;
    std::uint64_t base_seed = 0;
    int jobs = 1;
    int burn_in = kDefaultBurnIn;
    int max_retries = 100;
    /// Use the d-separation oracle on the drawn model instead of ParCorr on simulated data.
    bool oracle = false;

    void validate() const;
    nlohmann::json to_json() const;
    static BenchConfig from_json(const nlohmann::json& j);
};

struct CellPoint {
    double autocorr = 0.95;
    int n_vars = 5;
    int t_len = 500;
    int tau_max = 5;
    double alpha = 0.01;

    bool operator==(const CellPoint&) const = default;
    nlohmann::json to_json() const;
};

/// Cells of the sweep in deterministic order (autocorr, N, T, tau_max, alpha nested).
std::vector<CellPoint> sweep_cells(const BenchConfig& cfg);

/// base_seed xor a hash of (cell, realization); shared by all methods of that realization.
std::uint64_t realization_seed(std::uint64_t base_seed, std::size_t cell_index, int realization);

/// Model and data of one realization; retry k reseeds with seed xor k.
struct Realization {
    ScmModel model;
    std::optional<Dataset> data;
    std::uint64_t seed = 0;
    int retries = 0;
};
std::optional<Realization> draw_realization(const BenchConfig& cfg, const CellPoint& cell, std::uint64_t seed);

struct JobResult {
    std::size_t cell_index = 0;
    Method method = Method::PCMCIplus;
    int realization = 0;
    std::uint64_t seed = 0;
    int retries = 0;
    std::optional<MetricsReport> report;
    std::optional<TimeSeriesGraph> graph;
    std::string error;
};

JobResult run_cell(const BenchConfig& cfg, const CellPoint& cell, std::size_t cell_index, Method method,
                   int realization);

struct SweepRow {
    CellPoint cell;
    Method method = Method::PCMCIplus;
    MetricsSummary summary;
    int n_ok = 0;
    int n_failed = 0;
    double median_runtime = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<JobResult> jobs;
};

SweepResult run_sweep(const BenchConfig& cfg);

std::string sweep_to_csv(const SweepResult& r, bool include_runtime = true);
nlohmann::json sweep_to_json(const SweepResult& r, const BenchConfig& cfg, bool include_runtime = true);

}  // namespace pcmci

#endif  // PCMCI_BENCH_HPP
