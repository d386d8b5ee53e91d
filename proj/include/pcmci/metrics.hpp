#ifndef PCMCI_METRICS_HPP
#define PCMCI_METRICS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcmci/tsgraph.hpp"

namespace pcmci {

enum class ScoringMode { Strict, CpdagAware };

std::string scoring_name(ScoringMode m);
ScoringMode scoring_from_string(const std::string& s);

struct MetricsReport {
    std::optional<double> tpr_lagged_cross;
    std::optional<double> fpr_lagged_cross;
    std::optional<double> tpr_contemp;
    std::optional<double> fpr_contemp;
    std::optional<double> tpr_auto;
    std::optional<double> fpr_auto;
    std::optional<double> orient_recall_contemp;
    std::optional<double> orient_precision_contemp;
    std::optional<double> conflict_fraction;
    double runtime_seconds = 0.0;

    bool operator==(const MetricsReport&) const = default;
};

/// Field names in serialization order.
const std::vector<std::string>& metric_fields();
std::optional<double> metric_value(const MetricsReport& r, const std::string& field);

/// CpdagAware counts an estimated o-o as correct when the reference CPDAG leaves that link
/// unoriented; the reference defaults to the CPDAG of truth.
MetricsReport evaluate(const TimeSeriesGraph& estimated, const TimeSeriesGraph& truth, ScoringMode mode,
                       const std::optional<TimeSeriesGraph>& reference = std::nullopt);

struct FieldSummary {
    std::optional<double> mean;
    std::optional<double> std_error;
    int count = 0;
};

struct MetricsSummary {
    std::map<std::string, FieldSummary> fields;
    int n_reports = 0;
};

/// Mean and sample-std / sqrt(n) per field over the present values.
MetricsSummary aggregate(const std::vector<MetricsReport>& reports);

nlohmann::json report_to_json(const MetricsReport& r);
std::string report_csv_header();
std::string report_csv_row(const MetricsReport& r);

}  // namespace pcmci

#endif  // PCMCI_METRICS_HPP
