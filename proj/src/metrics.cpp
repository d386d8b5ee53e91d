#include "pcmci/metrics.hpp"

#include <cmath>
#include <sstream>

#include "pcmci/errors.hpp"
#include "pcmci/reference_cpdag.hpp"

namespace pcmci {

std::string scoring_name(ScoringMode m) { return m == ScoringMode::Strict ? "strict" : "cpdag"; }

ScoringMode scoring_from_string(const std::string& s) {
    if (s == "strict") return ScoringMode::Strict;
    if (s == "cpdag") return ScoringMode::CpdagAware;
    throw InvalidInput("unknown scoring mode '" + s + "'");
}

const std::vector<std::string>& metric_fields() {
    static const std::vector<std::string> fields{
        "tpr_lagged_cross",      "fpr_lagged_cross",         "tpr_contemp",
        "fpr_contemp",           "tpr_auto",                 "fpr_auto",
        "orient_recall_contemp", "orient_precision_contemp", "conflict_fraction",
        "runtime_seconds"};
    return fields;
}

std::optional<double> metric_value(const MetricsReport& r, const std::string& field) {
    if (field == "tpr_lagged_cross") return r.tpr_lagged_cross;
    if (field == "fpr_lagged_cross") return r.fpr_lagged_cross;
    if (field == "tpr_contemp") return r.tpr_contemp;
    if (field == "fpr_contemp") return r.fpr_contemp;
    if (field == "tpr_auto") return r.tpr_auto;
    if (field == "fpr_auto") return r.fpr_auto;
    if (field == "orient_recall_contemp") return r.orient_recall_contemp;
    if (field == "orient_precision_contemp") return r.orient_precision_contemp;
    if (field == "conflict_fraction") return r.conflict_fraction;
    if (field == "runtime_seconds") return r.runtime_seconds;
    throw InvalidInput("unknown metric '" + field + "'");
}

namespace {

struct Counter {
    int hits = 0;
    int positives = 0;
    int false_hits = 0;
    int negatives = 0;

    void add(bool truth, bool est) {
        if (truth) {
            ++positives;
            hits += est;
        } else {
            ++negatives;
            false_hits += est;
        }
    }
    std::optional<double> tpr() const {
        return positives ? std::optional<double>(static_cast<double>(hits) / positives) : std::nullopt;
    }
    std::optional<double> fpr() const {
        return negatives ? std::optional<double>(static_cast<double>(false_hits) / negatives) : std::nullopt;
    }
};

std::optional<double> ratio(int num, int den) {
    return den ? std::optional<double>(static_cast<double>(num) / den) : std::nullopt;
}

}  // namespace

MetricsReport evaluate(const TimeSeriesGraph& estimated, const TimeSeriesGraph& truth, ScoringMode mode,
                       const std::optional<TimeSeriesGraph>& reference) {
    if (estimated.n_vars() != truth.n_vars() || estimated.tau_max() != truth.tau_max()) {
        throw InvalidInput("estimated and true graphs differ in dimensions");
    }
    std::optional<TimeSeriesGraph> ref;
    if (mode == ScoringMode::CpdagAware) {
        ref = reference ? *reference : reference_cpdag(truth);
        if (ref->n_vars() != truth.n_vars() || ref->tau_max() != truth.tau_max()) {
            throw InvalidInput("reference CPDAG differs in dimensions");
        }
    }
    const int n = truth.n_vars();
    Counter cross;
    Counter autod;
    Counter contemp;
    int true_contemp = 0;
    int est_contemp = 0;
    int correct = 0;
    int conflicts = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int tau = 1; tau <= truth.tau_max(); ++tau) {
                const bool t = truth.mark(i, j, tau) != LinkMark::Absent;
                const bool e = estimated.mark(i, j, tau) != LinkMark::Absent;
                (i == j ? autod : cross).add(t, e);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const LinkMark tm = truth.contemporaneous(i, j);
            const LinkMark em = estimated.contemporaneous(i, j);
            const bool t = tm != LinkMark::Absent;
            const bool e = em != LinkMark::Absent;
            contemp.add(t, e);
            true_contemp += t;
            est_contemp += e;
            if (em == LinkMark::Conflict) ++conflicts;
            if (!t || !e) continue;
            const bool directed = em == LinkMark::DirectedToLater || em == LinkMark::DirectedToEarlier;
            if (directed && em == tm) {
                ++correct;
            } else if (mode == ScoringMode::CpdagAware && em == LinkMark::Unoriented &&
                       ref->contemporaneous(i, j) == LinkMark::Unoriented) {
                ++correct;
            }
        }
    }
    MetricsReport r;
    r.tpr_lagged_cross = cross.tpr();
    r.fpr_lagged_cross = cross.fpr();
    r.tpr_auto = autod.tpr();
    r.fpr_auto = autod.fpr();
    r.tpr_contemp = contemp.tpr();
    r.fpr_contemp = contemp.fpr();
    r.orient_recall_contemp = ratio(correct, true_contemp);
    r.orient_precision_contemp = ratio(correct, est_contemp);
    r.conflict_fraction = ratio(conflicts, est_contemp);
    return r;
}

MetricsSummary aggregate(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw InvalidInput("cannot aggregate an empty report list");
    MetricsSummary s;
    s.n_reports = static_cast<int>(reports.size());
    for (const std::string& f : metric_fields()) {
        std::vector<double> vals;
        for (const MetricsReport& r : reports) {
            if (auto v = metric_value(r, f)) vals.push_back(*v);
        }
        FieldSummary fs;
        fs.count = static_cast<int>(vals.size());
        if (!vals.empty()) {
            double mean = 0.0;
            for (double v : vals) mean += v;
            mean /= vals.size();
            double ss = 0.0;
            for (double v : vals) ss += (v - mean) * (v - mean);
            fs.mean = mean;
            fs.std_error = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1)) / std::sqrt(vals.size()) : 0.0;
        }
        s.fields[f] = fs;
    }
    return s;
}

nlohmann::json report_to_json(const MetricsReport& r) {
    nlohmann::json j = nlohmann::json::object();
    for (const std::string& f : metric_fields()) {
        const auto v = metric_value(r, f);
        j[f] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
    }
    return j;
}

std::string report_csv_header() {
    std::string out;
    for (const std::string& f : metric_fields()) out += (out.empty() ? "" : ",") + f;
    return out;
}

std::string report_csv_row(const MetricsReport& r) {
    std::ostringstream out;
    out.precision(17);
    bool first = true;
    for (const std::string& f : metric_fields()) {
        if (!first) out << ',';
        first = false;
        if (const auto v = metric_value(r, f)) out << *v;
    }
    return out.str();
}

}  // namespace pcmci
