#ifndef PCMCI_DATASET_HPP
#define PCMCI_DATASET_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pcmci/tsgraph.hpp"

namespace pcmci {

/// Observed sample: T rows (time steps) by N columns (variables).
struct Dataset {
    Eigen::MatrixXd values;
    std::vector<std::string> var_names;

    Dataset() = default;
    Dataset(Eigen::MatrixXd v, std::vector<std::string> names);

    int n_samples() const { return static_cast<int>(values.rows()); }
    int n_vars() const { return static_cast<int>(values.cols()); }
};

std::vector<std::string> default_var_names(int n);

/// Row s holds value[s + window_lag - lag_k][var_k] for node k; n_samples = T - window_lag.
Eigen::MatrixXd build_lagged_samples(const Dataset& data, std::span<const VarLag> nodes, int window_lag);

/// Comma-separated values, optional header row detected by a non-numeric first row.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Dataset& data);
void write_csv_file(const std::string& path, const Dataset& data);

}  // namespace pcmci

#endif  // PCMCI_DATASET_HPP
