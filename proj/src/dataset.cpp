#include "pcmci/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pcmci/errors.hpp"

namespace pcmci {

namespace {

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& raw, double& out) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd v, std::vector<std::string> names) : values(std::move(v)), var_names(std::move(names)) {
    if (values.rows() == 0 || values.cols() == 0) throw InvalidInput("dataset must have T > 0 and N > 0");
    if (static_cast<Eigen::Index>(var_names.size()) != values.cols()) {
        throw InvalidInput("dataset needs one name per column");
    }
    if (!values.allFinite()) throw InvalidInput("dataset contains non-finite values");
}

std::vector<std::string> default_var_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("X" + std::to_string(i));
    return names;
}

Eigen::MatrixXd build_lagged_samples(const Dataset& data, std::span<const VarLag> nodes, int window_lag) {
    const int t_len = data.n_samples();
    if (window_lag < 0) throw InvalidInput("window lag must be non-negative");
    if (t_len <= window_lag) {
        throw InsufficientData("time series length " + std::to_string(t_len) + " must exceed the maximum lag " +
                               std::to_string(window_lag));
    }
    const int n = t_len - window_lag;
    Eigen::MatrixXd out(n, static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const VarLag& node = nodes[k];
        if (node.lag < 0 || node.lag > window_lag) {
            throw InvalidInput("node " + to_string(node) + " lies outside the sample window");
        }
        if (node.var < 0 || node.var >= data.n_vars()) throw InvalidInput("node " + to_string(node) + " has no column");
        out.col(static_cast<Eigen::Index>(k)) = data.values.col(node.var).segment(window_lag - node.lag, n);
    }
    return out;
}

Dataset read_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_row(line);
        if (width == 0) {
            width = cells.size();
            double probe = 0.0;
            bool numeric = true;
            for (const auto& c : cells) numeric = numeric && parse_number(c, probe);
            if (!numeric) {
                for (const auto& c : cells) names.push_back(trim(c));
                continue;
            }
        }
        if (cells.size() != width) {
            throw InvalidInput("row " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                               " columns, expected " + std::to_string(width));
        }
        std::vector<double> row(width);
        for (std::size_t c = 0; c < width; ++c) {
            if (!parse_number(cells[c], row[c])) {
                throw InvalidInput("row " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                                   ": non-numeric value '" + trim(cells[c]) + "'");
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || width == 0) throw InvalidInput("CSV contains no data rows");
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < width; ++c) values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    if (names.empty()) names = default_var_names(static_cast<int>(width));
    return Dataset(std::move(values), std::move(names));
}

Dataset read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (int c = 0; c < data.n_vars(); ++c) out << (c ? "," : "") << data.var_names[c];
    out << '\n';
    char buf[32];
    for (int r = 0; r < data.n_samples(); ++r) {
        for (int c = 0; c < data.n_vars(); ++c) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), data.values(r, c));
            (void)ec;
            if (c) out << ',';
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

void write_csv_file(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    write_csv(out, data);
}

}  // namespace pcmci
