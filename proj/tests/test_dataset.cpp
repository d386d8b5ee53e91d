#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"
#include "pcmci/dataset.hpp"
#include "pcmci/errors.hpp"

using namespace pcmci;

namespace {

Dataset ramp(int t_len, int n_vars) {
    Eigen::MatrixXd v(t_len, n_vars);
    for (int t = 0; t < t_len; ++t) {
        for (int j = 0; j < n_vars; ++j) v(t, j) = 10.0 * j + t;
    }
    return Dataset(v, default_var_names(n_vars));
}

}  // namespace

TEST(Dataset, LaggedSampleWindow) {
    const Dataset d = ramp(5, 1);
    const std::vector<VarLag> now{{0, 0}};
    const Eigen::MatrixXd a = build_lagged_samples(d, now, 2);
    ASSERT_EQ(a.rows(), 3);
    EXPECT_DOUBLE_EQ(a(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(a(2, 0), 4.0);

    const std::vector<VarLag> past{{0, 2}};
    const Eigen::MatrixXd b = build_lagged_samples(d, past, 2);
    ASSERT_EQ(b.rows(), 3);
    EXPECT_DOUBLE_EQ(b(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(b(2, 0), 2.0);

    EXPECT_THROW(build_lagged_samples(ramp(2, 1), now, 2), InsufficientData);
}

TEST(Dataset, LaggedSamplesMixColumns) {
    const Dataset d = ramp(6, 2);
    const std::vector<VarLag> nodes{{1, 1}, {0, 0}};
    const Eigen::MatrixXd a = build_lagged_samples(d, nodes, 1);
    ASSERT_EQ(a.rows(), 5);
    for (int s = 0; s < 5; ++s) {
        EXPECT_DOUBLE_EQ(a(s, 0), 10.0 + s);
        EXPECT_DOUBLE_EQ(a(s, 1), s + 1.0);
    }
    const std::vector<VarLag> too_deep{{0, 2}};
    EXPECT_THROW(build_lagged_samples(d, too_deep, 1), InvalidInput);
}

TEST(Dataset, CsvHeaderDetection) {
    std::istringstream with_header("a,b\n1,2\n3,4.5\n");
    const Dataset d = read_csv(with_header);
    EXPECT_EQ(d.var_names, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(d.n_samples(), 2);
    EXPECT_DOUBLE_EQ(d.values(1, 1), 4.5);

    std::istringstream no_header("1,2\n3,4\n5,6\n");
    const Dataset e = read_csv(no_header);
    EXPECT_EQ(e.var_names, (std::vector<std::string>{"X0", "X1"}));
    EXPECT_EQ(e.n_samples(), 3);
}

TEST(Dataset, CsvErrorsNameTheCell) {
    std::istringstream bad("x,y\n1,2\n3,abc\n");
    try {
        read_csv(bad);
        FAIL() << "expected InvalidInput";
    } catch (const InvalidInput& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("row 3"), std::string::npos) << msg;
        EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
    }
    std::istringstream ragged("1,2\n3\n");
    EXPECT_THROW(read_csv(ragged), InvalidInput);
    std::istringstream empty("");
    EXPECT_THROW(read_csv(empty), InvalidInput);
    EXPECT_THROW(read_csv_file("/nonexistent/file.csv"), InvalidInput);
}

TEST(Dataset, CsvRoundTripIsExact) {
    Rng rng(1);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd v(50, 3);
    for (int t = 0; t < 50; ++t) {
        for (int j = 0; j < 3; ++j) v(t, j) = nd(rng) * 1e3;
    }
    const Dataset d(v, {"p", "q", "r"});
    std::ostringstream out;
    write_csv(out, d);
    std::istringstream in(out.str());
    const Dataset back = read_csv(in);
    EXPECT_EQ(back.var_names, d.var_names);
    EXPECT_TRUE(back.values == d.values);
}

TEST(Dataset, RejectsNonFiniteValues) {
    Eigen::MatrixXd v(2, 1);
    v << 1.0, std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(Dataset(v, {"a"}), InvalidInput);
    EXPECT_THROW(Dataset(Eigen::MatrixXd::Zero(2, 2), {"a"}), InvalidInput);
}
