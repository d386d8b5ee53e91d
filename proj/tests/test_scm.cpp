#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "helpers.hpp"
#include "pcmci/errors.hpp"
#include "pcmci/scm.hpp"

using namespace pcmci;
using pcmci::testing::chain_model;
using pcmci::testing::lin;

namespace {

Dataset run(const ScmModel& m, int t_len, std::uint64_t seed) {
    Rng rng(seed);
    auto d = simulate(m, t_len, kDefaultBurnIn, rng);
    if (!d) throw std::runtime_error("diverged");
    return *d;
}

double lag_corr(const Eigen::VectorXd& x, int lag) {
    const Eigen::Index n = x.size() - lag;
    const Eigen::VectorXd a = x.head(n).array() - x.head(n).mean();
    const Eigen::VectorXd b = x.tail(n).array() - x.tail(n).mean();
    return a.dot(b) / std::sqrt(a.squaredNorm() * b.squaredNorm());
}

double sample_std(const Eigen::VectorXd& x) {
    const Eigen::VectorXd c = x.array() - x.mean();
    return std::sqrt(c.squaredNorm() / (x.size() - 1));
}

}  // namespace

TEST(Scm, LinkCounts) {
    Rng rng(1);
    GenConfig two;
    two.n_vars = 2;
    EXPECT_EQ(two.cross_links(), 1);
    EXPECT_EQ(draw_model(two, rng).links.size(), 1u);

    GenConfig five;
    five.n_vars = 5;
    EXPECT_EQ(five.cross_links(), 7);
    for (int rep = 0; rep < 50; ++rep) {
        const ScmModel m = draw_model(five, rng);
        ASSERT_EQ(m.links.size(), 7u);
        const auto contemp = std::count_if(m.links.begin(), m.links.end(), [](const ScmLink& l) { return l.lag == 0; });
        ASSERT_EQ(contemp, 2);
    }
}

TEST(Scm, DrawnParameterRanges) {
    Rng rng(2);
    GenConfig cfg;
    cfg.n_vars = 10;
    double sum = 0.0;
    int count = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const ScmModel m = draw_model(cfg, rng);
        for (double a : m.autocoeffs) {
            ASSERT_GE(a, 0.65);
            ASSERT_LE(a, 0.95);
            sum += a;
            ++count;
        }
        for (const ScmLink& l : m.links) {
            ASSERT_GE(std::abs(l.coeff), 0.1);
            ASSERT_LE(std::abs(l.coeff), 0.5);
            ASSERT_NE(l.source, l.target);
            ASSERT_GE(l.lag, 0);
            ASSERT_LE(l.lag, 5);
            ASSERT_EQ(l.func, CouplingFunc::Linear);
        }
        for (const NoiseSpec& n : m.noise) {
            ASSERT_GE(n.std, 0.5);
            ASSERT_LE(n.std, 2.0);
            ASSERT_EQ(n.dist, NoiseDist::Gaussian);
        }
    }
    ASSERT_EQ(count, 10000);
    EXPECT_NEAR(sum / count, 0.80, 0.005);
}

TEST(Scm, SetupsTagFunctionsAndNoise) {
    Rng rng(3);
    GenConfig cfg;
    cfg.n_vars = 10;
    cfg.setup = Setup::NonlinearMixed;
    int f2_links = 0;
    int total = 0;
    int weibull = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const ScmModel m = draw_model(cfg, rng);
        for (const ScmLink& l : m.links) f2_links += l.func == CouplingFunc::F2;
        total += static_cast<int>(m.links.size());
    }
    EXPECT_NEAR(static_cast<double>(f2_links) / total, 0.5, 0.05);
    cfg.setup = Setup::LinearMixed;
    for (int rep = 0; rep < 200; ++rep) {
        const ScmModel m = draw_model(cfg, rng);
        for (const NoiseSpec& n : m.noise) weibull += n.dist == NoiseDist::Weibull;
        for (const ScmLink& l : m.links) ASSERT_EQ(l.func, CouplingFunc::Linear);
    }
    EXPECT_NEAR(weibull / 2000.0, 0.5, 0.05);
    EXPECT_EQ(setup_from_string(setup_name(Setup::LinearMixed)), Setup::LinearMixed);
}

TEST(Scm, F2Formula) {
    EXPECT_EQ(f2(0.0), 0.0);
    EXPECT_NEAR(f2(1.0), 5.756147, 1e-6);
    EXPECT_NEAR(f2(1.0), 1.0 + 5.0 * std::exp(-0.05), 1e-12);
    // x * (1 + 5x e^{-x^2/20}) splits into an odd part x and an even part 5 x^2 e^{-x^2/20}
    EXPECT_NEAR(f2(-1.0), -1.0 + 5.0 * std::exp(-0.05), 1e-12);
    for (double x : {0.3, 1.7, 4.0, 9.0}) {
        EXPECT_NEAR((f2(x) - f2(-x)) / 2.0, x, 1e-12);
        EXPECT_NEAR((f2(x) + f2(-x)) / 2.0, 5.0 * x * x * std::exp(-x * x / 20.0), 1e-12);
    }
}

TEST(Scm, PureNoiseStd) {
    const Dataset d = run(empty_model(3), 100000, 4);
    for (int j = 0; j < 3; ++j) {
        const double s = sample_std(d.values.col(j));
        EXPECT_GE(s, 0.98);
        EXPECT_LE(s, 1.02);
        // centered noise: |mean| within 3 std / sqrt(T)
        EXPECT_LT(std::abs(d.values.col(j).mean()), 3.0 * s / std::sqrt(100000.0));
    }
}

TEST(Scm, WeibullNoiseIsCenteredAndScaled) {
    ScmModel m = empty_model(2);
    m.noise = {{NoiseDist::Weibull, 1.5}, {NoiseDist::Weibull, 0.5}};
    const Dataset d = run(m, 100000, 5);
    EXPECT_NEAR(sample_std(d.values.col(0)), 1.5, 0.03);
    EXPECT_NEAR(sample_std(d.values.col(1)), 0.5, 0.01);
    EXPECT_LT(std::abs(d.values.col(0).mean()), 3.0 * 1.5 / std::sqrt(100000.0));
    // skewed, unlike a Gaussian
    const Eigen::VectorXd c = d.values.col(0).array() - d.values.col(0).mean();
    EXPECT_GT(c.array().cube().mean() / std::pow(sample_std(d.values.col(0)), 3), 0.4);
}

TEST(Scm, Ar1Autocorrelation) {
    ScmModel m = empty_model(1);
    m.autocoeffs = {0.9};
    const Dataset d = run(m, 100000, 6);
    const double r = lag_corr(d.values.col(0), 1);
    EXPECT_GE(r, 0.89);
    EXPECT_LE(r, 0.91);
    EXPECT_NEAR(spectral_radius(m), 0.9, 1e-9);
    EXPECT_TRUE(is_stationary(m));
}

TEST(Scm, RejectsInvalidModels) {
    ScmModel cyc = empty_model(2);
    cyc.links = {lin(0, 1, 0, 0.5), lin(1, 0, 0, 0.5)};
    EXPECT_THROW(cyc.validate(), InvalidInput);

    ScmModel dup = empty_model(2);
    dup.links = {lin(0, 1, 2), lin(0, 1, 2, 0.3)};
    EXPECT_THROW(dup.validate(), InvalidInput);

    ScmModel self = empty_model(2);
    self.links = {lin(0, 0, 1)};
    EXPECT_THROW(self.validate(), InvalidInput);

    ScmModel big = empty_model(2);
    big.links = {lin(0, 1, 1, 0.9)};
    EXPECT_THROW(big.validate(), InvalidInput);

    ScmModel a = empty_model(1);
    a.autocoeffs = {1.0};
    EXPECT_THROW(a.validate(), InvalidInput);

    GenConfig crowded;
    crowded.n_vars = 2;
    crowded.max_lag = 1;
    crowded.n_cross_links = 10;
    Rng rng(1);
    EXPECT_THROW(draw_model(crowded, rng), InvalidInput);
}

TEST(Scm, TrueGraph) {
    const TimeSeriesGraph g = true_graph(chain_model(), 2);
    EXPECT_EQ(g.count_links(), 2);
    EXPECT_EQ(g.mark(0, 1, 1), LinkMark::DirectedToLater);
    EXPECT_EQ(g.contemporaneous(1, 2), LinkMark::DirectedToLater);
    EXPECT_EQ(g.contemporaneous(2, 1), LinkMark::DirectedToEarlier);

    EXPECT_EQ(true_graph(empty_model(4), 3).count_links(), 0);

    ScmModel deep = empty_model(2);
    deep.links = {lin(0, 1, 3)};
    EXPECT_THROW(true_graph(deep, 2), InvalidInput);

    Rng rng(10);
    GenConfig cfg;
    for (int rep = 0; rep < 100; ++rep) {
        cfg.n_vars = 2 + rep % 5;
        const ScmModel m = draw_model(cfg, rng);
        const auto nonzero = std::count_if(m.autocoeffs.begin(), m.autocoeffs.end(), [](double a) { return a != 0.0; });
        ASSERT_EQ(true_graph(m, 5).count_links(), static_cast<int>(m.links.size() + nonzero));
    }
}

TEST(Scm, ContemporaneousLinksFormDag) {
    Rng rng(11);
    GenConfig cfg;
    cfg.frac_contemporaneous = 0.5;
    for (int rep = 0; rep < 10000; ++rep) {
        cfg.n_vars = 3 + rep % 4;
        const ScmModel m = draw_model(cfg, rng);
        ASSERT_TRUE(true_graph(m, 5).contemporaneous_acyclic());
        const auto order = m.topological_order();
        std::vector<int> pos(m.n_vars);
        for (int k = 0; k < m.n_vars; ++k) pos[order[k]] = k;
        for (const ScmLink& l : m.links) {
            if (l.lag == 0) ASSERT_LT(pos[l.source], pos[l.target]);
        }
    }
}

TEST(Scm, SeededDeterminism) {
    GenConfig cfg;
    cfg.setup = Setup::LinearMixed;
    Rng a(77), b(77);
    const ScmModel ma = draw_model(cfg, a);
    const ScmModel mb = draw_model(cfg, b);
    EXPECT_EQ(ma, mb);
    const auto da = simulate(ma, 300, 100, a);
    const auto db = simulate(mb, 300, 100, b);
    ASSERT_EQ(da.has_value(), db.has_value());
    if (da) EXPECT_TRUE(da->values == db->values);
}

TEST(Scm, DivergentModelRejected) {
    ScmModel m = empty_model(2);
    m.autocoeffs = {0.99, 0.99};
    m.links = {lin(0, 1, 1, 0.5), lin(1, 0, 1, 0.5)};
    EXPECT_FALSE(is_stationary(m));
    Rng rng(1);
    EXPECT_FALSE(simulate(m, 5000, 500, rng).has_value());
}

TEST(Scm, JsonRoundTrip) {
    Rng rng(12);
    GenConfig cfg;
    cfg.setup = Setup::NonlinearMixed;
    const ScmModel m = draw_model(cfg, rng);
    EXPECT_EQ(model_from_json(model_to_json(m)), m);
    const ScmModel fixture_model = model_from_json(nlohmann::json::parse(R"({
        "n_vars": 3, "autocoeffs": [0, 0, 0],
        "noise": [{"dist": "gaussian", "std": 1}, {"dist": "gaussian", "std": 1}, {"dist": "gaussian", "std": 1}],
        "links": [{"target": 1, "source": 0, "lag": 1, "coeff": 0.5, "func": "linear"},
                  {"target": 2, "source": 1, "lag": 0, "coeff": 0.5, "func": "linear"}]})"));
    EXPECT_EQ(fixture_model, chain_model());
}

TEST(Scm, AnalyticCovarianceClosedForms) {
    ScmModel ar = empty_model(1);
    ar.autocoeffs = {0.5};
    const LaggedCovariance c = analytic_covariance(ar, 2);
    EXPECT_NEAR(c.gamma[0](0, 0), 4.0 / 3.0, 1e-10);
    EXPECT_NEAR(c.gamma[1](0, 0), 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(c.gamma[2](0, 0), 1.0 / 3.0, 1e-10);

    ScmModel none = empty_model(3);
    none.noise[1].std = 2.0;
    const LaggedCovariance d = analytic_covariance(none, 1);
    EXPECT_TRUE(d.gamma[0].isApprox(Eigen::Vector3d(1.0, 4.0, 1.0).asDiagonal().toDenseMatrix()));
    EXPECT_TRUE(d.gamma[1].isZero(1e-12));

    ScmModel bad = empty_model(2);
    bad.autocoeffs = {0.99, 0.99};
    bad.links = {lin(0, 1, 1, 0.5), lin(1, 0, 1, 0.5)};
    EXPECT_THROW(analytic_covariance(bad, 1), InvalidInput);
}

TEST(Scm, AnalyticCovarianceMatchesSimulation) {
    Rng rng(13);
    GenConfig cfg;
    cfg.n_vars = 3;
    cfg.max_lag = 2;
    for (int rep = 0; rep < 3; ++rep) {
        const ScmModel m = draw_model(cfg, rng);
        if (!is_stationary(m)) continue;
        const LaggedCovariance c = analytic_covariance(m, 2);
        const Dataset d = run(m, 1000000, 20 + rep);
        const Eigen::MatrixXd x = d.values.rowwise() - d.values.colwise().mean();
        const Eigen::Index n = x.rows();
        double scale = c.gamma[0].diagonal().maxCoeff();
        for (int h = 0; h <= 2; ++h) {
            const Eigen::MatrixXd emp = x.bottomRows(n - h).transpose() * x.topRows(n - h) / static_cast<double>(n - h);
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    EXPECT_NEAR(emp(a, b), c.gamma[h](a, b), 0.02 * scale) << "lag " << h;
                }
            }
        }
    }
}

TEST(Scm, PopulationPartialCorrelation) {
    ScmModel m = chain_model();
    const LaggedCovariance c = analytic_covariance(m, 2);
    // X0_{t-1} and X2_t are separated by X1_t
    const std::vector<VarLag> z{{1, 0}};
    EXPECT_NEAR(population_partial_correlation(c, {0, 1}, {2, 0}, z), 0.0, 1e-12);
    EXPECT_GT(std::abs(population_partial_correlation(c, {0, 1}, {2, 0}, {})), 0.1);
}
