#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "helpers.hpp"
#include "pcmci/bench.hpp"
#include "pcmci/citests.hpp"
#include "pcmci/errors.hpp"
#include "pcmci/scm.hpp"
#include "pcmci/skeleton.hpp"

using namespace pcmci;
using pcmci::testing::chain_model;
using pcmci::testing::lin;

namespace {

// Records the smallest |statistic| and largest p-value seen per link slot.
class RecordingTest : public CiTest {
public:
    explicit RecordingTest(CiTest& inner) : inner_(inner) {}

    CiOutcome run(VarLag x, VarLag y, std::span<const VarLag> z) override {
        const CiOutcome out = inner_.run(x, y, z);
        if (x.lag < y.lag) std::swap(x, y);
        auto key = std::make_tuple(x.var, y.var, x.lag - y.lag);
        if (x.lag == y.lag && x.var > y.var) key = std::make_tuple(y.var, x.var, 0);
        auto [it, fresh] = seen_.try_emplace(key, std::abs(out.statistic), out.p_value);
        if (!fresh) {
            it->second.first = std::min(it->second.first, std::abs(out.statistic));
            it->second.second = std::max(it->second.second, out.p_value);
        }
        return out;
    }
    std::string name() const override { return "recording"; }
    int max_lag() const override { return inner_.max_lag(); }

    std::map<std::tuple<int, int, int>, std::pair<double, double>> seen_;

private:
    CiTest& inner_;
};

Dataset simulate_checked(const ScmModel& m, int t_len, std::uint64_t seed) {
    Rng rng(seed);
    auto d = simulate(m, t_len, kDefaultBurnIn, rng);
    if (!d) throw std::runtime_error("simulation diverged");
    return *d;
}

ScmModel random_linear_model(Rng& rng, int n, int max_lag) {
    GenConfig cfg;
    cfg.n_vars = n;
    cfg.max_lag = max_lag;
    cfg.autocorr = 0.7;
    return draw_model(cfg, rng);
}

}  // namespace

TEST(Skeleton, SubsetsInLexicographicOrder) {
    const std::vector<VarLag> items{{0, 1}, {1, 0}, {2, 0}, {3, 2}};
    const auto two = subsets_of_size(items, 2);
    ASSERT_EQ(two.size(), 6u);
    EXPECT_EQ(two.front(), (std::vector<VarLag>{{0, 1}, {1, 0}}));
    EXPECT_EQ(two[2], (std::vector<VarLag>{{0, 1}, {3, 2}}));
    EXPECT_EQ(two.back(), (std::vector<VarLag>{{2, 0}, {3, 2}}));
    EXPECT_EQ(subsets_of_size(items, 0), (std::vector<std::vector<VarLag>>{{}}));
    EXPECT_TRUE(subsets_of_size(items, 5).empty());
}

TEST(Skeleton, LaggedPhaseOnChain) {
    const LaggedDag dag = to_lagged_dag(chain_model());
    OracleCiTest ci(dag, 2);
    const LaggedParentSets lp = lagged_phase(3, 2, 0.01, ci);
    EXPECT_TRUE(lp.parents[0].empty());
    EXPECT_EQ(lp.parents[1], (std::vector<VarLag>{{0, 1}}));
    EXPECT_EQ(lp.parents[2], (std::vector<VarLag>{{0, 1}}));
    EXPECT_EQ(lp.sepsets.find({1, 1}, {2, 0})->size(), 0u);
}

TEST(Skeleton, LaggedPhaseWithoutLinks) {
    const LaggedDag dag = to_lagged_dag(empty_model(3));
    OracleCiTest ci(dag, 3);
    const LaggedParentSets lp = lagged_phase(3, 3, 0.05, ci);
    for (const auto& ps : lp.parents) EXPECT_TRUE(ps.empty());
    EXPECT_EQ(lp.n_tests, 27u);
}

TEST(Skeleton, ContemporaneousPhaseOnChain) {
    const LaggedDag dag = to_lagged_dag(chain_model());
    OracleCiTest ci(dag, 4);
    const LaggedParentSets lp = lagged_phase(3, 2, 0.01, ci);
    const SkeletonResult sk = contemp_phase(3, 2, 0.01, ci, Method::PCMCIplus, &lp);
    EXPECT_EQ(sk.graph.mark(0, 1, 1), LinkMark::DirectedToLater);
    EXPECT_EQ(sk.graph.mark(1, 2, 0), LinkMark::Unoriented);
    EXPECT_EQ(sk.graph.mark(0, 2, 1), LinkMark::Absent);
    EXPECT_EQ(sk.graph.count_links(), 2);
    ASSERT_TRUE(sk.sepsets.contains({0, 1}, {2, 0}));
    EXPECT_EQ(*sk.sepsets.find({0, 1}, {2, 0}), (std::vector<VarLag>{{1, 0}}));
    EXPECT_EQ(*sk.sepsets.find({0, 0}, {1, 0}), (std::vector<VarLag>{}));
}

TEST(Skeleton, ColliderParentsSeparatedByEmptySet) {
    ScmModel m = empty_model(3);
    m.links = {lin(2, 0, 0), lin(2, 1, 0)};
    OracleCiTest ci(to_lagged_dag(m), 2);
    const LaggedParentSets lp = lagged_phase(3, 1, 0.01, ci);
    const SkeletonResult sk = contemp_phase(3, 1, 0.01, ci, Method::PCMCIplus, &lp);
    EXPECT_EQ(sk.graph.mark(0, 1, 0), LinkMark::Absent);
    EXPECT_EQ(sk.graph.mark(0, 2, 0), LinkMark::Unoriented);
    EXPECT_EQ(sk.graph.mark(1, 2, 0), LinkMark::Unoriented);
    ASSERT_TRUE(sk.sepsets.contains({0, 0}, {1, 0}));
    EXPECT_TRUE(sk.sepsets.find({1, 0}, {0, 0})->empty());
}

TEST(Skeleton, RequiresLaggedSetsForPcmciVariants) {
    OracleCiTest ci(to_lagged_dag(chain_model()), 2);
    EXPECT_THROW(contemp_phase(3, 1, 0.01, ci, Method::PCMCIplus, nullptr), InvalidInput);
    EXPECT_THROW(contemp_phase(3, 1, 0.01, ci, Method::PCMCIplus0, nullptr), InvalidInput);
    EXPECT_THROW(contemp_phase(3, 1, 1.5, ci, Method::PC, nullptr), InvalidInput);
    EXPECT_THROW(lagged_phase(3, 0, 0.01, ci), InvalidInput);
    EXPECT_NO_THROW(contemp_phase(3, 1, 0.01, ci, Method::PC, nullptr));
}

TEST(Skeleton, Ar1HigherLagsRemoved) {
    ScmModel m = empty_model(1);
    m.autocoeffs = {0.9};
    int kept_first = 0;
    int clean = 0;
    for (int seed = 0; seed < 100; ++seed) {
        const Dataset d = simulate_checked(m, 2000, 500 + seed);
        ParCorrTest ci(d, 3);
        const LaggedParentSets lp = lagged_phase(1, 3, 0.01, ci);
        const auto& ps = lp.parents[0];
        kept_first += std::count(ps.begin(), ps.end(), VarLag{0, 1}) == 1;
        clean += ps.size() == 1 && ps[0] == VarLag{0, 1};
    }
    EXPECT_EQ(kept_first, 100);
    EXPECT_GE(clean, 95);
}

TEST(Skeleton, ConditionSetsHaveExpectedStructure) {
    Rng rng(2);
    std::uniform_int_distribution<int> var(0, 3), lag(1, 2), zero_or_lag(0, 2), len(0, 3);
    for (int rep = 0; rep < 500; ++rep) {
        LaggedParentSets lp;
        lp.n_vars = 4;
        lp.tau_max = 2;
        lp.parents.resize(4);
        for (auto& ps : lp.parents) {
            const int k = len(rng);
            for (int a = 0; a < k; ++a) ps.push_back({var(rng), lag(rng)});
        }
        const VarLag x{var(rng), zero_or_lag(rng)};
        const int j = var(rng);
        if (x == VarLag{j, 0}) continue;
        std::vector<VarLag> s;
        const int k = len(rng);
        for (int a = 0; a < k; ++a) {
            const VarLag v{var(rng), 0};
            if (v != x && v != VarLag{j, 0}) s.push_back(v);
        }
        for (Method method : {Method::PC, Method::PCMCIplus0, Method::PCMCIplus}) {
            const int window = window_lag(method, 2);
            const auto z = build_conditions(method, x, j, s, &lp, window);
            ASSERT_TRUE(std::is_sorted(z.begin(), z.end()));
            ASSERT_EQ(std::adjacent_find(z.begin(), z.end()), z.end());
            for (const VarLag& v : z) {
                ASSERT_NE(v, x);
                ASSERT_NE(v, (VarLag{j, 0}));
                ASSERT_LE(v.lag, window);
            }
            auto has = [&](VarLag v) { return std::binary_search(z.begin(), z.end(), v); };
            for (const VarLag& v : s) ASSERT_TRUE(has(v));
            std::vector<VarLag> expected(s.begin(), s.end());
            if (method != Method::PC) {
                for (const VarLag& v : lp.parents[j]) {
                    if (v != x) ASSERT_TRUE(has(v));
                    expected.push_back(v);
                }
            }
            if (method == Method::PCMCIplus) {
                for (const VarLag& v : lp.parents[x.var]) {
                    const VarLag sv = shifted(v, x.lag);
                    if (sv != x && sv != VarLag{j, 0}) ASSERT_TRUE(has(sv));
                    expected.push_back(sv);
                }
            }
            for (const VarLag& v : z) ASSERT_NE(std::find(expected.begin(), expected.end(), v), expected.end());
        }
    }
    EXPECT_THROW(build_conditions(Method::PCMCIplus, {0, 1}, 1, {}, nullptr, 2), InvalidInput);
}

TEST(Skeleton, BookkeepingTracksExtremes) {
    Rng rng(17);
    int done = 0;
    for (int rep = 0; done < 20; ++rep) {
        const ScmModel m = random_linear_model(rng, 4, 2);
        Rng sim(100 + rep);
        const auto d = simulate(m, 300, kDefaultBurnIn, sim);
        if (!d) continue;
        ++done;
        ParCorrTest base(*d, 4);
        RecordingTest lagged_rec(base);
        const LaggedParentSets lp = lagged_phase(4, 2, 0.05, lagged_rec);
        for (const auto& [key, ext] : lagged_rec.seen_) {
            const auto [i, j, tau] = key;
            ASSERT_EQ(lp.i_min.get(i, j, tau), ext.first);
            ASSERT_EQ(lp.p_max.get(i, j, tau), ext.second);
        }
        for (Method method : {Method::PC, Method::PCMCIplus0, Method::PCMCIplus}) {
            RecordingTest rec(base);
            const SkeletonResult sk = contemp_phase(4, 2, 0.05, rec, method, method == Method::PC ? nullptr : &lp);
            for (const auto& [key, ext] : rec.seen_) {
                const auto [i, j, tau] = key;
                ASSERT_EQ(sk.i_min.get(i, j, tau), ext.first);
                ASSERT_EQ(sk.p_max.get(i, j, tau), ext.second);
            }
            // every removed link has a separating set whose test exceeded alpha
            for (int i = 0; i < 4; ++i) {
                for (int j = 0; j < 4; ++j) {
                    for (int tau = 0; tau <= 2; ++tau) {
                        if (tau == 0 && i == j) continue;
                        if (sk.graph.mark(i, j, tau) != LinkMark::Absent) continue;
                        EXPECT_TRUE(sk.sepsets.contains({i, tau}, {j, 0}));
                        EXPECT_GT(sk.p_max.get(i, j, tau), 0.05);
                    }
                }
            }
        }
    }
}

TEST(Skeleton, PcStableIndependentOfVariableOrder) {
    Rng rng(99);
    for (int rep = 0; rep < 10; ++rep) {
        const ScmModel m = random_linear_model(rng, 4, 1);
        const Dataset d = simulate_checked(m, 300, 900 + rep);
        std::vector<int> perm{0, 1, 2, 3};
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd pv(d.values.rows(), 4);
        for (int v = 0; v < 4; ++v) pv.col(perm[v]) = d.values.col(v);
        const Dataset dp(pv, default_var_names(4));
        ParCorrTest a(d, 1), b(dp, 1);
        const SkeletonResult sa = contemp_phase(4, 1, 0.05, a, Method::PC, nullptr);
        const SkeletonResult sb = contemp_phase(4, 1, 0.05, b, Method::PC, nullptr);
        EXPECT_EQ(relabel(sa.graph, perm), sb.graph) << "rep " << rep;
    }
}

TEST(Skeleton, BothSidedConditioningFindsMoreContemporaneousLinks) {
    BenchConfig cfg;
    cfg.autocorr = {0.95};
    cfg.n_vars = {5};
    cfg.t_len = {200};
    cfg.tau_max = {2};
    cfg.alpha = {0.01};
    cfg.methods = {Method::PCMCIplus, Method::PCMCIplus0};
    cfg.n_realizations = 100;
    cfg.base_seed = 11;
    const SweepResult r = run_sweep(cfg);
    ASSERT_EQ(r.rows.size(), 2u);
    const auto plus = r.rows[0].summary.fields.at("tpr_contemp");
    const auto zero = r.rows[1].summary.fields.at("tpr_contemp");
    ASSERT_TRUE(plus.mean && zero.mean);
    EXPECT_GT(*plus.mean, *zero.mean) << *plus.mean << " vs " << *zero.mean;
}
