#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "pcmci/errors.hpp"
#include "pcmci/scm.hpp"

namespace pcmci {

namespace {

std::string func_name(CouplingFunc f) { return f == CouplingFunc::Linear ? "linear" : "f2"; }

CouplingFunc func_from_string(const std::string& s) {
    if (s == "linear") return CouplingFunc::Linear;
    if (s == "f2") return CouplingFunc::F2;
    throw InvalidInput("unknown coupling function '" + s + "'");
}

std::string noise_name(NoiseDist d) { return d == NoiseDist::Gaussian ? "gaussian" : "weibull"; }

NoiseDist noise_from_string(const std::string& s) {
    if (s == "gaussian") return NoiseDist::Gaussian;
    if (s == "weibull") return NoiseDist::Weibull;
    throw InvalidInput("unknown noise distribution '" + s + "'");
}

constexpr double kCoeffLow = 0.1;
constexpr double kCoeffHigh = 0.5;

}  // namespace

std::string setup_name(Setup s) {
    switch (s) {
        case Setup::LinearGaussian: return "linear-gaussian";
        case Setup::LinearMixed: return "linear-mixed";
        case Setup::NonlinearMixed: return "nonlinear-mixed";
    }
    return "";
}

Setup setup_from_string(const std::string& s) {
    if (s == "linear-gaussian") return Setup::LinearGaussian;
    if (s == "linear-mixed") return Setup::LinearMixed;
    if (s == "nonlinear-mixed") return Setup::NonlinearMixed;
    throw InvalidInput("unknown setup '" + s + "'");
}

void ScmModel::validate() const {
    if (n_vars < 1) throw InvalidInput("model needs at least one variable");
    if (static_cast<int>(autocoeffs.size()) != n_vars || static_cast<int>(noise.size()) != n_vars) {
        throw InvalidInput("model needs one autocoefficient and one noise spec per variable");
    }
    for (double a : autocoeffs) {
        if (!(a >= 0.0 && a < 1.0)) throw InvalidInput("autocoefficients must lie in [0, 1)");
    }
    for (const NoiseSpec& ns : noise) {
        if (!(ns.std > 0.0) || !std::isfinite(ns.std)) throw InvalidInput("noise std must be positive");
    }
    std::set<std::tuple<int, int, int>> seen;
    for (const ScmLink& l : links) {
        if (l.target < 0 || l.target >= n_vars || l.source < 0 || l.source >= n_vars) {
            throw InvalidInput("link references an unknown variable");
        }
        if (l.source == l.target) throw InvalidInput("cross-links must join distinct variables");
        if (l.lag < 0) throw InvalidInput("link lags must be non-negative");
        const double m = std::abs(l.coeff);
        if (!(m >= kCoeffLow - 1e-12 && m <= kCoeffHigh + 1e-12)) {
            throw InvalidInput("link coefficients must satisfy 0.1 <= |c| <= 0.5");
        }
        if (!seen.emplace(l.target, l.source, l.lag).second) throw InvalidInput("duplicate link in model");
    }
    (void)topological_order();
}

int ScmModel::max_lag() const {
    int m = 0;
    for (const ScmLink& l : links) m = std::max(m, l.lag);
    for (double a : autocoeffs) {
        if (a != 0.0) m = std::max(m, 1);
    }
    return m;
}

bool ScmModel::is_linear() const {
    return std::all_of(links.begin(), links.end(), [](const ScmLink& l) { return l.func == CouplingFunc::Linear; });
}

std::vector<int> ScmModel::topological_order() const {
    std::vector<int> indegree(n_vars, 0);
    std::vector<std::vector<int>> out(n_vars);
    for (const ScmLink& l : links) {
        if (l.lag != 0) continue;
        out[l.source].push_back(l.target);
        ++indegree[l.target];
    }
    std::set<int> ready;
    for (int v = 0; v < n_vars; ++v) {
        if (indegree[v] == 0) ready.insert(v);
    }
    std::vector<int> order;
    while (!ready.empty()) {
        const int v = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(v);
        for (int w : out[v]) {
            if (--indegree[w] == 0) ready.insert(w);
        }
    }
    if (static_cast<int>(order.size()) != n_vars) throw InvalidInput("contemporaneous links contain a cycle");
    return order;
}

ScmModel empty_model(int n_vars, double noise_std) {
    ScmModel m;
    m.n_vars = n_vars;
    m.autocoeffs.assign(n_vars, 0.0);
    m.noise.assign(n_vars, NoiseSpec{NoiseDist::Gaussian, noise_std});
    return m;
}

int GenConfig::cross_links() const {
    if (n_cross_links) return *n_cross_links;
    if (n_vars == 2) return 1;
    return static_cast<int>(std::floor(1.5 * n_vars));
}

void GenConfig::validate() const {
    if (n_vars < 1) throw InvalidInput("n_vars must be positive");
    if (!(autocorr >= 0.0 && autocorr < 1.0)) throw InvalidInput("autocorrelation must lie in [0, 1)");
    if (!(frac_contemporaneous >= 0.0 && frac_contemporaneous <= 1.0)) {
        throw InvalidInput("contemporaneous fraction must lie in [0, 1]");
    }
    if (min_lag < 1 || max_lag < min_lag) throw InvalidInput("lag range must satisfy 1 <= min <= max");
    if (!(coeff_min > 0.0 && coeff_max >= coeff_min)) throw InvalidInput("coefficient range is empty");
    if (!(std_min > 0.0 && std_max >= std_min)) throw InvalidInput("noise std range is empty");
    const int total = cross_links();
    const int n_cont = static_cast<int>(std::lround(frac_contemporaneous * total));
    const long pairs = static_cast<long>(n_vars) * (n_vars - 1);
    if (total < 0 || n_cont > pairs / 2 || total - n_cont > pairs * (max_lag - min_lag + 1)) {
        throw InvalidInput("too many cross-links for " + std::to_string(n_vars) + " variables");
    }
}

ScmModel draw_model(const GenConfig& cfg, Rng& rng) {
    cfg.validate();
    const int n = cfg.n_vars;
    ScmModel m;
    m.n_vars = n;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> auto_dist(std::max(0.0, cfg.autocorr - 0.3), cfg.autocorr);
    std::uniform_real_distribution<double> std_dist(cfg.std_min, cfg.std_max);
    for (int j = 0; j < n; ++j) {
        m.autocoeffs.push_back(auto_dist(rng));
        NoiseSpec ns;
        ns.std = std_dist(rng);
        if (cfg.setup == Setup::LinearMixed) {
            ns.dist = unit(rng) < 0.5 ? NoiseDist::Gaussian : NoiseDist::Weibull;
        } else if (cfg.setup == Setup::NonlinearMixed) {
            ns.dist = unit(rng) < 0.66 ? NoiseDist::Gaussian : NoiseDist::Weibull;
        }
        m.noise.push_back(ns);
    }

    std::vector<int> rank(n);
    std::iota(rank.begin(), rank.end(), 0);
    std::shuffle(rank.begin(), rank.end(), rng);
    const int total = cfg.cross_links();
    const int n_cont = static_cast<int>(std::lround(cfg.frac_contemporaneous * total));
    std::uniform_int_distribution<int> var_dist(0, n - 1);
    std::uniform_int_distribution<int> lag_dist(cfg.min_lag, cfg.max_lag);
    std::uniform_real_distribution<double> mag_dist(cfg.coeff_min, cfg.coeff_max);
    std::set<std::tuple<int, int, int>> used;
    for (int k = 0; k < total; ++k) {
        ScmLink l;
        while (true) {
            int i = var_dist(rng);
            int j = var_dist(rng);
            if (i == j) continue;
            const int lag = k < n_cont ? 0 : lag_dist(rng);
            if (lag == 0 && rank[i] > rank[j]) std::swap(i, j);
            if (used.emplace(j, i, lag).second) {
                l.source = i;
                l.target = j;
                l.lag = lag;
                break;
            }
        }
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        l.coeff = sign * mag_dist(rng);
        if (cfg.setup == Setup::NonlinearMixed && unit(rng) < 0.5) l.func = CouplingFunc::F2;
        m.links.push_back(l);
    }
    std::sort(m.links.begin(), m.links.end(), [](const ScmLink& a, const ScmLink& b) {
        return std::tie(a.target, a.lag, a.source) < std::tie(b.target, b.lag, b.source);
    });
    return m;
}

double f2(double x) { return (1.0 + 5.0 * x * std::exp(-x * x / 20.0)) * x; }

TimeSeriesGraph true_graph(const ScmModel& model, int tau_max) {
    model.validate();
    if (tau_max < model.max_lag()) throw InvalidInput("tau_max is smaller than the largest model lag");
    TimeSeriesGraph g(model.n_vars, tau_max);
    for (int j = 0; j < model.n_vars; ++j) {
        if (model.autocoeffs[j] != 0.0 && tau_max >= 1) g.set_mark(j, j, 1, LinkMark::DirectedToLater);
    }
    for (const ScmLink& l : model.links) g.set_mark(l.source, l.target, l.lag, LinkMark::DirectedToLater);
    return g;
}

LaggedDag to_lagged_dag(const ScmModel& model) {
    LaggedDag dag;
    dag.n_vars = model.n_vars;
    dag.parents.assign(model.n_vars, {});
    for (int j = 0; j < model.n_vars; ++j) {
        if (model.autocoeffs[j] != 0.0) dag.parents[j].push_back({j, 1});
    }
    for (const ScmLink& l : model.links) dag.parents[l.target].push_back({l.source, l.lag});
    for (auto& ps : dag.parents) std::sort(ps.begin(), ps.end());
    return dag;
}

nlohmann::json model_to_json(const ScmModel& model) {
    nlohmann::json j;
    j["n_vars"] = model.n_vars;
    j["autocoeffs"] = model.autocoeffs;
    nlohmann::json noise = nlohmann::json::array();
    for (const NoiseSpec& ns : model.noise) noise.push_back({{"dist", noise_name(ns.dist)}, {"std", ns.std}});
    j["noise"] = noise;
    nlohmann::json links = nlohmann::json::array();
    for (const ScmLink& l : model.links) {
        links.push_back({{"target", l.target},
                         {"source", l.source},
                         {"lag", l.lag},
                         {"coeff", l.coeff},
                         {"func", func_name(l.func)}});
    }
    j["links"] = links;
    return j;
}

ScmModel model_from_json(const nlohmann::json& j) {
    ScmModel m;
    try {
        m.n_vars = j.at("n_vars").get<int>();
        m.autocoeffs = j.at("autocoeffs").get<std::vector<double>>();
        for (const auto& ns : j.at("noise")) {
            m.noise.push_back({noise_from_string(ns.value("dist", "gaussian")), ns.at("std").get<double>()});
        }
        for (const auto& l : j.at("links")) {
            m.links.push_back({l.at("target").get<int>(), l.at("source").get<int>(), l.at("lag").get<int>(),
                               l.at("coeff").get<double>(), func_from_string(l.value("func", "linear"))});
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed model JSON: ") + e.what());
    }
    m.validate();
    return m;
}

}  // namespace pcmci
