#include <algorithm>
#include <cmath>

#include "pcmci/errors.hpp"
#include "pcmci/skeleton.hpp"

namespace pcmci {

std::string method_name(Method m) {
    switch (m) {
        case Method::PC: return "pc";
        case Method::PCMCIplus0: return "pcmci0";
        case Method::PCMCIplus: return "pcmci+";
    }
    return "";
}

Method method_from_string(const std::string& s) {
    if (s == "pc") return Method::PC;
    if (s == "pcmci0") return Method::PCMCIplus0;
    if (s == "pcmci+") return Method::PCMCIplus;
    throw InvalidInput("unknown method '" + s + "'");
}

int window_lag(Method m, int tau_max) { return m == Method::PCMCIplus ? 2 * tau_max : tau_max; }

LinkTable::LinkTable(int n_vars, int tau_max, double fill)
    : n_vars_(n_vars), tau_max_(tau_max), values_(static_cast<std::size_t>(n_vars) * n_vars * (tau_max + 1), fill) {}

std::size_t LinkTable::index(int i, int j, int tau) const {
    if (i < 0 || j < 0 || i >= n_vars_ || j >= n_vars_ || tau < 0 || tau > tau_max_) {
        throw InvalidInput("link slot out of range");
    }
    if (tau == 0 && j < i) std::swap(i, j);
    return (static_cast<std::size_t>(i) * n_vars_ + j) * (tau_max_ + 1) + tau;
}

bool LinkTable::operator==(const LinkTable& other) const {
    if (n_vars_ != other.n_vars_ || tau_max_ != other.tau_max_) return false;
    for (std::size_t k = 0; k < values_.size(); ++k) {
        const double a = values_[k];
        const double b = other.values_[k];
        if (!(a == b || (std::isnan(a) && std::isnan(b)))) return false;
    }
    return true;
}

void SepSetStore::store(VarLag a, VarLag b, std::vector<VarLag> s) {
    std::sort(s.begin(), s.end());
    sets_[std::minmax(a, b)] = std::move(s);
}

const std::vector<VarLag>* SepSetStore::find(VarLag a, VarLag b) const {
    auto it = sets_.find(std::minmax(a, b));
    return it == sets_.end() ? nullptr : &it->second;
}

namespace {

void record_test(LinkTable& p_max, LinkTable& val, int i, int j, int tau, const CiOutcome& out) {
    const double prev = p_max.get(i, j, tau);
    if (std::isnan(prev) || out.p_value > prev) {
        p_max.set(i, j, tau, out.p_value);
        val.set(i, j, tau, out.statistic);
    }
}

}  // namespace

LaggedParentSets lagged_phase(int n_vars, int tau_max, double alpha, CiTest& ci) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
    if (tau_max < 1) throw InvalidInput("the lagged phase requires tau_max >= 1");
    if (n_vars < 1) throw InvalidInput("n_vars must be >= 1");

    LaggedParentSets res;
    res.n_vars = n_vars;
    res.tau_max = tau_max;
    res.i_min = LinkTable(n_vars, tau_max, std::numeric_limits<double>::infinity());
    res.p_max = LinkTable(n_vars, tau_max);
    res.val_at_pmax = LinkTable(n_vars, tau_max);
    res.parents.resize(n_vars);

    for (int j = 0; j < n_vars; ++j) {
        const VarLag target{j, 0};
        std::vector<VarLag> b;
        for (int i = 0; i < n_vars; ++i) {
            for (int tau = 1; tau <= tau_max; ++tau) b.push_back({i, tau});
        }
        auto by_strength = [&](const VarLag& u, const VarLag& v) {
            const double iu = res.i_min.get(u.var, j, u.lag);
            const double iv = res.i_min.get(v.var, j, v.lag);
            if (iu != iv) return iu > iv;
            return u < v;
        };
        for (int p = 0; !b.empty() && static_cast<int>(b.size()) - 1 >= p; ++p) {
            std::vector<VarLag> removed;
            for (const VarLag& x : b) {
                std::vector<VarLag> s;
                for (const VarLag& v : b) {
                    if (static_cast<int>(s.size()) == p) break;
                    if (v != x) s.push_back(v);
                }
                const CiOutcome out = ci.run(x, target, s);
                ++res.n_tests;
                const double cur = res.i_min.get(x.var, j, x.lag);
                res.i_min.set(x.var, j, x.lag, std::min(std::abs(out.statistic), cur));
                record_test(res.p_max, res.val_at_pmax, x.var, j, x.lag, out);
                if (out.p_value > alpha) {
                    removed.push_back(x);
                    res.sepsets.store(x, target, s);
                }
            }
            std::erase_if(b, [&](const VarLag& v) { return std::find(removed.begin(), removed.end(), v) != removed.end(); });
            std::sort(b.begin(), b.end(), by_strength);
        }
        res.parents[j] = b;
    }
    return res;
}

}  // namespace pcmci
