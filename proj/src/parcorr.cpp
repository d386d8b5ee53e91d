#include <algorithm>
#include <cmath>

#include <boost/math/distributions/students_t.hpp>

#include "pcmci/citests.hpp"
#include "pcmci/errors.hpp"

namespace pcmci {

namespace {

constexpr double kEigenCutoff = 1e-10;
constexpr double kResidualCutoff = 1e-10;

}  // namespace

std::vector<VarLag> canonical_conditions(std::span<const VarLag> z) {
    std::vector<VarLag> out(z.begin(), z.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double parcorr_p_value(double r, int dof) {
    if (dof < 1) throw InsufficientData("partial correlation test needs at least one degree of freedom");
    r = std::clamp(r, -1.0, 1.0);
    if (std::abs(r) >= 1.0) return 0.0;
    const double t = std::abs(r) * std::sqrt(dof / (1.0 - r * r));
    const boost::math::students_t dist(dof);
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    return std::clamp(p, 0.0, 1.0);
}

ParCorrTest::ParCorrTest(const Dataset& data, int window_lag)
    : n_vars_(data.n_vars()), window_lag_(window_lag), n_(data.n_samples() - window_lag) {
    std::vector<VarLag> nodes;
    for (int lag = 0; lag <= window_lag; ++lag) {
        for (int v = 0; v < n_vars_; ++v) nodes.push_back({v, lag});
    }
    Eigen::MatrixXd x = build_lagged_samples(data, nodes, window_lag);
    x.rowwise() -= x.colwise().mean();
    gram_ = x.transpose() * x;
}

Eigen::Index ParCorrTest::column(VarLag v) const {
    if (v.var < 0 || v.var >= n_vars_ || v.lag < 0 || v.lag > window_lag_) {
        throw InvalidInput("node " + to_string(v) + " lies outside the sample window");
    }
    return static_cast<Eigen::Index>(v.lag) * n_vars_ + v.var;
}

CiOutcome ParCorrTest::run(VarLag x, VarLag y, std::span<const VarLag> z_in) {
    if (x == y) throw InvalidInput("CI test endpoints must differ");
    if (y < x) std::swap(x, y);
    const std::vector<VarLag> z = canonical_conditions(z_in);
    for (const VarLag& v : z) {
        if (v == x || v == y) throw InvalidInput("conditioning set contains an endpoint");
    }
    const int k = static_cast<int>(z.size());
    const int dof = n_ - k - 2;
    if (dof < 1) {
        throw InsufficientData("sample size " + std::to_string(n_) + " too small for " + std::to_string(k) +
                               " conditions");
    }
    const Eigen::Index cx = column(x);
    const Eigen::Index cy = column(y);
    double exx = gram_(cx, cx);
    double eyy = gram_(cy, cy);
    double exy = gram_(cx, cy);
    const double sxx = exx;
    const double syy = eyy;

    if (k > 0) {
        std::vector<Eigen::Index> cz;
        for (const VarLag& v : z) {
            const Eigen::Index c = column(v);
            if (gram_(c, c) > 0.0) cz.push_back(c);
        }
        const auto m = static_cast<Eigen::Index>(cz.size());
        if (m > 0) {
            Eigen::VectorXd scale(m);
            for (Eigen::Index a = 0; a < m; ++a) scale(a) = 1.0 / std::sqrt(gram_(cz[a], cz[a]));
            Eigen::MatrixXd corr(m, m);
            Eigen::MatrixXd rhs(m, 2);
            for (Eigen::Index a = 0; a < m; ++a) {
                for (Eigen::Index b = 0; b < m; ++b) corr(a, b) = gram_(cz[a], cz[b]) * scale(a) * scale(b);
                rhs(a, 0) = gram_(cz[a], cx) * scale(a);
                rhs(a, 1) = gram_(cz[a], cy) * scale(a);
            }
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
            const Eigen::VectorXd& lam = eig.eigenvalues();
            const double cutoff = kEigenCutoff * lam.maxCoeff();
            Eigen::MatrixXd proj = eig.eigenvectors().transpose() * rhs;
            Eigen::Matrix2d fitted = Eigen::Matrix2d::Zero();
            for (Eigen::Index a = 0; a < m; ++a) {
                if (lam(a) <= cutoff) continue;
                fitted += proj.row(a).transpose() * proj.row(a) / lam(a);
            }
            exx -= fitted(0, 0);
            eyy -= fitted(1, 1);
            exy -= fitted(0, 1);
        }
    }
    if (!(exx > kResidualCutoff * sxx) || !(eyy > kResidualCutoff * syy)) return {0.0, 1.0};
    const double r = std::clamp(exy / std::sqrt(exx * eyy), -1.0, 1.0);
    return {r, parcorr_p_value(r, dof)};
}

CiOutcome parcorr_test(VarLag x, VarLag y, std::span<const VarLag> z, const Dataset& data, int tau_max) {
    ParCorrTest test(data, tau_max);
    return test.run(x, y, z);
}

CiOutcome CachedCiTest::run(VarLag x, VarLag y, std::span<const VarLag> z) {
    std::vector<VarLag> key;
    key.reserve(z.size() + 2);
    key.push_back(std::min(x, y));
    key.push_back(std::max(x, y));
    const std::vector<VarLag> zs = canonical_conditions(z);
    key.insert(key.end(), zs.begin(), zs.end());
    {
        std::lock_guard lock(mutex_);
        ++calls_;
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const CiOutcome out = inner_.run(key[0], key[1], zs);
    std::lock_guard lock(mutex_);
    ++evaluations_;
    cache_.emplace(std::move(key), out);
    return out;
}

}  // namespace pcmci
