#include <algorithm>
#include <cmath>

#include "pcmci/errors.hpp"
#include "pcmci/scm.hpp"

namespace pcmci {

namespace {

struct ReducedForm {
    Eigen::MatrixXd b;                 // (I - A_0)^{-1}
    std::vector<Eigen::MatrixXd> phi;  // phi[k - 1] multiplies X_{t-k}
};

ReducedForm reduced_form(const ScmModel& model) {
    const int n = model.n_vars;
    const int p = std::max(1, model.max_lag());
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::MatrixXd> a(p, Eigen::MatrixXd::Zero(n, n));
    for (int j = 0; j < n; ++j) a[0](j, j) = model.autocoeffs[j];
    for (const ScmLink& l : model.links) {
        if (l.lag == 0) {
            a0(l.target, l.source) += l.coeff;
        } else {
            a[l.lag - 1](l.target, l.source) += l.coeff;
        }
    }
    ReducedForm rf;
    rf.b = (Eigen::MatrixXd::Identity(n, n) - a0).inverse();
    for (const auto& ak : a) rf.phi.push_back(rf.b * ak);
    return rf;
}

Eigen::MatrixXd companion(const ReducedForm& rf, int n) {
    const int p = static_cast<int>(rf.phi.size());
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n * p, n * p);
    for (int k = 0; k < p; ++k) f.block(0, k * n, n, n) = rf.phi[k];
    if (p > 1) f.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
    return f;
}

void require_linear(const ScmModel& model) {
    model.validate();
    if (!model.is_linear()) throw InvalidInput("model must be linear");
}

}  // namespace

double spectral_radius(const ScmModel& model) {
    require_linear(model);
    const ReducedForm rf = reduced_form(model);
    const Eigen::MatrixXd f = companion(rf, model.n_vars);
    const Eigen::EigenSolver<Eigen::MatrixXd> es(f, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(const ScmModel& model) { return !model.is_linear() || spectral_radius(model) < 1.0; }

LaggedCovariance analytic_covariance(const ScmModel& model, int max_lag) {
    require_linear(model);
    if (max_lag < 0) throw InvalidInput("max_lag must be non-negative");
    if (!is_stationary(model)) throw InvalidInput("model is not stationary");
    const int n = model.n_vars;
    const ReducedForm rf = reduced_form(model);
    const int p = static_cast<int>(rf.phi.size());
    const Eigen::MatrixXd f = companion(rf, n);

    Eigen::VectorXd var(n);
    for (int j = 0; j < n; ++j) var(j) = model.noise[j].std * model.noise[j].std;
    const Eigen::MatrixXd sigma_u = rf.b * var.asDiagonal() * rf.b.transpose();

    // Doubling iteration for S = F S F^T + Q.
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n * p, n * p);
    s.block(0, 0, n, n) = sigma_u;
    Eigen::MatrixXd power = f;
    for (int iter = 0; iter < 200; ++iter) {
        const Eigen::MatrixXd step = power * s * power.transpose();
        s += step;
        power = power * power;
        if (step.cwiseAbs().maxCoeff() <= 1e-17 * s.cwiseAbs().maxCoeff()) break;
    }

    LaggedCovariance out;
    out.gamma.resize(max_lag + 1);
    for (int h = 0; h <= max_lag && h < p; ++h) out.gamma[h] = s.block(0, h * n, n, n);
    auto gamma_at = [&](int h) -> Eigen::MatrixXd {
        return h >= 0 ? out.gamma[h] : Eigen::MatrixXd(out.gamma[-h].transpose());
    };
    for (int h = p; h <= max_lag; ++h) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
        for (int k = 1; k <= p; ++k) g += rf.phi[k - 1] * gamma_at(h - k);
        out.gamma[h] = g;
    }
    return out;
}

double LaggedCovariance::cov(VarLag a, VarLag b) const {
    const int h = std::abs(a.lag - b.lag);
    if (h >= static_cast<int>(gamma.size())) throw InvalidInput("lag difference exceeds the covariance table");
    if (a.lag <= b.lag) return gamma[h](a.var, b.var);
    return gamma[h](b.var, a.var);
}

Eigen::MatrixXd LaggedCovariance::covariance(const std::vector<VarLag>& nodes) const {
    const auto k = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXd c(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index s = 0; s < k; ++s) c(r, s) = cov(nodes[r], nodes[s]);
    }
    return c;
}

double population_partial_correlation(const LaggedCovariance& cov, VarLag x, VarLag y, const std::vector<VarLag>& z) {
    std::vector<VarLag> nodes{x, y};
    nodes.insert(nodes.end(), z.begin(), z.end());
    const Eigen::MatrixXd c = cov.covariance(nodes);
    Eigen::Matrix2d cond = c.topLeftCorner(2, 2);
    if (!z.empty()) {
        const Eigen::Index m = static_cast<Eigen::Index>(z.size());
        const Eigen::MatrixXd czz = c.bottomRightCorner(m, m);
        const Eigen::MatrixXd czxy = c.bottomLeftCorner(m, 2);
        cond -= czxy.transpose() * czz.ldlt().solve(czxy);
    }
    return cond(0, 1) / std::sqrt(cond(0, 0) * cond(1, 1));
}

}  // namespace pcmci
