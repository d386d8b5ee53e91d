#include <cmath>

#include "pcmci/errors.hpp"
#include "pcmci/scm.hpp"

namespace pcmci {

namespace {

double coupling(CouplingFunc f, double x) { return f == CouplingFunc::Linear ? x : f2(x); }

}  // namespace

std::optional<Dataset> simulate(const ScmModel& model, int t_len, int burn_in, Rng& rng) {
    model.validate();
    if (t_len < 1) throw InvalidInput("T must be positive");
    if (burn_in < model.max_lag()) throw InvalidInput("burn-in must cover the largest model lag");
    if (model.is_linear() && !is_stationary(model)) return std::nullopt;

    const int n = model.n_vars;
    const int total = burn_in + t_len;
    const std::vector<int> order = model.topological_order();
    std::vector<std::vector<const ScmLink*>> incoming(n);
    for (const ScmLink& l : model.links) incoming[l.target].push_back(&l);

    // Weibull(shape 2, scale 2) has mean sqrt(pi) and variance 4 - pi.
    const double weibull_mean = std::sqrt(M_PI);
    const double weibull_sd = std::sqrt(4.0 - M_PI);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::weibull_distribution<double> weibull(2.0, 2.0);

    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total, n);
    for (int t = 0; t < total; ++t) {
        for (int j : order) {
            const NoiseSpec& ns = model.noise[j];
            const double eta =
                ns.dist == NoiseDist::Gaussian ? gauss(rng) : (weibull(rng) - weibull_mean) / weibull_sd;
            double v = ns.std * eta;
            if (t >= 1) v += model.autocoeffs[j] * x(t - 1, j);
            for (const ScmLink* l : incoming[j]) {
                if (t - l->lag >= 0) v += l->coeff * coupling(l->func, x(t - l->lag, l->source));
            }
            if (!std::isfinite(v) || std::abs(v) > kDivergenceBound) return std::nullopt;
            x(t, j) = v;
        }
    }
    return Dataset(x.bottomRows(t_len), default_var_names(n));
}

}  // namespace pcmci
