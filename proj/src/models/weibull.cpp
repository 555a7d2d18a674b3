#include "loci/models/weibull.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loci {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double weibull_cdf(double x, const WeibullParams& p) {
    if (x <= p.tau) return 0.0;
    double z = (x - p.tau) / p.a;
    return -std::expm1(-std::pow(z, p.b));
}

double mps_objective(double a, double b, double tau, const std::vector<double>& sorted_sample) {
    const std::size_t n = sorted_sample.size();
    if (n == 0) throw InputError("mps_objective: empty sample");
    if (!(a > 0.0) || !(b > 0.0)) return kNegInf;
    if (!(tau < sorted_sample.front())) return kNegInf;

    WeibullParams p{a, b, tau};
    double total = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double cur = weibull_cdf(sorted_sample[i], p);
        total += std::log(std::max(cur - prev, 1e-300));
        prev = cur;
    }
    total += std::log(std::max(1.0 - prev, 1e-300));
    return total;
}

namespace {

double sorted_quantile(const std::vector<double>& sorted, double q) {
    const std::size_t n = sorted.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    idx = std::clamp<std::size_t>(idx, 1, n);
    return sorted[idx - 1];
}

// Quantile-matching start for a candidate location: with tau fixed, the shape
// follows from the ratio of two centered sample quantiles and the scale from
// back-substitution.
void quantile_matching_start(const std::vector<double>& sorted, double tau, double& a0,
                             double& b0) {
    const double q1 = 0.25, q2 = 0.75;
    const double l1 = -std::log1p(-q1), l2 = -std::log1p(-q2);
    double x1 = sorted_quantile(sorted, q1) - tau;
    double x2 = sorted_quantile(sorted, q2) - tau;
    x1 = std::max(x1, 1e-12);
    x2 = std::max(x2, x1 * (1.0 + 1e-9));
    b0 = std::log(l2 / l1) / std::log(x2 / x1);
    b0 = std::clamp(b0, 0.05, 50.0);
    a0 = x2 / std::pow(l2, 1.0 / b0);
    if (!(a0 > 0.0) || !std::isfinite(a0)) a0 = std::max(x2, 1e-6);
}

}  // namespace

MpsFit mps_estimate(const std::vector<double>& sample, const MpsFitOptions& opt) {
    if (sample.size() < 3) throw InputError("mps_estimate: need at least 3 observations");
    std::vector<double> sorted(sample);
    std::sort(sorted.begin(), sorted.end());

    const double x_min = sorted.front();
    const double span = sorted.back() - x_min;
    if (!(span > 0.0)) throw InputError("mps_estimate: sample is a single point");

    // Search space (log a, log b, u) with tau = x_min - exp(u), so every
    // iterate keeps tau strictly below the smallest observation. The gap is
    // capped at four sample ranges: beyond that the three-parameter family
    // degenerates toward its location-scale limit along a near-flat ridge
    // (tau -> -inf with the shape growing), where the location loses meaning.
    const double u_cap = std::log(opt.max_gap_ranges * span);
    Objective f = [&](const std::vector<double>& z) {
        double a = std::exp(z[0]);
        double b = std::exp(z[1]);
        double tau = x_min - std::exp(z[2]);
        return mps_objective(a, b, tau, sorted);
    };

    const double base_gap = std::max(span / static_cast<double>(sorted.size()), 1e-9);
    const double gap_ladder[4] = {0.1, 1.0, 4.0, 16.0};

    NelderMeadOptions nm;
    nm.budget = opt.budget_per_start;
    nm.tol = opt.tol;
    nm.project = [u_cap](std::vector<double>& z) { z[2] = std::min(z[2], u_cap); };
    const std::vector<double> scale{0.5, 0.5, 0.5};

    MpsFit best;
    best.objective = kNegInf;
    long total_evals = 0;
    bool any_converged = false;
    for (double g : gap_ladder) {
        double gap = g * base_gap;
        double tau0 = x_min - gap;
        double a0, b0;
        quantile_matching_start(sorted, tau0, a0, b0);
        ParamPoint start({std::log(a0), std::log(b0), std::log(gap)});
        OptResult r = nelder_mead(f, start, scale, nm);
        total_evals += r.evaluations;
        any_converged = any_converged || r.converged;
        if (r.value > best.objective) {
            best.objective = r.value;
            best.params.a = std::exp(r.point[0]);
            best.params.b = std::exp(r.point[1]);
            best.params.tau = x_min - std::exp(r.point[2]);
            best.converged = r.converged;
        }
    }
    best.evaluations = total_evals;
    if (!any_converged) best.converged = false;
    if (!std::isfinite(best.objective))
        throw NumericError("mps_estimate: no feasible point found");
    return best;
}

Dataset WeibullModel::simulate(const ParamPoint& phi, int n, RngStream stream) const {
    WeibullParams p{phi[0], phi[1], phi[2]};
    p.validate();
    Dataset x(n);
    for (int i = 0; i < n; ++i) {
        double u = stream.next_double();
        x[i] = p.tau + p.a * std::pow(-std::log1p(-u), 1.0 / p.b);
    }
    return x;
}

ParamPoint WeibullModel::estimate(const Dataset& data, Diag* diag) const {
    MpsFit fit = mps_estimate(data, fit_);
    if (!fit.converged && diag) diag->optimizer_nonconverged += 1;
    return ParamPoint({fit.params.a, fit.params.b, fit.params.tau});
}

double WeibullModel::target_estimate(const Dataset& data, Diag* diag) const {
    MpsFit fit = mps_estimate(data, fit_);
    if (!fit.converged && diag) diag->optimizer_nonconverged += 1;
    return fit.params.tau;
}

Region WeibullModel::neighborhood(const ParamPoint& theta_hat, int n, double delta) const {
    const double b_hat = theta_hat[1];
    const double width = delta * 4.0 * std::exp(-std::pow(1.0 / b_hat, 5.0)) *
                         std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
    std::vector<double> lo{std::max(0.0, theta_hat[0] - width),
                           std::max(0.0, theta_hat[1] - width), theta_hat[2] - width};
    std::vector<double> hi{theta_hat[0] + width, theta_hat[1] + width, theta_hat[2] + width};
    return Region(std::move(lo), std::move(hi), Constraint::positive({0, 1}));
}

}  // namespace loci
