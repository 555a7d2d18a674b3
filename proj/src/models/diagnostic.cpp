#include "loci/models/diagnostic.hpp"

#include <algorithm>
#include <cmath>

#include "loci/math_util.hpp"

namespace loci {

Dataset BinomialModel::simulate(const ParamPoint& phi, int n, RngStream stream) const {
    const double pi = phi[0];
    if (!(pi >= 0.0 && pi <= 1.0)) throw InputError("binomial: pi outside [0,1]");
    int x = 0;
    for (int i = 0; i < n; ++i)
        if (stream.next_double() < pi) ++x;
    return Dataset{static_cast<double>(x), static_cast<double>(n)};
}

ParamPoint BinomialModel::estimate(const Dataset& data, Diag*) const {
    const double x = data[0];
    const double n = data[1];
    return ParamPoint({(x + 0.5) / (n + 1.0)});
}

int BinomialModel::sample_size(const Dataset& data) const {
    return static_cast<int>(std::llround(data[1]));
}

Region BinomialModel::neighborhood(const ParamPoint& theta_hat, int n, double delta) const {
    if (!(delta > 0.0)) throw InputError("binomial: delta must be positive");
    const double w = delta * std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
    return Region({std::max(1e-9, theta_hat[0] - w)}, {std::min(1.0 - 1e-9, theta_hat[0] + w)});
}

double BinomialModel::log_density(const Dataset& data, const ParamPoint& phi) const {
    const double pi = phi[0];
    if (!(pi > 0.0 && pi < 1.0)) throw InputError("binomial: density needs pi in (0,1)");
    const int x = static_cast<int>(std::llround(data[0]));
    const int n = static_cast<int>(std::llround(data[1]));
    return log_choose(n, x) + x * std::log(pi) + (n - x) * std::log1p(-pi);
}

Region BinomialModel::restrict_to_null(Region region) const {
    if (!pi0_) return region;
    region.upper[0] = std::min(region.upper[0], *pi0_);
    region.lower[0] = std::min(region.lower[0], region.upper[0]);
    return region;
}

Dataset NormalMeanModel::simulate(const ParamPoint& phi, int n, RngStream stream) const {
    const double sd = 1.0 / std::sqrt(static_cast<double>(n));
    return Dataset{phi[0] + sd * stream.next_normal()};
}

Region NormalMeanModel::neighborhood(const ParamPoint& theta_hat, int n, double delta) const {
    if (!(delta > 0.0)) throw InputError("normal-mean: delta must be positive");
    const double w = delta * std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
    return Region({theta_hat[0] - w}, {theta_hat[0] + w});
}

double NormalMeanModel::log_density(const Dataset& data, const ParamPoint& phi) const {
    // density of the sufficient statistic: xbar ~ N(phi, 1/n); the likelihood
    // ratio between parameter points equals the full-sample ratio exactly
    const double n = static_cast<double>(n_);
    const double d = data[0] - phi[0];
    return 0.5 * std::log(n / (2.0 * M_PI)) - 0.5 * n * d * d;
}

Region NormalMeanModel::restrict_to_null(Region region) const {
    if (!mu0_) return region;
    region.upper[0] = std::min(region.upper[0], *mu0_);
    region.lower[0] = std::min(region.lower[0], region.upper[0]);
    return region;
}

}  // namespace loci
