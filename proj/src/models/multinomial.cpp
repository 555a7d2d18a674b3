#include "loci/models/multinomial.hpp"

#include <algorithm>
#include <cmath>

namespace loci {

Dataset MultinomialModel::simulate(const ParamPoint& phi, int n, RngStream stream) const {
    if (static_cast<int>(phi.dim()) != k_) throw InputError("multinomial: wrong parameter dimension");
    if (n < 0) throw InputError("multinomial: negative sample size");

    // Sequential binomial conditioning: cell i gets Binomial(remaining,
    // pi_i / remaining mass), realized by counting uniforms. Exact and
    // seed-stable across platforms.
    Dataset counts(k_, 0.0);
    int remaining = n;
    double mass = 1.0;
    for (int i = 0; i + 1 < k_ && remaining > 0; ++i) {
        double p = mass > 0.0 ? std::clamp(phi[i] / mass, 0.0, 1.0) : 0.0;
        int c = 0;
        for (int j = 0; j < remaining; ++j)
            if (stream.next_double() < p) ++c;
        counts[i] = static_cast<double>(c);
        remaining -= c;
        mass -= phi[i];
    }
    counts[k_ - 1] = static_cast<double>(remaining);
    return counts;
}

ParamPoint jeffreys_estimate(const Dataset& counts, int n, int k) {
    if (static_cast<int>(counts.size()) != k) throw InputError("jeffreys_estimate: wrong length");
    std::vector<double> pi(k);
    const double denom = static_cast<double>(n) + static_cast<double>(k) / 2.0;
    for (int i = 0; i < k; ++i) pi[i] = (counts[i] + 0.5) / denom;
    return ParamPoint(std::move(pi));
}

double pi_max(const ParamPoint& phi) {
    double best = phi[0];
    for (std::size_t i = 1; i < phi.dim(); ++i) best = std::max(best, phi[i]);
    return best;
}

ParamPoint MultinomialModel::estimate(const Dataset& data, Diag*) const {
    return jeffreys_estimate(data, sample_size(data), k_);
}

int MultinomialModel::sample_size(const Dataset& data) const {
    double s = 0.0;
    for (double c : data) s += c;
    return static_cast<int>(std::llround(s));
}

double MultinomialModel::target(const ParamPoint& phi) const { return pi_max(phi); }

double MultinomialModel::target_estimate(const Dataset& data, Diag*) const {
    return pi_max(jeffreys_estimate(data, sample_size(data), k_));
}

Region MultinomialModel::neighborhood(const ParamPoint& theta_hat, int n, double delta) const {
    if (!(delta > 0.0)) throw InputError("multinomial: delta must be positive");
    const double w = delta * std::log(static_cast<double>(n)) / std::sqrt(static_cast<double>(n));
    std::vector<double> lo(k_), hi(k_);
    for (int i = 0; i < k_; ++i) {
        lo[i] = std::max(0.0, theta_hat[i] - w);
        hi[i] = std::min(1.0, theta_hat[i] + w);
    }
    return Region(std::move(lo), std::move(hi), Constraint::simplex());
}

}  // namespace loci
