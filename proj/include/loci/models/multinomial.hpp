#pragma once

#include "loci/model.hpp"

namespace loci {

/// Interval estimation for the maximum cell probability under multinomial
/// sampling. The parameter point is the probability vector itself; datasets
/// are cell-count vectors.
class MultinomialModel : public Model {
public:
    MultinomialModel(int k, int n) : k_(k), n_(n) {
        if (k < 2) throw InputError("multinomial: k must be >= 2");
        if (n < 0) throw InputError("multinomial: n must be >= 0");
    }

    std::string id() const override { return "multinomial"; }
    std::size_t param_dim() const override { return static_cast<std::size_t>(k_); }
    int default_sample_size() const override { return n_; }

    Dataset simulate(const ParamPoint& phi, int n, RngStream stream) const override;
    ParamPoint estimate(const Dataset& data, Diag* diag = nullptr) const override;
    int sample_size(const Dataset& data) const override;

    bool has_target() const override { return true; }
    double target(const ParamPoint& phi) const override;
    double target_estimate(const Dataset& data, Diag* diag = nullptr) const override;

    Region neighborhood(const ParamPoint& theta_hat, int n, double delta) const override;

    int k() const { return k_; }

private:
    int k_;
    int n_;
};

/// Posterior-mean estimate under the Jeffreys prior: (X_i + 1/2)/(n + k/2).
ParamPoint jeffreys_estimate(const Dataset& counts, int n, int k);

/// Maximum cell probability of a probability vector.
double pi_max(const ParamPoint& phi);

}  // namespace loci
