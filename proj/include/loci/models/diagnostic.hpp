#pragma once

#include <optional>

#include "loci/model.hpp"

namespace loci {

/// One-sided binomial testing/estimation model used for exact-enumeration
/// checks and CLI smoke runs: every operation here has a closed-form oracle.
/// Datasets are (successes, trials); the statistic is the success count and
/// the null is pi <= pi0.
class BinomialModel : public Model {
public:
    BinomialModel(int n, std::optional<double> pi0 = std::nullopt) : n_(n), pi0_(pi0) {
        if (n < 1) throw InputError("binomial: n must be >= 1");
        if (pi0 && !(*pi0 > 0.0 && *pi0 < 1.0))
            throw InputError("binomial: pi0 outside (0,1)");
    }

    std::string id() const override { return "binomial"; }
    std::size_t param_dim() const override { return 1; }
    int default_sample_size() const override { return n_; }

    Dataset simulate(const ParamPoint& phi, int n, RngStream stream) const override;
    ParamPoint estimate(const Dataset& data, Diag* diag = nullptr) const override;
    int sample_size(const Dataset& data) const override;

    bool has_statistic() const override { return true; }
    double statistic(const Dataset& data, Diag* = nullptr) const override { return data[0]; }

    bool has_target() const override { return true; }
    double target(const ParamPoint& phi) const override { return phi[0]; }
    double target_estimate(const Dataset& data, Diag* diag = nullptr) const override {
        return estimate(data, diag)[0];
    }

    Region neighborhood(const ParamPoint& theta_hat, int n, double delta) const override;

    bool has_log_density() const override { return true; }
    double log_density(const Dataset& data, const ParamPoint& phi) const override;

    /// Null set pi <= pi0 realized as a box intersection.
    Region restrict_to_null(Region region) const override;

private:
    int n_;
    std::optional<double> pi0_;
};

/// Gaussian location model with known unit variance, used by the calibration
/// and convergence checks. The sample mean is sufficient, so datasets carry
/// just that one draw (distributed N(phi, 1/n)); statistic, estimator and
/// importance ratio all coincide exactly with their full-sample versions.
class NormalMeanModel : public Model {
public:
    NormalMeanModel(int n, std::optional<double> mu0 = std::nullopt) : n_(n), mu0_(mu0) {
        if (n < 1) throw InputError("normal-mean: n must be >= 1");
    }

    std::string id() const override { return "normal-mean"; }
    std::size_t param_dim() const override { return 1; }
    int default_sample_size() const override { return n_; }

    Dataset simulate(const ParamPoint& phi, int n, RngStream stream) const override;
    ParamPoint estimate(const Dataset& data, Diag* = nullptr) const override {
        return ParamPoint({data[0]});
    }
    int sample_size(const Dataset&) const override { return n_; }

    bool has_statistic() const override { return true; }
    double statistic(const Dataset& data, Diag* = nullptr) const override { return data[0]; }

    bool has_target() const override { return true; }
    double target(const ParamPoint& phi) const override { return phi[0]; }
    double target_estimate(const Dataset& data, Diag* = nullptr) const override {
        return data[0];
    }

    Region neighborhood(const ParamPoint& theta_hat, int n, double delta) const override;

    bool has_log_density() const override { return true; }
    double log_density(const Dataset& data, const ParamPoint& phi) const override;

    Region restrict_to_null(Region region) const override;

private:
    int n_;
    std::optional<double> mu0_;
};

}  // namespace loci
