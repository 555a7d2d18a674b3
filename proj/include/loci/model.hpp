#pragma once

#include <string>

#include "loci/common.hpp"
#include "loci/param.hpp"
#include "loci/rng.hpp"

namespace loci {

/// Pluggable statistical model. A model knows how to simulate data at a
/// parameter point, estimate the parameter back, and build a neighborhood
/// around an estimate. Test statistic, scalar target functional and log
/// density are optional capabilities.
///
/// Implementations must be stateless with respect to calls: simulate is a
/// pure function of (phi, n, stream) and every method is safe to call from
/// multiple threads concurrently.
class Model {
public:
    virtual ~Model() = default;

    virtual std::string id() const = 0;
    virtual std::size_t param_dim() const = 0;
    virtual int default_sample_size() const = 0;

    virtual Dataset simulate(const ParamPoint& phi, int n, RngStream stream) const = 0;
    virtual ParamPoint estimate(const Dataset& data, Diag* diag = nullptr) const = 0;
    virtual int sample_size(const Dataset& data) const { return static_cast<int>(data.size()); }

    virtual bool has_statistic() const { return false; }
    virtual double statistic(const Dataset&, Diag* = nullptr) const {
        throw InputError(id() + ": no test statistic defined");
    }

    virtual bool has_target() const { return false; }
    virtual double target(const ParamPoint&) const {
        throw InputError(id() + ": no target functional defined");
    }
    virtual double target_estimate(const Dataset&, Diag* = nullptr) const {
        throw InputError(id() + ": no target estimator defined");
    }

    virtual Region neighborhood(const ParamPoint& theta_hat, int n, double delta) const = 0;

    virtual bool has_log_density() const { return false; }
    virtual double log_density(const Dataset&, const ParamPoint&) const {
        throw InputError(id() + ": no log density defined");
    }

    /// Restricts a neighborhood to the null parameter set (used by the test
    /// operations). Default: the full space is the null.
    virtual Region restrict_to_null(Region region) const { return region; }
};

}  // namespace loci
