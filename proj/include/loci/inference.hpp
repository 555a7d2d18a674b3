#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "loci/design.hpp"
#include "loci/model.hpp"
#include "loci/parallel.hpp"
#include "loci/quantile.hpp"

namespace loci {

struct EngineOptions {
    Exec exec = Exec::serial_ref();
    // Importance-weight effective sample size below which a degeneracy
    // warning is recorded.
    double ess_warn_threshold = 50.0;
};

enum class PvMethod { bootstrap, neighborhood_bootstrap, importance_design, importance_refined };
enum class CiMethod { bootstrap_hybrid, neighborhood_bootstrap, m_out_of_n, importance_weighted };
enum class CiSide { upper, lower, two_sided };

std::string to_string(PvMethod m);
std::string to_string(CiMethod m);

struct PValueResult {
    double p = 1.0;
    std::vector<std::pair<ParamPoint, double>> per_point;
    PvMethod method = PvMethod::bootstrap;
    int resamples = 0;
    Diag diag;
};

struct CiResult {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    double level = 0.0;  // 1 - alpha (or gamma for one-sided weighted limits)
    CiMethod method = CiMethod::bootstrap_hybrid;
    std::vector<std::pair<ParamPoint, double>> per_point_quantiles;
    double estimate = 0.0;  // the plug-in target estimate the limits offset
    Diag diag;
};

/// Classic parametric bootstrap p-value: resample at the estimate, count
/// statistics at least as large as the observed one.
PValueResult bootstrap_pvalue(const Model& model, const Dataset& data, int M, RngStream rng,
                              const EngineOptions& opts = {});

/// Neighborhood-bootstrap p-value: fresh Monte Carlo rejection-probability
/// estimate at every try point (M resamples each), maximized over the design.
/// The design must cover the neighborhood intersected with the null set.
PValueResult nb_pvalue(const Model& model, const Dataset& data, const Region& region,
                       const TryDesign& design, int M, RngStream rng,
                       const EngineOptions& opts = {});

/// Frozen resample set drawn at the estimate, shared by every importance
/// sampling evaluation (sample average approximation).
struct IsContext {
    double t_observed = 0.0;
    ParamPoint theta_hat;
    std::vector<Dataset> resamples;
    std::vector<char> exceeds;           // 1{T(X*_m) >= t}
    std::vector<double> log_f_center;    // log f(X*_m, theta_hat)
    int M = 0;
};

IsContext make_is_context(const Model& model, const Dataset& data, int M, RngStream rng,
                          const EngineOptions& opts = {});

/// Importance-sampling estimate of the rejection probability at phi, using
/// frozen resamples drawn at the estimate. Records an effective-sample-size
/// warning in diag when the weights degenerate.
double is_objective(const Model& model, const IsContext& ctx, const ParamPoint& phi,
                    Diag* diag = nullptr, double ess_warn_threshold = 50.0);

/// Convenience form taking raw resamples (they must have been simulated at
/// the estimate of data).
double is_objective(const Model& model, const Dataset& data, const ParamPoint& phi,
                    const std::vector<Dataset>& resamples, Diag* diag = nullptr);

/// Design-based importance-sampling p-value: one shared resample set, maximum
/// of the importance objective over the try points, clamped to [0,1].
PValueResult is_pvalue_design(const Model& model, const Dataset& data, const TryDesign& design,
                              int M, RngStream rng, const EngineOptions& opts = {});

/// Design-based p-value refined by simplex search from the best three design
/// points; never below the design-based value on the same resamples.
PValueResult is_pvalue_refined(const Model& model, const Dataset& data, const Region& region,
                               const TryDesign& design, int M, RngStream rng, long budget = 0,
                               const EngineOptions& opts = {});

/// Neighborhood-bootstrap confidence limits from per-try-point pivot
/// quantiles (fresh resamples at each try point).
CiResult nb_ci(const Model& model, const Dataset& data, const Region& region,
               const TryDesign& design, int M, RngStream rng, double alpha,
               CiSide side = CiSide::two_sided, const EngineOptions& opts = {});

/// Importance-weighted upper confidence limit: weighted pivot quantiles on a
/// single shared resample set, maximized over the design.
CiResult is_ci_upper(const Model& model, const Dataset& data, const Region& region,
                     const TryDesign& design, int M, RngStream rng, double gamma,
                     const EngineOptions& opts = {});

/// m-out-of-n bootstrap interval: resamples of size m at the estimate, pivot
/// rescaled by sqrt(m)/sqrt(n), equal-tailed.
CiResult m_out_of_n_ci(const Model& model, const Dataset& data, int m, int M, RngStream rng,
                       double alpha, const EngineOptions& opts = {});

}  // namespace loci
