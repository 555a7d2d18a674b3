#pragma once

#include <vector>

#include "loci/common.hpp"

namespace loci {

/// The ceil(gamma*M)-th order statistic of the values (lower empirical
/// quantile). gamma must lie in (0,1); values must be non-empty.
double sample_quantile(std::vector<double> values, double gamma);

/// Smallest value v with (1/M) * sum_m w_m * 1{x_m <= v} >= gamma, where M is
/// the number of values. Returns +inf when the total normalized mass stays
/// below gamma. Weights must be nonnegative with at least one positive.
double weighted_quantile(const std::vector<double>& values,
                         const std::vector<double>& weights, double gamma);

}  // namespace loci
