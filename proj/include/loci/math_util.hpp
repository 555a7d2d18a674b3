#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace loci {

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Standard normal quantile (Wichura's PPND16 rational approximation,
/// accurate to about 1e-15 over (0,1)). Returns +-inf at the endpoints.
double normal_quantile(double p);

/// log of the binomial coefficient C(n, k).
double log_choose(int n, int k);

/// Exact upper tail P(X >= x) for X ~ Binomial(n, p), computed by direct
/// summation of the pmf in log space. x outside [0, n] handled by convention.
double binomial_upper_tail(int n, int x, double p);

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace loci
