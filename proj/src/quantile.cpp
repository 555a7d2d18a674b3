#include "loci/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "loci/common.hpp"

namespace loci {

double sample_quantile(std::vector<double> values, double gamma) {
    if (values.empty()) throw InputError("sample_quantile: empty input");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("sample_quantile: gamma outside (0,1)");
    const std::size_t M = values.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(M)));
    if (rank < 1) rank = 1;
    if (rank > M) rank = M;
    std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
    return values[rank - 1];
}

double weighted_quantile(const std::vector<double>& values,
                         const std::vector<double>& weights, double gamma) {
    if (values.empty()) throw InputError("weighted_quantile: empty input");
    if (values.size() != weights.size())
        throw InputError("weighted_quantile: values/weights length mismatch");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("weighted_quantile: gamma outside (0,1)");

    bool any_positive = false;
    for (double w : weights) {
        if (w < 0.0) throw InputError("weighted_quantile: negative weight");
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw NumericError("weighted_quantile: all weights zero");

    const std::size_t M = values.size();
    std::vector<std::size_t> order(M);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    const double target = gamma * static_cast<double>(M);
    double mass = 0.0;
    for (std::size_t i : order) {
        mass += weights[i];
        if (mass >= target) return values[i];
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace loci
