#pragma once

#include <functional>
#include <vector>

#include "loci/param.hpp"
#include "loci/parallel.hpp"

namespace loci {

using Objective = std::function<double(const std::vector<double>&)>;

struct OptResult {
    ParamPoint point;
    double value = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct NelderMeadOptions {
    long budget = 0;      // max objective evaluations; 0 = 500 * dim
    double tol = 1e-8;    // converged when value spread or simplex diameter < tol
    // Applied to every candidate point before evaluation (box projection).
    std::function<void(std::vector<double>&)> project;
};

/// Derivative-free simplex search, maximizing. The objective must be finite at
/// the start; non-finite values encountered later are treated as -inf and the
/// search continues.
OptResult nelder_mead(const Objective& f, const ParamPoint& start,
                      const std::vector<double>& scale, const NelderMeadOptions& opt = {});

/// Max over per-start Nelder-Mead runs with iterates clipped to the region
/// box. The result never falls below the best start value; ties break to the
/// lowest start index regardless of execution order.
OptResult multistart_max(const Objective& f, const std::vector<ParamPoint>& starts,
                         const Region& region, long budget_per_start = 0, double tol = 1e-8,
                         const Exec& exec = Exec::serial_ref());

}  // namespace loci
