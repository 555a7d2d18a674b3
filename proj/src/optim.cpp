#include "loci/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loci {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

OptResult nelder_mead(const Objective& f, const ParamPoint& start,
                      const std::vector<double>& scale, const NelderMeadOptions& opt) {
    const std::size_t n = start.dim();
    if (n == 0) throw InputError("nelder_mead: empty start");
    if (scale.size() != n) throw InputError("nelder_mead: scale dimension mismatch");
    for (double s : scale)
        if (!(s > 0.0)) throw InputError("nelder_mead: scale must be strictly positive");

    const long budget = opt.budget > 0 ? opt.budget : static_cast<long>(500 * n);
    if (budget < static_cast<long>(n) + 1)
        throw InputError("nelder_mead: budget below dim+1");

    long evals = 0;
    auto eval = [&](std::vector<double>& x) {
        if (opt.project) opt.project(x);
        ++evals;
        double v = f(x);
        return std::isfinite(v) ? v : kNegInf;
    };

    // simplex: start plus one step along each coordinate
    std::vector<std::vector<double>> verts(n + 1, start.coords);
    std::vector<double> fv(n + 1);
    {
        std::vector<double> x0 = start.coords;
        fv[0] = eval(x0);
        if (fv[0] == kNegInf)
            throw NumericError("nelder_mead: objective not finite at start");
        verts[0] = x0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        verts[j + 1][j] += scale[j];
        fv[j + 1] = eval(verts[j + 1]);
    }

    auto order_desc = [&]() {
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return fv[a] > fv[b]; });
        std::vector<std::vector<double>> v2(n + 1);
        std::vector<double> f2(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            v2[i] = std::move(verts[idx[i]]);
            f2[i] = fv[idx[i]];
        }
        verts.swap(v2);
        fv.swap(f2);
    };

    bool converged = false;
    while (evals < budget) {
        order_desc();

        // both the simplex diameter and the value spread must collapse:
        // either alone stops falsely when vertices straddle a ridge
        double spread = fv[0] - fv[n];
        double diam = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                diam = std::max(diam, std::fabs(verts[i][j] - verts[0][j]));
        if (std::isfinite(spread) && spread < opt.tol && diam < opt.tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += verts[i][j];
        for (std::size_t j = 0; j < n; ++j) centroid[j] /= static_cast<double>(n);

        auto blend = [&](double c) {
            std::vector<double> x(n);
            for (std::size_t j = 0; j < n; ++j)
                x[j] = centroid[j] + c * (centroid[j] - verts[n][j]);
            return x;
        };

        std::vector<double> xr = blend(1.0);
        double fr = eval(xr);

        if (fr > fv[0]) {
            std::vector<double> xe = blend(2.0);
            double fe = eval(xe);
            if (fe > fr) {
                verts[n] = std::move(xe);
                fv[n] = fe;
            } else {
                verts[n] = std::move(xr);
                fv[n] = fr;
            }
        } else if (fr > fv[n - 1]) {
            verts[n] = std::move(xr);
            fv[n] = fr;
        } else {
            bool outside = fr > fv[n];
            std::vector<double> xc(n);
            const std::vector<double>& base = outside ? xr : verts[n];
            for (std::size_t j = 0; j < n; ++j)
                xc[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
            double fc = eval(xc);
            if (fc > (outside ? fr : fv[n])) {
                verts[n] = std::move(xc);
                fv[n] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= n && evals < budget; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        verts[i][j] = verts[0][j] + 0.5 * (verts[i][j] - verts[0][j]);
                    fv[i] = eval(verts[i]);
                }
            }
        }
    }

    order_desc();
    OptResult out;
    out.point = ParamPoint(verts[0], start.labels);
    out.value = fv[0];
    out.evaluations = evals;
    out.converged = converged;
    return out;
}

OptResult multistart_max(const Objective& f, const std::vector<ParamPoint>& starts,
                         const Region& region, long budget_per_start, double tol,
                         const Exec& exec) {
    if (starts.empty()) throw InputError("multistart_max: no starts");
    for (const auto& s : starts)
        if (!region.in_box(s.coords)) throw InputError("multistart_max: start outside region box");

    // Search only the non-degenerate box dimensions; frozen coordinates are
    // pinned to their single value.
    const std::vector<std::size_t> active = region.active_dims();
    if (active.empty()) {
        OptResult out;
        out.point = ParamPoint(region.lower, starts.front().labels);
        out.value = f(out.point.coords);
        out.evaluations = 1;
        out.converged = true;
        return out;
    }

    auto embed = [&](const std::vector<double>& xa) {
        std::vector<double> x(region.lower);
        for (std::size_t j = 0; j < active.size(); ++j) x[active[j]] = xa[j];
        return x;
    };
    Objective fa = [&](const std::vector<double>& xa) { return f(embed(xa)); };

    NelderMeadOptions opt;
    opt.budget = budget_per_start;
    opt.tol = tol;
    opt.project = [&](std::vector<double>& xa) {
        for (std::size_t j = 0; j < active.size(); ++j)
            xa[j] = std::clamp(xa[j], region.lower[active[j]], region.upper[active[j]]);
    };

    std::vector<double> scale(active.size());
    for (std::size_t j = 0; j < active.size(); ++j)
        scale[j] = 0.1 * (region.upper[active[j]] - region.lower[active[j]]);

    std::vector<OptResult> runs(starts.size());
    parallel_for_index(starts.size(), exec, [&](std::size_t i) {
        std::vector<double> xa(active.size());
        for (std::size_t j = 0; j < active.size(); ++j) xa[j] = starts[i][active[j]];
        runs[i] = nelder_mead(fa, ParamPoint(std::move(xa)), scale, opt);
    });

    // sequential merge in start order: deterministic, ties keep the earliest
    std::size_t best_i = 0;
    long total_evals = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        total_evals += runs[i].evaluations;
        if (runs[i].value > runs[best_i].value) best_i = i;
    }
    OptResult best = runs[best_i];
    best.point = ParamPoint(embed(best.point.coords), starts.front().labels);
    best.evaluations = total_evals;
    return best;
}

}  // namespace loci
