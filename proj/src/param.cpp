#include "loci/param.hpp"

#include <algorithm>
#include <cmath>

namespace loci {

void ParamPoint::validate() const {
    if (coords.empty()) throw InputError("ParamPoint: coords must be non-empty");
    for (double c : coords)
        if (!std::isfinite(c)) throw InputError("ParamPoint: non-finite coordinate");
    if (!labels.empty() && labels.size() != coords.size())
        throw InputError("ParamPoint: labels length != coords length");
}

bool Predicate::holds(const std::vector<double>& x) const {
    switch (kind) {
        case Kind::simplex_sum_to_one: {
            double s = 0.0;
            for (double v : x) {
                if (v <= 0.0) return false;
                s += v;
            }
            return std::fabs(s - 1.0) <= tol;
        }
        case Kind::nonnegative_coords: {
            if (indices.empty()) {
                for (double v : x)
                    if (v < 0.0) return false;
                return true;
            }
            for (std::size_t i : indices)
                if (x[i] < 0.0) return false;
            return true;
        }
        case Kind::positive_coords: {
            if (indices.empty()) {
                for (double v : x)
                    if (v <= 0.0) return false;
                return true;
            }
            for (std::size_t i : indices)
                if (x[i] <= 0.0) return false;
            return true;
        }
        case Kind::fixed_coords: {
            for (std::size_t j = 0; j < indices.size(); ++j)
                if (std::fabs(x[indices[j]] - values[j]) > tol) return false;
            return true;
        }
    }
    return false;
}

Constraint Constraint::simplex(double tol) {
    Constraint c;
    c.preds.push_back({Predicate::Kind::simplex_sum_to_one, tol, {}, {}});
    return c;
}

Constraint Constraint::nonnegative() {
    Constraint c;
    c.preds.push_back({Predicate::Kind::nonnegative_coords, 0.0, {}, {}});
    return c;
}

Constraint Constraint::positive(std::vector<std::size_t> indices) {
    Constraint c;
    c.preds.push_back({Predicate::Kind::positive_coords, 0.0, std::move(indices), {}});
    return c;
}

Constraint Constraint::fixed(std::vector<std::size_t> indices, std::vector<double> values,
                             double tol) {
    Constraint c;
    c.preds.push_back({Predicate::Kind::fixed_coords, tol, std::move(indices), std::move(values)});
    return c;
}

Region::Region(std::vector<double> lo, std::vector<double> hi, Constraint c)
    : lower(std::move(lo)), upper(std::move(hi)), constraint(std::move(c)) {
    if (lower.size() != upper.size()) throw InputError("Region: lower/upper length mismatch");
    for (std::size_t j = 0; j < lower.size(); ++j)
        if (!(lower[j] <= upper[j])) throw InputError("Region: lower > upper at dim " + std::to_string(j));
}

bool Region::in_box(const std::vector<double>& x) const {
    if (x.size() != lower.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] < lower[j] || x[j] > upper[j]) return false;
    return true;
}

std::vector<std::size_t> Region::active_dims() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < lower.size(); ++j)
        if (upper[j] > lower[j]) out.push_back(j);
    return out;
}

std::vector<double> Region::clip(std::vector<double> x) const {
    for (std::size_t j = 0; j < x.size(); ++j)
        x[j] = std::clamp(x[j], lower[j], upper[j]);
    return x;
}

namespace {

// Projection onto {x in box : sum x = 1, x > 0}: coordinates are
// clip(c_j - lambda) with the multiplier found by bisection; the clipped sum
// is continuous and nonincreasing in lambda.
std::vector<double> project_simplex_box(const std::vector<double>& c, const Region& region) {
    const std::size_t n = c.size();
    auto clipped = [&](double lambda) {
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) {
            double lo = std::max(region.lower[j], 1e-12);  // keep strictly positive
            x[j] = std::clamp(c[j] - lambda, lo, region.upper[j]);
        }
        return x;
    };
    auto sum_at = [&](double lambda) {
        double s = 0.0;
        for (double v : clipped(lambda)) s += v;
        return s;
    };

    double lo = -2.0, hi = 2.0;
    for (double v : c) {
        lo = std::min(lo, v - 2.0);
        hi = std::max(hi, v + 2.0);
    }
    if (sum_at(lo) < 1.0 || sum_at(hi) > 1.0)
        throw InfeasibleError("project_feasible: simplex constraint unreachable inside box");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sum_at(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    return clipped(hi);
}

}  // namespace

ParamPoint project_feasible(const ParamPoint& p, const Region& region) {
    if (p.dim() != region.dim()) throw InputError("project_feasible: dimension mismatch");
    std::vector<double> x = region.clip(p.coords);

    for (const auto& pred : region.constraint.preds) {
        switch (pred.kind) {
            case Predicate::Kind::nonnegative_coords:
            case Predicate::Kind::positive_coords: {
                const double floor = 0.0;
                if (pred.indices.empty()) {
                    for (std::size_t j = 0; j < x.size(); ++j)
                        x[j] = std::max(x[j], std::max(region.lower[j], floor));
                } else {
                    for (std::size_t j : pred.indices)
                        x[j] = std::max(x[j], std::max(region.lower[j], floor));
                }
                break;
            }
            case Predicate::Kind::fixed_coords:
                for (std::size_t j = 0; j < pred.indices.size(); ++j)
                    x[pred.indices[j]] = pred.values[j];
                break;
            case Predicate::Kind::simplex_sum_to_one:
                x = project_simplex_box(x, region);
                break;
        }
    }

    ParamPoint out(std::move(x), p.labels);
    if (!region.contains(out))
        throw InfeasibleError("project_feasible: projection failed to reach the constraint set");
    return out;
}

}  // namespace loci
