#include "loci/design.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

namespace loci {

UnitDesign grid_design(std::size_t U, std::size_t q, std::size_t max_points) {
    if (U < 1 || q < 1) throw InputError("grid_design: U and q must be >= 1");

    double total_d = std::pow(static_cast<double>(U), static_cast<double>(q));
    if (total_d > static_cast<double>(max_points)) {
        char msg[128];
        std::snprintf(msg, sizeof(msg), "grid_design: U^q = %.0f exceeds cap %zu", total_d,
                      max_points);
        throw SizeLimitError(msg);
    }
    const std::size_t total = static_cast<std::size_t>(total_d + 0.5);

    UnitDesign d;
    d.kind = UnitDesign::Kind::grid;
    d.q = q;
    d.points.reserve(total);

    std::vector<std::size_t> idx(q, 0);
    for (std::size_t count = 0; count < total; ++count) {
        std::vector<double> p(q);
        for (std::size_t j = 0; j < q; ++j)
            p[j] = (2.0 * static_cast<double>(idx[j]) + 1.0) / (2.0 * static_cast<double>(U));
        d.points.push_back(std::move(p));
        // lexicographic increment, last coordinate fastest
        for (std::size_t j = q; j-- > 0;) {
            if (++idx[j] < U) break;
            idx[j] = 0;
        }
    }
    return d;
}

UnitDesign lhd_design(std::size_t L, std::size_t q, RngStream stream) {
    if (L < 1 || q < 1) throw InputError("lhd_design: L and q must be >= 1");

    UnitDesign d;
    d.kind = UnitDesign::Kind::latin_hypercube;
    d.q = q;
    d.points.assign(L, std::vector<double>(q));

    std::vector<std::size_t> perm(L);
    for (std::size_t j = 0; j < q; ++j) {
        RngStream dim_stream = stream.derive(j);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = L; i-- > 1;) {
            std::size_t k = static_cast<std::size_t>(dim_stream.next_below(i + 1));
            std::swap(perm[i], perm[k]);
        }
        for (std::size_t i = 0; i < L; ++i)
            d.points[i][j] = (static_cast<double>(perm[i]) + 0.5) / static_cast<double>(L);
    }
    return d;
}

std::vector<ParamPoint> map_to_region(const UnitDesign& design, const Region& box) {
    if (design.q != box.dim())
        throw InputError("map_to_region: design dimension " + std::to_string(design.q) +
                         " != box dimension " + std::to_string(box.dim()));
    std::vector<ParamPoint> out;
    out.reserve(design.size());
    for (const auto& psi : design.points) {
        std::vector<double> x(design.q);
        for (std::size_t j = 0; j < design.q; ++j)
            x[j] = box.lower[j] + psi[j] * (box.upper[j] - box.lower[j]);
        out.emplace_back(std::move(x));
    }
    return out;
}

std::vector<ParamPoint> filter_feasible(const std::vector<ParamPoint>& points,
                                        const Region& region) {
    std::vector<ParamPoint> out;
    for (const auto& p : points)
        if (region.contains(p)) out.push_back(p);
    return out;
}

namespace {

bool nearly_equal(const ParamPoint& a, const ParamPoint& b) {
    if (a.dim() != b.dim()) return false;
    for (std::size_t j = 0; j < a.dim(); ++j) {
        double scale = std::max({std::fabs(a[j]), std::fabs(b[j]), 1.0});
        if (std::fabs(a[j] - b[j]) > 1e-9 * scale) return false;
    }
    return true;
}

bool has_simplex_constraint(const Region& region) {
    for (const auto& p : region.constraint.preds)
        if (p.kind == Predicate::Kind::simplex_sum_to_one) return true;
    return false;
}

// Embeds a design over the free dimensions into the full space: frozen
// coordinates take their (common) box value; with a simplex constraint the
// last free coordinate is completed to 1 - sum and later re-checked against
// its own box interval by filter_feasible.
std::vector<ParamPoint> expand_candidates(const Region& region, const UnitDesign& design) {
    const std::vector<std::size_t> active = region.active_dims();
    const std::size_t q_full = region.dim();
    const bool simplex = has_simplex_constraint(region);

    if (design.q == q_full) return map_to_region(design, region);

    const bool complete_simplex = simplex && design.q + 1 == active.size();
    if (!complete_simplex && design.q != active.size())
        throw InputError("build_try_design: unit design dimension " + std::to_string(design.q) +
                         " matches neither the region dimension nor its free dimensions");

    std::vector<ParamPoint> out;
    out.reserve(design.size());
    for (const auto& psi : design.points) {
        std::vector<double> x(q_full);
        for (std::size_t j = 0; j < q_full; ++j) x[j] = region.lower[j];
        double mapped_sum = 0.0;
        for (std::size_t j = 0; j < design.q; ++j) {
            std::size_t dim = active[j];
            x[dim] = region.lower[dim] + psi[j] * (region.upper[dim] - region.lower[dim]);
            mapped_sum += x[dim];
        }
        if (complete_simplex) {
            double frozen_sum = 0.0;
            for (std::size_t j = 0; j < q_full; ++j)
                if (region.upper[j] <= region.lower[j]) frozen_sum += x[j];
            x[active.back()] = 1.0 - mapped_sum - frozen_sum;
        }
        out.emplace_back(std::move(x));
    }
    return out;
}

}  // namespace

TryDesign build_try_design(const ParamPoint& center, const Region& region,
                           const UnitDesign& design) {
    if (center.dim() != region.dim())
        throw InputError("build_try_design: center dimension mismatch");

    // An estimate violating the box or the constraint is replaced by the
    // nearest feasible point (projection), so points[0] is always usable.
    ParamPoint c0 = region.contains(center) ? center : project_feasible(center, region);

    TryDesign td;
    td.points.push_back(c0);
    if (design.size() > 0) {
        auto feasible = filter_feasible(expand_candidates(region, design), region);
        for (auto& p : feasible) {
            if (nearly_equal(p, c0)) continue;
            td.points.push_back(std::move(p));
        }
    }
    if (td.points.empty())
        throw InfeasibleError("build_try_design: no feasible try point");
    return td;
}

void write_design_csv(std::ostream& os, const std::vector<ParamPoint>& points,
                      const std::vector<std::string>& labels) {
    if (points.empty()) return;
    const std::size_t q = points.front().dim();

    const std::vector<std::string>* names = &labels;
    std::vector<std::string> fallback;
    if (names->empty() && !points.front().labels.empty()) names = &points.front().labels;
    if (names->empty()) {
        fallback.reserve(q);
        for (std::size_t j = 0; j < q; ++j) fallback.push_back("x" + std::to_string(j));
        names = &fallback;
    }

    for (std::size_t j = 0; j < q; ++j) os << (j ? "," : "") << (*names)[j];
    os << "\n";
    char buf[64];
    for (const auto& p : points) {
        for (std::size_t j = 0; j < q; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", p[j]);
            os << (j ? "," : "") << buf;
        }
        os << "\n";
    }
}

}  // namespace loci
