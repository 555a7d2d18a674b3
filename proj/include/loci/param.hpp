#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "loci/common.hpp"

namespace loci {

/// A point in a finite-dimensional parameter space. Labels are optional
/// coordinate names used when serializing designs.
struct ParamPoint {
    std::vector<double> coords;
    std::vector<std::string> labels;

    ParamPoint() = default;
    explicit ParamPoint(std::vector<double> c) : coords(std::move(c)) {}
    ParamPoint(std::vector<double> c, std::vector<std::string> l)
        : coords(std::move(c)), labels(std::move(l)) {}

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    /// Validates the type invariants (non-empty, finite, label length).
    void validate() const;
};

/// Membership predicate attached to a Region on top of its box.
struct Predicate {
    enum class Kind {
        simplex_sum_to_one,  // coordinates sum to 1 (within tol) and are all > 0
        nonnegative_coords,  // listed coordinates (all, if empty) are >= 0
        positive_coords,     // listed coordinates (all, if empty) are > 0
        fixed_coords,        // listed coordinates equal given values (within tol)
    };

    Kind kind;
    double tol = 1e-10;
    std::vector<std::size_t> indices;
    std::vector<double> values;

    bool holds(const std::vector<double>& x) const;
};

struct Constraint {
    std::vector<Predicate> preds;

    bool empty() const { return preds.empty(); }
    bool holds(const std::vector<double>& x) const {
        for (const auto& p : preds)
            if (!p.holds(x)) return false;
        return true;
    }

    static Constraint none() { return {}; }
    static Constraint simplex(double tol = 1e-10);
    static Constraint nonnegative();
    static Constraint positive(std::vector<std::size_t> indices = {});
    static Constraint fixed(std::vector<std::size_t> indices, std::vector<double> values,
                            double tol = 1e-10);
};

/// Axis-aligned box neighborhood, optionally intersected with a membership
/// constraint. Zero-width coordinates (lower == upper) are legal and mark
/// frozen dimensions.
struct Region {
    std::vector<double> lower;
    std::vector<double> upper;
    Constraint constraint;

    Region() = default;
    Region(std::vector<double> lo, std::vector<double> hi, Constraint c = {});

    std::size_t dim() const { return lower.size(); }

    bool in_box(const std::vector<double>& x) const;
    bool contains(const ParamPoint& p) const {
        return in_box(p.coords) && constraint.holds(p.coords);
    }

    /// Indices of coordinates with upper > lower.
    std::vector<std::size_t> active_dims() const;

    /// Coordinate-wise clip of x into the box.
    std::vector<double> clip(std::vector<double> x) const;
};

/// Euclidean projection of a point onto region-box intersect constraint set.
/// Closed form for box/nonnegativity/fixed coordinates; for the simplex the
/// sum-to-one multiplier is found by bisection with box clipping.
ParamPoint project_feasible(const ParamPoint& p, const Region& region);

}  // namespace loci
