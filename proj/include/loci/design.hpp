#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "loci/param.hpp"
#include "loci/rng.hpp"

namespace loci {

/// Space-filling design on the unit cube [0,1]^q.
struct UnitDesign {
    enum class Kind { grid, latin_hypercube };

    Kind kind = Kind::grid;
    std::size_t q = 0;
    std::vector<std::vector<double>> points;

    std::size_t size() const { return points.size(); }
};

/// Ordered try points for design-based inference. points[0] is the feasible
/// center (the estimate itself, or its projection when the estimate violates
/// the region's constraint).
struct TryDesign {
    std::vector<ParamPoint> points;
    std::size_t center_index = 0;

    std::size_t size() const { return points.size(); }
};

/// Full factorial {1/(2U), ..., (2U-1)/(2U)}^q in lexicographic order.
/// Refuses to build more than max_points points.
UnitDesign grid_design(std::size_t U, std::size_t q, std::size_t max_points = 1000000);

/// Latin hypercube with one point per stratum midpoint in every dimension.
/// Deterministic for a fixed stream.
UnitDesign lhd_design(std::size_t L, std::size_t q, RngStream stream);

/// Affine image of a unit design in the region's box (constraint not applied).
std::vector<ParamPoint> map_to_region(const UnitDesign& design, const Region& box);

/// Keeps the points that are members of the region (box and constraint),
/// preserving order. An empty result is valid.
std::vector<ParamPoint> filter_feasible(const std::vector<ParamPoint>& points,
                                        const Region& region);

/// Builds the try design over the region: feasible center first, then the
/// feasible affine images of the unit design, with duplicates of the center
/// removed.
///
/// The unit design may cover only the region's non-degenerate dimensions
/// (frozen coordinates are filled from the box), and when the region carries a
/// simplex constraint a design of dimension one less than the number of free
/// coordinates is completed by setting the last free coordinate to one minus
/// the sum of the others.
TryDesign build_try_design(const ParamPoint& center, const Region& region,
                           const UnitDesign& design);

/// One row per point; header row uses the given labels (or x0,x1,... when
/// empty).
void write_design_csv(std::ostream& os, const std::vector<ParamPoint>& points,
                      const std::vector<std::string>& labels = {});

}  // namespace loci
