#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "loci/design.hpp"
#include "loci/param.hpp"

using namespace loci;

TEST_CASE("param point invariants") {
    CHECK_THROWS_AS(ParamPoint(std::vector<double>{}).validate(), InputError);
    CHECK_THROWS_AS(ParamPoint({1.0, std::nan("")}).validate(), InputError);
    CHECK_THROWS_AS(ParamPoint({1.0}, {"a", "b"}).validate(), InputError);
    ParamPoint ok({1.0, 2.0}, {"a", "b"});
    CHECK_NOTHROW(ok.validate());
}

TEST_CASE("grid design basics") {
    auto g = grid_design(1, 2);
    REQUIRE(g.size() == 1);
    CHECK(g.points[0][0] == doctest::Approx(0.5));
    CHECK(g.points[0][1] == doctest::Approx(0.5));

    auto g3 = grid_design(3, 3);
    CHECK(g3.size() == 27);
    for (const auto& p : g3.points)
        for (double c : p)
            CHECK((c == doctest::Approx(1.0 / 6) || c == doctest::Approx(3.0 / 6) ||
                   c == doctest::Approx(5.0 / 6)));

    auto g5 = grid_design(5, 1);
    std::vector<double> want{0.1, 0.3, 0.5, 0.7, 0.9};
    for (int i = 0; i < 5; ++i) CHECK(g5.points[i][0] == doctest::Approx(want[i]));

    CHECK_THROWS_AS(grid_design(100, 4, 1000000), SizeLimitError);
    try {
        grid_design(100, 4, 1000000);
    } catch (const SizeLimitError& e) {
        CHECK(std::string(e.what()).find("100000000") != std::string::npos);
    }
}

TEST_CASE("lhd occupies each stratum once per dimension") {
    auto check_lhd = [](std::size_t L, std::size_t q, std::uint64_t seed) {
        auto d = lhd_design(L, q, RngStream(seed));
        REQUIRE(d.size() == L);
        for (std::size_t j = 0; j < q; ++j) {
            std::vector<double> col;
            for (const auto& p : d.points) col.push_back(p[j]);
            std::sort(col.begin(), col.end());
            for (std::size_t i = 0; i < L; ++i)
                CHECK(col[i] == doctest::Approx((i + 0.5) / L).epsilon(1e-12));
        }
    };
    check_lhd(1, 3, 9);
    check_lhd(4, 2, 11);
    check_lhd(30, 7, 17);
}

TEST_CASE("lhd is deterministic for a fixed seed") {
    auto a = lhd_design(12, 3, RngStream(5));
    auto b = lhd_design(12, 3, RngStream(5));
    CHECK(a.points == b.points);
    auto c = lhd_design(12, 3, RngStream(6));
    CHECK(a.points != c.points);
}

TEST_CASE("map_to_region is the affine image") {
    Region box({0.0, -1.0}, {2.0, 1.0});
    UnitDesign d;
    d.q = 2;
    d.points = {{0.5, 0.5}, {0.0, 1.0}};
    auto pts = map_to_region(d, box);
    CHECK(pts[0][0] == doctest::Approx(1.0));
    CHECK(pts[0][1] == doctest::Approx(0.0));
    CHECK(pts[1][0] == doctest::Approx(0.0));
    CHECK(pts[1][1] == doctest::Approx(1.0));

    // corners map exactly
    UnitDesign corners;
    corners.q = 2;
    corners.points = {{0.0, 0.0}, {1.0, 1.0}};
    auto cpts = map_to_region(corners, box);
    CHECK(cpts[0][0] == 0.0);
    CHECK(cpts[1][1] == 1.0);

    auto grid9 = map_to_region(grid_design(3, 2), Region({0.0, 0.0}, {1.0, 1.0}));
    CHECK(grid9.size() == 9);
    for (const auto& p : grid9)
        for (double c : p.coords)
            CHECK((c == doctest::Approx(1.0 / 6) || c == doctest::Approx(0.5) ||
                   c == doctest::Approx(5.0 / 6)));

    UnitDesign wrong;
    wrong.q = 3;
    wrong.points = {{0.1, 0.2, 0.3}};
    CHECK_THROWS_AS(map_to_region(wrong, box), InputError);
}

TEST_CASE("filter_feasible applies box and constraint") {
    Region box({0.0, 0.0}, {1.0, 1.0});
    std::vector<ParamPoint> pts{ParamPoint({0.2, 0.3}), ParamPoint({0.5, 0.6})};
    CHECK(filter_feasible(pts, box).size() == 2);

    Region simplex({0.0, 0.0}, {1.0, 1.0}, Constraint::simplex());
    std::vector<ParamPoint> mixed{ParamPoint({0.4, 0.6}), ParamPoint({0.5, 0.6})};
    auto kept = filter_feasible(mixed, simplex);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0][0] == doctest::Approx(0.4));  // 0.5+0.6 != 1 dropped

    CHECK(filter_feasible({}, box).empty());
}

TEST_CASE("build_try_design keeps the center first and feasible") {
    ParamPoint center({0.5, 0.5});
    Region box({0.0, 0.0}, {1.0, 1.0});

    auto center_only = build_try_design(center, box, UnitDesign{});
    REQUIRE(center_only.size() == 1);
    CHECK(center_only.points[0].coords == center.coords);

    auto full = build_try_design(center, box, grid_design(3, 2));
    CHECK(full.size() == 1 + 9 - 1);  // the central grid point duplicates the center
    for (const auto& p : full.points) CHECK(box.contains(p));

    // unconstrained 3-d box: 1 + 27 points
    Region box3({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
    auto td3 = build_try_design(ParamPoint({0.4, 0.4, 0.4}), box3, grid_design(3, 3));
    CHECK(td3.size() == 1 + 27);
}

TEST_CASE("simplex completion matches the documented construction") {
    // box around the uniform 5-dim simplex point, same half-width per coord
    const int k = 5;
    const double w = 0.06;
    std::vector<double> lo(k), hi(k), center(k, 0.2);
    for (int j = 0; j < k; ++j) {
        lo[j] = 0.2 - w;
        hi[j] = 0.2 + w;
    }
    Region region(lo, hi, Constraint::simplex());
    auto td = build_try_design(ParamPoint(center), region, grid_design(3, k - 1));

    // every retained point sums to one and lies in the box
    for (const auto& p : td.points) {
        double s = 0.0;
        for (double c : p.coords) s += c;
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(region.in_box(p.coords));
    }
    // offsets through the completion: 19 with zero sum (one is the center,
    // removed as a duplicate) plus 16 on each side
    CHECK(td.size() == 51);
}

TEST_CASE("center outside the constraint set is projected") {
    Region simplex({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, Constraint::simplex());
    ParamPoint off({0.5, 0.5, 0.5});
    auto td = build_try_design(off, simplex, UnitDesign{});
    double s = td.points[0][0] + td.points[0][1] + td.points[0][2];
    CHECK(s == doctest::Approx(1.0).epsilon(1e-9));

    // box-violating center clips to the nearest box point
    Region box({0.0}, {0.4});
    auto td2 = build_try_design(ParamPoint({0.9}), box, UnitDesign{});
    CHECK(td2.points[0][0] == doctest::Approx(0.4));
}

TEST_CASE("infeasible construction reports an error") {
    // simplex unreachable: box caps every coordinate far below 1/k
    Region tight({0.0, 0.0}, {0.1, 0.1}, Constraint::simplex());
    CHECK_THROWS_AS(build_try_design(ParamPoint({0.05, 0.05}), tight, grid_design(2, 1)),
                    InfeasibleError);
}

TEST_CASE("designs serialize to CSV with labels") {
    std::ostringstream os;
    std::vector<ParamPoint> pts{ParamPoint({0.25, 1.5}, {"a", "b"}), ParamPoint({0.75, 2.5})};
    write_design_csv(os, pts);
    std::string csv = os.str();
    CHECK(csv.find("a,b\n") == 0);
    CHECK(csv.find("0.25,1.5") != std::string::npos);

    std::ostringstream os2;
    write_design_csv(os2, {ParamPoint({1.0})});
    CHECK(os2.str().find("x0\n") == 0);
}

TEST_CASE("determinism: same arguments, same designs bit for bit") {
    auto g1 = grid_design(4, 3);
    auto g2 = grid_design(4, 3);
    CHECK(g1.points == g2.points);

    auto l1 = lhd_design(20, 5, RngStream(77).derive(1));
    auto l2 = lhd_design(20, 5, RngStream(77).derive(1));
    CHECK(l1.points == l2.points);
}
