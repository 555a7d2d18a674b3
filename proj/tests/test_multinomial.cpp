#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "loci/design.hpp"
#include "loci/models/multinomial.hpp"

using namespace loci;

TEST_CASE("simulation concentrates, degenerates and obeys the law of large numbers") {
    const int k = 5;
    MultinomialModel model(k, 30);

    // nearly all mass in cell 1
    double eps = 1e-6;
    ParamPoint spike({1.0 - 4 * eps, eps, eps, eps, eps});
    Dataset d = model.simulate(spike, 1000, RngStream(1));
    CHECK(d[0] >= 995);

    // n = 0
    Dataset z = model.simulate(ParamPoint({0.2, 0.2, 0.2, 0.2, 0.2}), 0, RngStream(2));
    for (double c : z) CHECK(c == 0.0);

    // counts always sum to n
    for (int rep = 0; rep < 20; ++rep) {
        Dataset x = model.simulate(ParamPoint({0.5, 0.15, 0.15, 0.1, 0.1}), 30,
                                   RngStream(100 + rep));
        double s = 0;
        for (double c : x) s += c;
        CHECK(s == 30.0);
    }

    // LLN at n = 1e5
    const int big = 100000;
    Dataset u = model.simulate(ParamPoint({0.2, 0.2, 0.2, 0.2, 0.2}), big, RngStream(3));
    for (double c : u) CHECK(std::fabs(c / big - 0.2) < 0.005);
}

TEST_CASE("jeffreys estimate formula and exact normalization") {
    ParamPoint p = jeffreys_estimate({30, 0, 0, 0, 0}, 30, 5);
    CHECK(p[0] == doctest::Approx(30.5 / 32.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5 / 32.5).epsilon(1e-15));

    // equal counts: uniform estimate
    ParamPoint q = jeffreys_estimate({10, 10, 10, 10}, 40, 4);
    for (int i = 0; i < 4; ++i) CHECK(q[i] == doctest::Approx(0.25).epsilon(1e-15));

    // random counts: components sum to one
    RngStream s(5);
    for (int rep = 0; rep < 50; ++rep) {
        int k = 2 + static_cast<int>(s.next_below(8));
        Dataset counts(k);
        int n = 0;
        for (auto& c : counts) {
            c = static_cast<double>(s.next_below(50));
            n += static_cast<int>(c);
        }
        ParamPoint est = jeffreys_estimate(counts, n, k);
        double total = 0;
        for (std::size_t i = 0; i < est.dim(); ++i) total += est[i];
        CHECK(std::fabs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("pi_max value, permutation invariance and lipschitz bound") {
    CHECK(pi_max(ParamPoint({0.7, 0.075, 0.075, 0.075, 0.075})) == 0.7);
    CHECK(pi_max(ParamPoint({0.25, 0.25, 0.25, 0.25})) == 0.25);
    CHECK(pi_max(ParamPoint({0.075, 0.7, 0.075, 0.075, 0.075})) == 0.7);

    RngStream s(7);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> x(5), y(5);
        double sup = 0;
        for (int i = 0; i < 5; ++i) {
            x[i] = s.next_double();
            y[i] = s.next_double();
            sup = std::max(sup, std::fabs(x[i] - y[i]));
        }
        CHECK(std::fabs(pi_max(ParamPoint(x)) - pi_max(ParamPoint(y))) <= sup + 1e-15);
    }
}

TEST_CASE("neighborhood width, clipping and feasibility") {
    MultinomialModel model(5, 30);
    ParamPoint pi_hat({0.2, 0.2, 0.2, 0.2, 0.2});
    Region r = model.neighborhood(pi_hat, 30, 0.1);
    double w = 0.1 * std::log(30.0) / std::sqrt(30.0);
    CHECK(w == doctest::Approx(0.0621).epsilon(1e-3));
    CHECK(r.upper[0] - r.lower[0] == doctest::Approx(2 * w).epsilon(1e-12));

    // tiny delta collapses the box around the estimate
    Region tiny = model.neighborhood(pi_hat, 30, 1e-13);
    CHECK(tiny.upper[0] - tiny.lower[0] < 1e-12);

    // clipping at the unit cube
    Region edge = model.neighborhood(ParamPoint({0.97, 0.01, 0.005, 0.005, 0.01}), 30, 0.5);
    CHECK(edge.upper[0] <= 1.0);
    CHECK(edge.lower[1] >= 0.0);

    // try design members all sum to one
    TryDesign td = build_try_design(pi_hat, r, grid_design(3, 4));
    for (const auto& p : td.points) {
        double s = 0;
        for (double c : p.coords) s += c;
        CHECK(std::fabs(s - 1.0) <= 1e-10);
        CHECK(r.contains(p));
    }
    CHECK(td.size() == 51);  // the documented simplex-completion count at U=3
}

TEST_CASE("estimator round trip through the model interface") {
    MultinomialModel model(5, 30);
    Dataset counts{9, 6, 5, 5, 5};
    CHECK(model.sample_size(counts) == 30);
    ParamPoint est = model.estimate(counts);
    CHECK(est[0] == doctest::Approx(9.5 / 32.5));
    CHECK(model.target_estimate(counts) == pi_max(est));
}
