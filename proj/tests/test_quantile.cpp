#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "loci/quantile.hpp"
#include "loci/rng.hpp"
#include "support/oracles.hpp"

using namespace loci;

TEST_CASE("sample_quantile is the ceil(gamma M) order statistic") {
    CHECK(sample_quantile({1, 2, 3}, 0.5) == 2);
    CHECK(sample_quantile({5}, 0.1) == 5);
    CHECK(sample_quantile({5}, 0.9) == 5);

    std::vector<double> v;
    for (int i = 1; i <= 1000; ++i) v.push_back(i);
    CHECK(sample_quantile(v, 0.975) == 975);

    CHECK_THROWS_AS(sample_quantile({}, 0.5), InputError);
    CHECK_THROWS_AS(sample_quantile({1.0}, 0.0), InputError);
}

TEST_CASE("sample_quantile agrees with the sort oracle on random inputs") {
    RngStream s(31);
    for (int rep = 0; rep < 50; ++rep) {
        int M = 1 + static_cast<int>(s.next_below(200));
        std::vector<double> v(M);
        for (auto& x : v) x = s.next_normal();
        double gamma = 0.01 + 0.98 * s.next_double();
        CHECK(sample_quantile(v, gamma) == oracles::sort_quantile(v, gamma));
    }
}

TEST_CASE("weighted_quantile reduces to sample_quantile under unit weights") {
    RngStream s(32);
    for (int rep = 0; rep < 30; ++rep) {
        int M = 1 + static_cast<int>(s.next_below(100));
        std::vector<double> v(M);
        for (auto& x : v) x = s.next_normal();
        std::vector<double> w(M, 1.0);
        double gamma = 0.01 + 0.98 * s.next_double();
        CHECK(weighted_quantile(v, w, gamma) == sample_quantile(v, gamma));
    }
}

TEST_CASE("weighted_quantile handles concentrated and degenerate weights") {
    CHECK(weighted_quantile({1.0, 2.0}, {2.0, 0.0}, 0.9) == 1.0);
    CHECK_THROWS_AS(weighted_quantile({1.0, 2.0}, {0.0, 0.0}, 0.5), NumericError);
    CHECK_THROWS_AS(weighted_quantile({1.0}, {-1.0}, 0.5), InputError);

    // total normalized mass below gamma: +inf
    double q = weighted_quantile({1.0, 2.0, 3.0}, {0.1, 0.1, 0.1}, 0.5);
    CHECK(std::isinf(q));
}

TEST_CASE("weighted_quantile matches the quadratic scan oracle") {
    RngStream s(33);
    for (int rep = 0; rep < 60; ++rep) {
        int M = 1 + static_cast<int>(s.next_below(120));
        std::vector<double> v(M), w(M);
        for (int i = 0; i < M; ++i) {
            v[i] = s.next_normal();
            w[i] = std::exp(s.next_normal());  // lognormal weights, like importance ratios
        }
        double gamma = 0.01 + 0.98 * s.next_double();
        double got = weighted_quantile(v, w, gamma);
        double want = oracles::weighted_quantile_scan(v, w, gamma);
        if (std::isinf(want))
            CHECK(std::isinf(got));
        else
            CHECK(got == want);
    }
}
