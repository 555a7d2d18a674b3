#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "loci/math_util.hpp"
#include "loci/rng.hpp"

using loci::RngStream;

TEST_CASE("identical seeds give identical streams") {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("derive is independent of parent draw position") {
    RngStream a(7);
    RngStream child_before = a.derive(3);
    a.next_u64();
    a.next_u64();
    RngStream child_after = a.derive(3);
    CHECK(child_before.next_u64() == child_after.next_u64());
}

TEST_CASE("distinct tags and seeds give distinct streams") {
    RngStream root(123);
    std::set<std::uint64_t> firsts;
    for (std::uint64_t tag = 0; tag < 1000; ++tag) firsts.insert(root.derive(tag).next_u64());
    CHECK(firsts.size() == 1000);

    CHECK(RngStream(1).next_u64() != RngStream(2).next_u64());
}

TEST_CASE("uniforms live in the open unit interval with sane moments") {
    RngStream s(99);
    const int N = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < N; ++i) {
        double u = s.next_double();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        sum += u;
        sumsq += u * u;
    }
    double mean = sum / N;
    double var = sumsq / N - mean * mean;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0 / 12.0).epsilon(0.02));
}

TEST_CASE("normal draws match the first four standard moments") {
    RngStream s(2024);
    const int N = 200000;
    double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (int i = 0; i < N; ++i) {
        double z = s.next_normal();
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
    }
    m1 /= N;
    m2 /= N;
    m3 /= N;
    m4 /= N;
    CHECK(std::fabs(m1) < 0.01);
    CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::fabs(m3) < 0.05);
    CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("normal quantile inverts the normal cdf") {
    for (double p : {1e-12, 1e-6, 0.01, 0.025, 0.3, 0.5, 0.8, 0.975, 0.999, 1.0 - 1e-9}) {
        double x = loci::normal_quantile(p);
        CHECK(loci::normal_cdf(x) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(loci::normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::isinf(loci::normal_quantile(0.0)));
    CHECK(std::isinf(loci::normal_quantile(1.0)));
}

TEST_CASE("next_below is unbiased over small ranges") {
    RngStream s(5);
    std::vector<int> counts(7, 0);
    const int N = 70000;
    for (int i = 0; i < N; ++i) counts[static_cast<std::size_t>(s.next_below(7))]++;
    for (int c : counts) CHECK(std::fabs(c - N / 7.0) < 5.0 * std::sqrt(N / 7.0));
}
