#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "loci/design.hpp"
#include "loci/models/npreg.hpp"

using namespace loci;

namespace {

// two-sample Kolmogorov-Smirnov statistic; the estimator has atoms, so both
// pointers must pass through a tied value before the gap is measured
double ks2(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double ks = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        double v = std::numeric_limits<double>::infinity();
        if (i < a.size()) v = a[i];
        if (j < b.size()) v = std::min(v, b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        ks = std::max(ks, std::fabs(fa - fb));
    }
    return ks;
}

}  // namespace

TEST_CASE("kernel and smoother basics") {
    CHECK(epanechnikov(0.0) == 0.75);
    CHECK(epanechnikov(1.0) == 0.0);
    CHECK(epanechnikov(-2.0) == 0.0);

    NpregModel model(20);
    CHECK(model.bandwidth() == doctest::Approx(std::pow(20.0, -0.2) / 5.0));
    CHECK(model.x_grid()[0] == doctest::Approx(1.0 / 40.0));

    // constant responses reproduce the constant everywhere
    Dataset c(20, 3.25);
    for (double x : {0.0, 0.31, 0.5, 0.99})
        CHECK(model.nw(x, c) == doctest::Approx(3.25).epsilon(1e-12));

    // a bandwidth below the grid gap isolates single observations
    std::vector<double> xs = model.x_grid();
    Dataset y(20);
    for (int i = 0; i < 20; ++i) y[i] = i;
    CHECK(nadaraya_watson(xs[7], xs, y, 0.01) == doctest::Approx(7.0));

    // empty window falls back to the nearest response, flagged
    bool fell_back = false;
    double v = nadaraya_watson(-5.0, {0.4, 0.6}, {1.0, 2.0}, 0.05, &fell_back);
    CHECK(fell_back);
    CHECK(v == 1.0);
}

TEST_CASE("smoother matches an extended-precision direct summation") {
    NpregModel model(30);
    RngStream s(3);
    Dataset y(30);
    for (auto& v : y) v = s.next_normal();
    const double h = model.bandwidth();
    const auto& xs = model.x_grid();

    for (double x : {0.05, 0.37, 0.62, 0.93}) {
        long double num = 0.0L, den = 0.0L;
        for (int i = 0; i < 30; ++i) {
            long double u = (static_cast<long double>(x) - xs[i]) / h;
            long double k = std::fabs((double)u) <= 1.0L ? 0.75L * (1.0L - u * u) : 0.0L;
            num += k * y[i];
            den += k;
        }
        CHECK(model.nw(x, y) == doctest::Approx(static_cast<double>(num / den)).epsilon(1e-12));
    }
}

TEST_CASE("argmin estimation: monotone data, noiseless parabola, scan oracle") {
    NpregModel model(20);

    Dataset increasing(20);
    for (int i = 0; i < 20; ++i) increasing[i] = static_cast<double>(i);
    CHECK(model.argmin_estimate(increasing) == 0.0);

    // the smoothed parabola wiggles as design points enter and leave the
    // kernel window, so the argmin is pinned to within one data-grid step
    Dataset parab(20);
    for (int i = 0; i < 20; ++i) parab[i] = npreg_r(NpregFunction::I, model.x_grid()[i]);
    CHECK(std::fabs(model.argmin_estimate(parab) - 0.5) <= 1.0 / 20.0);

    RngStream s(5);
    Dataset noisy(20);
    for (int i = 0; i < 20; ++i) noisy[i] = parab[i] + 0.5 * s.next_normal();
    double got = model.argmin_estimate(noisy);
    double best_x = 0.0, best_v = 1e300;
    for (int g = 0; g <= 1000; ++g) {
        double x = g / 1000.0;
        double v = model.nw(x, noisy);
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    }
    CHECK(got == best_x);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
}

TEST_CASE("variance estimation: floor, quadratic scaling, noise recovery") {
    NpregModel model(20);
    Dataset flat(20, 1.0);
    CHECK(model.sigma2_estimate(flat) == 1e-12);  // exact fit floors

    RngStream s(7);
    Dataset y(20);
    for (auto& v : y) v = s.next_normal();
    Dataset y2(20);
    for (int i = 0; i < 20; ++i) y2[i] = 2.0 * y[i];
    CHECK(model.sigma2_estimate(y2) ==
          doctest::Approx(4.0 * model.sigma2_estimate(y)).epsilon(1e-12));

    NpregModel big(500);
    Dataset noise(500);
    RngStream s2(9);
    for (auto& v : noise) v = 2.0 + 0.5 * s2.next_normal();
    CHECK(big.sigma2_estimate(noise) == doctest::Approx(0.25).epsilon(0.10));
}

TEST_CASE("surrogate simulation collapses as the noise vanishes") {
    NpregModel model(20);
    ParamPoint truth = model.truth_point(NpregFunction::I, 1e-12);
    Dataset y = model.simulate(truth, 20, RngStream(11));
    for (int i = 0; i < 20; ++i)
        CHECK(y[i] == doctest::Approx(npreg_r(NpregFunction::I, model.x_grid()[i])).epsilon(1e-9));
    // the estimate from the noiseless mean vector is the deterministic argmin
    CHECK(std::fabs(model.target(truth) - model.target_estimate(y)) <= 1.0 / 20.0);
}

TEST_CASE("surrogate at the truth equals the raw regression simulation bit for bit") {
    const int n = 25;
    NpregModel model(n);
    const double sigma = 0.5;
    ParamPoint truth = model.truth_point(NpregFunction::III, sigma);

    Dataset via_model = model.simulate(truth, n, RngStream(13).derive(4));

    RngStream raw(13);
    RngStream stream = raw.derive(4);
    Dataset direct(n);
    for (int i = 0; i < n; ++i)
        direct[i] = npreg_r(NpregFunction::III, model.x_grid()[i]) + sigma * stream.next_normal();

    for (int i = 0; i < n; ++i) CHECK(via_model[i] == direct[i]);
}

TEST_CASE("the estimator distribution is stable across independent batches") {
    const int n = 20;
    NpregModel model(n);
    ParamPoint truth = model.truth_point(NpregFunction::I, 0.5);
    const int M = 8000;
    std::vector<double> batch_a(M), batch_b(M);
    RngStream root(17);
    for (int m = 0; m < M; ++m) {
        batch_a[m] = model.target_estimate(model.simulate(truth, n, root.derive(m)));
        batch_b[m] = model.target_estimate(model.simulate(truth, n, root.derive(M + m)));
    }
    CHECK(ks2(batch_a, batch_b) < 0.03);
}

TEST_CASE("neighborhood box follows the published shape") {
    const int n = 20;
    NpregModel model(n);
    std::vector<double> theta(n + 2, 0.0);
    theta[0] = 0.45;
    for (int i = 0; i < n; ++i) theta[i + 1] = 0.1 * i;
    theta[n + 1] = 0.5;  // sd
    Region r = model.neighborhood(ParamPoint(theta), n, 0.25);

    CHECK(r.upper[0] - theta[0] == doctest::Approx(0.125));
    CHECK(r.upper[1] - theta[1] == doctest::Approx(0.125));
    CHECK(r.upper[n + 1] - theta[n + 1] == doctest::Approx(0.25));
    CHECK(r.lower[0] >= 0.0);
    CHECK(r.upper[0] <= 1.0);
    CHECK(r.lower[n + 1] > 0.0);

    // ksi coordinate clipped into the unit interval near the edge
    theta[0] = 0.02;
    Region edge = model.neighborhood(ParamPoint(theta), n, 0.25);
    CHECK(edge.lower[0] == 0.0);

    // a 60-run lhd stays inside the box
    TryDesign td = build_try_design(ParamPoint(theta), edge, lhd_design(60, n + 2, RngStream(19)));
    CHECK(td.size() == 61);
    for (const auto& p : td.points) CHECK(edge.in_box(p.coords));
}

TEST_CASE("named regression functions carry their argmins") {
    CHECK(npreg_true_argmin(NpregFunction::I) == 0.5);
    CHECK(npreg_true_argmin(NpregFunction::II) == 1.0);
    CHECK(npreg_true_argmin(NpregFunction::III) == 0.375);
    CHECK(npreg_true_argmin(NpregFunction::IV) == 0.5);
    CHECK(npreg_r(NpregFunction::I, 0.5) == 0.0);
    CHECK(npreg_r(NpregFunction::II, 1.0) == 1.0);
    CHECK(npreg_r(NpregFunction::IV, 0.5) == 0.0);
    CHECK(npreg_function_from_string("III") == NpregFunction::III);
    CHECK_THROWS_AS(npreg_function_from_string("V"), InputError);
}
