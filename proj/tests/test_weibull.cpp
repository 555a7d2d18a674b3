#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "loci/models/weibull.hpp"
#include "support/oracles.hpp"

using namespace loci;

namespace {

double weibull_pdf(double x, double a, double b, double tau) {
    if (x <= tau) return 0.0;
    double z = (x - tau) / a;
    return (b / a) * std::pow(z, b - 1.0) * std::exp(-std::pow(z, b));
}

// zooming grid search over (a, b, tau), an independent check on the simplex fit
struct GridFit {
    double a, b, tau, objective;
};
GridFit nested_grid_mps(const std::vector<double>& sorted, double a_lo, double a_hi, double b_lo,
                        double b_hi, double t_lo, double t_hi, int stages, int steps) {
    GridFit best{1, 1, 0, -1e308};
    for (int stage = 0; stage < stages; ++stage) {
        best.objective = -1e308;
        for (int ia = 0; ia <= steps; ++ia)
            for (int ib = 0; ib <= steps; ++ib)
                for (int it = 0; it <= steps; ++it) {
                    double a = a_lo + (a_hi - a_lo) * ia / steps;
                    double b = b_lo + (b_hi - b_lo) * ib / steps;
                    double t = t_lo + (t_hi - t_lo) * it / steps;
                    double v = mps_objective(a, b, t, sorted);
                    if (v > best.objective) best = {a, b, t, v};
                }
        double a_step = (a_hi - a_lo) / steps, b_step = (b_hi - b_lo) / steps,
               t_step = (t_hi - t_lo) / steps;
        a_lo = std::max(1e-6, best.a - 1.5 * a_step);
        a_hi = best.a + 1.5 * a_step;
        b_lo = std::max(1e-6, best.b - 1.5 * b_step);
        b_hi = best.b + 1.5 * b_step;
        t_lo = best.tau - 1.5 * t_step;
        t_hi = std::min(sorted.front() - 1e-12, best.tau + 1.5 * t_step);
    }
    return best;
}

}  // namespace

TEST_CASE("simulation: exponential special case and the unit quantile identity") {
    WeibullModel model(20);
    const double a = 1.7, tau = 0.4;
    const int n = 40000;
    Dataset x = model.simulate(ParamPoint({a, 1.0, tau}), n, RngStream(3));
    double mean = 0;
    for (double v : x) {
        CHECK(v > tau);
        mean += v;
    }
    mean /= n;
    CHECK(std::fabs(mean - (tau + a)) <= 3.0 * a / std::sqrt(static_cast<double>(n)));

    // F(tau + a) = 1 - exp(-1) for every shape
    for (double b : {0.5, 1.0, 2.5}) {
        WeibullParams p{a, b, tau};
        CHECK(weibull_cdf(tau + a, p) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
    }
}

TEST_CASE("simulation matches the closed-form cdf in kolmogorov distance") {
    WeibullModel model(20);
    WeibullParams p{2.0, 1.5, 1.0};
    const int n = 100000;
    Dataset x = model.simulate(ParamPoint({p.a, p.b, p.tau}), n, RngStream(11));
    std::sort(x.begin(), x.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        double F = weibull_cdf(x[i], p);
        ks = std::max(ks, std::fabs(F - (i + 1.0) / n));
        ks = std::max(ks, std::fabs(F - static_cast<double>(i) / n));
    }
    CHECK(ks < 0.01);
}

TEST_CASE("mps objective: two-spacing case, ties, infeasible location") {
    // n = 1: objective = log F + log(1 - F), maximized when F = 1/2
    std::vector<double> one{2.0};
    // choose (a, b, tau) with F(2) = 1/2: tau = 1, a = 1/ (log 2)^(1/b), b = 1
    double a_half = 1.0 / std::log(2.0);
    double at_half = mps_objective(a_half, 1.0, 1.0, one);
    CHECK(at_half == doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-12));
    CHECK(mps_objective(0.3, 1.0, 1.0, one) < at_half);
    CHECK(mps_objective(3.0, 1.0, 1.0, one) < at_half);

    // a tie floors one spacing
    std::vector<double> tied{1.0, 1.5, 1.5, 2.0};
    double v = mps_objective(1.0, 1.0, 0.5, tied);
    CHECK(std::isfinite(v));
    CHECK(v < std::log(1e-290));

    // tau at or above the minimum is infeasible
    CHECK(mps_objective(1.0, 1.0, 1.0, tied) == -std::numeric_limits<double>::infinity());
    CHECK(mps_objective(1.0, 1.0, 5.0, tied) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("mps objective agrees with quadrature over each spacing") {
    WeibullModel model(20);
    Dataset x = model.simulate(ParamPoint({2.5, 0.8, 1.0}), 20, RngStream(17));
    std::sort(x.begin(), x.end());

    const double a = 2.2, b = 0.9, tau = 0.8;
    double direct = mps_objective(a, b, tau, x);

    auto pdf = [&](double t) { return weibull_pdf(t, a, b, tau); };
    double total = std::log(oracles::integrate(pdf, tau, x[0], 1e-14));
    for (int i = 1; i < 20; ++i) total += std::log(oracles::integrate(pdf, x[i - 1], x[i], 1e-14));
    double cutoff = x[19] + a * std::pow(-std::log(1e-18), 1.0 / b);
    total += std::log(oracles::integrate(pdf, x[19], cutoff, 1e-14));

    CHECK(direct == doctest::Approx(total).epsilon(1e-8));
}

TEST_CASE("mps objective and estimate are location equivariant") {
    WeibullModel model(20);
    Dataset x = model.simulate(ParamPoint({2.5, 1.5, 1.0}), 20, RngStream(19));
    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());

    const double c = 3.75;
    std::vector<double> shifted(sorted);
    for (auto& v : shifted) v += c;

    CHECK(mps_objective(2.0, 1.2, 0.7, sorted) ==
          doctest::Approx(mps_objective(2.0, 1.2, 0.7 + c, shifted)).epsilon(1e-9));

    MpsFit f1 = mps_estimate(sorted);
    MpsFit f2 = mps_estimate(shifted);
    CHECK(f2.params.tau == doctest::Approx(f1.params.tau + c).epsilon(1e-5));
    CHECK(f2.params.a == doctest::Approx(f1.params.a).epsilon(1e-5));
    CHECK(f2.params.b == doctest::Approx(f1.params.b).epsilon(1e-5));
}

TEST_CASE("mps estimate: consistency at large n and tau below the minimum") {
    WeibullModel model(2000);
    Dataset x = model.simulate(ParamPoint({2.5, 0.5, 1.0}), 2000, RngStream(23));
    MpsFit fit = mps_estimate(x);
    CHECK(std::fabs(fit.params.tau - 1.0) < 0.05);
    CHECK(fit.params.tau < *std::min_element(x.begin(), x.end()));

    CHECK_THROWS_AS(mps_estimate({1.0, 2.0}), InputError);
    CHECK_THROWS_AS(mps_estimate({1.0, 1.0, 1.0}), InputError);
}

TEST_CASE("mps estimate matches the nested grid oracle on a fixed sample") {
    WeibullModel model(20);
    Dataset x = model.simulate(ParamPoint({2.5, 2.5, 1.0}), 20, RngStream(29));
    std::vector<double> sorted(x);
    std::sort(sorted.begin(), sorted.end());

    MpsFit fit = mps_estimate(sorted);
    double span = sorted.back() - sorted.front();
    GridFit grid = nested_grid_mps(sorted, 0.05, 3.0 * span, 0.05, 8.0,
                                   sorted.front() - span, sorted.front() - 1e-9, 4, 24);

    // the simplex search should not lose to the zooming grid
    CHECK(fit.objective >= grid.objective - 1e-4);
    CHECK(fit.params.tau == doctest::Approx(grid.tau).epsilon(0.15));
}

TEST_CASE("neighborhood width tracks the estimated shape") {
    WeibullModel model(20);
    Region r1 = model.neighborhood(ParamPoint({1.0, 0.5, 0.0}), 20, 1.0);
    double w1 = 4.0 * std::exp(-std::pow(2.0, 5.0)) * std::log(20.0) / std::sqrt(20.0);
    CHECK(r1.upper[2] - r1.lower[2] == doctest::Approx(2 * w1).epsilon(1e-9));
    CHECK(w1 < 1e-13);  // effectively the bootstrap

    Region r2 = model.neighborhood(ParamPoint({1.0, 2.5, 0.0}), 20, 1.0);
    double w2 = 4.0 * std::exp(-std::pow(0.4, 5.0)) * std::log(20.0) / std::sqrt(20.0);
    CHECK(w2 == doctest::Approx(2.652).epsilon(1e-3));
    CHECK(r2.upper[2] == doctest::Approx(w2));
    CHECK(r2.lower[0] == 0.0);  // scale box clipped at zero

    // width shrinks with n for a fixed shape
    Region r3 = model.neighborhood(ParamPoint({1.0, 2.5, 0.0}), 2000, 1.0);
    CHECK(r3.upper[2] < r2.upper[2]);
}
