// Compares the serial reference path against the OpenMP path on the two
// data-parallel kernels (per-try-point resampling, per-replication
// simulation) and verifies that both produce identical results.

#include <chrono>
#include <cstdio>
#include <string>

#include "loci/harness.hpp"
#include "loci/models/multinomial.hpp"

using namespace loci;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void bench_try_points(int threads) {
    MultinomialModel model(5, 60);
    ParamPoint truth({0.3, 0.175, 0.175, 0.175, 0.175});
    Dataset data = model.simulate(truth, 60, RngStream(1).derive(7));
    ParamPoint theta_hat = model.estimate(data);
    Region region = model.neighborhood(theta_hat, 60, 0.5);
    TryDesign design = build_try_design(theta_hat, region, grid_design(5, 4));

    EngineOptions serial;
    EngineOptions parallel;
    parallel.exec = Exec::parallel(threads);

    auto t0 = std::chrono::steady_clock::now();
    CiResult a = nb_ci(model, data, region, design, 4000, RngStream(2), 0.05, CiSide::two_sided,
                       serial);
    double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    CiResult b = nb_ci(model, data, region, design, 4000, RngStream(2), 0.05, CiSide::two_sided,
                       parallel);
    double tp = seconds_since(t0);

    bool same = a.lower == b.lower && a.upper == b.upper;
    std::printf("per-try-point interval | %3zu points | serial %7.3fs | omp(%d) %7.3fs | "
                "speedup %5.2fx | identical %s\n",
                design.size(), ts, threads, tp, ts / tp, same ? "yes" : "NO");
}

void bench_replications(int threads) {
    ExperimentConfig c;
    c.model = "multinomial";
    c.model_config = {{"k", 5}, {"n", 30}, {"pi", {0.2, 0.2, 0.2, 0.2, 0.2}}};
    c.experiment = "ci";
    c.methods = {HarnessMethod::bootstrap, HarnessMethod::loci_nb};
    c.reps = 200;
    c.M = 400;
    c.delta = 0.1;
    c.design.U = 3;
    c.seed = 99;

    c.threads = 1;
    auto t0 = std::chrono::steady_clock::now();
    SimReport serial = run_ci_experiment(c);
    double ts = seconds_since(t0);

    c.threads = threads;
    t0 = std::chrono::steady_clock::now();
    SimReport parallel = run_ci_experiment(c);
    double tp = seconds_since(t0);

    bool same = serial.rows.size() == parallel.rows.size();
    for (std::size_t i = 0; same && i < serial.rows.size(); ++i)
        same = serial.rows[i].value == parallel.rows[i].value;
    std::printf("replication harness     | %3d reps   | serial %7.3fs | omp(%d) %7.3fs | "
                "speedup %5.2fx | identical %s\n",
                c.reps, ts, threads, tp, ts / tp, same ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    int threads = hardware_threads();
    if (argc > 1) threads = std::max(1, std::atoi(argv[1]));
    std::printf("threads available: %d\n", hardware_threads());
    bench_try_points(threads);
    bench_replications(threads);
    return 0;
}
