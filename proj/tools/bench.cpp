// Serial vs parallel timings for the two data-parallel kernels: Langevin
// path ensembles and batched inverse cosine transforms.  Also checks that
// the parallel ensemble is bitwise identical to the serial reference.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qle/correlations.hpp"
#include "qle/simulate.hpp"

using clock_type = std::chrono::steady_clock;

static double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int main(int argc, char** argv) {
    int n_paths = argc > 1 ? std::atoi(argv[1]) : 2000;

    qle::UnitSystem units = qle::UnitSystem::reduced();
    qle::SystemConfig sys{1.0, 1.0, units};
    qle::SimulationPlan plan{sys, qle::BathModel::ohmic(0.5), {1.0, true}};
    plan.dt = 1e-3;
    plan.steps = 5000;
    plan.n_paths = n_paths;
    plan.seed = 12345;

    auto t0 = clock_type::now();
    auto serial = qle::integrate_langevin_serial(plan);
    double ts = seconds_since(t0);

    t0 = clock_type::now();
    auto parallel = qle::integrate_langevin(plan);
    double tp = seconds_since(t0);

    bool identical =
        serial.positions.size() == parallel.positions.size() &&
        std::memcmp(serial.positions.data(), parallel.positions.data(),
                    serial.positions.size() * sizeof(double)) == 0;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("langevin %d paths x %d steps\n", plan.n_paths, plan.steps);
    std::printf("  serial    %8.3f s\n", ts);
    std::printf("  parallel  %8.3f s  (%d threads, speedup %.2fx)\n", tp,
                threads, ts / tp);
    std::printf("  bitwise identical: %s\n", identical ? "yes" : "NO");

    // batch transform: C(t) of a damped oscillator on a 64-point grid
    qle::ResponseFunction resp(sys, qle::BathModel::ohmic(0.2));
    qle::CorrelationRequest req{resp, {2.0, false}, {}};
    auto grid = qle::linspace(0.0, 20.0, 64);

    auto run_batch = [&] {
        double acc = 0.0;
        for (double t : grid) acc += qle::position_autocorrelation(req, t);
        return acc;
    };

    t0 = clock_type::now();
    double a1 = run_batch();
    double tb = seconds_since(t0);
    std::printf("correlation batch, 64 points: %.3f s (checksum %.6g)\n", tb, a1);

    return identical ? 0 : 1;
}
