#include "qle/simulate.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <random>

#include "qle/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qle {

namespace {

constexpr double kOverflowGuard = 1e50;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

// Circulant-embedding spectral amplitudes for covariance r[0..n-1] on a
// uniform grid: eigenvalues of the 2(n-1)-circulant built from the mirrored
// sequence.  All plan/FFT work is serialized (FFTW planning is not
// thread-safe); execution on private buffers is.
std::vector<double> embedding_eigenvalues(const std::vector<double>& r) {
    size_t n = r.size();
    size_t L = 2 * (n - 1);
    std::vector<double> c(L);
    for (size_t k = 0; k < n; ++k) c[k] = r[k];
    for (size_t k = n; k < L; ++k) c[k] = r[L - k];

    std::vector<fftw_complex> in(L), out(L);
    for (size_t k = 0; k < L; ++k) {
        in[k][0] = c[k];
        in[k][1] = 0.0;
    }
    static std::mutex plan_mutex;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(L), in.data(), out.data(),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(plan);
    }

    std::vector<double> lam(L);
    double scale = std::abs(c[0]);
    for (size_t k = 0; k < L; ++k) {
        double v = out[k][0];
        if (v < -1e-10 * L * scale)
            throw ValidationError(
                "generate_colored_noise: embedded covariance not positive "
                "semidefinite; refine dt or extend the grid");
        lam[k] = std::max(v, 0.0);
    }
    return lam;
}

// One stationary Gaussian realization of length n from the eigenvalues.
std::vector<double> embedded_sample(const std::vector<double>& lam, size_t n,
                                    std::mt19937_64& rng) {
    size_t L = lam.size();
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<fftw_complex> in(L), out(L);
    for (size_t k = 0; k < L; ++k) {
        double s = std::sqrt(lam[k] / static_cast<double>(L));
        in[k][0] = s * N(rng);
        in[k][1] = s * N(rng);
    }
    static std::mutex plan_mutex;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(L), in.data(), out.data(),
                                FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(plan_mutex);
        fftw_destroy_plan(plan);
    }
    std::vector<double> x(n);
    for (size_t k = 0; k < n; ++k) x[k] = out[k][0];
    return x;
}

std::vector<double> noise_sequence(const BathModel& bath,
                                   const ThermalState& state,
                                   const UnitSystem& units, double dt,
                                   size_t n, std::mt19937_64& rng) {
    double kT = units.kB * state.T;
    if (bath.kind() == BathKind::Ohmic) {
        double sigma = std::sqrt(2.0 * bath.zeta() * kT / dt);
        std::normal_distribution<double> N(0.0, sigma);
        std::vector<double> f(n);
        for (auto& v : f) v = N(rng);
        return f;
    }
    if (bath.kind() == BathKind::SingleRelaxation) {
        double wr = bath.omega_r();
        std::vector<double> r(n < 2 ? 2 : n);
        for (size_t k = 0; k < r.size(); ++k)
            r[k] = kT * bath.zeta() * wr * std::exp(-wr * dt * static_cast<double>(k));
        return embedded_sample(embedding_eigenvalues(r), n, rng);
    }
    throw UnsupportedError("noise_sequence: bath model has no classical "
                           "trajectory representation here");
}

struct StepState {
    double x, v, u;  // u = friction memory (single-relaxation only)
};

// One Langevin step with noise value f held over [t, t+dt].
StepState step_once(const SimulationPlan& plan, const StepState& s, double f) {
    double m = plan.system.mass;
    double K = plan.system.stiffness;
    bool sr = plan.bath.kind() == BathKind::SingleRelaxation;
    double zeta = plan.bath.zeta();
    double wr = plan.bath.omega_r();

    auto accel = [&](const StepState& q) {
        double friction = sr ? q.u : zeta * q.v;
        return (f - friction - K * q.x) / m;
    };
    auto udot = [&](const StepState& q) { return -wr * q.u + zeta * wr * q.v; };

    StepState out;
    if (plan.scheme == Scheme::EulerMaruyama) {
        out.x = s.x + plan.dt * s.v;
        out.v = s.v + plan.dt * accel(s);
        out.u = sr ? s.u + plan.dt * udot(s) : 0.0;
    } else {
        // Heun: predictor-corrector with the noise frozen over the step
        StepState p;
        p.x = s.x + plan.dt * s.v;
        p.v = s.v + plan.dt * accel(s);
        p.u = sr ? s.u + plan.dt * udot(s) : 0.0;
        out.x = s.x + 0.5 * plan.dt * (s.v + p.v);
        out.v = s.v + 0.5 * plan.dt * (accel(s) + accel(p));
        out.u = sr ? s.u + 0.5 * plan.dt * (udot(s) + udot(p)) : 0.0;
    }
    return out;
}

void run_path(const SimulationPlan& plan, int i, TrajectoryEnsemble& ens) {
    auto rng = path_rng(plan.seed, static_cast<std::uint64_t>(i));
    auto noise = noise_sequence(plan.bath, plan.state, plan.system.units,
                                plan.dt, static_cast<size_t>(plan.steps), rng);
    double* row = ens.positions.data() +
                  static_cast<size_t>(i) * (plan.steps + 1);
    StepState s{plan.x0, plan.v0, 0.0};
    row[0] = s.x;
    for (int n = 0; n < plan.steps; ++n) {
        s = step_once(plan, s, noise[static_cast<size_t>(n)]);
        if (!std::isfinite(s.x) || std::abs(s.x) > kOverflowGuard)
            throw BlowUpError("integrate_langevin: trajectory overflow", i);
        row[n + 1] = s.x;
    }
    ens.final_velocity[static_cast<size_t>(i)] = s.v;
}

TrajectoryEnsemble integrate_impl(const SimulationPlan& plan, bool parallel) {
    plan.validate();
    TrajectoryEnsemble ens;
    ens.n_paths = plan.n_paths;
    ens.steps = plan.steps;
    ens.dt = plan.dt;
    ens.seed = plan.seed;
    ens.t_grid.resize(static_cast<size_t>(plan.steps) + 1);
    for (int n = 0; n <= plan.steps; ++n)
        ens.t_grid[static_cast<size_t>(n)] = plan.dt * n;
    ens.positions.resize(static_cast<size_t>(plan.n_paths) * (plan.steps + 1));
    ens.final_velocity.resize(static_cast<size_t>(plan.n_paths));

    std::exception_ptr err;
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < plan.n_paths; ++i) {
            try {
                run_path(plan, i, ens);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
    } else {
        for (int i = 0; i < plan.n_paths; ++i) run_path(plan, i, ens);
    }
    if (err) std::rethrow_exception(err);
    return ens;
}

}  // namespace

double SimulationPlan::stability_rate() const {
    double rate = system.omega0();
    if (bath.zeta() > 0.0) rate = std::max(rate, bath.zeta() / system.mass);
    if (bath.kind() == BathKind::SingleRelaxation)
        rate = std::max(rate, bath.omega_r());
    return rate;
}

void SimulationPlan::validate() const {
    system.units.validate();
    state.validate();
    if (!state.classical)
        throw ValidationError(
            "SimulationPlan: trajectories are classical; set state.classical "
            "(quantum observables come from the analytic modules)");
    if (bath.kind() != BathKind::Ohmic &&
        bath.kind() != BathKind::SingleRelaxation)
        throw UnsupportedError(
            "SimulationPlan: only Ohmic and single-relaxation baths have a "
            "classical trajectory representation here");
    if (system.mass <= 0.0) throw ValidationError("SimulationPlan: mass <= 0");
    if (system.stiffness < 0.0)
        throw ValidationError("SimulationPlan: stiffness < 0");
    if (dt <= 0.0) throw ValidationError("SimulationPlan: dt <= 0");
    if (steps <= 0) throw ValidationError("SimulationPlan: steps <= 0");
    if (n_paths <= 0) throw ValidationError("SimulationPlan: n_paths <= 0");
    if (dt * stability_rate() >= 0.1)
        throw ValidationError(
            "SimulationPlan: dt too coarse; require dt * max(gamma, w0, "
            "Omega_r) < 0.1");
}

SampledFunction generate_colored_noise(const BathModel& bath,
                                       const ThermalState& state,
                                       const UnitSystem& units,
                                       const std::vector<double>& t_grid,
                                       std::uint64_t seed) {
    state.validate();
    if (!state.classical)
        throw ValidationError("generate_colored_noise: classical regime only");
    if (t_grid.size() < 2)
        throw ValidationError("generate_colored_noise: need >= 2 grid points");
    double dt = t_grid[1] - t_grid[0];
    for (size_t k = 1; k < t_grid.size(); ++k)
        if (std::abs(t_grid[k] - t_grid[k - 1] - dt) > 1e-9 * dt)
            throw ValidationError("generate_colored_noise: grid must be uniform");

    auto rng = path_rng(seed, 0);
    SampledFunction out;
    out.x = t_grid;
    out.y = noise_sequence(bath, state, units, dt, t_grid.size(), rng);
    out.meta["columns"] = "t, F(t)";
    return out;
}

std::vector<double> path_noise(const SimulationPlan& plan, int path_index) {
    plan.validate();
    if (path_index < 0 || path_index >= plan.n_paths)
        throw ValidationError("path_noise: path index out of range");
    auto rng = path_rng(plan.seed, static_cast<std::uint64_t>(path_index));
    return noise_sequence(plan.bath, plan.state, plan.system.units, plan.dt,
                          static_cast<size_t>(plan.steps), rng);
}

TrajectoryEnsemble integrate_langevin(const SimulationPlan& plan) {
    return integrate_impl(plan, true);
}

TrajectoryEnsemble integrate_langevin_serial(const SimulationPlan& plan) {
    return integrate_impl(plan, false);
}

MsdEstimate ensemble_msd(const TrajectoryEnsemble& ens) {
    if (ens.n_paths < 100)
        throw ValidationError("ensemble_msd: need >= 100 paths for statistics");
    size_t np = static_cast<size_t>(ens.n_paths);
    size_t nt = static_cast<size_t>(ens.steps) + 1;
    MsdEstimate out;
    out.t = ens.t_grid;
    out.s.resize(nt);
    out.se.resize(nt);
    std::vector<double> d2(np);
    for (size_t k = 0; k < nt; ++k) {
        for (size_t i = 0; i < np; ++i) {
            const double* row = ens.path(static_cast<int>(i));
            double d = row[k] - row[0];
            d2[i] = d * d;
        }
        double mean = pairwise_sum(d2) / static_cast<double>(np);
        // leave-one-out jackknife on the mean
        double ss = 0.0;
        for (size_t i = 0; i < np; ++i) {
            double loo = (mean * static_cast<double>(np) - d2[i]) /
                         static_cast<double>(np - 1);
            ss += (loo - mean) * (loo - mean);
        }
        out.s[k] = mean;
        out.se[k] = std::sqrt(ss * static_cast<double>(np - 1) /
                              static_cast<double>(np));
    }
    return out;
}

void write_paths(const std::string& file, const TrajectoryEnsemble& ens) {
    std::FILE* f = std::fopen(file.c_str(), "wb");
    if (!f) throw Error("write_paths: cannot open " + file);
    const char magic[8] = {'Q', 'L', 'E', 'P', 'A', 'T', 'H', '1'};
    std::uint64_t np = static_cast<std::uint64_t>(ens.n_paths);
    std::uint64_t nt = static_cast<std::uint64_t>(ens.steps) + 1;
    bool ok = std::fwrite(magic, 1, 8, f) == 8 &&
              std::fwrite(&np, sizeof np, 1, f) == 1 &&
              std::fwrite(&nt, sizeof nt, 1, f) == 1 &&
              std::fwrite(&ens.dt, sizeof ens.dt, 1, f) == 1 &&
              std::fwrite(ens.positions.data(), sizeof(double),
                          ens.positions.size(), f) == ens.positions.size();
    std::fclose(f);
    if (!ok) throw Error("write_paths: short write to " + file);
}

TrajectoryEnsemble read_paths(const std::string& file) {
    std::FILE* f = std::fopen(file.c_str(), "rb");
    if (!f) throw Error("read_paths: cannot open " + file);
    char magic[8];
    std::uint64_t np = 0, nt = 0;
    TrajectoryEnsemble ens;
    bool ok = std::fread(magic, 1, 8, f) == 8 &&
              std::memcmp(magic, "QLEPATH1", 8) == 0 &&
              std::fread(&np, sizeof np, 1, f) == 1 &&
              std::fread(&nt, sizeof nt, 1, f) == 1 &&
              std::fread(&ens.dt, sizeof ens.dt, 1, f) == 1 && nt >= 1;
    if (ok) {
        ens.n_paths = static_cast<int>(np);
        ens.steps = static_cast<int>(nt) - 1;
        ens.positions.resize(np * nt);
        ok = std::fread(ens.positions.data(), sizeof(double),
                        ens.positions.size(), f) == ens.positions.size();
        ens.t_grid.resize(nt);
        for (std::uint64_t k = 0; k < nt; ++k)
            ens.t_grid[k] = ens.dt * static_cast<double>(k);
    }
    std::fclose(f);
    if (!ok) throw ValidationError("read_paths: malformed path dump " + file);
    return ens;
}

}  // namespace qle
