#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qle/bath.hpp"
#include "qle/response.hpp"
#include "qle/sampled.hpp"

namespace qle {

enum class Scheme { EulerMaruyama, StrongOrder1 };

// Classical Langevin Monte Carlo plan.  Quantum regimes are analytic-only;
// the state must carry the classical flag.
struct SimulationPlan {
    SystemConfig system;
    BathModel bath;  // Ohmic or SingleRelaxation
    ThermalState state;
    double dt = 0.0;
    int steps = 0;
    int n_paths = 0;
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::EulerMaruyama;
    double x0 = 0.0;
    double v0 = 0.0;

    void validate() const;
    double stability_rate() const;  // max(gamma, w0, Omega_r)
};

struct TrajectoryEnsemble {
    std::vector<double> t_grid;       // steps + 1 points, t0 = 0
    std::vector<double> positions;    // row-major n_paths x (steps + 1)
    std::vector<double> final_velocity;  // per path, at t = steps*dt
    int n_paths = 0;
    int steps = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;

    const double* path(int i) const { return positions.data() + static_cast<size_t>(i) * (steps + 1); }
};

// Stationary Gaussian force path with the classical fluctuation-dissipation
// covariance: white with per-sample variance 2 zeta kT / dt for Ohmic,
// R(tau) = kT zeta Omega_r exp(-Omega_r |tau|) for single-relaxation
// (circulant embedding, exact covariance on the grid).
SampledFunction generate_colored_noise(const BathModel& bath,
                                       const ThermalState& state,
                                       const UnitSystem& units,
                                       const std::vector<double>& t_grid,
                                       std::uint64_t seed);

// The noise sequence integrate_langevin feeds to path i of this plan
// (exposed so reference integrators can share realizations).
std::vector<double> path_noise(const SimulationPlan& plan, int path_index);

// OpenMP over paths; bitwise reproducible for a fixed plan regardless of
// worker count (per-path RNG streams, preallocated rows).
TrajectoryEnsemble integrate_langevin(const SimulationPlan& plan);
// Same stepping without the parallel pragma; must match bitwise.
TrajectoryEnsemble integrate_langevin_serial(const SimulationPlan& plan);

// s(t) = < [x(t) - x(0)]^2 > with leave-one-out jackknife standard errors.
struct MsdEstimate {
    std::vector<double> t;
    std::vector<double> s;
    std::vector<double> se;
};
MsdEstimate ensemble_msd(const TrajectoryEnsemble& ens);

// Little-endian raw dump: magic "QLEPATH1", u64 n_paths, u64 steps+1,
// f64 dt, then the row-major position matrix.
void write_paths(const std::string& file, const TrajectoryEnsemble& ens);
TrajectoryEnsemble read_paths(const std::string& file);

}  // namespace qle
