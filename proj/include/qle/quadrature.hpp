#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qle/sampled.hpp"
#include "qle/units.hpp"

namespace qle {

// Oscillatory factor multiplying the smooth envelope.
enum class Oscillation { None, Cos, Sin, OneMinusCos };

// A characteristic spectral feature (resonance, cutoff, thermal scale).
// The engine seeds panel boundaries around each one so that narrow peaks
// cannot slip between sample points.
struct Feature {
    double center;
    double width;
};

// Semi-infinite spectral integrand: envelope(w) * thermal(w) * osc(w t).
//
// zero_power declares the power p of the FULL integrand (envelope, thermal
// factor, and oscillation factor combined) as w -> 0+.  Integrability
// requires p > -1; the first panel is integrated through a power-law
// substitution built from p.
struct SpectralIntegrand {
    std::function<double(double)> envelope;
    std::optional<ThermalState> thermal;
    UnitSystem units = UnitSystem::reduced();
    Oscillation osc = Oscillation::None;
    double time = 0.0;
    double zero_power = 0.0;
    std::vector<Feature> features;
};

enum class TailStrategy { ExponentialTail, AsymptoticFilon };

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_panels = 16384;
    TailStrategy tail = TailStrategy::AsymptoticFilon;
    // 0 = choose automatically from the integrand's features.
    double omega_break = 0.0;
    // Hard upper integration limit (0 = none).  Used for tabulated data whose
    // support ends at a finite frequency.
    double truncate_at = 0.0;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
    long evaluations = 0;
};

// Adaptive evaluation of  integral_0^inf envelope * thermal * osc dw.
// Gauss-Kronrod 7/15 panels with feature-aware seeding on the low-frequency
// region; half-period panels with Euler series acceleration for the
// oscillatory tail.  Deterministic for a fixed spec.
// Throws ConvergenceError (carrying the partial value) on panel exhaustion.
QuadratureResult integrate_spectral(const SpectralIntegrand& integrand,
                                    const QuadratureSpec& spec = {});

// Batch cosine transform over a t grid: values(t_i) of the same spectral
// envelope.  Points are independent and evaluated in parallel; output
// ordering is deterministic.
SampledFunction inverse_cos_transform(const SpectralIntegrand& base,
                                      const std::vector<double>& t_grid,
                                      const QuadratureSpec& spec = {},
                                      int n_threads = 0);

// Estimate the power p of f near 0 by log-slope sampling; convenience for
// callers that do not know their integrand's origin behavior analytically.
double detect_zero_power(const std::function<double(double)>& f, double scale);

}  // namespace qle
