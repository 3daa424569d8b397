#pragma once

#include <complex>

#include "qle/bath.hpp"
#include "qle/quadrature.hpp"
#include "qle/units.hpp"

namespace qle {

// Particle mass and oscillator stiffness.  K = 0 designates the free
// particle (Brownian case).  For blackbody baths the mass here is the
// renormalized (observed) mass; the bare mass never enters user-facing
// computation.
struct SystemConfig {
    double mass = 1.0;
    double stiffness = 0.0;
    UnitSystem units = UnitSystem::reduced();

    double omega0() const { return std::sqrt(stiffness / mass); }
    void validate() const {
        if (!(mass > 0.0)) throw ValidationError("mass must be > 0");
        if (stiffness < 0.0) throw ValidationError("stiffness must be >= 0");
    }
};

// Generalized susceptibility alpha(z) = 1/(-m z^2 - i z mu~(z) + K) and the
// quantities derived from it.  Construction runs a sampled argument-principle
// check that alpha is pole-free in the upper half plane.
class ResponseFunction {
  public:
    ResponseFunction(SystemConfig system, BathModel bath);

    const SystemConfig& system() const { return sys_; }
    const BathModel& bath() const { return bath_; }

    // alpha(w + i0+); throws on the free-particle pole at w = 0.
    std::complex<double> susceptibility(double omega) const;
    std::complex<double> susceptibility_at(std::complex<double> z) const;

    // Im d log alpha / dw on the real axis (phase derivative), analytic
    // through the bath's mu~ derivative.
    double log_derivative_imag(double omega) const;

    // Causal Green function: exactly 0 for t < 0.  Closed form for Ohmic
    // baths (all damping branches) and the free Brownian particle; numeric
    // inverse transform of alpha otherwise.
    double green_function(double t, const QuadratureSpec& spec = {}) const;
    // G'(t); closed form where available.  G'(0+) = 1/m for every model.
    double green_function_derivative(double t, const QuadratureSpec& spec = {}) const;

    // Force the sine-transform path even when a closed form exists (testing).
    double green_function_numeric(double t, const QuadratureSpec& spec = {}) const;

    // Coefficient of i*hbar in [x(t1), x(t1+t)]; antisymmetric in t.
    double position_commutator(double t, const QuadratureSpec& spec = {}) const;

    // Mean path under a c-number force on a uniform grid (causal convolution).
    SampledFunction driven_mean(const SampledFunction& force,
                                const QuadratureSpec& spec = {}) const;

    // <x(t)> = m G'(t) x0 + m G(t) v0 for the initial-value problem.
    double initial_value_mean(double x0, double v0, double t,
                              const QuadratureSpec& spec = {}) const;

    bool has_closed_form_green() const;
    // damping rate gamma = zeta/m for Ohmic baths
    double gamma() const;
    // effective resonance width Re mu~(w0)/m (quadrature seeding)
    double resonance_width() const;

  private:
    SystemConfig sys_;
    BathModel bath_;
    void check_poles() const;
    SpectralIntegrand sine_integrand(double t) const;
};

// Integrates M x'' = f + tau_e f' by exact double quadrature on the force
// grid.  No runaway solutions exist for bounded f; a step in f produces a
// velocity jump tau_e f0 / M.
SampledFunction nonrunaway_trajectory(double M, const SampledFunction& force,
                                      const UnitSystem& units, double x0 = 0.0,
                                      double v0 = 0.0);

}  // namespace qle
