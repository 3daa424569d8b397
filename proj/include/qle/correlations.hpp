#pragma once

#include <functional>

#include "qle/response.hpp"

namespace qle {

// Pairing of a response function with a thermal state plus the quadrature
// policy used to evaluate fluctuation-dissipation integrals.
struct CorrelationRequest {
    ResponseFunction resp;
    ThermalState state;
    QuadratureSpec quad{};
};

// Symmetric force autocorrelation C_FF(t).  Independent of the potential and
// of any drive; even in t.  Ohmic baths diverge (white-noise limit) and are
// rejected with a pointer to the delta-correlated classical representation.
// Baths whose Re mu~ does not fall off (blackbody plateau) need an explicit
// ultraviolet cutoff omega_max; the quantum t = 0 value also requires one for
// single-relaxation baths (log divergence).
double force_autocorrelation(const BathModel& bath, const ThermalState& state,
                             const UnitSystem& units, double t,
                             double omega_max = 0.0, const QuadratureSpec& spec = {});

// Coefficient of 2*hbar/i in the force commutator; temperature independent
// and odd in t.  Same convergence requirements as the autocorrelation.
double force_commutator(const BathModel& bath, const UnitSystem& units, double t,
                        double omega_max = 0.0, const QuadratureSpec& spec = {});

// Position autocorrelation C(t) via the Im alpha integrand.
double position_autocorrelation(const CorrelationRequest& req, double t);
// Same quantity through the algebraically equivalent w |alpha|^2 Re mu~
// integrand; kept as an independent code path for cross-checking.
double position_autocorrelation_mu(const CorrelationRequest& req, double t);

// Mean-square displacement s(t) = 2{C(0) - C(t)}; the 1 - cos factor makes
// the free-particle case finite.
double mean_square_displacement(const CorrelationRequest& req, double t);

// Short-time zero-temperature asymptote of the Ohmic free-particle MSD:
// s(t) ~ -(hbar zeta / pi m^2) t^2 {log(zeta t/m) + gamma_E - 3/2},
// valid for zeta t / m << 1.
double msd_zero_temperature_asymptote(const SystemConfig& sys, double zeta, double t);

// Classical Ohmic free-particle closed form (2kT/m gamma^2){e^{-gt} - 1 + gt}.
double msd_classical_closed_form(const SystemConfig& sys, double gamma,
                                 const ThermalState& state, double t);

// Einstein diffusion constant D = kT / m gamma (Ohmic, K = 0, T > 0).
double diffusion_constant(const SystemConfig& sys, const BathModel& bath,
                          const ThermalState& state);
// The defining form (1/2) ds/dt evaluated numerically at large gamma t.
double diffusion_constant_numeric(const CorrelationRequest& req, double gamma_t = 200.0);

// Power spectrum of the coordinate fluctuations,
// P(w) = (hbar/pi) w |alpha|^2 Re mu~ coth(hbar w/2kT); int_0^inf P dw = <x^2>.
double power_spectrum(const CorrelationRequest& req, double omega);

// Driven-correlation decomposition: C_d(t, t') = <x(t)><x(t')> as a rank-one
// product over the supplied mean path.
class DrivenCorrelation {
  public:
    explicit DrivenCorrelation(SampledFunction mean) : mean_(std::move(mean)) {}
    double operator()(double t, double t_prime) const;
    const SampledFunction& mean() const { return mean_; }

  private:
    double interp(double t) const;
    SampledFunction mean_;
};

}  // namespace qle
