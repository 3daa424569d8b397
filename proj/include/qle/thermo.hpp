#pragma once

#include "qle/correlations.hpp"

namespace qle {

struct FreeEnergyRequest {
    ResponseFunction resp;
    ThermalState state;
    QuadratureSpec quad{};
};

// Free energy of a single oscillator of frequency w:
// f(w, T) = kT log[1 - exp(-hbar w / kT)], zero-point omitted.
// Set include_zero_point to add hbar w / 2 back (not part of the free-energy
// integrand used elsewhere).
double single_oscillator_free_energy(double omega, const ThermalState& state,
                                     const UnitSystem& units,
                                     bool include_zero_point = false);

// Oscillator-in-bath free energy
//   F(T) = (1/pi) int_0^inf f(w, T) Im{d log alpha(w + i0+)/dw} dw.
// Collapses to f(w0, T) in the weak-coupling limit; 0 at T = 0.
double oscillator_free_energy(const FreeEnergyRequest& req);

// S = -dF/dT (Richardson-extrapolated central difference, step 1e-4 T),
// U = F + T S.  Requires T > 0.
struct EnergyEntropy {
    double internal_energy;
    double entropy;
};
EnergyEntropy energy_and_entropy(const FreeEnergyRequest& req);

// High-temperature blackbody free-energy shift of a free electron,
// Delta F = pi e^2 (kT)^2 / (9 hbar M c^3).  Gaussian CGS only.
double rydberg_blackbody_shift(const ThermalState& state, double M,
                               const UnitSystem& units);

// Expensive cross-check: the free-energy integral evaluated for a free
// particle in a blackbody bath with cutoff Omega (valid for kT << hbar Omega).
double rydberg_blackbody_shift_numeric(const ThermalState& state, double M,
                                       double cutoff, const UnitSystem& units,
                                       const QuadratureSpec& spec = {});

}  // namespace qle
