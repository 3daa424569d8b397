#pragma once

#include <optional>

#include "qle/correlations.hpp"
#include "qle/sampled.hpp"

namespace qle {

// --- Josephson junction (resistively shunted, biased below critical) -------

struct JosephsonJunction {
    double capacitance;       // C
    double resistance;        // shunt R
    double bias_current;      // I
    double critical_current;  // I_C
    UnitSystem units;

    void validate() const;
};

struct JosephsonMap {
    SystemConfig system;  // m = (hbar/2e)^2 C, K = m w0^2
    BathModel bath;       // Ohmic, zeta = (hbar/2e)^2 / R
    double omega0;        // [ (2e/C hbar) sqrt(I_C^2 - I^2) ]^{1/2}
};

// Map the phase dynamics onto a damped oscillator (small phase fluctuations
// about the tilted-washboard minimum).
JosephsonMap josephson_map(const JosephsonJunction& j);

// Equilibrium phase variance <phi^2> of the mapped oscillator.
double josephson_phase_variance(const JosephsonJunction& j,
                                const ThermalState& state,
                                const QuadratureSpec& spec = {});

// --- Normal tunnel junction (charge fluctuations on C in series with Z) ----

struct TunnelJunction {
    double capacitance;
    // Either a flat resistance or a tabulated impedance Z(w); exactly one.
    std::optional<double> resistance;
    std::optional<ComplexSampledFunction> impedance;
    UnitSystem units;

    void validate() const;
    // Re Z(w) >= 0 checked on construction of requests; pointwise lookup
    std::complex<double> impedance_at(double omega) const;
    double omega_max() const;  // coverage limit (inf for flat R)
};

// <Q^2> = (hbar C^2 / pi) int_0^wmax w coth(hbar w/2kT)
//         Re[1/(i w C + 1/Z(w))] dw, truncated at omega_max.
// Quantum case requires a finite cutoff (flat R: pass via spec.truncate_at).
double junction_charge_variance(const TunnelJunction& j,
                                const ThermalState& state,
                                const QuadratureSpec& spec = {});

// --- Displacement detector noise floor -------------------------------------

struct DetectorNoise {
    SampledFunction spectrum;   // symmetrized P(w) on the request grid
    double mean_square;         // <x^2> = C(0)
};

DetectorNoise detector_noise(const CorrelationRequest& req,
                             const std::vector<double>& omega_grid,
                             double omega_max = 0.0);

}  // namespace qle
