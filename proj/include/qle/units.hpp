#pragma once

#include <string>

#include "qle/errors.hpp"

namespace qle {

enum class UnitMode { GaussianCGS, ReducedDimensionless };

// Unit system and physical constants shared by every module.
//
// Gaussian CGS is the only physical mode: the QED formulas use e^2/c^3 in
// Gaussian form and offering SI would invite silent 4*pi*eps0 mistakes.
// Reduced mode sets hbar = kB = 1 and leaves mass/frequency scales to the
// caller.
struct UnitSystem {
    UnitMode mode = UnitMode::ReducedDimensionless;
    double hbar = 1.0;      // erg s, or 1
    double kB = 1.0;        // erg/K, or 1
    double c = 1.0;         // cm/s, or 1
    double e_charge = 1.0;  // esu, or dimensionless coupling

    static UnitSystem gaussian_cgs();
    static UnitSystem reduced(double e = 1.0);

    const char* mode_name() const {
        return mode == UnitMode::GaussianCGS ? "gaussian-cgs" : "reduced";
    }

    void validate() const;
};

// CODATA 2018 values, Gaussian units.
namespace cgs {
inline constexpr double hbar = 1.054571817e-27;       // erg s
inline constexpr double kB = 1.380649e-16;            // erg/K
inline constexpr double c = 2.99792458e10;            // cm/s
inline constexpr double e_charge = 4.80320471257e-10; // esu
inline constexpr double electron_mass = 9.1093837015e-28;  // g
}  // namespace cgs

// Heat-bath temperature.  T = 0 is a valid, non-degenerate input.
// When `classical` is set, the thermal factor coth(hbar w / 2kT) is replaced
// by its high-temperature limit 2kT / (hbar w) everywhere.
struct ThermalState {
    double T = 0.0;
    bool classical = false;

    void validate() const {
        if (T < 0.0) throw DomainError("temperature must be >= 0");
        if (classical && T == 0.0)
            throw DomainError("classical thermal factor undefined at T = 0");
    }
};

// coth(hbar w / 2kT), the thermal factor of the fluctuation-dissipation
// integrands.  Exactly 1 at T = 0.  Switches to the Laurent expansion
// 1/x + x/3 - x^3/45 for hbar w / 2kT < 1e-4.
// In classical mode returns 2kT / (hbar w) instead.
double coth_thermal(double omega, const ThermalState& state, const UnitSystem& units);

}  // namespace qle
