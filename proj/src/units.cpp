#include "qle/units.hpp"

#include <cmath>

namespace qle {

UnitSystem UnitSystem::gaussian_cgs() {
    UnitSystem u;
    u.mode = UnitMode::GaussianCGS;
    u.hbar = cgs::hbar;
    u.kB = cgs::kB;
    u.c = cgs::c;
    u.e_charge = cgs::e_charge;
    return u;
}

UnitSystem UnitSystem::reduced(double e) {
    UnitSystem u;
    u.mode = UnitMode::ReducedDimensionless;
    u.hbar = 1.0;
    u.kB = 1.0;
    u.c = 1.0;
    u.e_charge = e;
    return u;
}

void UnitSystem::validate() const {
    if (!(hbar > 0.0 && kB > 0.0 && c > 0.0 && e_charge > 0.0))
        throw ValidationError("all unit-system constants must be strictly positive");
    if (mode == UnitMode::ReducedDimensionless && (hbar != 1.0 || kB != 1.0))
        throw ValidationError("reduced mode requires hbar = kB = 1 exactly");
}

double coth_thermal(double omega, const ThermalState& state, const UnitSystem& units) {
    if (!(omega > 0.0))
        throw DomainError("coth_thermal requires omega > 0; handle the omega->0 "
                          "limit through the combined quadrature integrand");
    if (state.classical)
        return 2.0 * units.kB * state.T / (units.hbar * omega);
    if (state.T == 0.0) return 1.0;

    const double x = units.hbar * omega / (2.0 * units.kB * state.T);
    if (x < 1e-4) {
        // Laurent expansion avoids cancellation in cosh/sinh near 0.
        return 1.0 / x + x / 3.0 - x * x * x / 45.0;
    }
    if (x > 350.0) return 1.0;
    return 1.0 / std::tanh(x);
}

}  // namespace qle
