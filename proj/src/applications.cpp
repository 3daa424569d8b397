#include "qle/applications.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "qle/errors.hpp"

namespace qle {

// --- Josephson -------------------------------------------------------------

void JosephsonJunction::validate() const {
    units.validate();
    if (capacitance <= 0.0) throw ValidationError("JosephsonJunction: C <= 0");
    if (resistance <= 0.0) throw ValidationError("JosephsonJunction: R <= 0");
    if (critical_current <= 0.0)
        throw ValidationError("JosephsonJunction: I_C <= 0");
    if (std::abs(bias_current) >= critical_current)
        throw ValidationError(
            "JosephsonJunction: |I| >= I_C (running state; no stationary "
            "phase to expand about)");
}

JosephsonMap josephson_map(const JosephsonJunction& j) {
    j.validate();
    double phi0 = j.units.hbar / (2.0 * j.units.e_charge);  // hbar/2e
    double m = phi0 * phi0 * j.capacitance;
    double zeta = phi0 * phi0 / j.resistance;
    double w0 = std::sqrt(
        (2.0 * j.units.e_charge / (j.capacitance * j.units.hbar)) *
        std::sqrt(j.critical_current * j.critical_current -
                  j.bias_current * j.bias_current));
    SystemConfig sys{m, m * w0 * w0, j.units};
    return {sys, BathModel::ohmic(zeta), w0};
}

double josephson_phase_variance(const JosephsonJunction& j,
                                const ThermalState& state,
                                const QuadratureSpec& spec) {
    JosephsonMap map = josephson_map(j);
    ResponseFunction resp(map.system, map.bath);
    CorrelationRequest req{resp, state, spec};
    // the generalized coordinate of the mapped oscillator is the phase itself:
    // its mass (hbar/2e)^2 C already carries the flux-quantum scaling
    return position_autocorrelation(req, 0.0);
}

// --- Tunnel junction -------------------------------------------------------

void TunnelJunction::validate() const {
    units.validate();
    if (capacitance <= 0.0) throw ValidationError("TunnelJunction: C <= 0");
    if (resistance.has_value() == impedance.has_value())
        throw ValidationError(
            "TunnelJunction: exactly one of resistance / impedance required");
    if (resistance && *resistance <= 0.0)
        throw ValidationError("TunnelJunction: R <= 0");
    if (impedance) {
        impedance->validate();
        if (impedance->x.size() < 4)
            throw ValidationError("TunnelJunction: impedance needs >= 4 points");
        for (const auto& z : impedance->y)
            if (z.real() < 0.0)
                throw ValidationError("TunnelJunction: Re Z(w) < 0 (not passive)");
    }
}

std::complex<double> TunnelJunction::impedance_at(double omega) const {
    if (resistance) return {*resistance, 0.0};
    const auto& grid = impedance->x;
    if (omega < grid.front() || omega > grid.back())
        throw CoverageError("TunnelJunction: omega outside impedance table",
                            grid.back());
    // linear interpolation on the tabulated impedance
    auto it = std::lower_bound(grid.begin(), grid.end(), omega);
    if (it == grid.begin()) return impedance->y.front();
    size_t i = static_cast<size_t>(it - grid.begin());
    double f = (omega - grid[i - 1]) / (grid[i] - grid[i - 1]);
    return impedance->y[i - 1] + f * (impedance->y[i] - impedance->y[i - 1]);
}

double TunnelJunction::omega_max() const {
    if (resistance) return std::numeric_limits<double>::infinity();
    return impedance->x.back();
}

double junction_charge_variance(const TunnelJunction& j,
                                const ThermalState& state,
                                const QuadratureSpec& spec) {
    j.validate();
    state.validate();
    double wmax = spec.truncate_at > 0.0 ? spec.truncate_at : j.omega_max();
    double wrc = 1.0 / (j.capacitance * (j.resistance ? *j.resistance
                                                      : j.impedance_at(j.impedance->x.front()).real()));
    if (!std::isfinite(wmax)) {
        if (state.classical) {
            wmax = 0.0;  // convergent: integrand falls like w^{-2}
        } else {
            // hbar w tail of coth makes the integrand fall only like w^{-1}
            throw CoverageError(
                "junction_charge_variance: quantum case needs a cutoff "
                "(truncate_at or tabulated impedance)",
                400.0 * wrc);
        }
    }
    if (j.impedance && wmax > j.omega_max())
        throw CoverageError("junction_charge_variance: cutoff beyond impedance table",
                            j.omega_max());

    const TunnelJunction* jp = &j;
    double C = j.capacitance;
    SpectralIntegrand in;
    in.units = j.units;
    in.thermal = state;
    in.osc = Oscillation::None;
    in.envelope = [jp, C](double w) {
        std::complex<double> Y = std::complex<double>(0.0, w * C) +
                                 1.0 / jp->impedance_at(w);
        return (jp->units.hbar * w * C * C / M_PI) * (1.0 / Y).real();
    };
    // envelope ~ w^2 Re Z C^2 hbar / pi at the origin; coth supplies w^{-1}
    in.zero_power = state.T > 0.0 ? 1.0 : 2.0;
    in.features.push_back({wrc, wrc});
    if (state.T > 0.0) {
        double wT = j.units.kB * state.T / j.units.hbar;
        in.features.push_back({wT, wT});
    }

    QuadratureSpec q = spec;
    q.truncate_at = wmax;
    if (q.omega_break == 0.0 && wmax > 0.0) q.omega_break = wmax;
    return integrate_spectral(in, q).value;
}

// --- Detector noise --------------------------------------------------------

DetectorNoise detector_noise(const CorrelationRequest& req,
                             const std::vector<double>& omega_grid,
                             double omega_max) {
    if (omega_grid.empty())
        throw ValidationError("detector_noise: empty frequency grid");
    DetectorNoise out;
    out.spectrum.x = omega_grid;
    out.spectrum.y.resize(omega_grid.size());
    for (size_t i = 0; i < omega_grid.size(); ++i)
        out.spectrum.y[i] = power_spectrum(req, omega_grid[i]);
    out.spectrum.meta["columns"] = "omega, P(omega)";
    CorrelationRequest r = req;
    if (omega_max > 0.0) r.quad.truncate_at = omega_max;
    out.mean_square = position_autocorrelation(r, 0.0);
    return out;
}

}  // namespace qle
