#include "qle/thermo.hpp"

#include <cmath>

#include "qle/errors.hpp"

namespace qle {

double single_oscillator_free_energy(double omega, const ThermalState& state,
                                     const UnitSystem& units,
                                     bool include_zero_point) {
    if (omega < 0.0) throw DomainError("single_oscillator_free_energy: omega < 0");
    state.validate();
    units.validate();
    double zp = include_zero_point ? 0.5 * units.hbar * omega : 0.0;
    if (state.T == 0.0) return zp;
    double kT = units.kB * state.T;
    if (state.classical) {
        // classical limit: kT log(hbar w / kT)
        if (omega == 0.0)
            throw DomainError("single_oscillator_free_energy: omega = 0 in classical mode");
        return kT * std::log(units.hbar * omega / kT);
    }
    double x = units.hbar * omega / kT;
    // log(1 - e^{-x}): expm1 keeps accuracy for small x, log1p for large x
    double lg = (x < M_LN2) ? std::log(-std::expm1(-x)) : std::log1p(-std::exp(-x));
    return zp + kT * lg;
}

double oscillator_free_energy(const FreeEnergyRequest& req) {
    req.state.validate();
    if (req.state.T == 0.0) return 0.0;
    const UnitSystem& units = req.resp.system().units;
    double kT = units.kB * req.state.T;
    const ThermalState state = req.state;
    const ResponseFunction* resp = &req.resp;

    SpectralIntegrand in;
    in.units = units;
    in.osc = Oscillation::None;
    in.envelope = [resp, state, units](double w) {
        return single_oscillator_free_energy(w, state, units) *
               resp->log_derivative_imag(w);
    };
    // f(w,T) ~ kT log(hbar w / kT) at the origin: integrable log singularity
    in.zero_power = -0.5;
    double wT = kT / units.hbar;
    in.features.push_back({wT, wT});
    double w0 = resp->system().omega0();
    if (w0 > 0.0) in.features.push_back({w0, resp->resonance_width()});

    QuadratureSpec spec = req.quad;
    if (spec.omega_break == 0.0)
        spec.omega_break = 10.0 * std::max(wT, std::max(w0, resp->bath().frequency_scale()));
    return integrate_spectral(in, spec).value / M_PI;
}

EnergyEntropy energy_and_entropy(const FreeEnergyRequest& req) {
    req.state.validate();
    if (req.state.T <= 0.0)
        throw DomainError("energy_and_entropy: requires T > 0");
    double T = req.state.T;
    double h = 1e-4 * T;

    auto F = [&](double Tq) {
        FreeEnergyRequest r = req;
        r.state.T = Tq;
        return oscillator_free_energy(r);
    };
    // Richardson-extrapolated central differences
    double d1 = (F(T + h) - F(T - h)) / (2.0 * h);
    double d2 = (F(T + 0.5 * h) - F(T - 0.5 * h)) / h;
    double dFdT = (4.0 * d2 - d1) / 3.0;

    EnergyEntropy out;
    out.entropy = -dFdT;
    out.internal_energy = F(T) + T * out.entropy;
    return out;
}

double rydberg_blackbody_shift(const ThermalState& state, double M,
                               const UnitSystem& units) {
    if (units.mode != UnitMode::GaussianCGS)
        throw UnsupportedError("rydberg_blackbody_shift: requires Gaussian CGS units");
    state.validate();
    if (M <= 0.0) throw DomainError("rydberg_blackbody_shift: M <= 0");
    double kT = units.kB * state.T;
    return M_PI * units.e_charge * units.e_charge * kT * kT /
           (9.0 * units.hbar * M * std::pow(units.c, 3));
}

double rydberg_blackbody_shift_numeric(const ThermalState& state, double M,
                                       double cutoff, const UnitSystem& units,
                                       const QuadratureSpec& spec) {
    if (units.mode != UnitMode::GaussianCGS)
        throw UnsupportedError("rydberg_blackbody_shift_numeric: requires Gaussian CGS units");
    SystemConfig sys{M, 0.0, units};
    ResponseFunction resp(sys, BathModel::blackbody(M, cutoff, units));
    FreeEnergyRequest req{resp, state, spec};
    return oscillator_free_energy(req);
}

}  // namespace qle
