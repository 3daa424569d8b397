#include "qle/correlations.hpp"

#include <cmath>

namespace qle {

namespace {

constexpr double kEulerGamma = 0.577215664901532861;

void require_decaying(const BathModel& bath) {
    if (bath.kind() == BathKind::Ohmic)
        throw DivergenceError(
            "force correlation diverges for a pure Ohmic bath (white-noise limit); "
            "use the classical delta-correlated representation 2 zeta kT delta(t), "
            "or a single-relaxation bath with a finite cutoff");
}

SpectralIntegrand force_integrand(const BathModel& bath, const UnitSystem& units,
                                  double t) {
    SpectralIntegrand in;
    in.units = units;
    in.time = t;
    in.envelope = [&bath, &units](double w) {
        return bath.spectral_distribution(w) * units.hbar * w / M_PI;
    };
    const double sc = std::max(bath.frequency_scale(), 1e-12);
    in.features.push_back({sc, sc});
    return in;
}

// Quantum force integrals have slowly decaying (or growing) envelopes at
// large frequency; decide whether a finite cutoff is mandatory.
void check_uv(const BathModel& bath, bool quantum, double t, double omega_max) {
    if (omega_max > 0.0) return;
    if (bath.kind() == BathKind::BlackbodyRadiation)
        throw DivergenceError(
            "blackbody Re mu~ plateaus at high frequency: the force correlation "
            "integral needs an explicit omega_max cutoff");
    if (quantum && t == 0.0 && bath.kind() == BathKind::SingleRelaxation)
        throw DivergenceError(
            "quantum C_FF(0) for a single-relaxation bath diverges "
            "logarithmically; pass an omega_max cutoff");
}

}  // namespace

double force_autocorrelation(const BathModel& bath, const ThermalState& state,
                             const UnitSystem& units, double t, double omega_max,
                             const QuadratureSpec& spec) {
    require_decaying(bath);
    state.validate();
    const bool quantum = !state.classical;
    check_uv(bath, quantum, t, omega_max);

    SpectralIntegrand in = force_integrand(bath, units, std::abs(t));
    in.thermal = state;
    in.osc = (t == 0.0) ? Oscillation::None : Oscillation::Cos;
    // envelope ~ w near 0 (SR; faster for BBR); the thermal factor supplies
    // 1/w whenever T > 0.  Conservative declaration:
    in.zero_power = (state.T > 0.0) ? 0.0 : 1.0;

    QuadratureSpec sp = spec;
    if (omega_max > 0.0) sp.truncate_at = omega_max;
    return integrate_spectral(in, sp).value;
}

double force_commutator(const BathModel& bath, const UnitSystem& units, double t,
                        double omega_max, const QuadratureSpec& spec) {
    require_decaying(bath);
    if (t == 0.0) return 0.0;
    if (omega_max == 0.0 && bath.kind() == BathKind::BlackbodyRadiation)
        throw DivergenceError(
            "blackbody force commutator needs an explicit omega_max cutoff");

    SpectralIntegrand in;
    in.units = units;
    in.osc = Oscillation::Sin;
    in.time = t;
    in.envelope = [&bath](double w) { return bath.spectral_distribution(w) * w / M_PI; };
    const double sc = std::max(bath.frequency_scale(), 1e-12);
    in.features.push_back({sc, sc});
    in.zero_power = 2.0;

    QuadratureSpec sp = spec;
    if (omega_max > 0.0) sp.truncate_at = omega_max;
    return integrate_spectral(in, sp).value;
}

namespace {

SpectralIntegrand position_integrand(const CorrelationRequest& req, double t, bool mu_path) {
    const ResponseFunction& r = req.resp;
    SpectralIntegrand in;
    in.units = r.system().units;
    in.thermal = req.state;
    in.time = t;
    if (mu_path) {
        in.envelope = [&r](double w) {
            const std::complex<double> a = r.susceptibility(w);
            return w * std::norm(a) * r.bath().spectral_distribution(w) *
                   r.system().units.hbar / M_PI;
        };
    } else {
        in.envelope = [&r](double w) {
            return r.susceptibility(w).imag() * r.system().units.hbar / M_PI;
        };
    }
    const double w0 = r.system().omega0();
    if (w0 > 0.0)
        in.features.push_back({w0, std::max(r.resonance_width(), 1e-9 * w0)});
    const double bsc = r.bath().frequency_scale();
    if (bsc > 0.0) in.features.push_back({bsc, bsc});
    return in;
}

}  // namespace

double position_autocorrelation(const CorrelationRequest& req, double t) {
    if (req.resp.system().stiffness == 0.0)
        throw DivergenceError(
            "free-particle position autocorrelation diverges; "
            "use mean_square_displacement instead");
    SpectralIntegrand in = position_integrand(req, std::abs(t), false);
    in.osc = (t == 0.0) ? Oscillation::None : Oscillation::Cos;
    // Im alpha ~ w near 0 for K > 0; thermal factor ~ 1/w at T > 0.
    in.zero_power = (req.state.T > 0.0) ? 0.0 : 1.0;
    return integrate_spectral(in, req.quad).value;
}

double position_autocorrelation_mu(const CorrelationRequest& req, double t) {
    if (req.resp.system().stiffness == 0.0)
        throw DivergenceError(
            "free-particle position autocorrelation diverges; "
            "use mean_square_displacement instead");
    SpectralIntegrand in = position_integrand(req, std::abs(t), true);
    in.osc = (t == 0.0) ? Oscillation::None : Oscillation::Cos;
    in.zero_power = (req.state.T > 0.0) ? 0.0 : 1.0;
    return integrate_spectral(in, req.quad).value;
}

double mean_square_displacement(const CorrelationRequest& req, double t) {
    if (t == 0.0) return 0.0;
    const bool free_particle = req.resp.system().stiffness == 0.0;
    SpectralIntegrand in = position_integrand(req, std::abs(t), false);
    in.envelope = [&req](double w) {
        return 2.0 * req.resp.susceptibility(w).imag() * req.resp.system().units.hbar / M_PI;
    };
    in.osc = Oscillation::OneMinusCos;
    if (free_particle) {
        // Im alpha ~ 1/w; thermal ~ 1/w (T>0) or 1 (T=0); (1-cos) supplies +2.
        in.zero_power = (req.state.T > 0.0) ? 0.0 : 1.0;
    } else {
        in.zero_power = (req.state.T > 0.0) ? 2.0 : 3.0;
    }
    return integrate_spectral(in, req.quad).value;
}

double msd_zero_temperature_asymptote(const SystemConfig& sys, double zeta, double t) {
    const double hbar = sys.units.hbar;
    const double m = sys.mass;
    const double x = zeta * t / m;
    return -(hbar * zeta / (M_PI * m * m)) * t * t * (std::log(x) + kEulerGamma - 1.5);
}

double msd_classical_closed_form(const SystemConfig& sys, double gamma,
                                 const ThermalState& state, double t) {
    const double kT = sys.units.kB * state.T;
    const double g = gamma;
    const double gt = g * t;
    if (gt < 1e-6) {
        // expm1-based small-time form
        return 2.0 * kT / (sys.mass * g * g) * (std::expm1(-gt) + gt);
    }
    return 2.0 * kT / (sys.mass * g * g) * (std::exp(-gt) - 1.0 + gt);
}

double diffusion_constant(const SystemConfig& sys, const BathModel& bath,
                          const ThermalState& state) {
    if (bath.kind() != BathKind::Ohmic)
        throw UnsupportedError("diffusion constant is defined for the Ohmic bath");
    if (!(state.T > 0.0))
        throw UnsupportedError("no classical diffusion constant at T = 0");
    return sys.units.kB * state.T / bath.zeta();
}

double diffusion_constant_numeric(const CorrelationRequest& req, double gamma_t) {
    const double g = req.resp.gamma();
    const double t = gamma_t / g;
    const double h = 0.01 / g;
    const double s1 = mean_square_displacement(req, t - h);
    const double s2 = mean_square_displacement(req, t + h);
    return 0.25 * (s2 - s1) / h;  // (1/2) ds/dt
}

double power_spectrum(const CorrelationRequest& req, double omega) {
    if (!(omega > 0.0)) throw DomainError("power_spectrum requires omega > 0");
    const ResponseFunction& r = req.resp;
    const UnitSystem& u = r.system().units;
    const double re_mu = r.bath().spectral_distribution(omega);
    const double a2 = std::norm(r.susceptibility(omega));
    const double thermal = (req.state.T > 0.0 || req.state.classical)
                               ? coth_thermal(omega, req.state, u)
                               : 1.0;
    return u.hbar / M_PI * omega * a2 * re_mu * thermal;
}

double DrivenCorrelation::interp(double t) const {
    const auto& x = mean_.x;
    const auto& y = mean_.y;
    if (x.empty()) return 0.0;
    if (t <= x.front()) return y.front();
    if (t >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t i = std::size_t(it - x.begin()) - 1;
    const double s = (t - x[i]) / (x[i + 1] - x[i]);
    return y[i] + s * (y[i + 1] - y[i]);
}

double DrivenCorrelation::operator()(double t, double t_prime) const {
    return interp(t) * interp(t_prime);
}

}  // namespace qle
