#include "qle/response.hpp"

#include <cmath>

namespace qle {

namespace {

// sin(w1 t)/w1 continued through w1^2 <= 0; disc = w1^2 (signed).
double sinc_branch(double disc, double t) {
    if (std::abs(disc) * t * t < 1e-4) {
        const double d = disc * t * t;
        return t * (1.0 - d / 6.0 + d * d / 120.0);
    }
    if (disc > 0.0) {
        const double w1 = std::sqrt(disc);
        return std::sin(w1 * t) / w1;
    }
    const double k = std::sqrt(-disc);
    return std::sinh(k * t) / k;
}

// cos(w1 t) continued through w1^2 <= 0.
double cos_branch(double disc, double t) {
    if (std::abs(disc) * t * t < 1e-4) {
        const double d = disc * t * t;
        return 1.0 - d / 2.0 + d * d / 24.0;
    }
    if (disc > 0.0) return std::cos(std::sqrt(disc) * t);
    return std::cosh(std::sqrt(-disc) * t);
}

}  // namespace

ResponseFunction::ResponseFunction(SystemConfig system, BathModel bath)
    : sys_(std::move(system)), bath_(std::move(bath)) {
    sys_.validate();
    check_poles();
}

void ResponseFunction::check_poles() const {
    // Sampled argument-principle test: the winding number of 1/alpha around a
    // rectangle in the open upper half plane must be zero.
    double scale = std::max({sys_.omega0(), bath_.frequency_scale(),
                             bath_.spectral_distribution(std::max(sys_.omega0(), 1.0)) / sys_.mass,
                             1.0});
    const double W = 30.0 * scale, H = 30.0 * scale, eps = 1e-6 * scale;
    auto inv_alpha = [&](std::complex<double> z) {
        return -sys_.mass * z * z -
               std::complex<double>(0.0, 1.0) * z * bath_.memory_fourier(z) + sys_.stiffness;
    };
    const int n_edge = 160;
    std::vector<std::complex<double>> contour;
    contour.reserve(4 * n_edge);
    for (int i = 0; i < n_edge; ++i)
        contour.push_back({-W + 2.0 * W * i / n_edge, eps});
    for (int i = 0; i < n_edge; ++i)
        contour.push_back({W, eps + (H - eps) * i / n_edge});
    for (int i = 0; i < n_edge; ++i)
        contour.push_back({W - 2.0 * W * i / n_edge, H});
    for (int i = 0; i < n_edge; ++i)
        contour.push_back({-W, H - (H - eps) * i / n_edge});
    double winding = 0.0;
    std::complex<double> prev = inv_alpha(contour.back());
    for (const auto& z : contour) {
        const std::complex<double> cur = inv_alpha(z);
        winding += std::arg(cur / prev);
        prev = cur;
    }
    if (std::abs(winding) > M_PI)
        throw CausalityError("response function has poles in the upper half plane");
}

std::complex<double> ResponseFunction::susceptibility(double omega) const {
    if (sys_.stiffness == 0.0 && omega == 0.0)
        throw DomainError("free-particle susceptibility has a pole at omega = 0");
    return susceptibility_at({omega, 0.0});
}

std::complex<double> ResponseFunction::susceptibility_at(std::complex<double> z) const {
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> den =
        -sys_.mass * z * z - i * z * bath_.memory_fourier(z) + sys_.stiffness;
    return 1.0 / den;
}

double ResponseFunction::log_derivative_imag(double omega) const {
    // d log alpha / dw = -(d alpha^-1 / dw) * alpha
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> z(omega, 0.0);
    const std::complex<double> mu = bath_.memory_fourier(z);
    const std::complex<double> mup = bath_.memory_fourier_derivative(z);
    const std::complex<double> den = -sys_.mass * z * z - i * z * mu + sys_.stiffness;
    const std::complex<double> dden = -2.0 * sys_.mass * z - i * mu - i * z * mup;
    return (-dden / den).imag();
}

bool ResponseFunction::has_closed_form_green() const {
    return bath_.kind() == BathKind::Ohmic;
}

double ResponseFunction::gamma() const {
    if (bath_.kind() != BathKind::Ohmic)
        throw UnsupportedError("gamma = zeta/m is defined for Ohmic baths");
    return bath_.zeta() / sys_.mass;
}

double ResponseFunction::resonance_width() const {
    const double w0 = std::max(sys_.omega0(), 1e-300);
    return bath_.spectral_distribution(w0) / sys_.mass;
}

double ResponseFunction::green_function(double t, const QuadratureSpec& spec) const {
    if (t < 0.0) return 0.0;  // causality, exact
    if (has_closed_form_green()) {
        const double m = sys_.mass;
        const double g = bath_.zeta() / m;
        if (sys_.stiffness == 0.0) {
            if (g * t < 1e-8) return t / m * (1.0 - 0.5 * g * t);
            return (1.0 - std::exp(-g * t)) / (m * g);
        }
        const double disc = sys_.stiffness / m - 0.25 * g * g;  // w1^2
        return std::exp(-0.5 * g * t) * sinc_branch(disc, t) / m;
    }
    return green_function_numeric(t, spec);
}

SpectralIntegrand ResponseFunction::sine_integrand(double t) const {
    SpectralIntegrand in;
    in.units = sys_.units;
    in.osc = Oscillation::Sin;
    in.time = t;
    in.envelope = [this](double w) { return susceptibility(w).imag(); };
    const double w0 = sys_.omega0();
    if (w0 > 0.0) {
        in.features.push_back({w0, std::max(resonance_width(), 1e-9 * w0)});
        in.zero_power = 2.0;  // Im alpha ~ w near 0 for K > 0, +1 for sin
    } else {
        // free particle: Im alpha ~ 1/w, sin supplies +1
        const double sc = std::max({bath_.frequency_scale(),
                                    bath_.spectral_distribution(1.0) / sys_.mass, 1e-12});
        in.features.push_back({sc, sc});
        in.zero_power = 0.0;
    }
    if (bath_.frequency_scale() > 0.0)
        in.features.push_back({bath_.frequency_scale(), bath_.frequency_scale()});
    return in;
}

double ResponseFunction::green_function_numeric(double t, const QuadratureSpec& spec) const {
    // For t < 0 evaluate the full inverse transform
    // (1/pi) int [Re alpha cos wt + Im alpha sin wt] dw, which must cancel;
    // for t > 0 causality folds it into (2/pi) int Im alpha sin wt dw.
    if (t == 0.0) return 0.0;
    if (t > 0.0) {
        SpectralIntegrand in = sine_integrand(t);
        return (2.0 / M_PI) * integrate_spectral(in, spec).value;
    }
    SpectralIntegrand sin_part = sine_integrand(t);
    SpectralIntegrand cos_part = sin_part;
    cos_part.osc = Oscillation::Cos;
    cos_part.envelope = [this](double w) { return susceptibility(w).real(); };
    cos_part.zero_power = sys_.omega0() > 0.0 ? 0.0 : -0.99;
    if (sys_.stiffness == 0.0) {
        // Re alpha ~ -1/(m w^2) is not separately integrable at 0; the t < 0
        // cancellation check is only defined for bound systems.
        throw DomainError("t < 0 inverse transform requires K > 0");
    }
    return (integrate_spectral(sin_part, spec).value +
            integrate_spectral(cos_part, spec).value) / M_PI;
}

double ResponseFunction::green_function_derivative(double t, const QuadratureSpec& spec) const {
    if (t < 0.0) return 0.0;
    if (has_closed_form_green()) {
        const double m = sys_.mass;
        const double g = bath_.zeta() / m;
        if (sys_.stiffness == 0.0) return std::exp(-g * t) / m;
        const double disc = sys_.stiffness / m - 0.25 * g * g;
        return std::exp(-0.5 * g * t) *
               (cos_branch(disc, t) - 0.5 * g * sinc_branch(disc, t)) / m;
    }
    // Richardson-extrapolated central differences on the numeric G.
    const double h = 1e-5 * std::max(1.0, t);
    auto central = [&](double step) {
        const double a = std::max(t - step, 0.0);
        return (green_function(t + step, spec) - green_function(a, spec)) / (t + step - a);
    };
    if (t < h) {
        // one-sided near the origin
        const double d1 = (green_function(t + h, spec) - green_function(t, spec)) / h;
        const double d2 = (green_function(t + 0.5 * h, spec) - green_function(t, spec)) / (0.5 * h);
        return 2.0 * d2 - d1;
    }
    const double d1 = central(h);
    const double d2 = central(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

double ResponseFunction::position_commutator(double t, const QuadratureSpec& spec) const {
    if (t == 0.0) return 0.0;
    const double sign = t > 0.0 ? 1.0 : -1.0;
    SpectralIntegrand in = sine_integrand(std::abs(t));
    return sign * (2.0 / M_PI) * integrate_spectral(in, spec).value;
}

SampledFunction ResponseFunction::driven_mean(const SampledFunction& force,
                                              const QuadratureSpec& spec) const {
    force.validate();
    const double dt = force.grid_step();
    const std::size_t n = force.size();

    // G on the offset grid, computed once
    std::vector<double> G(n);
    for (std::size_t k = 0; k < n; ++k) G[k] = green_function(double(k) * dt, spec);

    SampledFunction out;
    out.x = force.x;
    out.y.assign(n, 0.0);
    // causal trapezoid convolution <x(t_i)> = int_0^{t_i} G(t_i - t') f(t') dt'
    for (std::size_t idx = 0; idx < n; ++idx) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= idx; ++j) {
            const double w = (j == 0 || j == idx) ? 0.5 : 1.0;
            acc += w * G[idx - j] * force.y[j];
        }
        out.y[idx] = acc * dt;
    }
    out.meta["operation"] = "driven_mean";
    return out;
}

double ResponseFunction::initial_value_mean(double x0, double v0, double t,
                                            const QuadratureSpec& spec) const {
    if (t < 0.0) throw DomainError("initial_value_mean requires t >= 0");
    if (t == 0.0) return x0;  // m G'(0) = 1, G(0) = 0
    const double m = sys_.mass;
    return m * green_function_derivative(t, spec) * x0 + m * green_function(t, spec) * v0;
}

SampledFunction nonrunaway_trajectory(double M, const SampledFunction& force,
                                      const UnitSystem& units, double x0, double v0) {
    if (!(M > 0.0)) throw DomainError("mass must be > 0");
    force.validate();
    const double dt = force.grid_step();
    const double te = electron_time(M, units);
    const std::size_t n = force.size();

    // v(t) = v0 + (1/M)[ int_0^t f dt' + tau_e (f(t) - f(0)) ]
    std::vector<double> v(n);
    double intf = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) intf += 0.5 * dt * (force.y[i] + force.y[i - 1]);
        v[i] = v0 + (intf + te * (force.y[i] - force.y[0])) / M;
    }
    SampledFunction out;
    out.x = force.x;
    out.y.assign(n, 0.0);
    double x = x0;
    out.y[0] = x;
    for (std::size_t i = 1; i < n; ++i) {
        x += 0.5 * dt * (v[i] + v[i - 1]);
        out.y[i] = x;
    }
    out.meta["operation"] = "nonrunaway_trajectory";
    out.meta["tau_e"] = std::to_string(te);
    return out;
}

}  // namespace qle
