// Shared 20-case integral corpus: every case carries a closed-form value and
// an independent brute-force oracle (dense midpoint rule with per-case domain
// mapping and, where needed, an analytic tail constant).  The oracle path
// recomputes the thermal and oscillation factors from scratch so it shares no
// numerics with the adaptive engine.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qle/quadrature.hpp"

namespace corpus {

struct Case {
    std::string name;
    qle::SpectralIntegrand in;
    double exact;
    std::function<double(long)> oracle;  // n = sample count
};

// Full integrand rebuilt independently of the engine's Evaluator.
inline std::function<double(double)> full_integrand(const qle::SpectralIntegrand& in) {
    return [in](double w) {
        double v = in.envelope(w);
        if (in.thermal) {
            double kT = in.units.kB * in.thermal->T;
            if (in.thermal->classical) {
                v *= 2.0 * kT / (in.units.hbar * w);
            } else if (in.thermal->T > 0.0) {
                v /= std::tanh(in.units.hbar * w / (2.0 * kT));
            }
        }
        switch (in.osc) {
            case qle::Oscillation::Cos: v *= std::cos(w * in.time); break;
            case qle::Oscillation::Sin: v *= std::sin(w * in.time); break;
            case qle::Oscillation::OneMinusCos: v *= 1.0 - std::cos(w * in.time); break;
            default: break;
        }
        return v;
    };
}

inline double midpoint(const std::function<double(double)>& f, double a, double b,
                       long n) {
    double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
    return s * h;
}

// Finite-interval oracle plus an analytic bound/constant for the cut tail.
inline std::function<double(long)> oracle_finite(const qle::SpectralIntegrand& in,
                                                 double omega_max,
                                                 double tail_constant = 0.0) {
    auto f = full_integrand(in);
    return [f, omega_max, tail_constant](long n) {
        return midpoint(f, 0.0, omega_max, n) + tail_constant;
    };
}

// Semi-infinite oracle through w = u/(1-u) (algebraic decay, no oscillation).
inline std::function<double(long)> oracle_mapped(const qle::SpectralIntegrand& in) {
    auto f = full_integrand(in);
    return [f](long n) {
        auto g = [f](double u) {
            double w = u / (1.0 - u);
            double jac = 1.0 / ((1.0 - u) * (1.0 - u));
            return f(w) * jac;
        };
        return midpoint(g, 0.0, 1.0, n);
    };
}

// Square-root substitution w = u^2 for integrands ~ w^{-1/2} at the origin.
inline std::function<double(long)> oracle_sqrt(const qle::SpectralIntegrand& in,
                                               double omega_max) {
    auto f = full_integrand(in);
    return [f, omega_max](long n) {
        auto g = [f](double u) { return f(u * u) * 2.0 * u; };
        return midpoint(g, 0.0, std::sqrt(omega_max), n);
    };
}

inline std::vector<Case> build() {
    using qle::Oscillation;
    std::vector<Case> cases;
    auto add = [&cases](std::string name, qle::SpectralIntegrand in, double exact,
                        std::function<double(long)> oracle) {
        cases.push_back({std::move(name), std::move(in), exact, std::move(oracle)});
    };
    const double pi = M_PI;

    {   // 1: plain exponential
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return std::exp(-w); };
        add("exp", in, 1.0, oracle_finite(in, 60.0));
    }
    {   // 2: Gaussian
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return std::exp(-w * w); };
        add("gauss", in, std::sqrt(pi) / 2.0, oracle_finite(in, 10.0));
    }
    {   // 3: Lorentzian, algebraic tail
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return 1.0 / (w * w + 1.0); };
        add("lorentz", in, pi / 2.0, oracle_mapped(in));
    }
    {   // 4, 5: Lorentzian cosine transform at two times
        for (double t : {1.0, 5.0}) {
            qle::SpectralIntegrand in;
            in.envelope = [](double w) { return 1.0 / (w * w + 1.0); };
            in.osc = Oscillation::Cos;
            in.time = t;
            // tail bounded by 1/(t Omega^2) via one integration by parts
            add("lorentz-cos-t" + std::to_string(int(t)), in,
                (pi / 2.0) * std::exp(-t), oracle_finite(in, 20000.0));
        }
    }
    {   // 6: w sin(wt)/(w^2+1)
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return w / (w * w + 1.0); };
        in.osc = Oscillation::Sin;
        in.time = 1.0;
        in.zero_power = 2.0;
        // envelope decays only like 1/w: add the leading integration-by-parts
        // tail term g(b) cos(bt)/t for the cut at b
        double b = 40000.0;
        double tail = (b / (b * b + 1.0)) * std::cos(b * in.time) / in.time;
        add("odd-lorentz-sin", in, (pi / 2.0) * std::exp(-1.0),
            oracle_finite(in, b, tail));
    }
    {   // 7: sin(2w)/(w(w^2+1))
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return 1.0 / (w * (w * w + 1.0)); };
        in.osc = Oscillation::Sin;
        in.time = 2.0;
        in.zero_power = 0.0;
        add("sine-integral", in, (pi / 2.0) * (1.0 - std::exp(-2.0)),
            oracle_finite(in, 10000.0));
    }
    {   // 8-10: classical free-particle displacement shape at three times
        for (double t : {0.1, 1.0, 10.0}) {
            qle::SpectralIntegrand in;
            in.envelope = [](double w) { return 1.0 / (w * w * (w * w + 1.0)); };
            in.osc = Oscillation::OneMinusCos;
            in.time = t;
            in.zero_power = 0.0;
            in.features.push_back({1.0, 1.0});
            add("msd-shape-t" + std::to_string(t), in,
                (pi / 2.0) * (t - 1.0 + std::exp(-t)), oracle_finite(in, 2000.0));
        }
    }
    {   // 11: classical thermal factor (2kT/w) against a squared Lorentzian
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return w / ((w * w + 1.0) * (w * w + 1.0)); };
        in.thermal = qle::ThermalState{1.0, true};
        in.zero_power = 0.0;
        add("classical-coth", in, pi / 2.0, oracle_mapped(in));
    }
    {   // 12: quantum coth: int w e^{-w} coth(w/2) dw = pi^2/3 - 1
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return w * std::exp(-w); };
        in.thermal = qle::ThermalState{1.0, false};
        in.zero_power = 0.0;
        add("quantum-coth", in, pi * pi / 3.0 - 1.0, oracle_finite(in, 80.0));
    }
    {   // 13: zero temperature reduces to Gamma(2)
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return w * std::exp(-w); };
        in.thermal = qle::ThermalState{0.0, false};
        in.zero_power = 1.0;
        add("zero-T", in, 1.0, oracle_finite(in, 80.0));
    }
    {   // 14: Gaussian cosine transform
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return std::exp(-w * w); };
        in.osc = Oscillation::Cos;
        in.time = 3.0;
        add("gauss-cos", in, (std::sqrt(pi) / 2.0) * std::exp(-9.0 / 4.0),
            oracle_finite(in, 12.0));
    }
    {   // 15: Gamma(3/2)
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return std::sqrt(w) * std::exp(-w); };
        in.zero_power = 0.5;
        add("gamma-3-2", in, std::sqrt(pi) / 2.0, oracle_finite(in, 80.0));
    }
    {   // 16: Gamma(1/2), integrable inverse-sqrt origin
        qle::SpectralIntegrand in;
        in.envelope = [](double w) { return std::exp(-w) / std::sqrt(w); };
        in.zero_power = -0.5;
        add("gamma-1-2", in, std::sqrt(pi), oracle_sqrt(in, 100.0));
    }
    {   // 17: narrow off-origin Lorentzian line
        qle::SpectralIntegrand in;
        double w0 = 5.0, g = 1e-3;
        in.envelope = [w0, g](double w) {
            return g / ((w - w0) * (w - w0) + g * g);
        };
        in.features.push_back({w0, g});
        add("narrow-line", in, pi / 2.0 + std::atan(w0 / g), oracle_mapped(in));
    }
    {   // 18: underdamped oscillator line shape, u-substitution closed form
        qle::SpectralIntegrand in;
        double w0 = 1.0, g = 0.5;
        in.envelope = [w0, g](double w) {
            double d = w0 * w0 - w * w;
            return w * g / (d * d + g * g * w * w);
        };
        in.zero_power = 1.0;
        in.features.push_back({w0, g});
        double b = (2.0 * w0 * w0 - g * g) / 2.0;
        double c = std::sqrt(w0 * w0 * w0 * w0 - b * b);
        add("oscillator-line", in, (g / (2.0 * c)) * (pi / 2.0 + std::atan(b / c)),
            oracle_mapped(in));
    }
    {   // 19: cubic algebraic decay
        qle::SpectralIntegrand in;
        in.envelope = [](double w) {
            return 1.0 / ((1.0 + w) * (1.0 + w) * (1.0 + w));
        };
        add("cubic-decay", in, 0.5, oracle_mapped(in));
    }
    {   // 20: (1-cos wt)/w^2 -> pi t / 2; smooth 1/w^2 tail added analytically
        qle::SpectralIntegrand in;
        double t = 2.0;
        in.envelope = [](double w) { return 1.0 / (w * w); };
        in.osc = Oscillation::OneMinusCos;
        in.time = t;
        in.zero_power = 0.0;
        double cut = 40000.0;
        add("dirichlet", in, pi * t / 2.0, oracle_finite(in, cut, 1.0 / cut));
    }
    return cases;
}

}  // namespace corpus
