#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qle/correlations.hpp"
#include "qle/errors.hpp"

using namespace qle;

namespace {
const UnitSystem red = UnitSystem::reduced();
const UnitSystem cgs_u = UnitSystem::gaussian_cgs();

ResponseFunction ohmic_resp(double m, double k, double zeta) {
    return ResponseFunction({m, k, red}, BathModel::ohmic(zeta));
}

double midpoint(const std::function<double(double)>& f, double a, double b, long n) {
    double h = (b - a) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i) s += f(a + (static_cast<double>(i) + 0.5) * h);
    return s * h;
}
}  // namespace

TEST_CASE("force autocorrelation: Ohmic white-noise limit is rejected") {
    CHECK_THROWS_AS(
        force_autocorrelation(BathModel::ohmic(1.0), {1.0, true}, red, 0.5),
        DivergenceError);
}

TEST_CASE("force autocorrelation: classical single-relaxation sum rule") {
    // C_FF(t) = kT zeta wr e^{-wr t}; integral over all t = 2 zeta kT
    double zeta = 1.5, wr = 1.0, T = 2.0;
    auto bath = BathModel::single_relaxation(zeta, wr);
    double dt = 0.02, L = 40.0;
    double sum = 0.0;
    std::vector<double> cs;
    for (double t = 0.0; t <= L + 1e-12; t += dt)
        cs.push_back(force_autocorrelation(bath, {T, true}, red, t));
    for (size_t i = 1; i < cs.size(); ++i) sum += 0.5 * dt * (cs[i] + cs[i - 1]);
    CHECK(2.0 * sum == doctest::Approx(2.0 * zeta * T).epsilon(1e-4));
    // pointwise exponential
    CHECK(cs[0] == doctest::Approx(T * zeta * wr).epsilon(1e-8));
    CHECK(force_autocorrelation(bath, {T, true}, red, 3.0) ==
          doctest::Approx(T * zeta * wr * std::exp(-3.0)).epsilon(1e-7));
}

TEST_CASE("force autocorrelation: blackbody zero-point value vs oracle") {
    double Omega = 1e21, wmax = 1e23;
    auto bath = BathModel::blackbody(cgs::electron_mass, Omega, cgs_u);
    double got = force_autocorrelation(bath, {0.0, false}, cgs_u, 0.0, wmax);
    double want = cgs_u.hbar / M_PI *
                  midpoint([&](double w) { return bath.spectral_distribution(w) * w; },
                           0.0, wmax, 2'000'000);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
    // the integral has no ultraviolet limit: an explicit cutoff is mandatory
    CHECK_THROWS_AS(force_autocorrelation(bath, {0.0, false}, cgs_u, 0.0),
                    DivergenceError);
}

TEST_CASE("force autocorrelation: even in t; commutator odd and zero at 0") {
    auto bath = BathModel::single_relaxation(2.0, 0.7);
    double plus = force_autocorrelation(bath, {1.0, false}, red, 1.3);
    double minus = force_autocorrelation(bath, {1.0, false}, red, -1.3);
    CHECK(plus == minus);

    CHECK(force_commutator(bath, red, 0.0) == 0.0);
    CHECK(force_commutator(bath, red, 0.9) == -force_commutator(bath, red, -0.9));
}

TEST_CASE("force commutator: blackbody vs oracle") {
    double Omega = 1e21;
    auto bath = BathModel::blackbody(cgs::electron_mass, Omega, cgs_u);
    double t = 5.0 / Omega, wmax = 100.0 * Omega;
    double got = force_commutator(bath, cgs_u, t, wmax);
    double want = midpoint(
        [&](double w) {
            return bath.spectral_distribution(w) * w * std::sin(w * t) / M_PI;
        },
        0.0, wmax, 4'000'000);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("force statistics ignore the system entirely") {
    // signature-level guarantee: only (bath, state) enter; repeated calls are
    // bitwise stable
    auto bath = BathModel::single_relaxation(1.0, 1.0);
    double a = force_autocorrelation(bath, {1.0, false}, red, 0.7);
    double b = force_autocorrelation(bath, {1.0, false}, red, 0.7);
    CHECK(a == b);
}

TEST_CASE("oscillator variance limits") {
    double w0 = 1.0, g = 1e-3;
    auto resp = ohmic_resp(1.0, w0 * w0, g);
    SUBCASE("high temperature") {
        CorrelationRequest req{resp, {100.0, false}, {}};
        CHECK(position_autocorrelation(req, 0.0) ==
              doctest::Approx(100.0).epsilon(5e-3));
    }
    SUBCASE("zero temperature") {
        CorrelationRequest req{resp, {0.0, false}, {}};
        CHECK(position_autocorrelation(req, 0.0) ==
              doctest::Approx(0.5).epsilon(5e-3));
    }
    SUBCASE("even in t") {
        CorrelationRequest req{resp, {2.0, false}, {}};
        CHECK(position_autocorrelation(req, 2.5) ==
              position_autocorrelation(req, -2.5));
    }
}

TEST_CASE("free-particle variance diverges as a typed error") {
    auto resp = ohmic_resp(1.0, 0.0, 1.0);
    CorrelationRequest req{resp, {1.0, false}, {}};
    CHECK_THROWS_AS(position_autocorrelation(req, 0.0), DivergenceError);
}

TEST_CASE("the two autocorrelation code paths agree") {
    ResponseFunction resps[] = {
        ohmic_resp(1.0, 1.0, 0.4),
        ResponseFunction({2.0, 3.0, red}, BathModel::single_relaxation(1.0, 2.0)),
    };
    for (const auto& resp : resps)
        for (double T : {0.0, 1.5})
            for (double t : {0.0, 0.8, 4.0}) {
                CorrelationRequest req{resp, {T, false}, {}};
                double a = position_autocorrelation(req, t);
                double b = position_autocorrelation_mu(req, t);
                CHECK(std::abs(a - b) <= 1e-10 * std::max(std::abs(a), 1e-30));
            }
}

TEST_CASE("classical free-particle displacement matches the closed form") {
    double m = 1.0, g = 1.0, T = 1.0;
    auto resp = ohmic_resp(m, 0.0, g * m);
    CorrelationRequest req{resp, {T, true}, {}};
    CHECK(mean_square_displacement(req, 0.0) == 0.0);
    for (double gt : {0.1, 1.0, 10.0}) {
        double want = msd_classical_closed_form({m, 0.0, red}, g, {T, true}, gt);
        CHECK(mean_square_displacement(req, gt) ==
              doctest::Approx(want).epsilon(1e-8));
        CHECK(want == doctest::Approx((2.0 * T / (m * g * g)) *
                                      (std::exp(-g * gt) - 1.0 + g * gt))
                          .epsilon(1e-14));
    }
}

TEST_CASE("displacement limits: Einstein growth and ballistic start") {
    double m = 1.0, T = 1.0;
    SUBCASE("long-time slope") {
        auto resp = ohmic_resp(m, 0.0, 1.0);
        CorrelationRequest req{resp, {T, true}, {}};
        double t = 100.0;
        CHECK(mean_square_displacement(req, t) / (2.0 * T * t) ==
              doctest::Approx(1.0).epsilon(1e-2));
    }
    SUBCASE("short-time t^2 law, independent of damping") {
        double t = 1e-3;
        double v1, v2;
        {
            CorrelationRequest req{ohmic_resp(m, 0.0, 0.5), {T, true}, {}};
            v1 = mean_square_displacement(req, t);
        }
        {
            CorrelationRequest req{ohmic_resp(m, 0.0, 2.0), {T, true}, {}};
            v2 = mean_square_displacement(req, t / 4.0);  // same gamma t
        }
        CHECK(v1 / ((T / m) * t * t) == doctest::Approx(1.0).epsilon(1e-2));
        CHECK(v2 / ((T / m) * (t / 4.0) * (t / 4.0)) ==
              doctest::Approx(1.0).epsilon(1e-2));
    }
}

TEST_CASE("classical bridge: quantum evaluation at kT = 100 hbar gamma") {
    double m = 1.0, g = 1.0, T = 100.0;  // reduced units: hbar gamma = 1
    auto resp = ohmic_resp(m, 0.0, g);
    CorrelationRequest req{resp, {T, false}, {}};  // full quantum coth
    for (double gt : {0.01, 0.1, 1.0, 10.0, 50.0}) {
        double classical = msd_classical_closed_form({m, 0.0, red}, g, {T, true}, gt);
        CHECK(mean_square_displacement(req, gt) ==
              doctest::Approx(classical).epsilon(1e-2));
    }
}

TEST_CASE("zero-temperature displacement follows the log asymptote") {
    // short-time expansion; validity window gamma t in [1e-4, 1e-1] is
    // documented policy (the formula turns negative for gamma t > ~2.2)
    double m = 1.0, zeta = 1.0;
    auto resp = ohmic_resp(m, 0.0, zeta);
    CorrelationRequest req{resp, {0.0, false}, {}};
    for (double gt : {1e-4, 1e-3, 1e-2, 1e-1}) {
        double asym = msd_zero_temperature_asymptote({m, 0.0, red}, zeta, gt);
        double got = mean_square_displacement(req, gt);
        CHECK(got == doctest::Approx(asym).epsilon(5e-2));
        CHECK(got >= 0.0);
    }
}

TEST_CASE("displacement is nonnegative with zero start across models") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.2, 3.0);
    for (int k = 0; k < 10; ++k) {
        CorrelationRequest req{ohmic_resp(U(rng), U(rng), U(rng)),
                               {U(rng), false}, {}};
        CHECK(mean_square_displacement(req, 0.0) == 0.0);
        for (double t : {0.3, 2.0, 9.0})
            CHECK(mean_square_displacement(req, t) >= 0.0);
    }
}

TEST_CASE("diffusion constant") {
    SystemConfig sys{1.0, 0.0, red};
    auto bath = BathModel::ohmic(1.0);
    CHECK(diffusion_constant(sys, bath, {1.0, true}) == 1.0);
    CHECK(diffusion_constant(sys, bath, {3.0, true}) ==
          doctest::Approx(3.0 * diffusion_constant(sys, bath, {1.0, true})));
    CHECK_THROWS_AS(diffusion_constant(sys, bath, {0.0, false}), UnsupportedError);
    CHECK_THROWS_AS(
        diffusion_constant(sys, BathModel::single_relaxation(1.0, 1.0), {1.0, true}),
        UnsupportedError);

    ResponseFunction resp(sys, bath);
    CorrelationRequest req{resp, {1.0, true}, {}};
    CHECK(diffusion_constant_numeric(req) == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("power spectrum") {
    double w0 = 1.0, g = 0.05;
    auto resp = ohmic_resp(1.0, w0 * w0, g);
    CorrelationRequest req{resp, {0.7, false}, {}};
    SUBCASE("positive everywhere") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> U(0.01, 10.0);
        for (int k = 0; k < 100; ++k) CHECK(power_spectrum(req, U(rng)) >= 0.0);
    }
    SUBCASE("integrates to the variance") {
        double var = position_autocorrelation(req, 0.0);
        double total = midpoint([&](double w) { return power_spectrum(req, w); },
                                1e-6, 30.0, 3'000'000);
        total += g / (2.0 * M_PI * 30.0 * 30.0);  // analytic 1/w^3 tail beyond the cut
        CHECK(total == doctest::Approx(var).epsilon(1e-6));
    }
    SUBCASE("peak sits within gamma of the resonance") {
        double best_w = 0.0, best = -1.0;
        for (double w = w0 - 3.0 * g; w <= w0 + 3.0 * g; w += g / 50.0) {
            double v = power_spectrum(req, w);
            if (v > best) best = v, best_w = w;
        }
        CHECK(std::abs(best_w - w0) < g);
    }
}

TEST_CASE("driven correlation is a rank-one product") {
    SampledFunction mean;
    mean.x = linspace(0.0, 10.0, 101);
    for (double t : mean.x) mean.y.push_back(std::sin(t));
    DrivenCorrelation cd(mean);
    // rank-one: Cd(t,t') Cd(s,s') = Cd(t,s') Cd(s,t')
    for (double t : {0.5, 2.0})
        for (double s : {1.0, 7.0})
            CHECK(cd(t, 2.5) * cd(s, 8.0) ==
                  doctest::Approx(cd(t, 8.0) * cd(s, 2.5)).epsilon(1e-12));

    SampledFunction zero;
    zero.x = mean.x;
    zero.y.assign(mean.x.size(), 0.0);
    DrivenCorrelation cz(zero);
    CHECK(cz(1.0, 2.0) == 0.0);
}

TEST_CASE("harmonic drive: equal-time driven correlation oscillates at 2 wd") {
    double wd = 1.3, f0 = 2.0;
    auto resp = ohmic_resp(1.0, 4.0, 0.8);
    double amp = f0 * std::abs(resp.susceptibility(wd));
    // steady state directly (skip transients): <x> = amp cos(wd t + phase)
    double phase = std::arg(resp.susceptibility(wd));
    SampledFunction mean;
    mean.x = linspace(0.0, 20.0, 4001);
    for (double t : mean.x) mean.y.push_back(amp * std::cos(wd * t - phase));
    DrivenCorrelation cd(mean);
    // Cd(t,t) = amp^2 cos^2 = amp^2/2 + (amp^2/2) cos(2 wd t - 2 phase)
    double mid = amp * amp / 2.0;
    double lo = 1e300, hi = -1e300;
    for (double t = 5.0; t < 15.0; t += 0.01) {
        double v = cd(t, t);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo == doctest::Approx(0.0).epsilon(1e-4));
    CHECK(hi == doctest::Approx(2.0 * mid).epsilon(1e-3));
}
