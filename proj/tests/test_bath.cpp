#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "qle/bath.hpp"
#include "qle/errors.hpp"

using namespace qle;
using cplx = std::complex<double>;

namespace {
const UnitSystem cgs_units = UnitSystem::gaussian_cgs();
const double Me = cgs::electron_mass;

BathModel bbr(double cutoff) { return BathModel::blackbody(Me, cutoff, cgs_units); }

// analytic single-relaxation transform for cross-checks
cplx sr_mu(double zeta, double wr, cplx z) { return zeta * wr / (wr - cplx(0, 1) * z); }
}  // namespace

TEST_CASE("Ohmic spectral distribution is flat") {
    auto bath = BathModel::ohmic(2.5);
    for (double w : {0.0, 1e-6, 1.0, 1e8}) CHECK(bath.spectral_distribution(w) == 2.5);
    CHECK_THROWS_AS(bath.spectral_distribution(-1.0), DomainError);
}

TEST_CASE("blackbody spectral distribution: origin and plateau") {
    double Omega = 1e22;
    auto bath = bbr(Omega);
    CHECK(bath.spectral_distribution(0.0) == 0.0);
    double plateau = 2.0 * cgs_units.e_charge * cgs_units.e_charge * Omega * Omega /
                     (3.0 * std::pow(cgs_units.c, 3));
    CHECK(bath.bbr_coupling() == doctest::Approx(plateau).epsilon(1e-12));
    double ratio = bath.spectral_distribution(100.0 * Omega) / plateau;
    CHECK(std::abs(ratio - 1.0) < 1e-4);
}

TEST_CASE("memory transform: Ohmic and blackbody closed points") {
    CHECK(BathModel::ohmic(3.0).memory_fourier({2.0, 0.0}) == cplx(3.0, 0.0));
    double Omega = 1e22;
    auto bath = bbr(Omega);
    // z = i Omega: A * (i Omega)/(2 i Omega) = A/2
    cplx got = bath.memory_fourier({0.0, Omega});
    CHECK(got.real() == doctest::Approx(bath.bbr_coupling() / 2.0).epsilon(1e-12));
    CHECK(std::abs(got.imag()) < 1e-12 * std::abs(got.real()));
    CHECK_THROWS_AS(bath.memory_fourier({1.0, -1e-3}), DomainError);
}

TEST_CASE("single relaxation: real part on axis equals spectral distribution") {
    auto bath = BathModel::single_relaxation(1.7, 4.0);
    for (double w = 1e-3; w < 1e4; w *= 2.7) {
        double re = bath.memory_fourier({w, 0.0}).real();
        double sd = bath.spectral_distribution(w);
        CHECK(std::abs(re - sd) <= 1e-12 * std::abs(sd));
        cplx analytic = sr_mu(1.7, 4.0, {w, 0.0});
        CHECK(bath.memory_fourier({w, 0.0}).imag() ==
              doctest::Approx(analytic.imag()).epsilon(1e-12));
    }
}

TEST_CASE("memory kernels") {
    auto ohmic = BathModel::ohmic(1.25).memory_kernel();
    CHECK(ohmic.delta_weight == 1.25);
    CHECK(ohmic.smooth(0.5) == 0.0);

    double Omega = 1e21;
    auto kern = bbr(Omega).memory_kernel();
    CHECK(kern.smooth(5.0 / Omega) / kern.smooth(1e-30) ==
          doctest::Approx(std::exp(-5.0)).epsilon(1e-10));
    CHECK(kern.smooth(1e-30) < 0.0);  // negative lobe balancing the delta
    CHECK(std::abs(kern.smooth(200.0 / Omega)) <
          1e-80 * std::abs(kern.smooth(1e-30)));

    auto sr = BathModel::single_relaxation(2.0, 3.0).memory_kernel();
    CHECK(sr.delta_weight == 0.0);
    CHECK(sr.smooth(0.0) == doctest::Approx(6.0));
    CHECK(sr.smooth(1.0) == doctest::Approx(6.0 * std::exp(-3.0)));
}

TEST_CASE("blackbody kernel transform round-trip") {
    // delta weight + int_0^inf smooth(t) e^{izt} dt must reproduce mu~(z)
    double Omega = 1e20;
    auto bath = bbr(Omega);
    auto kern = bath.memory_kernel();
    for (double w : {0.03 * Omega, 0.4 * Omega, 2.0 * Omega, 30.0 * Omega}) {
        // exact transform of the exponential smooth part
        cplx iw(0.0, w);
        cplx smooth_hat = kern.smooth(1e-300) / (kern.decay_rate - iw);
        cplx lhs = kern.delta_weight + smooth_hat;
        cplx rhs = bath.memory_fourier({w, 0.0});
        CHECK(std::abs(lhs - rhs) <= 1e-6 * std::abs(rhs));
    }
}

TEST_CASE("mass renormalization") {
    double tau_e = electron_time(Me, cgs_units);
    CHECK(tau_e == doctest::Approx(6.27e-24).epsilon(0.01));
    double Omega_max = 1.0 / tau_e;
    CHECK(Omega_max == doctest::Approx(1.6e23).epsilon(0.01));

    CHECK(renormalize_mass(Me, 0.0, cgs_units) == Me);
    // closest approach to a point charge: bare mass hits zero
    CHECK(bare_mass(Me, Omega_max, cgs_units) ==
          doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(bare_mass(Me, Omega_max, cgs_units)) < 1e-12 * Me);
    CHECK_THROWS_AS(bare_mass(Me, 1.01 * Omega_max, cgs_units), CausalityError);
    CHECK_THROWS_AS(bbr(1.01 * Omega_max), CausalityError);

    // round trip at a moderate cutoff
    double Omega = 1e22;
    double m = bare_mass(Me, Omega, cgs_units);
    CHECK(renormalize_mass(m, Omega, cgs_units) ==
          doctest::Approx(Me).epsilon(1e-12));
}

TEST_CASE("spectral distribution nonnegative over random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.1, 10.0);
    for (int k = 0; k < 50; ++k) {
        BathModel models[] = {
            BathModel::ohmic(U(rng)),
            BathModel::single_relaxation(U(rng), U(rng)),
            bbr(U(rng) * 1e21),
        };
        for (const auto& bath : models)
            for (double w = 0.0; w < 1e24; w = (w == 0.0) ? 1e-3 : w * 37.0)
                CHECK(bath.spectral_distribution(w) >= 0.0);
    }
}

TEST_CASE("no zeros or poles in the open upper half plane") {
    BathModel models[] = {BathModel::ohmic(1.0),
                          BathModel::single_relaxation(2.0, 0.7), bbr(1e22)};
    for (const auto& bath : models) {
        double scale = bath.frequency_scale();
        for (double re : {-30.0, -1.0, 0.0, 1.0, 30.0})
            for (double im : {1e-3, 1.0, 30.0}) {
                cplx mu = bath.memory_fourier(cplx(re, im) * (scale > 0 ? scale : 1.0));
                CHECK(std::isfinite(mu.real()));
                CHECK(std::isfinite(mu.imag()));
                if (bath.kind() != BathKind::BlackbodyRadiation || re != 0.0 || true)
                    CHECK(std::abs(mu) >= 0.0);
            }
    }
}

TEST_CASE("boundary value: Re mu~(w + i eps) -> spectral distribution") {
    auto bath = BathModel::single_relaxation(1.3, 2.0);
    double w = 1.5;
    double target = bath.spectral_distribution(w);
    double prev_gap = 1e300;
    for (double eps : {1.0, 0.1, 0.01, 0.001}) {
        double gap = std::abs(bath.memory_fourier({w, eps}).real() - target);
        CHECK(gap <= prev_gap + 1e-14);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3 * target);
}

TEST_CASE("blackbody transform obeys mu~(z)(z + i Omega)/z = const") {
    double Omega = 3e21;
    auto bath = bbr(Omega);
    cplx ref;
    int k = 0;
    for (cplx z : {cplx(1e20, 0.0), cplx(-4e21, 1e19), cplx(2e21, 5e21)}) {
        cplx v = bath.memory_fourier(z) * (z + cplx(0, Omega)) / z;
        if (k++ == 0) ref = v;
        CHECK(std::abs(v - ref) <= 1e-10 * std::abs(ref));
    }
}

TEST_CASE("tabulated bath: construction rules") {
    SampledFunction bad;
    bad.x = {0.0, 1.0, 2.0, 3.0};
    bad.y = {1.0, 0.5, -0.1, 0.2};
    CHECK_THROWS_AS(BathModel::tabulated(bad), ValidationError);
    bad.y = {1.0, 0.5, 0.2};
    CHECK_THROWS_AS(BathModel::tabulated(bad), ValidationError);
    SampledFunction few;
    few.x = {0.0, 1.0};
    few.y = {1.0, 0.5};
    CHECK_THROWS_AS(BathModel::tabulated(few), ValidationError);
}

TEST_CASE("tabulated bath reproduces its generator") {
    // sample the single-relaxation spectral distribution, rebuild, compare
    double zeta = 2.0, wr = 1.0;
    SampledFunction table;
    table.x.push_back(0.0);
    for (double w = 1e-3; w <= 1e3 * 1.0000001; w *= std::pow(10.0, 0.02))
        table.x.push_back(w);
    for (double w : table.x)
        table.y.push_back(zeta * wr * wr / (w * w + wr * wr));
    auto bath = BathModel::tabulated(table);

    SUBCASE("interpolation of the real part") {
        for (double w : {0.05, 0.7, 3.0, 200.0})
            CHECK(bath.spectral_distribution(w) ==
                  doctest::Approx(zeta * wr * wr / (w * w + wr * wr)).epsilon(1e-5));
        CHECK_THROWS_AS(bath.spectral_distribution(2e3), CoverageError);
    }
    SUBCASE("Kramers-Kronig imaginary part on the axis") {
        for (double w : {0.2, 1.0, 5.0, 40.0}) {
            double want = sr_mu(zeta, wr, {w, 0.0}).imag();
            double got = bath.memory_fourier({w, 0.0}).imag();
            CHECK(std::abs(got - want) <= 1e-4 * std::abs(want) + 1e-6 * zeta);
        }
    }
    SUBCASE("interior analytic continuation") {
        for (cplx z : {cplx(0.5, 0.5), cplx(-2.0, 1.0), cplx(0.0, 3.0)}) {
            cplx want = sr_mu(zeta, wr, z);
            cplx got = bath.memory_fourier(z);
            CHECK(std::abs(got - want) <= 2e-3 * std::abs(want));
        }
    }
    SUBCASE("no closed kernel") {
        CHECK_THROWS_AS(bath.memory_kernel(), UnsupportedError);
    }
}
