#pragma once

#include <complex>
#include <functional>
#include <string>

#include "qle/sampled.hpp"
#include "qle/units.hpp"

namespace qle {

enum class BathKind { Ohmic, SingleRelaxation, BlackbodyRadiation, TabulatedImpedance };

// Time-domain memory kernel mu(t) = delta_weight * delta(t) + smooth(t), t > 0.
//
// The delta term is structural: consumers must treat the weight analytically,
// never as a narrow numeric spike.  Convention: the one-sided Fourier
// transform counts the delta weight fully,
//     mu~(z) = delta_weight + integral_0^inf smooth(t) e^{izt} dt,
// which makes the Ohmic kernel (weight zeta) reproduce mu~ = zeta.
struct MemoryKernel {
    double delta_weight = 0.0;
    std::function<double(double)> smooth;  // t > 0
    double decay_rate = 0.0;               // 0 = no smooth part
};

// A heat bath, fully characterized by its spectral distribution
// Re mu~(w + i0+) >= 0 and the analytic continuation mu~(z) into the upper
// half plane.  Immutable after construction; safe to share across threads.
class BathModel {
  public:
    // mu~ = zeta, constant friction.
    static BathModel ohmic(double zeta);
    // mu~(z) = zeta * Omega_r / (Omega_r - i z); reduces to Ohmic as Omega_r -> inf.
    static BathModel single_relaxation(double zeta, double omega_r);
    // Blackbody-radiation bath for a charge with renormalized mass M and form
    // factor cutoff Omega.  Requires Omega <= 1/tau_e (causality).
    static BathModel blackbody(double renormalized_mass, double cutoff,
                               const UnitSystem& units);
    // Re mu~ >= 0 on a strictly increasing frequency grid; the imaginary part
    // is reconstructed by a discrete Kramers-Kronig transform.
    static BathModel tabulated(SampledFunction re_mu);

    BathKind kind() const { return kind_; }
    double zeta() const { return zeta_; }
    double omega_r() const { return omega_r_; }
    double bbr_mass() const { return bbr_mass_; }
    double bbr_cutoff() const { return omega_r_; }
    // coupling amplitude A = M tau_e Omega^2 = 2 e^2 Omega^2 / 3 c^3
    double bbr_coupling() const { return bbr_coupling_; }
    const SampledFunction& table() const { return table_; }

    // Re mu~(w + i0+).
    double spectral_distribution(double omega) const;

    // mu~(z) for Im z >= 0.
    std::complex<double> memory_fourier(std::complex<double> z) const;

    // d mu~/dz, analytic for the built-in models, finite-difference for
    // tabulated baths.
    std::complex<double> memory_fourier_derivative(std::complex<double> z) const;

    MemoryKernel memory_kernel() const;

    // Largest frequency scale of the model (quadrature seeding).
    double frequency_scale() const;

    std::string describe() const;

  private:
    BathModel() = default;
    BathKind kind_ = BathKind::Ohmic;
    double zeta_ = 0.0;
    double omega_r_ = 0.0;      // relaxation rate or BBR cutoff
    double bbr_mass_ = 0.0;
    double bbr_coupling_ = 0.0; // A above
    SampledFunction table_;     // tabulated Re mu~
    std::vector<double> table_slopes_;  // monotone-cubic derivatives
};

// Characteristic electron time tau_e = 2 e^2 / (3 M c^3).
double electron_time(double renormalized_mass, const UnitSystem& units);

// Renormalized (observed) mass M = m + 2 e^2 Omega / 3 c^3.
double renormalize_mass(double bare_mass, double cutoff, const UnitSystem& units);

// Bare mass m = M (1 - tau_e Omega); throws CausalityError for Omega > 1/tau_e.
double bare_mass(double renormalized_mass, double cutoff, const UnitSystem& units);

}  // namespace qle
