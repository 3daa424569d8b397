#include "qle/bath.hpp"

#include <cmath>
#include <sstream>

namespace qle {

namespace {

// Fritsch-Carlson monotone cubic slopes.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    d[0] = ((2.0 * h[0] + (n > 2 ? h[1] : h[0])) * delta[0] -
            h[0] * (n > 2 ? delta[1] : delta[0])) /
           (h[0] + (n > 2 ? h[1] : h[0]));
    if (d[0] * delta[0] < 0.0) d[0] = 0.0;
    const std::size_t m = n - 1;
    d[m] = ((2.0 * h[m - 1] + (n > 2 ? h[m - 2] : h[m - 1])) * delta[m - 1] -
            h[m - 1] * (n > 2 ? delta[m - 2] : delta[m - 1])) /
           (h[m - 1] + (n > 2 ? h[m - 2] : h[m - 1]));
    if (d[m] * delta[m - 1] < 0.0) d[m] = 0.0;
    return d;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& d, double q) {
    const auto it = std::upper_bound(x.begin(), x.end(), q);
    std::size_t i = (it == x.begin()) ? 0 : std::size_t(it - x.begin()) - 1;
    if (i + 1 >= x.size()) i = x.size() - 2;
    const double h = x[i + 1] - x[i];
    const double s = (q - x[i]) / h;
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

double pchip_deriv(const std::vector<double>& x, const std::vector<double>& y,
                   const std::vector<double>& d, double q) {
    const double h = 1e-6 * (x.back() - x.front());
    const double a = std::max(q - h, x.front());
    const double b = std::min(q + h, x.back());
    return (pchip_eval(x, y, d, b) - pchip_eval(x, y, d, a)) / (b - a);
}

}  // namespace

double electron_time(double renormalized_mass, const UnitSystem& units) {
    if (!(renormalized_mass > 0.0)) throw DomainError("mass must be > 0");
    return 2.0 * units.e_charge * units.e_charge /
           (3.0 * renormalized_mass * units.c * units.c * units.c);
}

double renormalize_mass(double bare, double cutoff, const UnitSystem& units) {
    if (bare < 0.0) throw DomainError("bare mass must be >= 0");
    if (cutoff < 0.0) throw DomainError("cutoff must be >= 0");
    return bare + 2.0 * units.e_charge * units.e_charge * cutoff /
                      (3.0 * units.c * units.c * units.c);
}

double bare_mass(double M, double cutoff, const UnitSystem& units) {
    const double te = electron_time(M, units);
    if (cutoff * te > 1.0 + 1e-12)
        throw CausalityError("cutoff exceeds 1/tau_e: bare mass would be negative");
    return M * std::max(0.0, 1.0 - te * cutoff);
}

BathModel BathModel::ohmic(double zeta) {
    if (!(zeta > 0.0)) throw DomainError("ohmic bath requires zeta > 0");
    BathModel b;
    b.kind_ = BathKind::Ohmic;
    b.zeta_ = zeta;
    return b;
}

BathModel BathModel::single_relaxation(double zeta, double omega_r) {
    if (!(zeta > 0.0) || !(omega_r > 0.0))
        throw DomainError("single-relaxation bath requires zeta > 0 and Omega_r > 0");
    BathModel b;
    b.kind_ = BathKind::SingleRelaxation;
    b.zeta_ = zeta;
    b.omega_r_ = omega_r;
    return b;
}

BathModel BathModel::blackbody(double M, double cutoff, const UnitSystem& units) {
    if (!(M > 0.0) || !(cutoff > 0.0))
        throw DomainError("blackbody bath requires M > 0 and Omega > 0");
    const double te = electron_time(M, units);
    if (cutoff * te > 1.0 + 1e-12)
        throw CausalityError("blackbody cutoff violates Omega <= 1/tau_e");
    BathModel b;
    b.kind_ = BathKind::BlackbodyRadiation;
    b.bbr_mass_ = M;
    b.omega_r_ = cutoff;
    b.bbr_coupling_ = M * te * cutoff * cutoff;  // = 2 e^2 Omega^2 / 3 c^3
    return b;
}

BathModel BathModel::tabulated(SampledFunction re_mu) {
    re_mu.validate();
    if (re_mu.size() < 4)
        throw ValidationError("tabulated bath needs at least 4 grid points");
    for (std::size_t i = 0; i < re_mu.size(); ++i) {
        if (re_mu.y[i] < 0.0)
            throw ValidationError("tabulated Re mu~ must be nonnegative (positivity)");
        if (i > 0 && !(re_mu.x[i] > re_mu.x[i - 1]))
            throw ValidationError("tabulated frequency grid must be strictly increasing");
    }
    if (re_mu.x.front() < 0.0)
        throw ValidationError("tabulated grid must start at omega >= 0");
    BathModel b;
    b.kind_ = BathKind::TabulatedImpedance;
    b.table_ = std::move(re_mu);
    b.table_slopes_ = pchip_slopes(b.table_.x, b.table_.y);
    return b;
}

double BathModel::spectral_distribution(double omega) const {
    if (omega < 0.0) throw DomainError("spectral_distribution requires omega >= 0");
    switch (kind_) {
        case BathKind::Ohmic:
            return zeta_;
        case BathKind::SingleRelaxation:
            return zeta_ * omega_r_ * omega_r_ / (omega * omega + omega_r_ * omega_r_);
        case BathKind::BlackbodyRadiation:
            return bbr_coupling_ * omega * omega / (omega * omega + omega_r_ * omega_r_);
        case BathKind::TabulatedImpedance: {
            if (omega < table_.x.front() || omega > table_.x.back())
                throw CoverageError("tabulated bath queried outside its grid",
                                    table_.x.back());
            return std::max(0.0, pchip_eval(table_.x, table_.y, table_slopes_, omega));
        }
    }
    return 0.0;
}

std::complex<double> BathModel::memory_fourier(std::complex<double> z) const {
    if (z.imag() < 0.0)
        throw DomainError("memory_fourier is defined in the closed upper half plane");
    const std::complex<double> i(0.0, 1.0);
    switch (kind_) {
        case BathKind::Ohmic:
            return {zeta_, 0.0};
        case BathKind::SingleRelaxation:
            return zeta_ * omega_r_ / (omega_r_ - i * z);
        case BathKind::BlackbodyRadiation:
            return bbr_coupling_ * z / (z + i * omega_r_);
        case BathKind::TabulatedImpedance:
            break;
    }

    // Tabulated: real-axis boundary values via Kramers-Kronig; interior points
    // via the Stieltjes integral mu~(z) = (2z/ipi) int Re mu~/(w'^2 - z^2) dw'.
    // Documented tolerance target 1e-4 relative on resolved grids.
    const auto& X = table_.x;
    const auto& Y = table_.y;
    if (z.imag() == 0.0) {
        const double w = std::abs(z.real());
        const double re = (w == 0.0 && X.front() > 0.0)
                              ? Y.front()
                              : spectral_distribution(w);
        // principal-value Hilbert transform with singularity subtraction
        const double wmax = X.back();
        double acc = 0.0;
        auto g = [&](double wp) {
            if (std::abs(wp - w) < 1e-12 * std::max(w, 1.0))
                return pchip_deriv(X, Y, table_slopes_, wp) / (2.0 * std::max(w, 1e-300));
            const double num = std::max(0.0, pchip_eval(X, Y, table_slopes_, wp)) - re;
            return num / (wp * wp - w * w);
        };
        // midpoint rule on a refined grid
        const int refine = 8;
        for (std::size_t k = 0; k + 1 < X.size(); ++k) {
            const double h = (X[k + 1] - X[k]) / refine;
            for (int j = 0; j < refine; ++j) {
                const double mid = X[k] + (j + 0.5) * h;
                acc += g(mid) * h;
            }
        }
        double im = -(2.0 * w / M_PI) * acc;
        if (w > 0.0 && w < wmax)
            im -= (re / M_PI) * std::log(std::abs((wmax - w) / (wmax + w)));
        if (z.real() < 0.0) im = -im;
        return {re, im};
    }

    std::complex<double> acc(0.0, 0.0);
    const int refine = 8;
    for (std::size_t k = 0; k + 1 < X.size(); ++k) {
        const double h = (X[k + 1] - X[k]) / refine;
        for (int j = 0; j < refine; ++j) {
            const double mid = X[k] + (j + 0.5) * h;
            const double re = std::max(0.0, pchip_eval(X, Y, table_slopes_, mid));
            acc += re / (mid * mid - z * z) * h;
        }
    }
    return 2.0 * z / (i * M_PI) * acc;
}

std::complex<double> BathModel::memory_fourier_derivative(std::complex<double> z) const {
    if (z.imag() < 0.0)
        throw DomainError("memory_fourier_derivative needs Im z >= 0");
    const std::complex<double> i(0.0, 1.0);
    switch (kind_) {
        case BathKind::Ohmic:
            return {0.0, 0.0};
        case BathKind::SingleRelaxation: {
            const std::complex<double> den = omega_r_ - i * z;
            return zeta_ * omega_r_ * i / (den * den);
        }
        case BathKind::BlackbodyRadiation: {
            const std::complex<double> den = z + i * omega_r_;
            return bbr_coupling_ * i * omega_r_ / (den * den);
        }
        case BathKind::TabulatedImpedance: {
            const double h = 1e-5 * (table_.x.back() - table_.x.front());
            return (memory_fourier(z + h) - memory_fourier(z - h)) / (2.0 * h);
        }
    }
    return {};
}

MemoryKernel BathModel::memory_kernel() const {
    MemoryKernel k;
    switch (kind_) {
        case BathKind::Ohmic:
            k.delta_weight = zeta_;
            k.smooth = [](double) { return 0.0; };
            return k;
        case BathKind::SingleRelaxation: {
            const double z = zeta_, wr = omega_r_;
            k.smooth = [z, wr](double t) { return t < 0.0 ? 0.0 : z * wr * std::exp(-wr * t); };
            k.decay_rate = wr;
            return k;
        }
        case BathKind::BlackbodyRadiation: {
            // mu(t) = A delta(t) - A Omega exp(-Omega t) with A = M tau_e Omega^2,
            // matching mu~(z) = A z/(z + i Omega) under the full-weight delta
            // convention (see MemoryKernel).
            const double A = bbr_coupling_, wr = omega_r_;
            k.delta_weight = A;
            k.smooth = [A, wr](double t) { return t < 0.0 ? 0.0 : -A * wr * std::exp(-wr * t); };
            k.decay_rate = wr;
            return k;
        }
        case BathKind::TabulatedImpedance:
            throw UnsupportedError("tabulated baths have no closed-form memory kernel");
    }
    return k;
}

double BathModel::frequency_scale() const {
    switch (kind_) {
        case BathKind::Ohmic: return 0.0;
        case BathKind::SingleRelaxation: return omega_r_;
        case BathKind::BlackbodyRadiation: return omega_r_;
        case BathKind::TabulatedImpedance: return table_.x.back();
    }
    return 0.0;
}

std::string BathModel::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case BathKind::Ohmic:
            os << "ohmic(zeta=" << zeta_ << ")";
            break;
        case BathKind::SingleRelaxation:
            os << "single-relaxation(zeta=" << zeta_ << ", omega_r=" << omega_r_ << ")";
            break;
        case BathKind::BlackbodyRadiation:
            os << "blackbody(M=" << bbr_mass_ << ", Omega=" << omega_r_ << ")";
            break;
        case BathKind::TabulatedImpedance:
            os << "tabulated(" << table_.size() << " points, omega_max=" << table_.x.back() << ")";
            break;
    }
    return os.str();
}

}  // namespace qle
