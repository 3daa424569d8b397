#include "qle/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qle {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Evaluator {
    const SpectralIntegrand& in;
    double t_abs;
    mutable long evaluations = 0;

    double operator()(double w) const {
        ++evaluations;
        if (!(w > 0.0)) return 0.0;
        double v = in.envelope(w);
        if (in.thermal && in.thermal->T > 0.0)
            v *= coth_thermal(w, *in.thermal, in.units);
        switch (in.osc) {
            case Oscillation::None: break;
            case Oscillation::Cos: v *= std::cos(w * t_abs); break;
            case Oscillation::Sin: v *= std::sin(w * t_abs); break;
            case Oscillation::OneMinusCos: {
                const double x = w * t_abs;
                // 2 sin^2(x/2) avoids cancellation for small x.
                const double s = std::sin(0.5 * x);
                v *= 2.0 * s * s;
                break;
            }
        }
        if (!std::isfinite(v))
            throw DomainError("spectral integrand not finite at omega = " + std::to_string(w));
        return v;
    }

    // Envelope * thermal only (used for the non-oscillatory part of the
    // OneMinusCos tail).
    double smooth(double w) const {
        ++evaluations;
        if (!(w > 0.0)) return 0.0;
        double v = in.envelope(w);
        if (in.thermal && in.thermal->T > 0.0)
            v *= coth_thermal(w, *in.thermal, in.units);
        if (!std::isfinite(v))
            throw DomainError("spectral integrand not finite at omega = " + std::to_string(w));
        return v;
    }
};

struct PanelEstimate {
    double value;
    double error;
};

// G7K15 on [a, b] for an arbitrary callable.
template <typename F>
PanelEstimate gk15(const F& f, double a, double b) {
    const double hl = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double fv[15];
    double resk = 0.0, resg = 0.0;
    const double fc = f(mid);
    resk = fc * kWgk[7];
    resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = hl * kXgk[j];
        const double f1 = f(mid - dx);
        const double f2 = f(mid + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    (void)fv;
    const double value = resk * hl;
    // plain |K15 - G7| difference; deliberately conservative
    const double err = std::abs((resk - resg) * hl);
    return {value, err};
}

// A panel in either direct omega coordinates or the power-mapped coordinate
// u in [0, 1] with omega = w_end * u^q (regularizes the origin).
struct Panel {
    double a, b;
    bool mapped;
    double value, error;
    int depth = 0;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

}  // namespace

double detect_zero_power(const std::function<double(double)>& f, double scale) {
    const double a = 1e-5 * scale;
    const double fa = std::abs(f(a));
    const double fb = std::abs(f(2.0 * a));
    if (fa == 0.0 || fb == 0.0) return 0.0;
    double p = std::log2(fb / fa);
    return std::clamp(p, -0.99, 6.0);
}

QuadratureResult integrate_spectral(const SpectralIntegrand& in, const QuadratureSpec& spec) {
    if (!in.envelope) throw ValidationError("spectral integrand has no envelope");
    if (!(spec.rel_tol > 0.0 && spec.abs_tol > 0.0))
        throw ValidationError("quadrature tolerances must be positive");
    if (spec.max_panels < 64)
        throw ValidationError("max_panels must be >= 64");
    if (!(in.zero_power > -1.0))
        throw DomainError("integrand must be integrable at the origin (zero_power > -1)");

    const double t_abs = std::abs(in.time);
    const double t_sign = (in.time < 0.0) ? -1.0 : 1.0;
    const bool oscillatory = (in.osc != Oscillation::None) && t_abs > 0.0;

    QuadratureResult out;
    if ((in.osc == Oscillation::OneMinusCos || in.osc == Oscillation::Sin) && t_abs == 0.0)
        return out;  // exactly zero

    Evaluator f{in, t_abs};

    // Characteristic scales.
    double scale = 0.0;
    for (const auto& ft : in.features)
        scale = std::max(scale, ft.center + 5.0 * std::abs(ft.width));
    if (in.thermal && in.thermal->T > 0.0 && !in.thermal->classical)
        scale = std::max(scale, 2.0 * in.units.kB * in.thermal->T / in.units.hbar);
    if (scale <= 0.0) scale = 1.0;

    double wb = spec.omega_break > 0.0 ? spec.omega_break : 10.0 * scale;
    if (oscillatory) wb = std::max(wb, 50.0 / t_abs);
    if (spec.truncate_at > 0.0) wb = std::min(wb, spec.truncate_at);

    // The adaptive low-frequency region ends where half-period summation
    // takes over (50/t), or at wb when oscillation is slow.
    double a_end = wb;
    if (oscillatory) a_end = std::min(wb, 50.0 / t_abs);
    if (spec.truncate_at > 0.0) a_end = std::min(a_end, spec.truncate_at);

    // ---- seed panel boundaries on (0, a_end] ----
    std::set<double> bounds;
    bounds.insert(a_end);
    for (const auto& ft : in.features) {
        if (!(ft.center > 0.0) || ft.center >= a_end) continue;
        const double w = std::max(std::abs(ft.width), 1e-6 * ft.center);
        bounds.insert(ft.center);
        for (double k : {1.0, 10.0, 100.0, 1000.0}) {
            const double lo = ft.center - k * w, hi = ft.center + k * w;
            if (lo > 0.0 && lo < a_end) bounds.insert(lo);
            if (hi > 0.0 && hi < a_end) bounds.insert(hi);
        }
    }
    if (oscillatory) {
        const double hp = M_PI / t_abs;
        int k = 1;
        for (double w = hp; w < a_end && k <= 64; w += hp, ++k) bounds.insert(w);
    }
    // Geometric filler so no panel spans more than a factor ~4 in frequency.
    {
        double lo = *bounds.begin();
        std::vector<double> fill;
        for (auto it = bounds.begin(); it != bounds.end(); ++it) {
            if (it != bounds.begin()) {
                double prev = lo;
                while (*it / prev > 6.0 && prev * 4.0 < *it) {
                    prev *= 4.0;
                    fill.push_back(prev);
                }
            }
            lo = *it;
        }
        // below the first boundary, down to a factor 1e-3 of it
        double b0 = *bounds.begin();
        for (double w = b0 / 4.0; w > 1e-3 * b0; w /= 4.0) fill.push_back(w);
        bounds.insert(fill.begin(), fill.end());
    }

    // first (origin-touching) panel is power-mapped
    const double b0 = *bounds.begin();
    const double q = std::clamp(2.0 / (1.0 + in.zero_power), 1.0, 16.0);
    auto mapped_f = [&](double u) {
        const double w = b0 * std::pow(u, q);
        return f(w) * b0 * q * std::pow(u, q - 1.0);
    };
    auto eval_panel = [&](Panel& p) {
        PanelEstimate e = p.mapped ? gk15(mapped_f, p.a, p.b)
                                   : gk15([&](double w) { return f(w); }, p.a, p.b);
        p.value = e.value;
        p.error = e.error;
    };

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> heap;
    int n_panels = 0;
    auto push_panel = [&](double a, double b, bool mapped) {
        Panel p{a, b, mapped, 0.0, 0.0, 0};
        eval_panel(p);
        heap.push(p);
        ++n_panels;
    };

    push_panel(0.0, 1.0, true);
    {
        double prev = b0;
        for (auto it = std::next(bounds.begin()); it != bounds.end(); ++it) {
            push_panel(prev, *it, false);
            prev = *it;
        }
    }

    auto heap_totals = [&](double& val, double& err) {
        // drain into a vector (deterministic: heap contents re-sorted by interval)
        std::vector<Panel> all;
        all.reserve(heap.size());
        auto cp = heap;
        while (!cp.empty()) { all.push_back(cp.top()); cp.pop(); }
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) {
            if (x.mapped != y.mapped) return x.mapped;
            return x.a < y.a;
        });
        std::vector<double> vals, errs;
        vals.reserve(all.size());
        for (const auto& p : all) { vals.push_back(p.value); errs.push_back(p.error); }
        val = pairwise_sum(vals);
        err = pairwise_sum(errs);
    };

    auto refine = [&]() {
        double val, err;
        heap_totals(val, err);
        while (true) {
            const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(val));
            if (err <= target) break;
            if (n_panels >= spec.max_panels)
                throw ConvergenceError("adaptive quadrature: panel budget exhausted", val, err);
            Panel worst = heap.top();
            heap.pop();
            --n_panels;
            const double mid = 0.5 * (worst.a + worst.b);
            if (!(mid > worst.a && mid < worst.b)) {
                // interval at floating-point resolution; keep as is
                heap.push(worst);
                ++n_panels;
                break;
            }
            push_panel(worst.a, mid, worst.mapped);
            push_panel(mid, worst.b, worst.mapped);
            heap_totals(val, err);
        }
        return std::pair<double, double>(val, err);
    };

    auto [regA_val, regA_err] = refine();
    double total = regA_val;
    double total_err = regA_err;

    const bool truncated = spec.truncate_at > 0.0 && a_end >= spec.truncate_at - 1e-300;

    // ---- non-oscillatory tail ----
    // Applies to the None mode beyond wb, and to the "1" part of OneMinusCos
    // beyond a_end.  Geometric panels, extended until negligible.
    if (!truncated && (in.osc == Oscillation::None || in.osc == Oscillation::OneMinusCos ||
                       (in.osc == Oscillation::Cos && t_abs == 0.0))) {
        const double start = (in.osc == Oscillation::OneMinusCos) ? a_end : wb;
        const double cut = spec.truncate_at;
        double lo = start;
        int quiet = 0;
        bool at_cut = false;
        std::vector<double> vals, errs;
        for (int k = 0; k < 64 && quiet < 2 && !at_cut; ++k) {
            double hi = lo * 2.0;
            if (cut > 0.0 && hi >= cut) {
                hi = cut;
                at_cut = true;
                if (!(hi > lo)) break;
            }
            PanelEstimate e = gk15([&](double w) { return f.smooth(w); }, lo, hi);
            // one refinement level if the panel looks rough
            if (e.error > 0.1 * std::abs(e.value) + spec.abs_tol) {
                const double mid = 0.5 * (lo + hi);
                PanelEstimate e1 = gk15([&](double w) { return f.smooth(w); }, lo, mid);
                PanelEstimate e2 = gk15([&](double w) { return f.smooth(w); }, mid, hi);
                e.value = e1.value + e2.value;
                e.error = e1.error + e2.error;
            }
            vals.push_back(e.value);
            errs.push_back(e.error);
            const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
            if (std::abs(e.value) + e.error < 0.25 * target) ++quiet; else quiet = 0;
            lo = hi;
        }
        const double tail_val = vals.empty() ? 0.0 : pairwise_sum(vals);
        const double tail_err = errs.empty() ? 0.0 : pairwise_sum(errs);
        if (!at_cut && !vals.empty() && quiet < 2 && std::abs(vals.back()) >
                             10.0 * std::max(spec.abs_tol, spec.rel_tol * std::abs(total + tail_val)))
            throw ConvergenceError("smooth tail did not decay within the extension budget",
                                   total + tail_val, total_err + tail_err + std::abs(vals.back()));
        total += tail_val;
        total_err += tail_err + (at_cut || vals.empty() ? 0.0 : std::abs(vals.back()));
    }

    // ---- oscillatory tail: half-period panels + Euler acceleration ----
    if (!truncated && oscillatory) {
        // For OneMinusCos the tail contribution is minus the cosine part.
        const bool minus_cos = (in.osc == Oscillation::OneMinusCos);
        const bool use_sin = (in.osc == Oscillation::Sin);
        auto osc_f = [&](double w) {
            const double sm = f.smooth(w);
            return sm * (use_sin ? std::sin(w * t_abs) : std::cos(w * t_abs));
        };
        const double hp = M_PI / t_abs;
        // first zero of the oscillating factor at or beyond a_end
        double w0;
        if (use_sin) {
            w0 = std::ceil(a_end / hp) * hp;
        } else {
            w0 = (std::ceil(a_end / hp - 0.5) + 0.5) * hp;
        }
        if (w0 <= a_end) w0 += hp;

        std::vector<double> direct_vals, direct_errs;
        double w = a_end;
        // stub panel from a_end to the first zero
        if (w0 > w) {
            PanelEstimate e = gk15(osc_f, w, w0);
            direct_vals.push_back(e.value);
            direct_errs.push_back(e.error);
            w = w0;
        }
        // direct summation through the feature-bearing region
        const int max_direct = std::max(spec.max_panels * 4, 1 << 16);
        int nd = 0;
        while (w < wb && nd < max_direct) {
            PanelEstimate e = gk15(osc_f, w, w + hp);
            direct_vals.push_back(e.value);
            direct_errs.push_back(e.error);
            w += hp;
            ++nd;
        }

        if (spec.truncate_at > 0.0) {
            // hard cutoff: direct half-period summation up to the cutoff,
            // closing with a fractional panel
            const double cut = spec.truncate_at;
            long budget = long(max_direct) * 4 + 16;
            while (w + hp <= cut && budget-- > 0) {
                PanelEstimate e = gk15(osc_f, w, w + hp);
                direct_vals.push_back(e.value);
                direct_errs.push_back(e.error);
                w += hp;
            }
            if (budget <= 0)
                throw ConvergenceError("oscillatory cutoff summation exceeded the panel budget",
                                       total + pairwise_sum(direct_vals),
                                       total_err + pairwise_sum(direct_errs));
            if (w < cut) {
                PanelEstimate e = gk15(osc_f, w, cut);
                direct_vals.push_back(e.value);
                direct_errs.push_back(e.error);
            }
            const double osc_val = pairwise_sum(direct_vals);
            total += minus_cos ? -osc_val : osc_val;
            total_err += pairwise_sum(direct_errs);
            if (in.osc == Oscillation::Sin) total *= t_sign;
            out.value = total;
            out.error_estimate = total_err;
            out.panels = n_panels;
            out.evaluations = f.evaluations;
            return out;
        }

        // Euler (iterated averaging) acceleration beyond wb
        std::vector<double> row;  // averaged partial sums
        double partial = 0.0;
        double accel = 0.0, accel_prev = 0.0, accel_change = 1e300;
        double term_err = 0.0;
        int nterms = 0;
        const int max_terms = 400;
        for (; nterms < max_terms; ++nterms) {
            PanelEstimate e = gk15(osc_f, w, w + hp);
            w += hp;
            partial += e.value;
            term_err = std::max(term_err, e.error);
            row.push_back(partial);
            for (int i = int(row.size()) - 2; i >= 0; --i)
                row[i] = 0.5 * (row[i] + row[i + 1]);
            accel_prev = accel;
            accel = row[0];
            accel_change = std::abs(accel - accel_prev);
            if (nterms >= 8) {
                const double target =
                    std::max(spec.abs_tol, spec.rel_tol * std::abs(total)) * 0.25;
                if (accel_change < target && std::abs(e.value) < 1e3 * std::abs(accel) + target)
                    break;
            }
        }

        double osc_val = pairwise_sum(direct_vals) + accel;
        double osc_err = pairwise_sum(direct_errs) + accel_change + term_err;
        if (nterms >= max_terms &&
            accel_change > 100.0 * std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))
            throw ConvergenceError("oscillatory tail series did not stabilize",
                                   total + (minus_cos ? -osc_val : osc_val),
                                   total_err + osc_err);
        total += minus_cos ? -osc_val : osc_val;
        total_err += osc_err;
    }

    if (in.osc == Oscillation::Sin) total *= t_sign;

    out.value = total;
    out.error_estimate = total_err;
    out.panels = n_panels;
    out.evaluations = f.evaluations;
    return out;
}

SampledFunction inverse_cos_transform(const SpectralIntegrand& base,
                                      const std::vector<double>& t_grid,
                                      const QuadratureSpec& spec, int n_threads) {
    SampledFunction result;
    result.x = t_grid;
    result.y.assign(t_grid.size(), 0.0);

    std::exception_ptr first_error = nullptr;
#ifdef _OPENMP
    if (n_threads > 0) omp_set_num_threads(n_threads);
#pragma omp parallel for schedule(dynamic)
#endif
    for (long i = 0; i < long(t_grid.size()); ++i) {
        try {
            SpectralIntegrand point = base;
            if (point.osc == Oscillation::None) point.osc = Oscillation::Cos;
            point.time = t_grid[i];
            result.y[i] = integrate_spectral(point, spec).value;
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

}  // namespace qle
