#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qle/errors.hpp"

namespace qle {

// A function sampled on a grid of abscissae, with free-form metadata that
// ends up in CSV header comments and run manifests.
struct SampledFunction {
    std::vector<double> x;
    std::vector<double> y;
    std::map<std::string, std::string> meta;

    std::size_t size() const { return x.size(); }

    bool uniform_grid(double rel_tol = 1e-9) const;
    double grid_step() const;  // throws on non-uniform grids

    void validate() const {
        if (x.size() != y.size())
            throw ValidationError("sampled function: abscissa/ordinate size mismatch");
    }
};

// Complex-valued samples (impedance tables and the like).
struct ComplexSampledFunction {
    std::vector<double> x;
    std::vector<std::complex<double>> y;
    std::map<std::string, std::string> meta;

    std::size_t size() const { return x.size(); }

    void validate() const {
        if (x.size() != y.size())
            throw ValidationError("sampled function: abscissa/ordinate size mismatch");
        for (std::size_t i = 1; i < x.size(); ++i)
            if (!(x[i] > x[i - 1]))
                throw ValidationError("sampled function: abscissae must increase");
    }
};

inline bool SampledFunction::uniform_grid(double rel_tol) const {
    if (x.size() < 2) return true;
    const double h = x[1] - x[0];
    if (!(h > 0.0)) return false;
    for (std::size_t i = 2; i < x.size(); ++i) {
        if (std::abs((x[i] - x[i - 1]) - h) > rel_tol * std::abs(h)) return false;
    }
    return true;
}

inline double SampledFunction::grid_step() const {
    if (x.size() < 2 || !uniform_grid())
        throw ValidationError("operation requires a uniform grid");
    return x[1] - x[0];
}

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = (n == 1) ? a : a + (b - a) * double(i) / double(n - 1);
    return v;
}

inline std::vector<double> logspace(double a, double b, std::size_t n) {
    if (!(a > 0.0 && b > a)) throw ValidationError("logspace requires 0 < a < b");
    std::vector<double> v(n);
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = std::exp((n == 1) ? la : la + (lb - la) * double(i) / double(n - 1));
    return v;
}

// Fixed-order pairwise sum; deterministic for a fixed input ordering.
double pairwise_sum(const double* data, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.data(), v.size());
}

}  // namespace qle
