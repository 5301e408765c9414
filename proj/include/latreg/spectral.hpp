#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <fftw3.h>

#include "errors.hpp"
#include "lattice.hpp"
#include "parallel.hpp"

namespace latreg {

struct Coefficient {
    DualPoint point;
    std::complex<double> value;
};

// Finite spectral expansion Σ f̂(κ) e^{2πiκ·x} over dual points with |κ| ≤ band.
// Coefficients are kept sorted lexicographically in m; that order is the
// canonical iteration order for every reduction.
struct SpectralFunction {
    Lattice lattice;
    double band = 0.0;
    std::vector<Coefficient> coeffs;
};

// Samples of f on the pulled-back uniform grid of the fundamental domain:
// value at multi-index t is f(A·(t_1/n_1, …, t_d/n_d)), stored row-major.
struct GridSample {
    Lattice lattice;
    std::vector<int> resolution;
    std::vector<std::complex<double>> values;

    std::size_t size() const {
        std::size_t n = 1;
        for (int r : resolution) n *= static_cast<std::size_t>(r);
        return n;
    }
};

enum class NormKind { Lp, ellp };

struct NormValue {
    NormKind kind = NormKind::Lp;
    double exponent = 2.0;  // +inf for sup norms
    double value = 0.0;
};

namespace detail {

// e^{2πi s} with the argument reduced mod 1 first; exact (1,0) on integers.
inline std::complex<double> unit_phase(double s) {
    const double r = s - std::round(s);
    return std::polar(1.0, 2.0 * std::numbers::pi * r);
}

inline std::complex<double> difference_factor(double s) {
    return unit_phase(s) - 1.0;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace detail

inline double total_l2_mass(const SpectralFunction& f) {
    return parallel_sum(f.coeffs.size(),
                        [&](std::size_t i) { return std::norm(f.coeffs[i].value); });
}

// F_Ω f(κ) = (1/|Ω|)∫_Ω f(x) e^{-2πiκ·x} dx evaluated through the exact change
// of variables to the unit torus: F_Ω f((Aᵀ)⁻¹m) = ∫_{[0,1)^d} f(At) e^{-2πim·t} dt,
// computed as a multidimensional DFT of the grid values divided by the grid size.
// Output is truncated to the κ-ball guaranteed alias-free by the resolution.
inline SpectralFunction forward_transform(const GridSample& sample) {
    const int d = sample.lattice.dim;
    require(static_cast<int>(sample.resolution.size()) == d, "InvalidArgument",
            "resolution dimension mismatch");
    for (int n : sample.resolution)
        require(n >= 2, "InvalidArgument", "need at least two samples per axis");
    const std::size_t total = sample.size();
    require(sample.values.size() == total, "InvalidArgument", "grid value count mismatch");

    std::vector<std::complex<double>> work(sample.values);
    std::vector<std::complex<double>> out(total);
    {
        std::vector<int> n(sample.resolution.begin(), sample.resolution.end());
        fftw_plan plan = fftw_plan_dft(d, n.data(),
                                       reinterpret_cast<fftw_complex*>(work.data()),
                                       reinterpret_cast<fftw_complex*>(out.data()),
                                       FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    // Alias-free index band |m_j| ≤ M_j = (n_j-1)/2, and the largest κ-ball
    // certain to lie inside it: |m_j| = |a_j·κ| ≤ |a_j|·|κ|.
    std::vector<int> half(static_cast<std::size_t>(d));
    double band = std::numeric_limits<double>::infinity();
    for (int j = 0; j < d; ++j) {
        half[static_cast<std::size_t>(j)] = (sample.resolution[static_cast<std::size_t>(j)] - 1) / 2;
        band = std::min(band, half[static_cast<std::size_t>(j)] / sample.lattice.column_norm(j));
    }

    SpectralFunction spec;
    spec.lattice = sample.lattice;
    spec.band = band;

    const double scale = 1.0 / static_cast<double>(total);
    std::vector<int> m(static_cast<std::size_t>(d));
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = -half[j];
    while (true) {
        DualPoint p = make_dual_point(sample.lattice, m);
        if (p.norm <= band) {
            std::size_t flat = 0;
            for (int j = 0; j < d; ++j) {
                const int n = sample.resolution[static_cast<std::size_t>(j)];
                const int k = ((m[static_cast<std::size_t>(j)] % n) + n) % n;
                flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
            }
            spec.coeffs.push_back({std::move(p), out[flat] * scale});
        }
        if (!detail::advance_index(m, half)) break;
    }
    return spec;
}

// Grid samples of Σ f̂(κ) e^{2πiκ·x}; exact inverse of forward_transform on
// alias-free resolutions.
inline GridSample synthesize(const SpectralFunction& spec, const std::vector<int>& resolution) {
    const int d = spec.lattice.dim;
    require(static_cast<int>(resolution.size()) == d, "InvalidArgument",
            "resolution dimension mismatch");

    for (int n : resolution) require(n >= 1, "InvalidArgument", "resolution must be positive");
    for (const auto& c : spec.coeffs)
        for (int j = 0; j < d; ++j) {
            const int n = resolution[static_cast<std::size_t>(j)];
            if (n <= 2 * std::abs(c.point.m[static_cast<std::size_t>(j)])) {
                std::ostringstream msg;
                msg << "resolution " << n << " on axis " << j << " cannot carry index "
                    << c.point.m[static_cast<std::size_t>(j)];
                fail("AliasingRisk", msg.str());
            }
        }

    std::size_t total = 1;
    for (int n : resolution) total *= static_cast<std::size_t>(n);

    std::vector<std::complex<double>> bins(total, 0.0);
    for (const auto& c : spec.coeffs) {
        std::size_t flat = 0;
        for (int j = 0; j < d; ++j) {
            const int n = resolution[static_cast<std::size_t>(j)];
            const int k = ((c.point.m[static_cast<std::size_t>(j)] % n) + n) % n;
            flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(k);
        }
        bins[flat] += c.value;
    }

    GridSample out;
    out.lattice = spec.lattice;
    out.resolution = resolution;
    out.values.resize(total);
    {
        std::vector<int> n(resolution.begin(), resolution.end());
        fftw_plan plan = fftw_plan_dft(d, n.data(),
                                       reinterpret_cast<fftw_complex*>(bins.data()),
                                       reinterpret_cast<fftw_complex*>(out.values.data()),
                                       FFTW_BACKWARD, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }
    return out;
}

// ((1/#grid)·Σ|f|^p)^{1/p} — the Riemann sum for the normalized measure dx/|Ω|.
inline NormValue lp_norm(const GridSample& sample, double p) {
    require(p >= 1.0, "InvalidArgument", "Lp exponent must be >= 1");
    NormValue nv;
    nv.kind = NormKind::Lp;
    nv.exponent = p;
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : sample.values) m = std::max(m, std::abs(v));
        nv.value = m;
        return nv;
    }
    const std::size_t n = sample.values.size();
    double mean = parallel_sum(n, [&](std::size_t i) {
                      return std::pow(std::abs(sample.values[i]), p);
                  }) / static_cast<double>(n);
    nv.value = std::pow(mean, 1.0 / p);
    return nv;
}

inline NormValue ellp_norm(const SpectralFunction& spec, double gamma) {
    require(gamma >= 1.0, "InvalidArgument", "sequence-norm exponent must be >= 1");
    NormValue nv;
    nv.kind = NormKind::ellp;
    nv.exponent = gamma;
    if (std::isinf(gamma)) {
        double m = 0.0;
        for (const auto& c : spec.coeffs) m = std::max(m, std::abs(c.value));
        nv.value = m;
        return nv;
    }
    double s = parallel_sum(spec.coeffs.size(), [&](std::size_t i) {
        return std::pow(std::abs(spec.coeffs[i].value), gamma);
    });
    nv.value = std::pow(s, 1.0 / gamma);
    return nv;
}

// f ↦ f(·+h) on coefficients: multiply by e^{2πiκ·h}. Acts on the periodic
// extension, so any representative of h works.
inline SpectralFunction translate(const SpectralFunction& spec, const std::vector<double>& h) {
    require(static_cast<int>(h.size()) == spec.lattice.dim, "InvalidArgument",
            "offset dimension mismatch");
    SpectralFunction out = spec;
    for (auto& c : out.coeffs) c.value *= detail::unit_phase(detail::dot(c.point.kappa, h));
    return out;
}

// f ↦ f(·+h) − f: multiply by e^{2πiκ·h} − 1 (magnitude 2|sin(πκ·h)|).
inline SpectralFunction additive_difference(const SpectralFunction& spec,
                                            const std::vector<double>& h) {
    require(static_cast<int>(h.size()) == spec.lattice.dim, "InvalidArgument",
            "offset dimension mismatch");
    SpectralFunction out = spec;
    for (auto& c : out.coeffs) c.value *= detail::difference_factor(detail::dot(c.point.kappa, h));
    return out;
}

// Composition of the coordinate differences f(·+h_j e_j) − f over all axes:
// multiply by Π_j (e^{2πiκ_j h_j} − 1).
inline SpectralFunction multiplicative_difference(const SpectralFunction& spec,
                                                  const std::vector<double>& h) {
    require(static_cast<int>(h.size()) == spec.lattice.dim, "InvalidArgument",
            "offset dimension mismatch");
    SpectralFunction out = spec;
    for (auto& c : out.coeffs) {
        std::complex<double> factor = 1.0;
        for (std::size_t j = 0; j < h.size(); ++j)
            factor *= detail::difference_factor(c.point.kappa[j] * h[j]);
        c.value *= factor;
    }
    return out;
}

struct PlancherelCheck {
    double l2_grid = 0.0;  // (1/#grid)·Σ|f|²
    double l2_spec = 0.0;  // Σ|f̂|²
    double rel_err = 0.0;
};

inline PlancherelCheck plancherel_check(const GridSample& sample) {
    PlancherelCheck out;
    const std::size_t n = sample.values.size();
    out.l2_grid = parallel_sum(n, [&](std::size_t i) { return std::norm(sample.values[i]); }) /
                  static_cast<double>(n);
    out.l2_spec = total_l2_mass(forward_transform(sample));
    const double scale = std::max(out.l2_grid, out.l2_spec);
    out.rel_err = scale > 0.0 ? std::abs(out.l2_grid - out.l2_spec) / scale : 0.0;
    return out;
}

} // namespace latreg
