#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "spectral.hpp"

namespace latreg {

enum class Family { PowerLaw, Lacunary, Zygmund, TensorProduct, RandomBandLimited };

inline const char* to_string(Family f) {
    switch (f) {
        case Family::PowerLaw: return "powerlaw";
        case Family::Lacunary: return "lacunary";
        case Family::Zygmund: return "zygmund";
        case Family::TensorProduct: return "tensor";
        case Family::RandomBandLimited: return "random";
    }
    return "?";
}

inline Family family_from_string(const std::string& name) {
    if (name == "powerlaw") return Family::PowerLaw;
    if (name == "lacunary") return Family::Lacunary;
    if (name == "zygmund") return Family::Zygmund;
    if (name == "tensor") return Family::TensorProduct;
    if (name == "random") return Family::RandomBandLimited;
    fail("UnsupportedFamily", "unknown family '" + name + "'");
}

// Ground-truth test families. `band` is the spectral radius for the radial
// families and the per-coordinate half-width for the tensor family. Decay
// families need at least 2^6 octave room for their tails to be measurable;
// the random family has no decay ground truth and only needs a valid ball.
struct FamilyDescriptor {
    Family family = Family::PowerLaw;
    int dim = 1;
    double alpha = 0.5;
    std::vector<double> alphas;  // TensorProduct
    double band = 64.0;
    std::uint64_t seed = 42;
    bool zero_phase = false;
};

namespace detail {

// All randomness in the corpus flows through engine-exact 53-bit uniforms, so
// generation is bit-reproducible across platforms and thread counts.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double angle() { return 2.0 * std::numbers::pi * uniform(); }

    std::complex<double> gaussian() {
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * std::numbers::pi * u2),
                r * std::sin(2.0 * std::numbers::pi * u2)};
    }

private:
    std::mt19937_64 eng_;
};

inline void check_alpha(double alpha) {
    require(0.0 < alpha && alpha < 1.0, "InvalidArgument", "family alpha must lie in (0,1)");
}

inline void sort_canonical(SpectralFunction& spec) {
    std::sort(spec.coeffs.begin(), spec.coeffs.end(),
              [](const Coefficient& a, const Coefficient& b) { return a.point.m < b.point.m; });
}

} // namespace detail

inline SpectralFunction generate(const FamilyDescriptor& desc, const Lattice& lattice) {
    require(lattice.dim == desc.dim, "InvalidArgument", "descriptor/lattice dimension mismatch");
    if (desc.family == Family::RandomBandLimited)
        require(desc.band >= 2.0, "InvalidArgument", "band must be at least 2");
    else
        require(desc.band >= 64.0, "InvalidArgument", "decay families need band >= 64");

    detail::SeededRng rng(desc.seed);
    SpectralFunction spec;
    spec.lattice = lattice;
    spec.band = desc.band;

    auto phase = [&](double canonical) {
        return desc.zero_phase ? 0.0 : canonical;
    };

    switch (desc.family) {
        case Family::PowerLaw: {
            detail::check_alpha(desc.alpha);
            const double exponent = -(desc.dim + 2.0 * desc.alpha) / 2.0;
            for (auto& p : enumerate_ball(lattice, desc.band)) {
                if (p.norm == 0.0) continue;
                const double mag = std::pow(p.norm, exponent);
                const double theta = phase(rng.angle());
                spec.coeffs.push_back({std::move(p), std::polar(mag, theta)});
            }
            break;
        }
        case Family::Lacunary: {
            detail::check_alpha(desc.alpha);
            require(desc.dim == 1, "InvalidArgument", "lacunary family is one-dimensional");
            const double level_mass = 1.0 - std::pow(2.0, -2.0 * desc.alpha);
            for (int k = 0;; ++k) {
                const int freq = 1 << k;
                DualPoint probe = make_dual_point(lattice, {freq});
                if (probe.norm > desc.band) break;
                const double mag = std::sqrt(std::pow(2.0, -2.0 * k * desc.alpha) * level_mass);
                for (int sign : {-1, 1}) {
                    DualPoint p = make_dual_point(lattice, {sign * freq});
                    const double theta = phase(rng.angle());
                    spec.coeffs.push_back({std::move(p), std::polar(mag, theta)});
                }
                if (freq > (1 << 29)) break;
            }
            break;
        }
        case Family::Zygmund: {
            detail::check_alpha(desc.alpha);
            require(desc.dim == 1, "InvalidArgument", "this family is one-dimensional");
            for (int n = 1;; ++n) {
                DualPoint p = make_dual_point(lattice, {n});
                if (p.norm > desc.band) break;
                const double x = static_cast<double>(n);
                const double mag = std::pow(x, -(0.5 + desc.alpha));
                const double theta = phase(x * std::log(x));
                spec.coeffs.push_back({std::move(p), std::polar(mag, theta)});
            }
            break;
        }
        case Family::TensorProduct: {
            require(desc.dim >= 2, "InvalidArgument", "tensor family needs dim >= 2");
            require(static_cast<int>(desc.alphas.size()) == desc.dim, "InvalidArgument",
                    "tensor family needs one alpha per coordinate");
            for (double a : desc.alphas) detail::check_alpha(a);
            for (int r = 0; r < lattice.dim; ++r)
                for (int c = 0; c < lattice.dim; ++c)
                    require(r == c || lattice.gen(r, c) == 0.0, "InvalidArgument",
                            "tensor family needs a diagonal generator");

            const std::vector<double> bounds(static_cast<std::size_t>(desc.dim), desc.band);
            double max_norm = 0.0;
            for (auto& p : enumerate_box(lattice, bounds)) {
                double mag2 = 1.0;
                bool off_axes = true;
                for (int j = 0; j < desc.dim; ++j) {
                    const double kj = std::abs(p.kappa[static_cast<std::size_t>(j)]);
                    if (kj == 0.0) {
                        off_axes = false;
                        break;
                    }
                    mag2 *= std::pow(kj, -1.0 - 2.0 * desc.alphas[static_cast<std::size_t>(j)]);
                }
                if (!off_axes) continue;
                max_norm = std::max(max_norm, p.norm);
                const double theta = phase(rng.angle());
                spec.coeffs.push_back({std::move(p), std::polar(std::sqrt(mag2), theta)});
            }
            spec.band = max_norm;  // corner points exceed the per-coordinate width
            break;
        }
        case Family::RandomBandLimited: {
            for (auto& p : enumerate_ball(lattice, desc.band)) {
                std::complex<double> v = rng.gaussian();
                if (desc.zero_phase) v = std::abs(v);
                spec.coeffs.push_back({std::move(p), v});
            }
            break;
        }
    }
    detail::sort_canonical(spec);
    return spec;
}

// Two-sided analytic bracket for the spectral tail Σ_{|κ|>N}|f̂|² of the
// closed-form families on the standard integer lattice.
struct TailBracket {
    double lower = 0.0;
    double upper = 0.0;
    double value() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

namespace detail {

// ∫_lo^hi x^{-1-2a-k} dx for the binomial pieces of the shifted shell integrals.
inline double power_integral(double lo, double hi, double drop) {
    if (hi <= lo) return 0.0;
    if (std::isinf(hi)) return std::pow(lo, -drop) / drop;
    return (std::pow(lo, -drop) - std::pow(hi, -drop)) / drop;
}

inline double binomial(int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
}

} // namespace detail

inline TailBracket ground_truth_tail(const FamilyDescriptor& desc, double n) {
    require(n > 0.0, "InvalidArgument", "tail radius must be positive");
    TailBracket out;
    switch (desc.family) {
        case Family::PowerLaw: {
            detail::check_alpha(desc.alpha);
            if (desc.dim == 1) {
                // Two-sided integer power law truncated at the band:
                // Σ_{N<|n|≤B} |n|^{-1-2α} bracketed by the integral test.
                const double a2 = 2.0 * desc.alpha;
                const double first = std::floor(n) + 1.0;
                const double b = std::floor(desc.band);
                if (first > b) { out = {0.0, 0.0}; return out; }
                auto integral = [&](double lo, double hi) {
                    return (std::pow(lo, -a2) - std::pow(hi, -a2)) / a2;
                };
                out.lower = 2.0 * integral(first, b + 1.0);
                out.upper = 2.0 * integral(first - 1.0, b);
                return out;
            }
            const double rho = std::sqrt(static_cast<double>(desc.dim)) / 2.0;
            require(n >= 2.0 * rho + 0.5, "InvalidArgument",
                    "bracket not valid this close to the origin");
            auto infinite_tail_upper = [&](double x) {
                const double omega = 2.0 * std::pow(std::numbers::pi, desc.dim / 2.0) /
                                     std::tgamma(desc.dim / 2.0);
                double total = 0.0;
                for (int k = 0; k <= desc.dim - 1; ++k)
                    total += detail::binomial(desc.dim - 1, k) * std::pow(rho, k) *
                             detail::power_integral(x - 2.0 * rho,
                                                    std::numeric_limits<double>::infinity(),
                                                    2.0 * desc.alpha + k);
                return omega * total;
            };
            auto infinite_tail_lower = [&](double x) {
                const double omega = 2.0 * std::pow(std::numbers::pi, desc.dim / 2.0) /
                                     std::tgamma(desc.dim / 2.0);
                double total = 0.0;
                for (int k = 0; k <= desc.dim - 1; ++k)
                    total += detail::binomial(desc.dim - 1, k) * std::pow(-rho, k) *
                             detail::power_integral(x + 2.0 * rho,
                                                    std::numeric_limits<double>::infinity(),
                                                    2.0 * desc.alpha + k);
                return omega * std::max(total, 0.0);
            };
            // Truncation at the band subtracts the spectrum beyond it.
            out.lower = std::max(infinite_tail_lower(n) - infinite_tail_upper(desc.band), 0.0);
            out.upper = infinite_tail_upper(n) - infinite_tail_lower(desc.band);
            return out;
        }
        case Family::Lacunary: {
            detail::check_alpha(desc.alpha);
            // Exact geometric sum over the levels 2^k with N < 2^k ≤ band,
            // counting both signs.
            const double a2 = 2.0 * desc.alpha;
            double exact = 0.0;
            for (int k = 0;; ++k) {
                const double freq = std::ldexp(1.0, k);
                if (freq > desc.band) break;
                if (freq > n)
                    exact += 2.0 * std::pow(2.0, -a2 * k) * (1.0 - std::pow(2.0, -a2));
            }
            out.lower = out.upper = exact;
            return out;
        }
        case Family::Zygmund: {
            detail::check_alpha(desc.alpha);
            // One-sided: Σ_{N<n≤B} n^{-1-2α}, integral-test bracket.
            const double a2 = 2.0 * desc.alpha;
            const double first = std::floor(n) + 1.0;
            const double b = std::floor(desc.band);
            if (first > b) { out = {0.0, 0.0}; return out; }
            auto integral = [&](double lo, double hi) {
                return (std::pow(lo, -a2) - std::pow(hi, -a2)) / a2;
            };
            out.lower = integral(first, b + 1.0);
            out.upper = integral(first - 1.0, b);
            return out;
        }
        case Family::TensorProduct: {
            require(static_cast<int>(desc.alphas.size()) == desc.dim, "InvalidArgument",
                    "tensor family needs one alpha per coordinate");
            // All-coordinates box tail at (N,…,N): the product of the
            // per-coordinate two-sided brackets.
            out.lower = 1.0;
            out.upper = 1.0;
            for (double a : desc.alphas) {
                detail::check_alpha(a);
                const double a2 = 2.0 * a;
                const double first = std::floor(n) + 1.0;
                const double b = std::floor(desc.band);
                if (first > b) { out = {0.0, 0.0}; return out; }
                auto integral = [&](double lo, double hi) {
                    return (std::pow(lo, -a2) - std::pow(hi, -a2)) / a2;
                };
                out.lower *= 2.0 * integral(first, b + 1.0);
                out.upper *= 2.0 * integral(first - 1.0, b);
            }
            return out;
        }
        case Family::RandomBandLimited:
            fail("NoClosedForm", "the random band-limited family has no analytic tail");
    }
    return out;
}

} // namespace latreg
