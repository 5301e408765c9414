#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "duren.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "spectral.hpp"

namespace latreg {

enum class AlphaMethod { TailSlope, DirectSup };

struct LipschitzEstimate {
    double alpha_hat = 0.0;
    double p = 2.0;
    AlphaMethod method = AlphaMethod::TailSlope;
    double residual = 0.0;
    std::vector<double> radii_used;
    bool out_of_range = false;  // set when alpha_hat falls outside (0,1)
};

struct LipNorms {
    double tail_norm = 0.0;    // ‖f‖_{L²} + sup_N N^α·tail(N)^{1/2}
    double direct_norm = 0.0;  // ‖f‖_{L²} + sup_h |h|^{-α}·‖f(·+h)-f‖_{L²}
    double alpha = 0.0;
    double ratio = 0.0;        // direct / tail
};

enum class Membership { Convergent, Divergent, Inconclusive };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::Convergent: return "Convergent";
        case Membership::Divergent: return "Divergent";
        case Membership::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct MembershipVerdict {
    double gamma = 0.0;
    Membership verdict = Membership::Inconclusive;
    double block_slope = 0.0;
    double boundary_gamma = 0.0;
};

namespace detail {

// |f̂|² aggregated by |κ| with exact suffix sums; backbone of every tail query.
struct RadialMass {
    std::vector<double> radius;  // distinct |κ|, ascending
    std::vector<double> suffix;  // suffix[i] = Σ_{radius ≥ radius[i]} mass

    explicit RadialMass(const SpectralFunction& spec) {
        std::vector<std::pair<double, double>> items;
        items.reserve(spec.coeffs.size());
        for (const auto& c : spec.coeffs) items.emplace_back(c.point.norm, std::norm(c.value));
        std::sort(items.begin(), items.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [r, w] : items) {
            if (!radius.empty() && radius.back() == r)
                suffix.back() += w;  // temporarily per-radius mass
            else {
                radius.push_back(r);
                suffix.push_back(w);
            }
        }
        double acc = 0.0;
        for (std::size_t i = suffix.size(); i-- > 0;) {
            acc += suffix[i];
            suffix[i] = acc;
        }
    }

    double tail(double n) const {
        std::size_t pos = static_cast<std::size_t>(
            std::upper_bound(radius.begin(), radius.end(), n) - radius.begin());
        return pos < suffix.size() ? suffix[pos] : 0.0;
    }

    double total() const { return suffix.empty() ? 0.0 : suffix.front(); }
};

} // namespace detail

// Σ_{|κ|>N} |f̂(κ)|² over the stored spectrum.
inline double tail_sum(const SpectralFunction& spec, double n) {
    if (n >= spec.band) {
        std::ostringstream msg;
        msg << "tail radius " << n << " is at or beyond the band " << spec.band;
        fail("BandExceeded", msg.str());
    }
    return parallel_sum(spec.coeffs.size(), [&](std::size_t i) {
        return spec.coeffs[i].point.norm > n ? std::norm(spec.coeffs[i].value) : 0.0;
    });
}

// Octave ladder of tail radii placed off lattice shells (half-integer offsets)
// and kept well below the band, where truncation bias is negligible.
inline std::vector<double> default_radii(double band) {
    require(band > 16.0, "InvalidArgument", "band too small for a tail-radius ladder");
    std::vector<double> preferred, fallback;
    for (double p = 2.0; p + 0.5 < band / 4.0; p *= 2.0) {
        fallback.push_back(p + 0.5);
        if (p >= band / 512.0 && p < band / 32.0) preferred.push_back(p + 0.5);
    }
    const std::vector<double>& pick = preferred.size() >= 4 ? preferred : fallback;
    require(pick.size() >= 4, "InvalidArgument", "band too small for a tail-radius ladder");
    return pick;
}

// α̂ = −slope/2 of log Σ_{|κ|>N}|f̂|² against log N, least squares over the
// offered radii. Radii at or beyond band/4 sit in the truncation-dominated
// region and are dropped; at least 4 must survive. The fit additionally skips
// radii whose tails are exhausted; `radii_used` records what entered the fit.
inline LipschitzEstimate estimate_alpha_tail(const SpectralFunction& spec,
                                             const std::vector<double>& radii) {
    detail::check_radii_increasing(radii);
    std::vector<double> candidates;
    for (double r : radii)
        if (r < spec.band / 4.0) candidates.push_back(r);
    require(candidates.size() >= 4, "InvalidArgument",
            "need at least 4 radii strictly below band/4");

    detail::RadialMass mass(spec);
    const double floor_mass = 1e-14 * mass.total();

    std::vector<double> x, y, used;
    for (double r : candidates) {
        const double t = mass.tail(r);
        if (t > floor_mass) {
            x.push_back(std::log(r));
            y.push_back(std::log(t));
            used.push_back(r);
        }
    }
    if (x.size() < 2)
        fail("NoDecaySignal", "tails vanish (or are at rounding level) at every radius");

    LineFit fit = fit_line(x, y);
    LipschitzEstimate est;
    est.alpha_hat = -fit.slope / 2.0;
    est.method = AlphaMethod::TailSlope;
    est.residual = fit.max_residual;
    est.radii_used = std::move(used);
    est.out_of_range = !(est.alpha_hat > 0.0 && est.alpha_hat < 1.0);
    return est;
}

// ‖f‖_{L²} + sup_{1≤N≤N_max} N^α (Σ_{|κ|>N}|f̂|²)^{1/2}, with the L² norm taken
// on the spectral side.
inline double lip_tail_norm(const SpectralFunction& spec, double alpha, int n_max) {
    require(0.0 < alpha && alpha < 1.0, "InvalidArgument", "alpha must lie in (0,1)");
    require(n_max >= 1, "InvalidArgument", "n_max must be at least 1");
    require(n_max < spec.band, "BandExceeded", "n_max must stay below the band");

    detail::RadialMass mass(spec);
    double sup = 0.0;
    for (int n = 1; n <= n_max; ++n)
        sup = std::max(sup, std::pow(n, alpha) * std::sqrt(mass.tail(n)));
    return std::sqrt(mass.total()) + sup;
}

// Sampling plan for the translation-based norm: dyadic step sizes along every
// coordinate axis plus a fixed set of seeded unit directions.
struct HPlan {
    std::vector<std::vector<double>> offsets;
};

inline HPlan default_h_plan(int dim) {
    HPlan plan;
    std::vector<std::vector<double>> directions;
    for (int j = 0; j < dim; ++j) {
        std::vector<double> e(static_cast<std::size_t>(dim), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        directions.push_back(std::move(e));
    }
    std::mt19937_64 eng(0x1a7e9u);
    auto uniform = [&] { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    for (int k = 0; k < 8; ++k) {
        std::vector<double> v(static_cast<std::size_t>(dim));
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (auto& c : v) {
                // Box-Muller on engine-exact uniforms keeps the plan reproducible.
                const double u1 = (static_cast<double>(eng() >> 11) + 1.0) * 0x1.0p-53;
                const double u2 = uniform();
                c = std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * std::numbers::pi * u2);
                norm2 += c * c;
            }
        } while (norm2 < 1e-12);
        for (auto& c : v) c /= std::sqrt(norm2);
        directions.push_back(std::move(v));
    }
    for (int k = 2; k <= 12; ++k) {
        const double r = std::ldexp(1.0, -k);
        for (const auto& u : directions) {
            std::vector<double> h(u);
            for (auto& c : h) c *= r;
            plan.offsets.push_back(std::move(h));
        }
    }
    return plan;
}

// ‖f‖_{L²} + max over the sampled offsets of |h|^{-α}·‖f(·+h)-f‖_{L²}; the
// difference norm is evaluated spectrally, which is exact for finite expansions.
inline double lip_direct_norm(const SpectralFunction& spec, double alpha, const HPlan& plan) {
    require(0.0 < alpha && alpha <= 1.0, "InvalidArgument", "alpha must lie in (0,1]");
    double sup = 0.0;
    for (const auto& h : plan.offsets) {
        double h2 = 0.0;
        for (double c : h) h2 += c * c;
        if (h2 == 0.0) continue;
        const double diff2 = parallel_sum(spec.coeffs.size(), [&](std::size_t i) {
            const auto& c = spec.coeffs[i];
            const double s = detail::dot(c.point.kappa, h);
            const double sine = std::sin(std::numbers::pi * (s - std::round(s)));
            return 4.0 * sine * sine * std::norm(c.value);
        });
        sup = std::max(sup, std::pow(std::sqrt(h2), -alpha) * std::sqrt(diff2));
    }
    return std::sqrt(total_l2_mass(spec)) + sup;
}

inline LipNorms norm_equivalence_report(const SpectralFunction& spec, double alpha) {
    require(0.0 < alpha && alpha < 1.0, "InvalidArgument", "alpha must lie in (0,1)");
    LipNorms out;
    out.alpha = alpha;
    const int n_max = std::max(1, static_cast<int>(spec.band / 4.0));
    out.tail_norm = lip_tail_norm(spec, alpha, n_max);
    out.direct_norm = lip_direct_norm(spec, alpha, default_h_plan(spec.lattice.dim));
    out.ratio = out.tail_norm > 0.0 ? out.direct_norm / out.tail_norm
                                    : (out.direct_norm > 0.0 ? std::numeric_limits<double>::infinity()
                                                             : 1.0);
    return out;
}

namespace detail {

// Dyadic block index: the k with 2^k < r ≤ 2^{k+1}.
inline int block_index(double r) {
    int e = 0;
    const double mant = std::frexp(r, &e);  // r = mant·2^e, mant ∈ [0.5, 1)
    return mant == 0.5 ? e - 2 : e - 1;
}

struct BlockClassification {
    Membership verdict = Membership::Inconclusive;
    double slope = 0.0;
};

// Fit log block sums against k·log 2 over complete blocks k ≥ 2 and classify
// the decay trend. A spectrum that dies two octaves before the band counts as
// convergent outright.
inline BlockClassification classify_blocks(const std::vector<double>& block_sums, int k_max,
                                           double total_mass, double band) {
    BlockClassification out;
    const double floor_mass = 1e-14 * total_mass;
    int k_last = -1;
    for (int k = 2; k <= k_max; ++k)
        if (k < static_cast<int>(block_sums.size()) && block_sums[static_cast<std::size_t>(k)] > floor_mass)
            k_last = k;
    if (k_last < 0 || std::ldexp(1.0, k_last + 1) <= band / 4.0) {
        out.verdict = Membership::Convergent;
        return out;
    }
    std::vector<double> x, y;
    for (int k = 2; k <= k_max; ++k) {
        if (k >= static_cast<int>(block_sums.size())) break;
        const double bsum = block_sums[static_cast<std::size_t>(k)];
        if (bsum > floor_mass) {
            x.push_back(k * std::log(2.0));
            y.push_back(std::log(bsum));
        }
    }
    if (x.size() < 2) {
        out.verdict = Membership::Inconclusive;
        return out;
    }
    out.slope = fit_line(x, y).slope;
    if (out.slope <= -0.1)
        out.verdict = Membership::Convergent;
    else if (out.slope >= -0.02)
        out.verdict = Membership::Divergent;
    else
        out.verdict = Membership::Inconclusive;
    return out;
}

} // namespace detail

// ℓ^γ membership probe: dyadic block sums B_k = Σ_{2^k<|κ|≤2^{k+1}} |f̂|^γ and
// their fitted decay trend, against the theoretical boundary exponent
// p/(p + (α/d)p − 1).
inline std::vector<MembershipVerdict> first_titchmarsh_probe(const SpectralFunction& spec,
                                                             double alpha, double p,
                                                             const std::vector<double>& gammas) {
    require(1.0 < p && p <= 2.0, "InvalidArgument", "p must lie in (1,2]");
    require(0.0 < alpha && alpha <= 1.0, "InvalidArgument", "alpha must lie in (0,1]");
    const double d = spec.lattice.dim;
    const double boundary = p / (p + (alpha / d) * p - 1.0);

    const int k_max = static_cast<int>(std::floor(std::log2(spec.band) - 1.0 + 1e-12));
    std::vector<MembershipVerdict> out;
    for (double gamma : gammas) {
        require(gamma >= 1.0, "InvalidArgument", "gamma must be at least 1");
        std::vector<double> block_sums(static_cast<std::size_t>(std::max(k_max + 1, 1)), 0.0);
        double total = 0.0;
        for (const auto& c : spec.coeffs) {
            const double w = std::pow(std::abs(c.value), gamma);
            total += w;
            if (c.point.norm <= 0.0) continue;
            const int k = detail::block_index(c.point.norm);
            if (k >= 0 && k <= k_max) block_sums[static_cast<std::size_t>(k)] += w;
        }
        if (total <= 0.0) fail("NoDecaySignal", "spectrum carries no mass");

        const auto cls = detail::classify_blocks(block_sums, k_max, total, spec.band);
        out.push_back({gamma, cls.verdict, cls.slope, boundary});
    }
    return out;
}

// ε-indexed second-moment sums: weights |κ_j|^{2ε_j} over the coordinate
// ranges I_{ε_j}(N_j), evaluated through the generic range-selected sum.
inline double multiplicative_tail_sum(const SpectralFunction& spec,
                                      const std::vector<double>& bounds,
                                      const std::vector<int>& eps) {
    require(static_cast<int>(bounds.size()) == spec.lattice.dim, "InvalidArgument",
            "bounds dimension mismatch");
    for (double n : bounds)
        if (n >= spec.band) fail("BandExceeded", "coordinate bound reaches the band");

    std::vector<MultiWeight> weights;
    weights.reserve(spec.coeffs.size());
    for (const auto& c : spec.coeffs) weights.push_back({c.point.kappa, std::norm(c.value)});
    const std::vector<double> exponents(bounds.size(), 2.0);
    return epsilon_partial_sum(weights, bounds, eps, exponents);
}

struct MultiAlphaEstimate {
    std::vector<double> alpha_hat;
    double residual = 0.0;
};

// Separable decay fit: log T(N_1,…,N_d) ≈ c − 2Σ_j α_j log N_j over the product
// grid of per-coordinate radii, where T uses the all-coordinates tail ranges.
inline MultiAlphaEstimate estimate_alpha_multiplicative(
    const SpectralFunction& spec, const std::vector<std::vector<double>>& radii_per_coord) {
    const int d = spec.lattice.dim;
    require(static_cast<int>(radii_per_coord.size()) == d, "InvalidArgument",
            "need one radius list per coordinate");
    for (const auto& r : radii_per_coord) {
        detail::check_radii_increasing(r);
        for (double x : r)
            if (x >= spec.band) fail("BandExceeded", "radius reaches the band");
    }

    std::vector<MultiWeight> weights;
    weights.reserve(spec.coeffs.size());
    double total = 0.0;
    for (const auto& c : spec.coeffs) {
        const double w = std::norm(c.value);
        total += w;
        weights.push_back({c.point.kappa, w});
    }
    const std::vector<int> eps(static_cast<std::size_t>(d), 0);
    const std::vector<double> exps(static_cast<std::size_t>(d), 2.0);

    std::vector<std::vector<double>> obs_x;
    std::vector<double> obs_y;
    std::vector<std::size_t> cursor(static_cast<std::size_t>(d), 0);
    while (true) {
        std::vector<double> bounds(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j)
            bounds[static_cast<std::size_t>(j)] =
                radii_per_coord[static_cast<std::size_t>(j)][cursor[static_cast<std::size_t>(j)]];
        const double t = epsilon_partial_sum(weights, bounds, eps, exps);
        if (t > 1e-14 * total) {
            std::vector<double> row(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j) row[static_cast<std::size_t>(j)] = std::log(bounds[static_cast<std::size_t>(j)]);
            obs_x.push_back(std::move(row));
            obs_y.push_back(std::log(t));
        }
        int j = d - 1;
        for (; j >= 0; --j) {
            if (++cursor[static_cast<std::size_t>(j)] < radii_per_coord[static_cast<std::size_t>(j)].size()) break;
            cursor[static_cast<std::size_t>(j)] = 0;
        }
        if (j < 0) break;
    }
    if (obs_x.size() < static_cast<std::size_t>(d) + 1)
        fail("NoDecaySignal", "too few grid points with non-vanishing tails");

    AffineFit fit = fit_affine(obs_x, obs_y);
    MultiAlphaEstimate est;
    est.residual = fit.max_residual;
    for (int j = 0; j < d; ++j) est.alpha_hat.push_back(-fit.coef[static_cast<std::size_t>(j) + 1] / 2.0);
    return est;
}

struct ZygmundReport {
    double alpha = 0.0;
    double beta = 0.0;  // 2/(2α+1), the critical sequence exponent
    LipschitzEstimate alpha_estimate;
    std::vector<double> partial_ns;    // dyadic N
    std::vector<double> partial_sums;  // Σ_{n≤N} |f̂(n)|^β
    double log_growth_coef = 0.0;      // c1 in P(N) ≈ c0 + c1·log N
    double log_growth_residual = 0.0;
    MembershipVerdict verdict_at_beta;
    MembershipVerdict verdict_above_beta;  // probed at 1.2·β
};

// Boundary-sharpness witness: f̂(n) = n^{-(1/2+α)} e^{i n log n} on Z. Its tails
// give back α, while the ℓ^β partial sums at the critical β grow like log N —
// divergent at the boundary, convergent just above it.
inline ZygmundReport zygmund_sharpness_report(double alpha, int n_max) {
    require(0.0 < alpha && alpha < 1.0, "InvalidArgument", "alpha must lie in (0,1)");
    require(n_max >= 64, "InvalidArgument", "need n_max >= 64");

    SpectralFunction spec;
    spec.lattice = make_lattice({{1.0}});
    spec.band = static_cast<double>(n_max);
    spec.coeffs.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double x = static_cast<double>(n);
        Coefficient c;
        c.point = make_dual_point(spec.lattice, {n});
        c.value = std::polar(std::pow(x, -(0.5 + alpha)), x * std::log(x));
        spec.coeffs.push_back(std::move(c));
    }

    ZygmundReport report;
    report.alpha = alpha;
    report.beta = 2.0 / (2.0 * alpha + 1.0);
    report.alpha_estimate = estimate_alpha_tail(spec, default_radii(spec.band));

    // Ascending partial sums of |f̂|^β at dyadic cut-offs.
    std::vector<double> log_ns, partials;
    double acc = 0.0;
    int next_dyadic = 1;
    for (int n = 1; n <= n_max; ++n) {
        acc += std::pow(static_cast<double>(n), -(0.5 + alpha) * report.beta);
        if (n == next_dyadic) {
            report.partial_ns.push_back(n);
            report.partial_sums.push_back(acc);
            log_ns.push_back(std::log(static_cast<double>(n)));
            partials.push_back(acc);
            next_dyadic *= 2;
        }
    }
    LineFit growth = fit_line(log_ns, partials);
    report.log_growth_coef = growth.slope;
    report.log_growth_residual = growth.max_residual;

    const auto verdicts =
        first_titchmarsh_probe(spec, alpha, 2.0, {report.beta, 1.2 * report.beta});
    report.verdict_at_beta = verdicts[0];
    report.verdict_above_beta = verdicts[1];
    return report;
}

} // namespace latreg
