#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fit.hpp"
#include "parallel.hpp"

namespace latreg {

// Non-negative weights c over non-negative real indices (|λ| for lattice
// points, n for integer sequences). Canonical form: strictly increasing
// indices, equal indices merged.
struct WeightedEntry {
    double index = 0.0;
    double weight = 0.0;
};

struct WeightedSequence {
    std::vector<WeightedEntry> support;
    std::string description;
};

inline WeightedSequence make_weighted_sequence(std::vector<WeightedEntry> entries,
                                               std::string description = {}) {
    for (const auto& e : entries) {
        require(e.index >= 0.0, "InvalidArgument", "sequence indices must be non-negative");
        require(e.weight >= 0.0, "InvalidArgument", "sequence weights must be non-negative");
    }
    std::sort(entries.begin(), entries.end(),
              [](const WeightedEntry& a, const WeightedEntry& b) { return a.index < b.index; });
    WeightedSequence seq;
    seq.description = std::move(description);
    seq.support.reserve(entries.size());
    for (const auto& e : entries) {
        if (!seq.support.empty() && seq.support.back().index == e.index)
            seq.support.back().weight += e.weight;
        else
            seq.support.push_back(e);
    }
    return seq;
}

// Tail sums T(N) = Σ_{index>N} c and weighted partials S(N) = Σ_{index≤N} index^b·c
// over a ladder of radii, with log-log slopes fitted over the interior radii.
struct DecayProfile {
    std::vector<double> radii;
    std::vector<double> tails;
    std::vector<double> weighted_partials;
    double weight_exponent = 0.0;          // b
    double fitted_tail_exponent = 0.0;     // slope of log T vs log N
    double fitted_partial_exponent = 0.0;  // slope of log S vs log N
    double residual = 0.0;                 // max |log-space deviation| over both fits
};

enum class DurenVerdict { Consistent, PartialHolds_TailFails, TailHolds_PartialFails, Inconsistent };

inline const char* to_string(DurenVerdict v) {
    switch (v) {
        case DurenVerdict::Consistent: return "Consistent";
        case DurenVerdict::PartialHolds_TailFails: return "PartialHolds_TailFails";
        case DurenVerdict::TailHolds_PartialFails: return "TailHolds_PartialFails";
        case DurenVerdict::Inconsistent: return "Inconsistent";
    }
    return "?";
}

namespace detail {

// Shared fitting step: drop the first and last radius (truncation-biased
// endpoints), drop zero values, require at least 3 usable tail points.
inline void fit_profile_exponents(DecayProfile& p) {
    const std::size_t k = p.radii.size();
    require(k >= 3, "InvalidArgument", "need at least three radii to fit a profile");

    std::vector<double> xt, yt, xs, ys;
    for (std::size_t i = 1; i + 1 < k; ++i) {
        if (p.tails[i] > 0.0) {
            xt.push_back(std::log(p.radii[i]));
            yt.push_back(std::log(p.tails[i]));
        }
        if (p.weighted_partials[i] > 0.0) {
            xs.push_back(std::log(p.radii[i]));
            ys.push_back(std::log(p.weighted_partials[i]));
        }
    }
    if (xt.size() < 3)
        fail("EmptyTail", "fewer than three interior radii with a non-zero tail");
    if (xs.size() < 2)
        fail("EmptyTail", "fewer than two interior radii with a non-zero weighted partial sum");

    LineFit tail_fit = fit_line(xt, yt);
    LineFit partial_fit = fit_line(xs, ys);
    p.fitted_tail_exponent = tail_fit.slope;
    p.fitted_partial_exponent = partial_fit.slope;
    p.residual = std::max(tail_fit.max_residual, partial_fit.max_residual);
}

inline void check_radii_increasing(const std::vector<double>& radii) {
    require(!radii.empty(), "InvalidArgument", "radii list is empty");
    for (std::size_t i = 1; i < radii.size(); ++i)
        require(radii[i] > radii[i - 1], "InvalidArgument", "radii must be strictly increasing");
}

} // namespace detail

inline DecayProfile profile(const WeightedSequence& seq, double weight_exponent,
                            const std::vector<double>& radii) {
    require(weight_exponent > 0.0, "BadExponents", "weight exponent must be positive");
    detail::check_radii_increasing(radii);

    const std::size_t n = seq.support.size();
    // Ascending prefix of index^b·c and descending suffix of c; suffix sums of
    // non-negative terms keep the tails exactly non-increasing.
    std::vector<double> prefix(n + 1, 0.0), suffix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + std::pow(seq.support[i].index, weight_exponent) *
                                        seq.support[i].weight;
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + seq.support[i].weight;

    DecayProfile p;
    p.radii = radii;
    p.weight_exponent = weight_exponent;
    for (double r : radii) {
        // First support position with index > r.
        std::size_t pos = static_cast<std::size_t>(
            std::upper_bound(seq.support.begin(), seq.support.end(), r,
                             [](double value, const WeightedEntry& e) { return value < e.index; }) -
            seq.support.begin());
        p.weighted_partials.push_back(prefix[pos]);
        p.tails.push_back(suffix[pos]);
    }
    detail::fit_profile_exponents(p);
    return p;
}

struct DurenCheck {
    DurenVerdict verdict = DurenVerdict::Consistent;
    DecayProfile profile;
};

namespace detail {

inline DurenVerdict classify_duren(const DecayProfile& p, double a, double b) {
    const bool partial_ok = p.fitted_partial_exponent <= a + 0.05;
    const bool tail_ok = p.fitted_tail_exponent <= (a - b) + 0.05;
    if (partial_ok && tail_ok) return DurenVerdict::Consistent;
    if (partial_ok) return DurenVerdict::PartialHolds_TailFails;
    if (tail_ok) return DurenVerdict::TailHolds_PartialFails;
    return DurenVerdict::Inconsistent;
}

} // namespace detail

// Checks both sides of the partial-sum/tail equivalence against the claimed
// exponent pair: S(N) = O(N^a) with weight b if and only if T(N) = O(N^{a-b}).
// A mixed verdict would contradict the equivalence and must never occur for
// genuine power-law inputs.
inline DurenCheck duren_equivalence_check(const WeightedSequence& seq, double a, double b,
                                          const std::vector<double>& radii) {
    require(0.0 < a && a < b, "BadExponents", "need 0 < a < b");
    DurenCheck out;
    out.profile = profile(seq, b, radii);
    out.verdict = detail::classify_duren(out.profile, a, b);
    return out;
}

// Multi-indexed non-negative weights, indexed by real coordinate vectors.
struct MultiWeight {
    std::vector<double> lambda;
    double weight = 0.0;
};

// Range-selected weighted sum: coordinate j contributes the factor |λ_j|^{b_j}
// over |λ_j| ≤ N_j when eps_j = 1, and the factor 1 over |λ_j| > N_j when
// eps_j = 0. Empty selections sum to zero.
inline double epsilon_partial_sum(const std::vector<MultiWeight>& weights,
                                  const std::vector<double>& bounds, const std::vector<int>& eps,
                                  const std::vector<double>& exponents) {
    const std::size_t d = bounds.size();
    require(eps.size() == d && exponents.size() == d, "InvalidArgument",
            "bounds/eps/exponents dimension mismatch");
    for (double n : bounds) require(n > 0.0, "InvalidArgument", "bounds must be positive");
    for (double b : exponents) require(b > 0.0, "BadExponents", "weight exponents must be positive");
    for (int e : eps) require(e == 0 || e == 1, "InvalidArgument", "eps entries must be 0 or 1");

    return parallel_sum(weights.size(), [&](std::size_t i) {
        const MultiWeight& w = weights[i];
        double term = w.weight;
        for (std::size_t j = 0; j < d; ++j) {
            const double abs_coord = std::abs(w.lambda[j]);
            if (eps[j] == 1) {
                if (abs_coord > bounds[j]) return 0.0;
                term *= std::pow(abs_coord, exponents[j]);
            } else {
                if (abs_coord <= bounds[j]) return 0.0;
            }
        }
        return term;
    });
}

// Explicit constants for the quantitative partial-sum/tail implications,
// 0 < a < b:
//   forward (integer index):  T(N) ≤ (b/(b-a))·C·N^{a-b}
//   forward (lattice radius): constant picks up the extra factor 2^a
//   converse:                 S(N) ≤ (‖c‖_1 + (b/a)·max{1,2^{b-1}}·C′)·N^a
struct RefinedConstants {
    double a = 0.0;
    double b = 0.0;
    double forward = 0.0;
    double forward_lattice = 0.0;
    double converse = 0.0;
};

inline RefinedConstants refined_constants(double a, double b) {
    require(0.0 < a && a < b, "BadExponents", "need 0 < a < b");
    RefinedConstants k;
    k.a = a;
    k.b = b;
    k.forward = b / (b - a);
    k.forward_lattice = std::pow(2.0, a) * k.forward;
    k.converse = (b / a) * std::max(1.0, std::pow(2.0, b - 1.0));
    return k;
}

struct RefinedBoundReport {
    bool holds = false;
    double worst_ratio = 0.0;  // max over radii of T(N) / (K·C·N^{a-b})
};

// Forward refined bound: given the premise S(N) ≤ C·N^a at every radius ≥ n0,
// check T(N) ≤ (b/(b-a))·C·N^{a-b} there. The premise is verified first.
inline RefinedBoundReport verify_refined_bound(const WeightedSequence& seq, double a, double b,
                                               double c_premise, double n0,
                                               const std::vector<double>& radii) {
    const RefinedConstants k = refined_constants(a, b);
    require(c_premise > 0.0, "InvalidArgument", "premise constant must be positive");
    detail::check_radii_increasing(radii);

    const std::size_t n = seq.support.size();
    std::vector<double> prefix(n + 1, 0.0), suffix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + std::pow(seq.support[i].index, b) * seq.support[i].weight;
    for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + seq.support[i].weight;

    RefinedBoundReport report;
    bool any = false;
    for (double r : radii) {
        if (r < n0) continue;
        any = true;
        std::size_t pos = static_cast<std::size_t>(
            std::upper_bound(seq.support.begin(), seq.support.end(), r,
                             [](double value, const WeightedEntry& e) { return value < e.index; }) -
            seq.support.begin());
        const double partial = prefix[pos];
        const double tail = suffix[pos];
        if (partial > c_premise * std::pow(r, a)) {
            std::ostringstream msg;
            msg << "partial-sum premise fails at N = " << r << ": S = " << partial << " > "
                << c_premise * std::pow(r, a);
            fail("HypothesisFails", msg.str());
        }
        const double bound = k.forward * c_premise * std::pow(r, a - b);
        report.worst_ratio = std::max(report.worst_ratio, bound > 0.0 ? tail / bound : 0.0);
    }
    require(any, "InvalidArgument", "no radii at or above the premise threshold");
    report.holds = report.worst_ratio <= 1.0;
    return report;
}

// Closed-form density f(x) = x^{-s} on [1, upper); upper = +inf for the full
// power law (then s > 1 is required for integrability).
struct ContinuousFamily {
    double s = 2.0;
    double upper = std::numeric_limits<double>::infinity();
};

inline DurenCheck continuous_duren_check(const ContinuousFamily& family, double a, double b,
                                         const std::vector<double>& x_grid) {
    require(0.0 < a && a < b, "BadExponents", "need 0 < a < b");
    if (std::isinf(family.upper))
        require(family.s > 1.0, "UnsupportedFamily", "x^{-s} on [1,inf) needs s > 1");
    else
        require(family.upper > 1.0 && family.s > 0.0, "UnsupportedFamily",
                "truncated density needs upper > 1 and s > 0");
    detail::check_radii_increasing(x_grid);

    auto partial_integral = [&](double x) {
        // ∫_1^min(x,upper) t^{b-s} dt
        const double hi = std::min(x, family.upper);
        if (hi <= 1.0) return 0.0;
        const double e = b - family.s + 1.0;
        return e != 0.0 ? (std::pow(hi, e) - 1.0) / e : std::log(hi);
    };
    auto tail_integral = [&](double x) {
        // ∫_max(x,1)^upper t^{-s} dt
        const double lo = std::max(x, 1.0);
        if (lo >= family.upper) return 0.0;
        const double e = 1.0 - family.s;
        if (std::isinf(family.upper)) return -std::pow(lo, e) / e;  // e < 0 here
        return e != 0.0 ? (std::pow(family.upper, e) - std::pow(lo, e)) / e
                        : std::log(family.upper / lo);
    };

    DurenCheck out;
    out.profile.radii = x_grid;
    out.profile.weight_exponent = b;
    for (double x : x_grid) {
        out.profile.weighted_partials.push_back(partial_integral(x));
        out.profile.tails.push_back(tail_integral(x));
    }
    detail::fit_profile_exponents(out.profile);
    out.verdict = detail::classify_duren(out.profile, a, b);
    return out;
}

// Abel summation identity: both sides of
//   Σ_{k=first}^{last} f(k)(g(k)-g(k-1))
//     = f(last)g(last) - f(first)g(first-1) - Σ_{k=first}^{last-1} (f(k+1)-f(k))g(k)
// evaluated independently, for identity testing.
template <class F, class G>
std::pair<double, double> summation_by_parts(F&& f, G&& g, int first, int last) {
    if (!(1 <= first && first < last))
        fail("IndexOutOfRange", "summation_by_parts needs 1 <= first < last");
    double lhs = 0.0;
    for (int k = first; k <= last; ++k) lhs += f(k) * (g(k) - g(k - 1));
    double correction = 0.0;
    for (int k = first; k < last; ++k) correction += (f(k + 1) - f(k)) * g(k);
    const double rhs = f(last) * g(last) - f(first) * g(first - 1) - correction;
    return {lhs, rhs};
}

} // namespace latreg
