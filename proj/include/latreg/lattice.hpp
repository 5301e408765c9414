#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace latreg {

// Lattice L = A·Z^d given by an invertible generator matrix A (columns span L).
// The dual lattice is (Aᵀ)⁻¹·Z^d; `volume` is |det A|, the measure of the
// fundamental parallelepiped A·[0,1)^d.
struct Lattice {
    int dim = 0;
    std::vector<double> generator;       // row-major d×d
    std::vector<double> dual_generator;  // (Aᵀ)⁻¹, row-major d×d
    double volume = 0.0;

    double gen(int r, int c) const { return generator[static_cast<std::size_t>(r) * dim + c]; }
    double dual(int r, int c) const { return dual_generator[static_cast<std::size_t>(r) * dim + c]; }

    // Euclidean length of the j-th generator column; bounds |m_j| ≤ |a_j|·|κ|.
    double column_norm(int j) const {
        double s = 0.0;
        for (int r = 0; r < dim; ++r) s += gen(r, j) * gen(r, j);
        return std::sqrt(s);
    }
};

// Dual-lattice point κ = (Aᵀ)⁻¹ m together with its integer index.
struct DualPoint {
    std::vector<int> m;
    std::vector<double> kappa;
    double norm = 0.0;
};

inline std::vector<double> dual_point_coords(const Lattice& lat, const std::vector<int>& m) {
    std::vector<double> kappa(lat.dim, 0.0);
    for (int r = 0; r < lat.dim; ++r) {
        double s = 0.0;
        for (int c = 0; c < lat.dim; ++c) s += lat.dual(r, c) * m[static_cast<std::size_t>(c)];
        kappa[static_cast<std::size_t>(r)] = s;
    }
    return kappa;
}

inline DualPoint make_dual_point(const Lattice& lat, std::vector<int> m) {
    DualPoint p;
    p.kappa = dual_point_coords(lat, m);
    p.m = std::move(m);
    double s = 0.0;
    for (double x : p.kappa) s += x * x;
    p.norm = std::sqrt(s);
    return p;
}

inline Lattice make_lattice(const std::vector<std::vector<double>>& generator_rows) {
    const std::size_t d = generator_rows.size();
    require(d >= 1, "InvalidArgument", "generator must be at least 1x1");
    for (const auto& row : generator_rows)
        require(row.size() == d, "InvalidArgument", "generator must be square");

    Eigen::MatrixXd a(d, d);
    double max_entry = 0.0;
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = generator_rows[r][c];
            max_entry = std::max(max_entry, std::abs(generator_rows[r][c]));
        }

    const double det = a.determinant();
    if (std::abs(det) < 1e-12 * std::pow(std::max(max_entry, 1e-30), static_cast<double>(d))) {
        std::ostringstream msg;
        msg << "generator is numerically singular (det = " << det << ")";
        fail("SingularGenerator", msg.str());
    }

    Eigen::MatrixXd dual = a.transpose().inverse();

    Lattice lat;
    lat.dim = static_cast<int>(d);
    lat.volume = std::abs(det);
    lat.generator.resize(d * d);
    lat.dual_generator.resize(d * d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            lat.generator[r * d + c] = generator_rows[r][c];
            lat.dual_generator[r * d + c] =
                dual(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    return lat;
}

inline double frobenius_norm(const Lattice& lat) {
    double s = 0.0;
    for (double x : lat.generator) s += x * x;
    return std::sqrt(s);
}

namespace detail {

// Lexicographic odometer over the integer box Π [-M_j, M_j].
inline bool advance_index(std::vector<int>& m, const std::vector<int>& box) {
    for (int j = static_cast<int>(m.size()) - 1; j >= 0; --j) {
        if (m[static_cast<std::size_t>(j)] < box[static_cast<std::size_t>(j)]) {
            ++m[static_cast<std::size_t>(j)];
            for (std::size_t k = static_cast<std::size_t>(j) + 1; k < m.size(); ++k)
                m[k] = -box[k];
            return true;
        }
    }
    return false;
}

inline void check_enumeration_cap(const std::vector<int>& box, std::uint64_t cap) {
    double predicted = 1.0;
    for (int M : box) predicted *= 2.0 * M + 1.0;
    if (predicted > static_cast<double>(cap)) {
        std::ostringstream msg;
        msg << "enumeration would visit ~" << predicted << " integer points (cap " << cap << ")";
        fail("BallTooLarge", msg.str());
    }
}

} // namespace detail

// All κ ∈ L* with |κ| ≤ N (inclusive), in lexicographic m order. The integer
// scan box uses |m| = |Aᵀκ| ≤ ‖Aᵀ‖_F·N.
inline std::vector<DualPoint> enumerate_ball(const Lattice& lat, double radius,
                                             std::uint64_t cap = 100000000ull) {
    require(radius > 0.0, "InvalidArgument", "ball radius must be positive");
    const int M = static_cast<int>(std::ceil(frobenius_norm(lat) * radius));
    std::vector<int> box(static_cast<std::size_t>(lat.dim), M);
    detail::check_enumeration_cap(box, cap);

    std::vector<DualPoint> out;
    std::vector<int> m(static_cast<std::size_t>(lat.dim), -M);
    while (true) {
        DualPoint p = make_dual_point(lat, m);
        if (p.norm <= radius) out.push_back(std::move(p));
        if (!detail::advance_index(m, box)) break;
    }
    return out;
}

// All κ with |κ_j| ≤ bounds[j] for every coordinate, in lexicographic m order.
inline std::vector<DualPoint> enumerate_box(const Lattice& lat, const std::vector<double>& bounds,
                                            std::uint64_t cap = 100000000ull) {
    require(static_cast<int>(bounds.size()) == lat.dim, "InvalidArgument",
            "bounds dimension mismatch");
    for (double b : bounds) require(b > 0.0, "InvalidArgument", "box bounds must be positive");

    // m_j = Σ_i A_{ij} κ_i, so |m_j| ≤ Σ_i |A_{ij}|·bounds[i].
    std::vector<int> box(static_cast<std::size_t>(lat.dim), 0);
    for (int j = 0; j < lat.dim; ++j) {
        double bound = 0.0;
        for (int i = 0; i < lat.dim; ++i)
            bound += std::abs(lat.gen(i, j)) * bounds[static_cast<std::size_t>(i)];
        box[static_cast<std::size_t>(j)] = static_cast<int>(std::floor(bound + 1e-9));
    }
    detail::check_enumeration_cap(box, cap);

    std::vector<DualPoint> out;
    std::vector<int> m(static_cast<std::size_t>(lat.dim));
    for (std::size_t j = 0; j < m.size(); ++j) m[j] = -box[j];
    while (true) {
        DualPoint p = make_dual_point(lat, m);
        bool inside = true;
        for (int j = 0; j < lat.dim; ++j)
            if (std::abs(p.kappa[static_cast<std::size_t>(j)]) > bounds[static_cast<std::size_t>(j)]) {
                inside = false;
                break;
            }
        if (inside) out.push_back(std::move(p));
        if (!detail::advance_index(m, box)) break;
    }
    return out;
}

} // namespace latreg
