#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace latreg {

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double max_residual = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), "InvalidArgument", "fit_line: size mismatch");
    require(x.size() >= 2, "InvalidArgument", "fit_line: need at least two points");

    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = x[static_cast<std::size_t>(i)];
        rhs(i) = y[static_cast<std::size_t>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 2) fail("RankDeficientFit", "fit_line: abscissae are degenerate");
    Eigen::Vector2d coef = qr.solve(rhs);

    LineFit fit;
    fit.intercept = coef(0);
    fit.slope = coef(1);
    for (Eigen::Index i = 0; i < n; ++i)
        fit.max_residual = std::max(fit.max_residual,
                                    std::abs(rhs(i) - coef(0) - coef(1) * design(i, 1)));
    return fit;
}

struct AffineFit {
    std::vector<double> coef;  // coef[0] = intercept, coef[1..] = slopes
    double max_residual = 0.0;
};

// Least squares for y ≈ c0 + Σ_j c_j x_j; rows of `x` are observations.
inline AffineFit fit_affine(const std::vector<std::vector<double>>& x,
                            const std::vector<double>& y) {
    require(x.size() == y.size(), "InvalidArgument", "fit_affine: size mismatch");
    require(!x.empty(), "InvalidArgument", "fit_affine: no observations");
    const std::size_t vars = x.front().size();
    const auto rows = static_cast<Eigen::Index>(x.size());
    const auto cols = static_cast<Eigen::Index>(vars + 1);
    require(rows >= cols, "InvalidArgument", "fit_affine: underdetermined system");

    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = x[static_cast<std::size_t>(i)];
        require(row.size() == vars, "InvalidArgument", "fit_affine: ragged rows");
        design(i, 0) = 1.0;
        for (std::size_t j = 0; j < vars; ++j) design(i, static_cast<Eigen::Index>(j + 1)) = row[j];
        rhs(i) = y[static_cast<std::size_t>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) fail("RankDeficientFit", "fit_affine: design matrix is rank deficient");
    Eigen::VectorXd coef = qr.solve(rhs);

    AffineFit fit;
    fit.coef.assign(coef.data(), coef.data() + coef.size());
    Eigen::VectorXd resid = rhs - design * coef;
    for (Eigen::Index i = 0; i < rows; ++i)
        fit.max_residual = std::max(fit.max_residual, std::abs(resid(i)));
    return fit;
}

} // namespace latreg
