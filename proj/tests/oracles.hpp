#pragma once

// Independent reference computations used by the test suites.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// T_n(x) via the trigonometric definition, valid on [-1, 1].
inline double chebyshev_t(int n, double x) {
    return std::cos(n * std::acos(std::clamp(x, -1.0, 1.0)));
}

struct LawsonFit {
    std::vector<double> coeffs;
    double max_err = 0.0;
};

/// Unconstrained discrete minimax by Lawson's iteratively reweighted least
/// squares over the basis T_{2k + offset}.
inline LawsonFit lawson_minimax(const std::function<double(double)> &f,
                                const std::vector<double> &xs, int K,
                                int offset, int iterations = 4000) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd A(n, K);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (int k = 0; k < K; ++k) A(i, k) = chebyshev_t(2 * k + offset, xs[static_cast<std::size_t>(i)]);
        y(i) = f(xs[static_cast<std::size_t>(i)]);
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::VectorXd best_c;
    double best = INFINITY;
    for (int it = 0; it < iterations; ++it) {
        const Eigen::VectorXd s = w.cwiseSqrt();
        const Eigen::MatrixXd As = s.asDiagonal() * A;
        const Eigen::VectorXd ys = s.cwiseProduct(y);
        const Eigen::VectorXd c = As.colPivHouseholderQr().solve(ys);
        const Eigen::VectorXd r = (y - A * c).cwiseAbs();
        if (r.maxCoeff() < best) {
            best = r.maxCoeff();
            best_c = c;
        }
        w = w.cwiseProduct(r);
        const double total = w.sum();
        if (!(total > 0.0)) break;
        w /= total;
    }
    return {std::vector<double>(best_c.data(), best_c.data() + best_c.size()), best};
}

} // namespace oracle
