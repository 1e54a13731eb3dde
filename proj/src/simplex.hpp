#pragma once

#include <Eigen/Dense>

namespace qspp::detail {

struct LpSolution {
    Eigen::VectorXd z;
    double objective = 0.0;
    int iterations = 0;
};

/**
 * @brief min c^T z subject to G z <= h, z free.
 *
 * Solved as the standard-form dual min h^T y, G^T y = -c, y >= 0 with a
 * two-phase revised simplex (Dantzig pricing, Bland fallback on stalls).
 * The primal point is read off the optimal basis multipliers.
 *
 * @throws FitInfeasible when the primal is infeasible (dual unbounded).
 * @throws std::runtime_error when the primal is unbounded or the iteration
 *         budget is exhausted.
 */
LpSolution solve_inequality_lp(const Eigen::VectorXd &c,
                               const Eigen::MatrixXd &G,
                               const Eigen::VectorXd &h);

} // namespace qspp::detail
