#include "simplex.hpp"

#include "qspp/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace qspp::detail {
namespace {

constexpr double kCostTol = 1e-10;
constexpr double kPivotTol = 1e-9;
constexpr int kStallLimit = 50;

struct Tableau {
    const Eigen::MatrixXd &G; // row j of G is column j of the standard form
    Eigen::VectorXd b;        // right-hand side, -c
    int m;                    // constraint rows (primal dimension)
    int n;                    // real columns (primal inequalities)
    std::vector<int> basis;   // column ids; >= n denotes artificial (id-n)
    std::vector<int> sign;    // artificial column i is sign[i] * e_i
    Eigen::MatrixXd Binv;
    Eigen::VectorXd xB;

    [[nodiscard]] bool artificial(int col) const { return col >= n; }

    [[nodiscard]] Eigen::VectorXd column(int col) const {
        if (artificial(col)) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
            e(col - n) = sign[static_cast<std::size_t>(col - n)];
            return e;
        }
        return G.row(col).transpose();
    }

    void refactor() {
        Eigen::MatrixXd B(m, m);
        for (int i = 0; i < m; ++i)
            B.col(i) = column(basis[static_cast<std::size_t>(i)]);
        Binv = B.partialPivLu().inverse();
        xB = Binv * b;
    }
};

enum class Outcome { Optimal, Unbounded };

/// Runs simplex iterations with the given per-column cost. Artificial
/// columns carry cost `art_cost` and never re-enter once they leave.
Outcome iterate(Tableau &tab, const Eigen::VectorXd &cost_real,
                double art_cost, int &iterations, int max_iterations) {
    const auto m = tab.m;
    std::vector<char> in_basis(static_cast<std::size_t>(tab.n), 0);
    for (int col : tab.basis)
        if (!tab.artificial(col)) in_basis[static_cast<std::size_t>(col)] = 1;

    int stall = 0;
    bool bland = false;
    while (true) {
        if (iterations++ > max_iterations)
            throw std::runtime_error("simplex: iteration budget exhausted");
        tab.refactor();

        Eigen::VectorXd cB(m);
        for (int i = 0; i < m; ++i) {
            const int col = tab.basis[static_cast<std::size_t>(i)];
            cB(i) = tab.artificial(col) ? art_cost : cost_real(col);
        }
        const Eigen::VectorXd pi = tab.Binv.transpose() * cB;
        const Eigen::VectorXd reduced = cost_real - tab.G * pi;

        int enter = -1;
        double best = -kCostTol;
        for (int j = 0; j < tab.n; ++j) {
            if (in_basis[static_cast<std::size_t>(j)]) continue;
            if (reduced(j) < best) {
                enter = j;
                if (bland) break;
                best = reduced(j);
            }
        }
        if (enter < 0) return Outcome::Optimal;

        const Eigen::VectorXd u = tab.Binv * tab.column(enter);
        int leave = -1;
        double ratio = std::numeric_limits<double>::infinity();
        double pivot = 0.0;
        for (int i = 0; i < m; ++i) {
            const int col = tab.basis[static_cast<std::size_t>(i)];
            const double ui = u(i);
            double r;
            if (tab.artificial(col) && art_cost == 0.0 &&
                std::abs(ui) > kPivotTol) {
                r = 0.0; // zero-level artificial must leave before it moves
            } else if (ui > kPivotTol) {
                r = std::max(tab.xB(i), 0.0) / ui;
            } else {
                continue;
            }
            const bool better =
                leave < 0 || r < ratio - 1e-14 ||
                (r <= ratio + 1e-14 &&
                 (bland ? col < tab.basis[static_cast<std::size_t>(leave)]
                        : std::abs(ui) > pivot));
            if (better) {
                leave = i;
                ratio = r;
                pivot = std::abs(ui);
            }
        }
        if (leave < 0) return Outcome::Unbounded;

        if (ratio <= 1e-14) {
            if (++stall > kStallLimit) bland = true;
        } else {
            stall = 0;
            bland = false;
        }
        const int out = tab.basis[static_cast<std::size_t>(leave)];
        if (!tab.artificial(out)) in_basis[static_cast<std::size_t>(out)] = 0;
        tab.basis[static_cast<std::size_t>(leave)] = enter;
        in_basis[static_cast<std::size_t>(enter)] = 1;
    }
}

} // namespace

LpSolution solve_inequality_lp(const Eigen::VectorXd &c,
                               const Eigen::MatrixXd &G,
                               const Eigen::VectorXd &h) {
    const auto m = static_cast<int>(c.size());
    const auto n = static_cast<int>(G.rows());
    if (G.cols() != m || h.size() != n)
        throw InvalidArgument("simplex: dimension mismatch");
    if (m == 0 || n == 0) throw InvalidArgument("simplex: empty problem");

    Tableau tab{G, -c, m, n, {}, {}, {}, {}};
    tab.basis.resize(static_cast<std::size_t>(m));
    tab.sign.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        tab.basis[static_cast<std::size_t>(i)] = n + i;
        tab.sign[static_cast<std::size_t>(i)] = tab.b(i) >= 0.0 ? 1 : -1;
    }

    const int max_iterations = 20000 + 50 * (n + m);
    int iterations = 0;

    // Phase 1: drive artificials to zero.
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    if (iterate(tab, zero, 1.0, iterations, max_iterations) !=
        Outcome::Optimal)
        throw std::runtime_error("simplex: phase 1 did not terminate");
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i)
        if (tab.artificial(tab.basis[static_cast<std::size_t>(i)]))
            infeasibility += std::abs(tab.xB(i));
    if (infeasibility > 1e-9 * (1.0 + tab.b.lpNorm<1>()))
        throw std::runtime_error("simplex: primal problem is unbounded");

    // Phase 2: original costs, zero-level artificials kept out of the way.
    if (iterate(tab, h, 0.0, iterations, max_iterations) != Outcome::Optimal)
        throw FitInfeasible("linear program has no feasible point");

    Eigen::VectorXd cB(m);
    for (int i = 0; i < m; ++i) {
        const int col = tab.basis[static_cast<std::size_t>(i)];
        cB(i) = tab.artificial(col) ? 0.0 : h(col);
    }
    LpSolution out;
    out.z = tab.Binv.transpose() * cB;
    out.objective = c.dot(out.z);
    out.iterations = iterations;
    return out;
}

} // namespace qspp::detail
