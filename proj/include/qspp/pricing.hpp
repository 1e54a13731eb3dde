#pragma once

/**
 * @file
 * Contracts, exact classical prices and the circuit pipelines that encode
 * the normalised expected payoff as a success probability.
 *
 * Log-returns live on a fixed-point grid. Signed grids cover
 * [-2^{p-1}, 2^{p-1}) and are shifted by 2^{p-1} into an unsigned register
 * of the same width before the U_sqrt encoder, so that the encoded value is
 * x^2 = (r + 2^{p-1}) / 2^p.
 */

#include "qspp/builders.hpp"
#include "qspp/circuit.hpp"
#include "qspp/polyapprox.hpp"
#include "qspp/qspphase.hpp"
#include "qspp/simulator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qspp::pricing {

using circ::FixedPointFormat;
using circ::ProjectorSpec;

/// Grid values of a format, indexed by bit pattern.
[[nodiscard]] std::vector<double> grid_values(const FixedPointFormat &format);

/**
 * @brief Normal law N(mu, sigma^2) discretised onto the grid.
 *
 * Each grid point receives the mass of the cell of one resolution centred
 * on it; the result is renormalised to sum to one.
 */
[[nodiscard]] std::vector<double> discretize_normal(const FixedPointFormat &format, double mu,
                                                    double sigma);

/// Joint table of independent timesteps; timestep t occupies bits [t n, (t+1) n).
[[nodiscard]] std::vector<double> product_distribution(const std::vector<std::vector<double>> &marginals);

/// Shift that maps the grid into [0, 2^p): 2^{p-1} for signed grids, 0 otherwise.
[[nodiscard]] double grid_shift(const FixedPointFormat &format);

/// Unsigned layout of the shifted register.
[[nodiscard]] FixedPointFormat shifted_format(const FixedPointFormat &format);

struct EuropeanCall {
    double spot = 100.0;
    double strike = 100.0;
    FixedPointFormat format{6, 3, true, 0.0};
    std::vector<double> probs;
    /// Payoff normalisation; defaults to S0 e^{max r_i} - K.
    std::optional<double> f_max;

    /// @throws InvalidArgument for inconsistent fields.
    void validate() const;
    [[nodiscard]] double payoff_max() const;
};

/// Exact sum_i p_i max(0, S0 e^{r_i} - K) / f_max.
[[nodiscard]] double classical_price_call(const EuropeanCall &c);

/// Target whose polynomial approximation the call pipeline needs.
[[nodiscard]] poly::CallClause call_clause(const EuropeanCall &c);

struct Pipeline {
    circ::Circuit circuit;
    ProjectorSpec success;
    std::vector<int> return_qubits; ///< where the path distribution is injected
    std::vector<int> ancillas;      ///< qubits that start in |0> and must be |0> on success
};

/**
 * @brief Comparator flag, shift adder, U_sqrt and QSP for a European call.
 *
 * flag = [r <= ln(K/S0)] marks out-of-the-money paths; the success
 * projector requires flag = 0 together with the QSP success pattern, so the
 * success probability is sum over in-the-money i of p_i P(x_i)^2.
 */
[[nodiscard]] Pipeline build_call_pipeline(const EuropeanCall &c, const qsp::PhaseFactors &phases,
                                           double precision = 0.0);

struct BinaryPayoff {
    double threshold = 1.0; ///< return level K_i; fires when r_{t_i} > ln K_i
    int timestep = 1;       ///< 1-based
    double payoff = 1.0;    ///< f_i before normalisation
};

struct Autocallable {
    FixedPointFormat format{3, 2, true, 0.0};
    int timesteps = 2;
    std::vector<BinaryPayoff> schedule;
    double barrier = 1.0;       ///< return level B; crossed when r_t > ln B
    double strike_return = 1.0; ///< K_T in (0, 1]
    double notional = 1.0;
    std::vector<double> joint_probs; ///< (2^n)^T entries

    void validate() const;
    /// max(1, max f_i): every payoff is divided by this before encoding.
    [[nodiscard]] double normalization() const;
};

/// Classical indicators of one path: s_1..s_k and the barrier bit b_{T+1}.
struct Indicators {
    std::vector<bool> binary;
    bool barrier = false;
};

/**
 * @brief s_i = [r_{t_i} > ln K_i] and no earlier s_j fired;
 *        b = (some r_t > ln B) and no s_i fired.
 */
[[nodiscard]] Indicators evaluate_indicators(const Autocallable &c,
                                             const std::vector<std::uint64_t> &path);

/// Normalised payoff of one path.
[[nodiscard]] double autocall_payoff(const Autocallable &c, const std::vector<std::uint64_t> &path);

/// Exhaustive path enumeration. @throws CapacityError above 2^20 paths.
[[nodiscard]] double classical_price_autocallable(const Autocallable &c);

[[nodiscard]] poly::AutocallClause autocall_clause(const Autocallable &c);

/**
 * @brief Indicator network on registers r1..rT.
 *
 * Output registers s1..sk and b; every other qubit ("work") is returned to
 * |0>. Built from comparisons, X, CNOT and Toffoli gates only.
 */
[[nodiscard]] circ::Circuit build_autocallable_indicators(const Autocallable &c);

/**
 * @brief Indicators, binary payoff rotations and the controlled QSP clause.
 *
 * A pay qubit is rotated to sqrt(f_i / norm)|0> + ... on s_i, set to |1>
 * when neither a binary payoff nor the barrier clause applies, and left at
 * |0> when the barrier clause applies with r_T >= ln K_T. For r_T < ln K_T
 * the QSP sequence runs controlled on (b and [r_T < ln K_T]).
 */
[[nodiscard]] Pipeline build_autocallable_pipeline(const Autocallable &c,
                                                   const qsp::PhaseFactors &phases,
                                                   double precision = 0.0);

/// Success probability after injecting `probs` onto the return qubits.
[[nodiscard]] double quantum_price(const Pipeline &p, const std::vector<double> &probs,
                                   const sim::RunOptions &options = {});

struct PricePair {
    double classical = 0.0;
    double quantum = 0.0;
    double abs_err = 0.0;
    double budget = 0.0;     ///< 2 max_err + 1e-8
    double normalization = 1.0;
    [[nodiscard]] bool within_budget() const { return abs_err <= budget; }
};

[[nodiscard]] PricePair make_price_pair(double classical, double quantum, double max_err,
                                        double normalization = 1.0);

} // namespace qspp::pricing
