#pragma once

/**
 * @file
 * Clifford+T accounting over the gate IR.
 *
 * Cost rules (per gate, k = number of controls):
 *  - X: k <= 1 Clifford; k = 2 Toffoli; k >= 3 a log-depth tree of 2k-3
 *    Toffolis with k-2 ancillas.
 *  - Phase(pi): k <= 1 Clifford; otherwise as X with k controls.
 *  - Uncontrolled Ry(angle), Phase(angle), ZPhase(angle/2): rotations by a
 *    multiple of pi/2 are Clifford, odd multiples of pi/4 cost one T gate,
 *    anything else one synthesised rotation.
 *  - Singly controlled rotations cost one synthesised rotation.
 *  - Controlled H costs controlled_h_t_count T gates in one layer.
 *  - Two or more controls on anything but X: the controls are first ANDed
 *    into an ancilla (multi-controlled X, computed and uncomputed), then
 *    the singly controlled gate is applied.
 *  - Comparisons are expanded into their X/CNOT/Toffoli networks.
 * T-depth is the critical path of the T layers under as-soon-as-possible
 * scheduling, which equals the as-late-as-possible layering length.
 */

#include "qspp/circuit.hpp"

#include <cstdint>
#include <string>

namespace qspp::circ {

struct ResourceRules {
    int toffoli_t_count = 7;
    int toffoli_t_depth = 1;
    int toffoli_ancillas = 1;
    int controlled_h_t_count = 2;
    int controlled_h_t_depth = 1;
    double rotation_coefficient = 3.0; ///< cost = ceil(coef * log2(1/eps))
    /// Synthesis budget for gates that carry no precision of their own.
    double default_precision = 0.0;

    /// T-count (= T-depth) of one synthesised rotation at precision eps.
    [[nodiscard]] std::int64_t rotation_cost(double eps) const;
};

struct ResourceCount {
    std::int64_t t_count = 0;
    std::int64_t t_depth = 0;
    int logical_qubits = 0;
};

/// Cost of one gate that is not a composite.
struct GateCost {
    std::int64_t t_count = 0;
    std::int64_t t_depth = 0;
    int ancillas = 0;
};

/// @throws AccountingError for composites or missing synthesis precision.
[[nodiscard]] GateCost gate_cost(const Gate &g, const ResourceRules &rules);

/**
 * @brief Totals for a circuit.
 *
 * logical_qubits counts the expanded circuit width (including comparator
 * workspace) plus the peak number of decomposition ancillas in use at once.
 */
[[nodiscard]] ResourceCount count_resources(const Circuit &circuit,
                                            const ResourceRules &rules = {});

} // namespace qspp::circ
