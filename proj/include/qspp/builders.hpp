#pragma once

/**
 * @file
 * Circuit builders: comparator, constant adder, the U_sqrt and U_sin
 * amplitude encoders, projector-controlled rotations, the QSP sequence and
 * the amplitude-amplification iterate.
 */

#include "qspp/circuit.hpp"
#include "qspp/qspphase.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qspp::circ {

/**
 * @brief Unitary U with zero-pattern projectors such that
 *        <0|_out U |0>_in carries the encoded amplitude.
 *
 * `in_zeros` spans Pi (input projector), `out_zeros` spans the output
 * projector. `data` names the register holding the encoded value.
 */
struct BlockEncoding {
    Circuit circuit;
    std::vector<int> in_zeros;
    std::vector<int> out_zeros;
    std::string data;
};

/// Registers a (n), b (n), result (1): result ^= (a < b).
[[nodiscard]] Circuit build_comparator(int n);

/**
 * @brief Out-of-place constant addition y = x + s.
 *
 * Registers x (format_in) and y (format_out, must start at zero). The input
 * is copied with binary-point alignment and sign extension, then the
 * constant is added with multi-controlled increments.
 *
 * @throws RangeError when s is not on the output grid or some x + s falls
 *         outside the output range.
 */
[[nodiscard]] Circuit build_const_adder(const FixedPointFormat &format_in, double s,
                                        const FixedPointFormat &format_out);

/// In-circuit form of build_const_adder on existing qubits.
void append_const_adder(Circuit &c, const std::vector<int> &in, const FixedPointFormat &format_in,
                        const std::vector<int> &out, const FixedPointFormat &format_out,
                        double s);

/**
 * @brief Comparator-based encoder of sqrt(x / 2^p).
 *
 * Registers x (format, unsigned), j (n, ancilla), res (1, ancilla). The j
 * register is put in uniform superposition, res ^= (j < x) and res is
 * flipped, so P(res = 0) = x / 2^p exactly.
 */
[[nodiscard]] BlockEncoding build_u_sqrt(const FixedPointFormat &format);

/**
 * @brief Rotation-based encoder of sin(x).
 *
 * Registers x (format) and anc (1, ancilla): Ry(pi) on anc followed by one
 * controlled Ry(-2 w_i) per bit of weight w_i, so the |0> amplitude of anc
 * is sin(x).
 */
[[nodiscard]] BlockEncoding build_u_sin(const FixedPointFormat &format, double eps_r);

/**
 * @brief e^{i phi (2 Pi - I)} for Pi = |0...0><0...0| on `k` qubits.
 *
 * Register q (k) and, for k > 1, a flag ancilla: the zero pattern is
 * marked on the flag with a zero-controlled X, phased, and unmarked.
 */
[[nodiscard]] Circuit build_projector_rotation(int k, double phi, double precision = 0.0);

/**
 * @brief Appends e^{i phi (2 Pi - I)} (Pi = zeros on `zeros`).
 *
 * With `sign`, the rotation angle is +phi when that qubit is |0> and -phi
 * when it is |1>. `flag` is required when zeros.size() > 1.
 */
void append_projector_rotation(Circuit &c, const std::vector<int> &zeros, double phi,
                               std::optional<int> flag, std::optional<int> sign,
                               double precision = 0.0);

struct QspCircuit {
    Circuit circuit;
    ProjectorSpec success; ///< control qubit and the final projector at zero
    int control = -1;
};

/**
 * @brief Full QSP sequence with the Hadamard-conjugated sign control.
 *
 * Applies U and U^dagger alternately, each followed by a projector rotation
 * on the output (after U) or input (after U^dagger) projector, using the
 * angles of qsp::circuit_angles. The realised amplitude on the success
 * projector is su2_eval(phases, a) for singular value a.
 *
 * @throws InvalidArgument for empty phases or an unknown convention.
 */
[[nodiscard]] QspCircuit build_qsp(const BlockEncoding &u, const qsp::PhaseFactors &phases,
                                   double precision = 0.0);

/// Phase -1 on basis states matching the pattern.
void append_phase_flip(Circuit &c, const ProjectorSpec &pattern);

/**
 * @brief Amplitude-amplification iterate Q = A S_0 A^dagger S_good.
 *
 * S_good flips the sign of the good states, S_0 that of |0...0>.
 */
[[nodiscard]] Circuit build_grover_q(const Circuit &a, const ProjectorSpec &good);

} // namespace qspp::circ
