#pragma once

/**
 * @file
 * Gate-level circuit representation shared by the simulator and the
 * resource accountant.
 *
 * Qubits are numbered globally; registers name contiguous little-endian
 * ranges. Every gate has one target and any number of controls, each with
 * a polarity (a zero-control fires on |0>). The comparison gate is a
 * composite: it is simulated directly and expanded into X/CNOT/Toffoli
 * networks for accounting and gate-level verification.
 */

#include "qspp/fixed_point.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qspp::circ {

struct Control {
    int qubit = 0;
    bool on_one = true;

    friend bool operator==(const Control &, const Control &) = default;
};

enum class GateKind {
    H,      ///< Hadamard
    X,      ///< Pauli X; with controls CNOT, Toffoli, multi-controlled X
    Ry,     ///< exp(-i angle Y / 2)
    ZPhase, ///< exp(-i angle Z)
    Phase,  ///< diag(1, e^{i angle}); angle = pi gives a controlled Z
    Compare ///< target ^= (lhs < rhs), unsigned
};

[[nodiscard]] std::string to_string(GateKind kind);
[[nodiscard]] GateKind gate_kind_from_string(const std::string &s);

/// Operand of a comparison: little-endian qubits, or a classical constant.
struct CompareOperand {
    std::vector<int> qubits;
    std::optional<std::uint64_t> constant;

    [[nodiscard]] bool is_constant() const noexcept { return constant.has_value(); }
};

struct CompareSpec {
    CompareOperand lhs; ///< always a register
    CompareOperand rhs; ///< register of the same width, or a constant
};

struct Gate {
    GateKind kind = GateKind::X;
    int target = 0;
    std::vector<Control> controls;
    double angle = 0.0;
    double precision = 0.0; ///< synthesis budget; 0 uses the accounting default
    std::shared_ptr<const CompareSpec> compare;

    /// Target, controls and comparison operands.
    [[nodiscard]] std::vector<int> qubits() const;
    /// Conventional name: x/cnot/toffoli/mcx, ry/cry/mcry, ...
    [[nodiscard]] std::string name() const;
};

/// Basis-state pattern: qubits[i] must read values[i].
struct ProjectorSpec {
    std::vector<int> qubits;
    std::vector<int> values;

    static ProjectorSpec zeros(const std::vector<int> &qubits);
    /// Concatenation; a qubit may appear in both only with equal values.
    [[nodiscard]] ProjectorSpec and_also(const ProjectorSpec &other) const;
    void validate(int width) const;
    [[nodiscard]] bool matches(std::uint64_t index) const;
};

struct Register {
    std::string name;
    int offset = 0;
    int width = 0;
    std::optional<FixedPointFormat> format;
    bool ancilla = false; ///< must start and end in |0...0>

    [[nodiscard]] int qubit(int i) const;
    [[nodiscard]] std::vector<int> qubits() const;
};

class Circuit {
  public:
    Circuit() = default;

    /// Appends a register after the existing ones.
    const Register &add_register(const std::string &name, int width,
                                 std::optional<FixedPointFormat> format = {},
                                 bool ancilla = false);

    [[nodiscard]] const Register &reg(const std::string &name) const;
    [[nodiscard]] bool has_register(const std::string &name) const;
    [[nodiscard]] const std::vector<Register> &registers() const noexcept { return registers_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] int width() const noexcept { return width_; }
    /// Qubits of all ancilla registers.
    [[nodiscard]] std::vector<int> ancillas() const;

    /// Validates operands and appends.
    void add(Gate gate);

    void h(int q, std::vector<Control> ctrls = {});
    void x(int q, std::vector<Control> ctrls = {});
    void ry(int q, double angle, std::vector<Control> ctrls = {}, double precision = 0.0);
    void zphase(int q, double angle, std::vector<Control> ctrls = {}, double precision = 0.0);
    void phase(int q, double angle, std::vector<Control> ctrls = {}, double precision = 0.0);
    void compare(const std::vector<int> &lhs, const std::vector<int> &rhs, int result,
                 std::vector<Control> ctrls = {});
    void compare_const(const std::vector<int> &lhs, std::uint64_t rhs, int result,
                       std::vector<Control> ctrls = {});

    /**
     * @brief Appends another circuit's gates.
     *
     * @param qubit_map qubit_map[i] is the qubit of this circuit that plays
     *        the role of the other circuit's qubit i.
     */
    void append(const Circuit &other, const std::vector<int> &qubit_map);
    /// Same-layout append.
    void append(const Circuit &other);

    /// Gate list reversed with every gate inverted.
    [[nodiscard]] Circuit inverse() const;
    /// Every gate gains the given extra control.
    [[nodiscard]] Circuit controlled(Control c) const;

    /// Same registers, no gates.
    [[nodiscard]] Circuit empty_copy() const;

  private:
    std::vector<Register> registers_;
    std::vector<Gate> gates_;
    int width_ = 0;
};

/// Inverse of a single gate.
[[nodiscard]] Gate inverse(const Gate &g);

/**
 * @brief Rewrites comparison gates into X/CNOT/Toffoli networks.
 *
 * The result carries an extra ancilla register "scratch" holding the
 * comparator workspace; every scratch qubit is returned to |0>.
 */
[[nodiscard]] Circuit expand_composites(const Circuit &c);

/// Scratch qubits needed to expand one comparison.
[[nodiscard]] int comparator_scratch_size(const CompareSpec &spec);
/// Appends the X/CNOT/Toffoli network of one comparison to `out`.
void expand_compare(const Gate &g, const std::vector<int> &scratch,
                    std::vector<Gate> &out);

} // namespace qspp::circ
