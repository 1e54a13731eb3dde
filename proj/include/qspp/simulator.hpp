#pragma once

/**
 * @file
 * Dense statevector execution of circuits, plus two exact modes: a
 * basis-state mode for permutation circuits and a dyadic mode for circuits
 * built from Hadamards and permutations, whose probabilities are exact
 * rationals with power-of-two denominators.
 */

#include "qspp/circuit.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qspp::sim {

using amp_t = std::complex<double>;

inline constexpr int kDefaultWidthCap = 26;

using circ::ProjectorSpec;

class StateVector {
  public:
    /// |0...0> on `width` qubits.
    explicit StateVector(int width, int width_cap = kDefaultWidthCap);
    static StateVector basis(int width, std::uint64_t index,
                             int width_cap = kDefaultWidthCap);

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }
    [[nodiscard]] const std::vector<amp_t> &amplitudes() const noexcept { return amps_; }
    [[nodiscard]] std::vector<amp_t> &amplitudes() noexcept { return amps_; }
    [[nodiscard]] amp_t operator[](std::uint64_t i) const { return amps_[i]; }
    [[nodiscard]] double norm() const;

  private:
    int width_;
    std::vector<amp_t> amps_;
};

struct RunOptions {
    int width_cap = kDefaultWidthCap;
    /// Rotation-angle perturbation: each Ry/ZPhase/Phase angle is shifted by
    /// a uniform draw from [-eps, eps], eps being the gate's precision when
    /// set and this value otherwise. Zero disables the mode.
    double rotation_noise = 0.0;
    std::uint64_t seed = 0;
    /// Worker threads; 0 reads QSPP_THREADS (default 1).
    int threads = 0;
};

/// Applies one gate in place.
void apply(StateVector &state, const circ::Gate &gate, int threads = 1);

/// @throws CapacityError when the circuit is wider than options.width_cap.
[[nodiscard]] StateVector run(const circ::Circuit &circuit, StateVector initial,
                              const RunOptions &options = {});

[[nodiscard]] double probability(const StateVector &state,
                                 const ProjectorSpec &projector);

/**
 * @brief Amplitudes sqrt(p_i) on the given qubits, all other qubits |0>.
 *
 * Bit k of index i is placed on qubits[k].
 *
 * @throws InvalidArgument negative entries, wrong length, or a sum that
 *         differs from one by more than 1e-12.
 */
[[nodiscard]] StateVector inject_distribution(int width,
                                              const std::vector<double> &probs,
                                              const std::vector<int> &qubits,
                                              int width_cap = kDefaultWidthCap);

/// Probability that every listed qubit reads zero.
[[nodiscard]] double zero_probability(const StateVector &state,
                                      const std::vector<int> &qubits);

/// Columns of the circuit's unitary; entry [c][r] = <r|U|c>. Width <= 12.
[[nodiscard]] std::vector<std::vector<amp_t>> unitary(const circ::Circuit &circuit);

/// Permutation-circuit execution on a single basis state. Diagonal gates
/// leave the index unchanged; H and Ry are rejected.
[[nodiscard]] std::uint64_t run_basis(const circ::Circuit &circuit,
                                      std::uint64_t input);

/// Probability num / 2^log2_den.
struct Dyadic {
    std::uint64_t num = 0;
    int log2_den = 0;

    [[nodiscard]] double value() const;
    /// num * 2^{other.log2_den} == other.num * 2^{log2_den}
    [[nodiscard]] bool equals(std::uint64_t n, int log2_d) const;
};

/**
 * @brief Exact projector probability for circuits of uncontrolled
 *        Hadamards, X gates, comparisons and pi phases.
 *
 * Amplitudes are kept as integers over a common 2^{h/2} scale.
 */
[[nodiscard]] Dyadic exact_probability(const circ::Circuit &circuit,
                                       std::uint64_t input,
                                       const ProjectorSpec &projector,
                                       int width_cap = 24);

/// CSV dump `index,bits,re,im,prob` of entries with prob >= min_prob.
void write_state_csv(std::ostream &out, const StateVector &state,
                     double min_prob = 0.0);

/// QSPP_THREADS, clamped to [1, hardware threads]; 1 when unset.
[[nodiscard]] int default_threads();

} // namespace qspp::sim
