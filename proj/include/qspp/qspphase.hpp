#pragma once

/**
 * @file
 * QSP phase factors for definite-parity real polynomials.
 *
 * Convention (tag Convention::WxReal): phases psi_1..psi_d define
 *
 *     M(psi, a) = e^{i psi_1 Z} W(a) e^{i psi_2 Z} W(a) ... e^{i psi_d Z} W(a),
 *     W(a) = [[a, i sqrt(1-a^2)], [i sqrt(1-a^2), a]],
 *
 * and the realised polynomial is the average of the +psi and -psi branches,
 * (<0|M(psi)|0> + <0|M(-psi)|0>) / 2 = Re <0|M(psi)|0>. This is what the
 * Hadamard-conjugated control qubit of the circuit realises.
 */

#include "qspp/polyapprox.hpp"

#include <complex>
#include <string>
#include <vector>

namespace qspp::qsp {

enum class Convention { WxReal };

[[nodiscard]] std::string to_string(Convention c);
[[nodiscard]] Convention convention_from_string(const std::string &s);

inline constexpr double kDefaultTolerance = 1e-8;

struct PhaseFactors {
    std::vector<double> phases;
    Convention convention = Convention::WxReal;
    double residual = 0.0;

    [[nodiscard]] int degree() const noexcept {
        return static_cast<int>(phases.size());
    }
};

/// 2x2 unitary M(psi, a) as row-major entries {m00, m01, m10, m11}.
struct Su2Matrix {
    std::complex<double> m[2][2];
};

[[nodiscard]] Su2Matrix su2_product(const PhaseFactors &phases, double a);

/// Single-branch matrix element <0|M(psi, a)|0>.
[[nodiscard]] std::complex<double> su2_element(const PhaseFactors &phases,
                                               double a);

/// Realised value: average of the +psi and -psi branches (real up to
/// rounding). This is what find_phases matches against the polynomial.
[[nodiscard]] std::complex<double> su2_eval(const PhaseFactors &phases,
                                            double a);

/**
 * @brief Phases realising poly under Convention::WxReal.
 *
 * Newton iteration with Levenberg-Marquardt damping over symmetric phase
 * vectors, matching the polynomial at the positive Chebyshev nodes.
 *
 * @throws InvalidArgument degree < 1 or parity inconsistent with degree.
 * @throws NormViolation max |P| on [-1, 1] exceeds one.
 * @throws ConvergenceFailure residual above tol after the iteration budget.
 */
[[nodiscard]] PhaseFactors find_phases(const poly::ChebyshevPolynomial &poly,
                                       double tol = kDefaultTolerance);

struct VerifyReport {
    double max_dev = 0.0;
    bool pass = false;
};

/// max over uniform a in [-1, 1] of | |su2_eval| - |P(a)| |.
[[nodiscard]] VerifyReport verify_phases(const PhaseFactors &phases,
                                         const poly::ChebyshevPolynomial &poly,
                                         int n_samples, double tol);

/**
 * @brief Rotation angles chi_1..chi_d for the projector-rotation circuit.
 *
 * With block-encoding reflections R(a) = [[a, s], [s, -a]] and projector
 * rotations e^{i chi (2 Pi - I)}, the product e^{i chi_1 Z} R ... e^{i chi_d Z} R
 * (and its -chi partner) reproduces su2_eval exactly.
 */
[[nodiscard]] std::vector<double> circuit_angles(const PhaseFactors &phases);

} // namespace qspp::qsp
