#pragma once

/**
 * @file
 * Near-minimax Chebyshev approximation of payoff target functions.
 *
 * Polynomials have definite parity and are represented by their Chebyshev
 * coefficients over the even (T_0, T_2, ...) or odd (T_1, T_3, ...) basis.
 * Fitting solves the discrete minimax problem on the non-negative half of a
 * Chebyshev-Lobatto grid with an amplitude cap |P(x_j)| <= cap, formulated
 * as a linear program.
 */

#include <functional>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace qspp::poly {

enum class Parity { Even, Odd };

/// Amplitude cap used when the caller does not supply one.
inline constexpr double kDefaultCap = 0.9999;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// sqrt((A e^{x^2 2^p} e^{-s} - B) / C)
struct GeneralExp {
    double A = 1.0;
    double B = 0.0;
    double C = 1.0;
    int p = 0;
    double s = 0.0;
};

/// sqrt((1 - (K_T - e^{x^2 2^p} e^{-s})) / norm), relevant where the
/// terminal return is below the strike return K_T.
struct AutocallClause {
    double strike_return = 1.0;
    int p = 0;
    double s = 0.0;
    double norm = 1.0;
};

/// sqrt((S0 e^{x^2 2^p} e^{-s} - K) / f_max), relevant where the option is in
/// the money and the normalised payoff does not exceed one.
struct CallClause {
    double spot = 1.0;
    double strike = 1.0;
    double f_max = 1.0;
    int p = 0;
    double s = 0.0;
};

/// Arbitrary callable on [0, 1]. No range check beyond finiteness.
struct CustomTarget {
    std::function<double(double)> fn;
    std::string label = "custom";
};

/**
 * @brief Function f: [0,1] -> [0,1] to be approximated.
 *
 * Each form knows the sub-interval of [0, 1] on which its value is
 * meaningful (the branch the surrounding circuit actually selects). The
 * minimax objective is only taken there; the amplitude cap is enforced on
 * the whole of [0, 1].
 */
class TargetFunction {
  public:
    using Form = std::variant<GeneralExp, AutocallClause, CallClause,
                              CustomTarget>;

    explicit TargetFunction(Form form);

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] Interval domain() const noexcept { return domain_; }
    [[nodiscard]] const Form &form() const noexcept { return form_; }
    [[nodiscard]] std::string describe() const;

  private:
    Form form_;
    Interval domain_;
};

struct ChebyshevGrid {
    int M = 0;
    std::vector<double> points;
};

struct ChebyshevPolynomial {
    Parity parity = Parity::Even;
    int degree = 0;
    std::vector<double> coeffs;
    double cap = kDefaultCap;
    double max_err = 0.0;  ///< dense re-measured error on the fit domain
    double grid_err = 0.0; ///< LP objective on the fit grid
    Interval fit_domain{};

    /// Coefficient count implied by degree and parity.
    [[nodiscard]] static std::size_t basis_size(int degree, Parity parity);
};

/// Non-negative half of the Chebyshev-Lobatto nodes {-cos(j pi / (M-1))}.
[[nodiscard]] ChebyshevGrid make_grid(int M);

[[nodiscard]] int default_grid_size(int degree);

/// Clenshaw evaluation in the squared variable, so parity is exact.
[[nodiscard]] double eval(const ChebyshevPolynomial &poly, double x);

/// Chebyshev basis function of the given parity and index: T_{2k} or
/// T_{2k+1}.
[[nodiscard]] double basis(Parity parity, int k, double x);

/**
 * @brief Discrete minimax fit with amplitude cap.
 *
 * @param grid_points Grid size M; 0 selects default_grid_size(degree).
 */
[[nodiscard]] ChebyshevPolynomial fit_minimax(const TargetFunction &target,
                                              int degree, Parity parity,
                                              double cap = kDefaultCap,
                                              int grid_points = 0);

/// max |f - P| over n_samples uniform points of the target's domain.
[[nodiscard]] double max_error(const ChebyshevPolynomial &poly,
                               const TargetFunction &target, int n_samples);

/// max |P| over a dense sample of [-1, 1] (Chebyshev nodes plus endpoints).
[[nodiscard]] double sup_norm(const ChebyshevPolynomial &poly,
                              int n_samples = 0);

/// Plot data: header `x,f,P,abs_err`, n_samples uniform rows over [0, 1].
/// f is reported only inside the target domain and left empty outside.
void write_fit_csv(std::ostream &out, const ChebyshevPolynomial &poly,
                   const TargetFunction &target, int n_samples);

} // namespace qspp::poly
