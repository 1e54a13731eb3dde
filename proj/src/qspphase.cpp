#include "qspp/qspphase.hpp"

#include "qspp/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qspp::qsp {
namespace {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

constexpr double kPi = std::numbers::pi;
constexpr int kMaxIterations = 500;

Mat2 signal(double a) {
    const double s = std::sqrt(std::max(0.0, 1.0 - a * a));
    Mat2 w;
    w << cd(a, 0.0), cd(0.0, s), cd(0.0, s), cd(a, 0.0);
    return w;
}

Mat2 zphase(double phi) {
    Mat2 z = Mat2::Zero();
    z(0, 0) = std::polar(1.0, phi);
    z(1, 1) = std::polar(1.0, -phi);
    return z;
}

void check_point(double a) {
    if (!(std::abs(a) <= 1.0))
        throw DomainError("QSP signal value outside [-1, 1]");
}

/// Symmetric full phase vector phi_0..phi_d from the free half.
std::vector<double> expand(const Eigen::VectorXd &half, int d) {
    std::vector<double> full(static_cast<std::size_t>(d + 1));
    for (int k = 0; k <= d; ++k) full[static_cast<std::size_t>(k)] = half(std::min(k, d - k));
    return full;
}

/// Re <0| e^{i phi_0 Z} prod_k W e^{i phi_k Z} |0> and its gradient with
/// respect to the free symmetric parameters.
double value_and_gradient(const std::vector<double> &full, double x,
                          Eigen::Ref<Eigen::RowVectorXd> grad) {
    const int d = static_cast<int>(full.size()) - 1;
    const Mat2 w = signal(x);
    std::vector<Mat2> factor(static_cast<std::size_t>(d + 1));
    factor[0] = zphase(full[0]);
    for (int k = 1; k <= d; ++k) factor[static_cast<std::size_t>(k)] = w * zphase(full[static_cast<std::size_t>(k)]);

    // row[k] = <0| A_0 .. A_{k-1}, col[k] = A_{k+1} .. A_d |0>
    std::vector<Eigen::RowVector2cd> row(static_cast<std::size_t>(d + 1));
    std::vector<Eigen::Vector2cd> col(static_cast<std::size_t>(d + 1));
    row[0] = Eigen::RowVector2cd(1.0, 0.0);
    for (int k = 1; k <= d; ++k) row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] * factor[static_cast<std::size_t>(k - 1)];
    col[static_cast<std::size_t>(d)] = Eigen::Vector2cd(1.0, 0.0);
    for (int k = d; k-- > 0;) col[static_cast<std::size_t>(k)] = factor[static_cast<std::size_t>(k + 1)] * col[static_cast<std::size_t>(k + 1)];

    Mat2 iz = Mat2::Zero();
    iz(0, 0) = cd(0.0, 1.0);
    iz(1, 1) = cd(0.0, -1.0);
    grad.setZero();
    for (int k = 0; k <= d; ++k) {
        const auto ks = static_cast<std::size_t>(k);
        const cd dk = (row[ks] * factor[ks] * iz * col[ks])(0, 0);
        grad(std::min(k, d - k)) += dk.real();
    }
    return (row[0] * factor[0] * col[0])(0, 0).real();
}

double realised_residual(const PhaseFactors &pf,
                         const poly::ChebyshevPolynomial &poly) {
    const int n = pf.degree() + 50;
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double a = std::cos((2.0 * j - 1.0) * kPi / (2.0 * n));
        worst = std::max(worst, std::abs(su2_eval(pf, a).real() - poly::eval(poly, a)));
    }
    return worst;
}

PhaseFactors from_full(const std::vector<double> &full) {
    const int d = static_cast<int>(full.size()) - 1;
    PhaseFactors pf;
    pf.phases.resize(static_cast<std::size_t>(d));
    pf.phases[0] = full[0] + full[static_cast<std::size_t>(d)];
    for (int k = 2; k <= d; ++k) pf.phases[static_cast<std::size_t>(k - 1)] = full[static_cast<std::size_t>(k - 1)];
    return pf;
}

} // namespace

std::string to_string(Convention c) {
    switch (c) {
    case Convention::WxReal:
        return "wx-real";
    }
    throw InvalidArgument("unknown phase convention");
}

Convention convention_from_string(const std::string &s) {
    if (s == "wx-real") return Convention::WxReal;
    throw InvalidArgument("unknown phase convention '" + s + "'");
}

Su2Matrix su2_product(const PhaseFactors &phases, double a) {
    check_point(a);
    const Mat2 w = signal(a);
    Mat2 m = Mat2::Identity();
    for (double psi : phases.phases) m = m * zphase(psi) * w;
    Su2Matrix out;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) out.m[r][c] = m(r, c);
    return out;
}

cd su2_element(const PhaseFactors &phases, double a) {
    return su2_product(phases, a).m[0][0];
}

cd su2_eval(const PhaseFactors &phases, double a) {
    PhaseFactors neg = phases;
    for (double &psi : neg.phases) psi = -psi;
    return 0.5 * (su2_element(phases, a) + su2_element(neg, a));
}

PhaseFactors find_phases(const poly::ChebyshevPolynomial &poly, double tol) {
    const int d = poly.degree;
    if (d < 1) throw InvalidArgument("find_phases: degree must be at least 1");
    if ((d % 2 == 0) != (poly.parity == poly::Parity::Even))
        throw InvalidArgument("find_phases: parity inconsistent with degree");
    if (poly.coeffs.size() != poly::ChebyshevPolynomial::basis_size(d, poly.parity))
        throw InvalidArgument("find_phases: coefficient count inconsistent with degree");
    if (!(tol > 0.0)) throw InvalidArgument("find_phases: tolerance must be positive");
    const double norm = poly::sup_norm(poly);
    if (norm > 1.0 + 1e-12)
        throw NormViolation("polynomial exceeds unit norm on [-1, 1] (max " +
                            std::to_string(norm) + ")");

    const int dt = (d + 2) / 2;
    Eigen::VectorXd nodes(dt), target(dt);
    for (int j = 1; j <= dt; ++j) {
        nodes(j - 1) = std::cos((2.0 * j - 1.0) * kPi / (4.0 * dt));
        target(j - 1) = poly::eval(poly, nodes(j - 1));
    }

    Eigen::VectorXd half = Eigen::VectorXd::Zero(dt);
    half(0) = kPi / 4.0;
    Eigen::MatrixXd J(dt, dt);
    const auto residual_at = [&](const Eigen::VectorXd &h, Eigen::MatrixXd *jac) {
        const auto full = expand(h, d);
        Eigen::VectorXd r(dt);
        Eigen::RowVectorXd g(dt);
        for (int j = 0; j < dt; ++j) {
            r(j) = value_and_gradient(full, nodes(j), g) - target(j);
            if (jac) jac->row(j) = g;
        }
        return r;
    };

    Eigen::VectorXd r = residual_at(half, &J);
    double err = r.lpNorm<Eigen::Infinity>();
    double lambda = 1e-10;
    for (int it = 0; it < kMaxIterations && err > 1e-14; ++it) {
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd rhs = -J.transpose() * r;
        bool accepted = false;
        for (int tries = 0; tries < 30 && !accepted; ++tries) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal().array() += lambda * (1.0 + JtJ.diagonal().array());
            const Eigen::VectorXd step = A.ldlt().solve(rhs);
            const Eigen::VectorXd trial = half + step;
            Eigen::MatrixXd Jt(dt, dt);
            const Eigen::VectorXd rt = residual_at(trial, &Jt);
            const double et = rt.lpNorm<Eigen::Infinity>();
            if (rt.squaredNorm() < r.squaredNorm()) {
                half = trial;
                r = rt;
                J = Jt;
                err = et;
                lambda = std::max(lambda * 0.1, 1e-14);
                accepted = true;
            } else {
                lambda *= 10.0;
            }
        }
        if (!accepted) break;
    }

    PhaseFactors pf = from_full(expand(half, d));
    pf.residual = realised_residual(pf, poly);
    if (!(pf.residual <= tol))
        throw ConvergenceFailure("find_phases: residual " + std::to_string(pf.residual) +
                                     " above tolerance",
                                 pf.residual);
    return pf;
}

VerifyReport verify_phases(const PhaseFactors &phases,
                           const poly::ChebyshevPolynomial &poly, int n_samples,
                           double tol) {
    if (n_samples < 100) throw InvalidArgument("verify_phases: need >= 100 samples");
    VerifyReport rep;
    for (int i = 0; i < n_samples; ++i) {
        const double a = -1.0 + 2.0 * i / (n_samples - 1);
        rep.max_dev = std::max(rep.max_dev, std::abs(std::abs(su2_eval(phases, a)) -
                                                     std::abs(poly::eval(poly, a))));
    }
    rep.pass = rep.max_dev <= tol;
    return rep;
}

std::vector<double> circuit_angles(const PhaseFactors &phases) {
    const int d = phases.degree();
    if (d < 1) throw InvalidArgument("circuit_angles: empty phase vector");
    std::vector<double> chi(phases.phases);
    chi[0] += (d - 1) * kPi / 2.0;
    for (int k = 1; k < d; ++k) chi[static_cast<std::size_t>(k)] -= kPi / 2.0;
    for (double &c : chi) c = std::remainder(c, 2.0 * kPi);
    return chi;
}

} // namespace qspp::qsp
