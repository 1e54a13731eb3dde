#include "qspp/polyapprox.hpp"

#include "qspp/errors.hpp"
#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace qspp::poly {
namespace {

constexpr double kRangeTol = 1e-12;
constexpr int kValidationSamples = 2001;
constexpr int kCapRefinements = 8;

/// a e^z - b without cancellation when a e^z is close to b.
double exp_minus(double a, double z, double b) {
    if (a > 0.0 && b > 0.0) return b * std::expm1(z + std::log(a / b));
    return a * std::exp(z) - b;
}

double exponent(int p, double s, double x) {
    return x * x * std::ldexp(1.0, p) - s;
}

double clamp_sqrt(double v) { return std::sqrt(std::max(v, 0.0)); }

/// sqrt((log_value + s) / 2^p) clamped into [0, 1].
double branch_point(double log_value, int p, double s) {
    const double u = (log_value + s) / std::ldexp(1.0, p);
    if (!(u > 0.0)) return 0.0;
    return std::min(1.0, std::sqrt(u));
}

void require(bool ok, const char *message) {
    if (!ok) throw InvalidTarget(message);
}

struct DomainOf {
    Interval operator()(const GeneralExp &t) const {
        require(t.C != 0.0 && std::isfinite(t.C), "GeneralExp: C must be nonzero");
        require(t.p >= 0 && t.p < 60, "GeneralExp: p out of range");
        require(t.s >= 0.0, "GeneralExp: s must be non-negative");
        return {0.0, 1.0};
    }
    Interval operator()(const AutocallClause &t) const {
        require(t.strike_return > 0.0 && t.strike_return <= 1.0,
                "AutocallClause: K_T must lie in (0, 1]");
        require(t.norm > 0.0, "AutocallClause: norm must be positive");
        require(t.p >= 0 && t.p < 60, "AutocallClause: p out of range");
        require(t.s >= 0.0, "AutocallClause: s must be non-negative");
        const double hi = branch_point(std::log(t.strike_return), t.p, t.s);
        require(hi > 0.0, "AutocallClause: empty below-strike branch");
        return {0.0, hi};
    }
    Interval operator()(const CallClause &t) const {
        require(t.spot > 0.0 && t.strike > 0.0 && t.f_max > 0.0,
                "CallClause: S0, K, f_max must be positive");
        require(t.p >= 0 && t.p < 60, "CallClause: p out of range");
        require(t.s >= 0.0, "CallClause: s must be non-negative");
        const double lo = branch_point(std::log(t.strike / t.spot), t.p, t.s);
        const double hi =
            branch_point(std::log((t.f_max + t.strike) / t.spot), t.p, t.s);
        require(hi > lo, "CallClause: empty in-the-money branch");
        return {lo, hi};
    }
    Interval operator()(const CustomTarget &t) const {
        require(static_cast<bool>(t.fn), "CustomTarget: empty callable");
        return {0.0, 1.0};
    }
};

struct Evaluate {
    double x;
    double operator()(const GeneralExp &t) const {
        return clamp_sqrt(exp_minus(t.A, exponent(t.p, t.s, x), t.B) / t.C);
    }
    double operator()(const AutocallClause &t) const {
        // 1 - (K_T - e^z) = (1 - K_T) + e^z
        const double v = (1.0 - t.strike_return) + std::exp(exponent(t.p, t.s, x));
        return clamp_sqrt(v / t.norm);
    }
    double operator()(const CallClause &t) const {
        return clamp_sqrt(exp_minus(t.spot, exponent(t.p, t.s, x), t.strike) /
                          t.f_max);
    }
    double operator()(const CustomTarget &t) const { return t.fn(x); }
};

/// T_0(x) .. T_n(x) by the three-term recurrence.
void chebyshev_row(double x, int n, std::vector<double> &out) {
    out.assign(static_cast<std::size_t>(n + 1), 0.0);
    out[0] = 1.0;
    if (n >= 1) out[1] = x;
    for (int k = 2; k <= n; ++k)
        out[static_cast<std::size_t>(k)] =
            2.0 * x * out[static_cast<std::size_t>(k - 1)] -
            out[static_cast<std::size_t>(k - 2)];
}

std::vector<double> uniform(Interval d, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        xs[static_cast<std::size_t>(i)] =
            n == 1 ? d.lo : d.lo + (d.hi - d.lo) * i / (n - 1);
    return xs;
}

} // namespace

TargetFunction::TargetFunction(Form form)
    : form_(std::move(form)), domain_(std::visit(DomainOf{}, form_)) {
    const bool custom = std::holds_alternative<CustomTarget>(form_);
    for (double x : uniform(domain_, kValidationSamples)) {
        const double v = (*this)(x);
        if (!std::isfinite(v))
            throw InvalidTarget("target is not finite at x=" + std::to_string(x));
        const bool ok = custom ? std::abs(v) <= 1.0 + kRangeTol
                               : v >= -kRangeTol && v <= 1.0 + kRangeTol;
        if (!ok)
            throw InvalidTarget("target leaves [0, 1] at x=" + std::to_string(x) +
                                " (value " + std::to_string(v) + ")");
    }
}

double TargetFunction::operator()(double x) const {
    return std::visit(Evaluate{x}, form_);
}

std::string TargetFunction::describe() const {
    std::ostringstream os;
    os << std::setprecision(10);
    std::visit(
        [&os](const auto &t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, GeneralExp>)
                os << "general_exp(A=" << t.A << ", B=" << t.B << ", C=" << t.C
                   << ", p=" << t.p << ", s=" << t.s << ")";
            else if constexpr (std::is_same_v<T, AutocallClause>)
                os << "autocall_clause(K_T=" << t.strike_return << ", p=" << t.p
                   << ", s=" << t.s << ", norm=" << t.norm << ")";
            else if constexpr (std::is_same_v<T, CallClause>)
                os << "call_clause(S0=" << t.spot << ", K=" << t.strike
                   << ", f_max=" << t.f_max << ", p=" << t.p << ", s=" << t.s
                   << ")";
            else
                os << t.label;
        },
        form_);
    return os.str();
}

std::size_t ChebyshevPolynomial::basis_size(int degree, Parity parity) {
    if (degree < 0) throw InvalidArgument("degree must be non-negative");
    return static_cast<std::size_t>(parity == Parity::Even ? degree / 2 + 1
                                                           : (degree + 1) / 2);
}

ChebyshevGrid make_grid(int M) {
    if (M < 2) throw InvalidArgument("make_grid: M must be at least 2");
    ChebyshevGrid grid;
    grid.M = M;
    // -cos(j pi/(M-1)) = sin((2j-(M-1)) pi / (2(M-1))), exact zero at the centre
    for (int j = 0; j < M; ++j) {
        const int k = 2 * j - (M - 1);
        if (k < 0) continue;
        grid.points.push_back(
            std::sin(k * std::numbers::pi / (2.0 * (M - 1))));
    }
    std::sort(grid.points.begin(), grid.points.end());
    grid.points.erase(std::unique(grid.points.begin(), grid.points.end()),
                      grid.points.end());
    grid.points.back() = 1.0;
    return grid;
}

int default_grid_size(int degree) { return std::max(501, 10 * (degree + 1)); }

double basis(Parity parity, int k, double x) {
    const int n = parity == Parity::Even ? 2 * k : 2 * k + 1;
    std::vector<double> row;
    chebyshev_row(x, n, row);
    return row.back();
}

double eval(const ChebyshevPolynomial &poly, double x) {
    if (!(std::abs(x) <= 1.0))
        throw DomainError("Chebyshev series evaluated outside [-1, 1]");
    const double y = 2.0 * x * x - 1.0;
    const auto &c = poly.coeffs;
    double b1 = 0.0;
    double b2 = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) {
        const double b0 = c[k] + 2.0 * y * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    const double c0 = c.empty() ? 0.0 : c[0];
    if (poly.parity == Parity::Even) return c0 + y * b1 - b2;
    // odd: sum c_k T_{2k+1}(x) = x sum c_k V_k(y), V_0 = 1, V_1 = 2y - 1
    const double b0 = c0 + 2.0 * y * b1 - b2;
    return x * (b0 - b1);
}

ChebyshevPolynomial fit_minimax(const TargetFunction &target, int degree,
                                Parity parity, double cap, int grid_points) {
    if (degree < 0) throw InvalidArgument("fit_minimax: degree must be >= 0");
    if ((degree % 2 == 0) != (parity == Parity::Even))
        throw InvalidArgument("fit_minimax: degree parity does not match basis");
    if (!(cap > 0.0 && cap <= 1.0))
        throw InvalidArgument("fit_minimax: cap must lie in (0, 1]");
    const int M = grid_points == 0 ? default_grid_size(degree) : grid_points;
    if (M < 5 * (degree + 1))
        throw InvalidArgument("fit_minimax: grid must have at least 5(d+1) points");

    const Interval dom = target.domain();
    std::vector<double> xs = make_grid(M).points;
    xs.push_back(dom.lo);
    xs.push_back(dom.hi);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    const auto K = static_cast<int>(ChebyshevPolynomial::basis_size(degree, parity));
    const int offset = parity == Parity::Even ? 0 : 1;
    const auto in_domain = [&](double x) {
        return x >= dom.lo - kRangeTol && x <= dom.hi + kRangeTol;
    };
    const auto n_fit = static_cast<int>(std::count_if(xs.begin(), xs.end(), in_domain));
    if (n_fit < K + 1)
        throw InvalidTarget("fit_minimax: target domain holds too few grid points");

    std::vector<double> cap_xs = xs;
    const auto solve = [&] {
        const int rows = 2 * n_fit + 2 * static_cast<int>(cap_xs.size());
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(rows, K + 1);
        Eigen::VectorXd h(rows);
        std::vector<double> row;
        const auto basis_row = [&](double x) {
            chebyshev_row(x, 2 * (K - 1) + offset, row);
            Eigen::RowVectorXd a(K);
            for (int k = 0; k < K; ++k) a(k) = row[static_cast<std::size_t>(2 * k + offset)];
            return a;
        };
        int r = 0;
        for (double x : xs) {
            if (!in_domain(x)) continue;
            const Eigen::RowVectorXd a = basis_row(x);
            const double f = target(x);
            if (!std::isfinite(f)) throw InvalidTarget("target is not finite");
            G.row(r).head(K) = a;
            G(r, K) = -1.0;
            h(r++) = f;
            G.row(r).head(K) = -a;
            G(r, K) = -1.0;
            h(r++) = -f;
        }
        for (double x : cap_xs) {
            const Eigen::RowVectorXd a = basis_row(x);
            G.row(r).head(K) = a;
            h(r++) = cap;
            G.row(r).head(K) = -a;
            h(r++) = cap;
        }
        Eigen::VectorXd cost = Eigen::VectorXd::Zero(K + 1);
        cost(K) = 1.0;
        const auto lp = detail::solve_inequality_lp(cost, G, h);
        return std::vector<double>(lp.z.data(), lp.z.data() + K);
    };

    ChebyshevPolynomial trial;
    trial.parity = parity;
    trial.degree = degree;
    trial.coeffs = solve();
    // The cap only binds on grid points; if |P| overshoots one in between,
    // the offending local maxima join the cap constraints and the LP reruns.
    const int dense = std::max(20000, 400 * (degree + 1));
    for (int round = 0; round < kCapRefinements && sup_norm(trial, dense) > 1.0; ++round) {
        std::vector<double> ys(static_cast<std::size_t>(dense));
        for (int i = 0; i < dense; ++i)
            ys[static_cast<std::size_t>(i)] =
                std::min(1.0, std::sin(i * std::numbers::pi / (2.0 * (dense - 1))));
        for (std::size_t i = 0; i < ys.size(); ++i) {
            const double v = std::abs(eval(trial, ys[i]));
            const double l = i > 0 ? std::abs(eval(trial, ys[i - 1])) : -1.0;
            const double u = i + 1 < ys.size() ? std::abs(eval(trial, ys[i + 1])) : -1.0;
            if (v > cap && v >= l && v >= u) cap_xs.push_back(ys[i]);
        }
        trial.coeffs = solve();
    }

    ChebyshevPolynomial out;
    out.parity = parity;
    out.degree = degree;
    out.cap = cap;
    out.fit_domain = dom;
    out.coeffs = trial.coeffs;
    double grid_err = 0.0;
    for (double x : xs)
        if (in_domain(x)) grid_err = std::max(grid_err, std::abs(target(x) - eval(out, x)));
    out.grid_err = grid_err;
    out.max_err = max_error(out, target, 10 * M);
    return out;
}

double max_error(const ChebyshevPolynomial &poly, const TargetFunction &target,
                 int n_samples) {
    if (n_samples < 1000)
        throw InvalidArgument("max_error: need at least 1000 samples");
    double worst = 0.0;
    for (double x : uniform(target.domain(), n_samples))
        worst = std::max(worst, std::abs(target(x) - eval(poly, x)));
    return worst;
}

double sup_norm(const ChebyshevPolynomial &poly, int n_samples) {
    const int n = n_samples > 0 ? n_samples : std::max(2000, 40 * (poly.degree + 1));
    double worst = 0.0;
    // parity makes [0, 1] sufficient; Chebyshev spacing resolves the edges
    for (int i = 0; i < n; ++i) {
        const double x = std::sin(i * std::numbers::pi / (2.0 * (n - 1)));
        worst = std::max(worst, std::abs(eval(poly, std::min(x, 1.0))));
    }
    return worst;
}

void write_fit_csv(std::ostream &out, const ChebyshevPolynomial &poly,
                   const TargetFunction &target, int n_samples) {
    if (n_samples < 2) throw InvalidArgument("write_fit_csv: need >= 2 samples");
    const Interval dom = target.domain();
    out << "x,f,P,abs_err\n" << std::setprecision(17);
    for (double x : uniform({0.0, 1.0}, n_samples)) {
        const double p = eval(poly, x);
        out << x << ',';
        if (x >= dom.lo && x <= dom.hi) {
            const double f = target(x);
            out << f << ',' << p << ',' << std::abs(f - p) << '\n';
        } else {
            out << ',' << p << ",\n";
        }
    }
}

} // namespace qspp::poly
