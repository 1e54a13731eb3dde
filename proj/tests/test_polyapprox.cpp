#include <doctest.h>

#include "oracles.hpp"
#include "qspp/errors.hpp"
#include "qspp/polyapprox.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace qspp;
using namespace qspp::poly;

namespace {

TargetFunction autocall_target(double k_t) {
    return TargetFunction(AutocallClause{k_t, 5, 32.0, 1.0});
}

TargetFunction fig2_call_target() {
    const double s0 = 100.0, k = 100.0;
    return TargetFunction(CallClause{s0, k, s0 * std::exp(8.0) - k, 3, 0.0});
}

ChebyshevPolynomial series(Parity parity, std::vector<double> c) {
    ChebyshevPolynomial p;
    p.parity = parity;
    p.coeffs = std::move(c);
    const auto K = static_cast<int>(p.coeffs.size());
    p.degree = parity == Parity::Even ? 2 * (K - 1) : 2 * K - 1;
    return p;
}

} // namespace

TEST_CASE("make_grid restricts Chebyshev-Lobatto nodes to [0, 1]") {
    const auto g3 = make_grid(3);
    REQUIRE(g3.points.size() == 2);
    CHECK(g3.points[0] == 0.0);
    CHECK(g3.points[1] == 1.0);

    const auto g5 = make_grid(5);
    REQUIRE(g5.points.size() == 3);
    CHECK(g5.points[0] == 0.0);
    CHECK(g5.points[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
    CHECK(g5.points[2] == 1.0);

    const auto g201 = make_grid(201);
    REQUIRE(g201.points.size() == 101);
    double gap = 0.0;
    for (std::size_t i = 1; i < g201.points.size(); ++i) {
        CHECK(g201.points[i] > g201.points[i - 1]);
        gap = std::max(gap, g201.points[i] - g201.points[i - 1]);
    }
    CHECK(gap < 0.025);
    for (int M : {2, 4, 10, 501}) {
        const auto g = make_grid(M);
        CHECK(g.points.back() == 1.0);
        CHECK(g.points.front() >= 0.0);
        for (double x : g.points) {
            // every point is a node of the full set
            bool found = false;
            for (int j = 0; j < M && !found; ++j)
                found = std::abs(x + std::cos(j * std::numbers::pi / (M - 1))) < 1e-15;
            CHECK(found);
        }
    }
    CHECK_THROWS_AS((void)make_grid(1), InvalidArgument);
}

TEST_CASE("eval matches closed forms") {
    const auto t2 = series(Parity::Even, {0.0, 1.0});
    CHECK(eval(t2, 0.5) == doctest::Approx(-0.5).epsilon(1e-15));
    const auto half = series(Parity::Even, {0.5, 0.5});
    CHECK(eval(half, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)eval(t2, 1.0000001), DomainError);
    CHECK_THROWS_AS((void)eval(t2, -1.5), DomainError);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(1 + trial % 9);
        for (auto &v : c) v = u(rng);
        for (Parity par : {Parity::Even, Parity::Odd}) {
            const auto p = series(par, c);
            for (int i = 0; i < 50; ++i) {
                const double x = u(rng);
                double ref = 0.0;
                for (std::size_t k = 0; k < c.size(); ++k)
                    ref += c[k] * oracle::chebyshev_t(static_cast<int>(2 * k) + (par == Parity::Odd), x);
                CHECK(eval(p, x) == doctest::Approx(ref).epsilon(1e-12).scale(1.0));
                CHECK(basis(par, static_cast<int>(c.size()) - 1, x) ==
                      doctest::Approx(oracle::chebyshev_t(p.degree, x)).scale(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("parity is exact") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> c(1 + trial % 12);
        for (auto &v : c) v = u(rng);
        const auto even = series(Parity::Even, c);
        const auto odd = series(Parity::Odd, c);
        for (int i = 0; i < 100; ++i) {
            const double x = u(rng);
            CHECK(eval(even, -x) == eval(even, x));
            CHECK(eval(odd, -x) == -eval(odd, x));
        }
    }
}

TEST_CASE("target validation") {
    CHECK_THROWS_AS(TargetFunction(AutocallClause{0.0, 5, 32.0, 1.0}), InvalidTarget);
    CHECK_THROWS_AS(TargetFunction(AutocallClause{1.5, 5, 32.0, 1.0}), InvalidTarget);
    CHECK_THROWS_AS(TargetFunction(GeneralExp{1.0, 0.0, 1.0, 1, 0.0}), InvalidTarget);
    CHECK_THROWS_AS(TargetFunction(CallClause{100.0, 100.0, -1.0, 3, 0.0}), InvalidTarget);
    CHECK_THROWS_AS(TargetFunction(CustomTarget{[](double) { return NAN; }, "nan"}),
                    InvalidTarget);
    CHECK_NOTHROW(TargetFunction(GeneralExp{1.0, 1.0, std::expm1(1.0), 0, 0.0}));

    const auto t = autocall_target(0.5);
    CHECK(t.domain().lo == 0.0);
    CHECK(t.domain().hi == doctest::Approx(std::sqrt((32.0 + std::log(0.5)) / 32.0)));
    CHECK(t(t.domain().hi) == doctest::Approx(1.0).epsilon(1e-12));

    // cancellation-free evaluation near the strike
    const auto call = fig2_call_target();
    const double x = 1e-5;
    const double expect = std::sqrt(100.0 * std::expm1(x * x * 8.0) / (100.0 * std::exp(8.0) - 100.0));
    CHECK(call(x) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("fit recovers exactly representable series") {
    const TargetFunction t2(CustomTarget{[](double x) { return 2 * x * x - 1; }, "T2"});
    const auto p = fit_minimax(t2, 2, Parity::Even, 1.0);
    REQUIRE(p.coeffs.size() == 2);
    CHECK(p.max_err <= 1e-12);
    CHECK(p.coeffs[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(p.coeffs[1] == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        const Parity par = trial % 2 ? Parity::Odd : Parity::Even;
        std::vector<double> c(2 + trial % 4);
        double l1 = 0.0;
        for (auto &v : c) l1 += std::abs(v = u(rng));
        for (auto &v : c) v *= 0.9 / l1;
        const auto ref = series(par, c);
        const TargetFunction f(CustomTarget{[ref](double x) { return eval(ref, x); }, "series"});
        const auto fit = fit_minimax(f, ref.degree + 2, par, 0.999);
        for (std::size_t k = 0; k < c.size(); ++k)
            CHECK(fit.coeffs[k] == doctest::Approx(c[k]).scale(1.0).epsilon(1e-9));
        CHECK(std::abs(fit.coeffs.back()) < 1e-9);
        CHECK(max_error(fit, f, 1000) < 1e-9);
    }
}

TEST_CASE("fit input validation") {
    const auto t = autocall_target(1.0);
    CHECK_THROWS_AS((void)fit_minimax(t, 3, Parity::Even), InvalidArgument);
    CHECK_THROWS_AS((void)fit_minimax(t, 4, Parity::Even, 0.0), InvalidArgument);
    CHECK_THROWS_AS((void)fit_minimax(t, 4, Parity::Even, 1.5), InvalidArgument);
    CHECK_THROWS_AS((void)fit_minimax(t, 20, Parity::Even, 0.999, 100), InvalidArgument);
    const auto p = fit_minimax(t, 4, Parity::Even);
    CHECK_THROWS_AS((void)max_error(p, t, 999), InvalidArgument);
}

TEST_CASE("autocall clause fit at d=20 meets the 1e-3 budget for K_T=1") {
    const auto t = autocall_target(1.0);
    const auto p = fit_minimax(t, 20, Parity::Even);
    // reference: HiGHS solution of the same LP
    CHECK(p.grid_err == doctest::Approx(2.76558444177899e-4).epsilon(1e-6));
    CHECK(p.max_err == doctest::Approx(2.770724111162561e-4).epsilon(1e-4));
    CHECK(max_error(p, t, 10000) <= 1e-3);
    const auto p2 = fit_minimax(t, 2, Parity::Even);
    CHECK(max_error(p2, t, 10000) > 1e-2);
    CHECK(p2.grid_err == doctest::Approx(0.3820965459970494).epsilon(1e-6));
}

TEST_CASE("call clause fits improve strictly with degree and agree with references") {
    const auto t = fig2_call_target();
    const auto p6 = fit_minimax(t, 6, Parity::Even, 0.999);
    const auto p8 = fit_minimax(t, 8, Parity::Even, 0.999);
    const auto p16 = fit_minimax(t, 16, Parity::Even, 0.999);
    CHECK(p6.max_err > p8.max_err);
    CHECK(p8.max_err > p16.max_err);
    CHECK(p6.grid_err == doctest::Approx(0.013522938689476738).epsilon(1e-6));
    CHECK(p8.grid_err == doctest::Approx(0.0035174338711445596).epsilon(1e-6));
    CHECK(p16.grid_err == doctest::Approx(0.001).epsilon(1e-6));
    CHECK(p6.max_err == doctest::Approx(0.01352701720133831).epsilon(1e-4));
    CHECK(p8.max_err == doctest::Approx(0.0035185269252785423).epsilon(1e-4));

    // independent least-max refit where the cap is inactive
    const auto grid = make_grid(default_grid_size(8)).points;
    std::vector<double> xs;
    for (double x : grid)
        if (x >= t.domain().lo && x <= t.domain().hi) xs.push_back(x);
    xs.push_back(t.domain().hi);
    for (const auto *p : {&p6, &p8}) {
        const auto law = oracle::lawson_minimax([&](double x) { return t(x); }, xs,
                                                static_cast<int>(p->coeffs.size()), 0);
        CHECK(p->grid_err <= law.max_err + 1e-12);
        CHECK(law.max_err <= p->grid_err * 1.01);
    }
}

TEST_CASE("property: cap respected and monotone improvement") {
    const TargetFunction targets[] = {
        autocall_target(1.0),
        fig2_call_target(),
        TargetFunction(GeneralExp{1.0, 1.0, std::expm1(2.0), 1, 0.0}),
        TargetFunction(CustomTarget{[](double x) { return std::abs(std::sin(3 * x)); }, "abs-sin"}),
    };
    for (const auto &t : targets) {
        double prev = INFINITY;
        for (int d = 2; d <= 14; d += 2) {
            const auto p = fit_minimax(t, d, Parity::Even, 0.999);
            CHECK(p.grid_err <= prev + 1e-12);
            prev = p.grid_err;
            for (double x : make_grid(default_grid_size(d)).points)
                CHECK(std::abs(eval(p, x)) <= p.cap + 1e-9);
        }
        double prev_odd = INFINITY;
        for (int d = 1; d <= 13; d += 2) {
            const auto p = fit_minimax(t, d, Parity::Odd, 0.999);
            CHECK(p.grid_err <= prev_odd + 1e-12);
            prev_odd = p.grid_err;
        }
    }
}

TEST_CASE("csv dump layout") {
    const auto t = fig2_call_target();
    const auto p = fit_minimax(t, 6, Parity::Even, 0.999);
    std::ostringstream os;
    write_fit_csv(os, p, t, 11);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,f,P,abs_err");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 11);
}
