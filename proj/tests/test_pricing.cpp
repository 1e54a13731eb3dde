#include <doctest.h>

#include "qspp/builders.hpp"
#include "qspp/errors.hpp"
#include "qspp/pricing.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace qspp;
using namespace qspp::pricing;
using qspp::poly::Parity;

namespace {

struct Fitted {
    poly::ChebyshevPolynomial poly;
    qsp::PhaseFactors phases;
};

Fitted fit(const poly::TargetFunction &t, int d) {
    Fitted f;
    f.poly = poly::fit_minimax(t, d, Parity::Even);
    f.phases = qsp::find_phases(f.poly);
    return f;
}

EuropeanCall normal_call(double strike, int n = 6) {
    EuropeanCall c;
    c.spot = 100.0;
    c.strike = strike;
    c.format = {n, 3, true, 0.0};
    c.probs = discretize_normal(c.format, 0.0, 1.0);
    return c;
}

std::uint64_t field(std::uint64_t idx, int offset, int width) {
    return (idx >> offset) & ((std::uint64_t{1} << width) - 1);
}

/// Autocallable with one binary payoff at t = 1, a barrier and the final clause.
Autocallable small_autocall() {
    Autocallable a;
    a.format = {3, 2, true, 0.0};
    a.timesteps = 2;
    a.schedule = {{std::exp(0.5), 1, 0.8}};
    a.barrier = std::exp(-0.5);
    a.strike_return = 1.0;
    const std::vector<double> m1 = discretize_normal(a.format, 0.0, 0.8);
    const std::vector<double> m2 = discretize_normal(a.format, -0.3, 1.0);
    a.joint_probs = product_distribution({m1, m2});
    return a;
}

} // namespace

TEST_CASE("grid helpers") {
    const FixedPointFormat f{3, 2, true, 0.0};
    const auto v = grid_values(f);
    CHECK(v[0] == 0.0);
    CHECK(v[4] == -2.0);
    CHECK(v[3] == 1.5);
    CHECK(grid_shift(f) == 2.0);
    CHECK(shifted_format(f).is_signed == false);

    const auto p = discretize_normal({6, 3, true, 0.0}, 0.0, 1.0);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    // symmetric law: mass at +h equals mass at -h
    const FixedPointFormat g{6, 3, true, 0.0};
    CHECK(p[g.encode(0.125)] == doctest::Approx(p[g.encode(-0.125)]).epsilon(1e-14));
    CHECK_THROWS_AS((void)discretize_normal(g, 0.0, 0.0), InvalidArgument);

    const auto j = product_distribution({{0.25, 0.75}, {0.5, 0.5}});
    REQUIRE(j.size() == 4);
    CHECK(j[1] == 0.375);
    CHECK(j[2] == 0.125);
}

TEST_CASE("classical call examples") {
    EuropeanCall c = normal_call(100.0);
    c.strike = 100.0 * std::exp(3.875);
    CHECK_THROWS_AS(c.validate(), InvalidArgument); // never in the money, f_max = 0
    c.f_max = 10.0;
    CHECK(classical_price_call(c) == 0.0);

    EuropeanCall d = normal_call(100.0);
    std::fill(d.probs.begin(), d.probs.end(), 0.0);
    d.probs[d.format.encode(1.0)] = 1.0;
    CHECK(classical_price_call(d) ==
          doctest::Approx((100.0 * std::exp(1.0) - 100.0) / d.payoff_max()).epsilon(1e-14));
}

TEST_CASE("classical call price is non-increasing in the strike") {
    double prev = 2.0;
    for (double k = 40.0; k <= 400.0; k += 10.0) {
        EuropeanCall c = normal_call(k);
        c.f_max = 100.0 * std::exp(3.875) - 40.0;
        const double v = classical_price_call(c);
        CHECK(v <= prev);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("call pipeline with all mass out of the money") {
    EuropeanCall c = normal_call(100.0, 4);
    std::fill(c.probs.begin(), c.probs.end(), 0.0);
    c.probs[c.format.encode(-1.0)] = 0.5;
    c.probs[c.format.encode(0.0)] = 0.5;
    const auto p = build_call_pipeline(c, qsp::PhaseFactors{{0.1, 0.2}});
    CHECK(quantum_price(p, c.probs) < 1e-10);
}

TEST_CASE("call pipeline realises the polynomial on in-the-money paths") {
    EuropeanCall c = normal_call(90.0, 4);
    const qsp::PhaseFactors phases{{0.4, -0.3, 0.2, 0.1}};
    const auto p = build_call_pipeline(c, phases);
    const auto xs = grid_values(c.format);
    double expect = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= std::log(c.strike / c.spot)) continue;
        const double a = std::sqrt((xs[i] + grid_shift(c.format)) / std::ldexp(1.0, c.format.p));
        expect += c.probs[i] * std::norm(qsp::su2_eval(phases, a));
    }
    CHECK(quantum_price(p, c.probs) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("call pipeline matches the classical price within the fit budget") {
    const EuropeanCall c = normal_call(100.0);
    const auto f = fit(poly::TargetFunction(call_clause(c)), 16);
    const auto p = build_call_pipeline(c, f.phases);
    CHECK(p.circuit.width() <= 24);
    const auto pair = make_price_pair(classical_price_call(c), quantum_price(p, c.probs), f.poly.max_err);
    INFO("classical " << pair.classical << " quantum " << pair.quantum << " max_err " << f.poly.max_err);
    CHECK(pair.within_budget());
}

TEST_CASE("classical autocallable examples") {
    Autocallable a = small_autocall();
    a.schedule = {{std::exp(-10.0), 1, 0.7}};
    CHECK(classical_price_autocallable(a) == doctest::Approx(0.7).epsilon(1e-14));

    Autocallable b = small_autocall();
    b.schedule = {{std::exp(10.0), 1, 0.7}};
    b.barrier = std::exp(10.0);
    CHECK(classical_price_autocallable(b) == 0.0);

    Autocallable big = small_autocall();
    big.format = {11, 2, true, 0.0};
    CHECK_THROWS_AS((void)classical_price_autocallable(big), CapacityError);

    Autocallable bad = small_autocall();
    bad.strike_return = 1.2;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = small_autocall();
    bad.schedule = {{1.0, 2, 0.5}, {1.0, 1, 0.5}};
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("indicator network matches the classical predicates exhaustively") {
    struct Case {
        int n, T;
        std::vector<BinaryPayoff> sched;
        double barrier;
    };
    const std::vector<Case> cases = {
        {2, 2, {{std::exp(0.0), 1, 0.5}, {std::exp(-0.5), 2, 0.6}}, std::exp(-1.0)},
        {2, 2, {{std::exp(0.5), 2, 0.5}}, std::exp(0.0)},
        {3, 3, {{std::exp(0.5), 1, 0.5}, {std::exp(0.0), 2, 0.6}, {std::exp(-1.0), 3, 0.7}}, std::exp(-0.5)},
        {3, 1, {}, std::exp(0.25)},
    };
    for (const auto &k : cases) {
        Autocallable a;
        a.format = {k.n, 2, true, 0.0};
        a.timesteps = k.T;
        a.schedule = k.sched;
        a.barrier = k.barrier;
        const auto circ = build_autocallable_indicators(a);
        const auto work = circ.reg("work").offset; // first work qubit
        const std::uint64_t paths = std::uint64_t{1} << (k.n * k.T);
        for (std::uint64_t idx = 0; idx < paths; ++idx) {
            const std::uint64_t out = sim::run_basis(circ, idx);
            // independent predicate evaluation
            std::vector<double> r;
            for (int t = 0; t < k.T; ++t) r.push_back(a.format.decode(field(idx, t * k.n, k.n)));
            bool any = false;
            int ones = 0;
            for (std::size_t i = 0; i < k.sched.size(); ++i) {
                const bool want = r[static_cast<std::size_t>(k.sched[i].timestep - 1)] >
                                      std::log(k.sched[i].threshold) && !any;
                any = any || want;
                const int got = static_cast<int>(field(out, circ.reg("s" + std::to_string(i + 1)).offset, 1));
                REQUIRE(got == (want ? 1 : 0));
                ones += got;
            }
            bool crossed = false;
            for (double v : r) crossed = crossed || v > std::log(k.barrier);
            const int b = static_cast<int>(field(out, circ.reg("b").offset, 1));
            REQUIRE(b == ((crossed && !any) ? 1 : 0));
            ones += b;
            REQUIRE(ones <= 1);
            REQUIRE(field(out, 0, k.n * k.T) == idx);
            REQUIRE((out >> work) == 0);
        }
    }
}

TEST_CASE("autocallable pipeline with a binary payoff on every path") {
    Autocallable a = small_autocall();
    a.schedule = {{std::exp(-10.0), 1, 0.49}};
    const auto f = fit(poly::TargetFunction(autocall_clause(a)), 6);
    const auto p = build_autocallable_pipeline(a, f.phases);
    CHECK(quantum_price(p, a.joint_probs) == doctest::Approx(0.49).epsilon(1e-10));
}

TEST_CASE("autocallable pipeline matches path enumeration") {
    const Autocallable a = small_autocall();
    const auto f = fit(poly::TargetFunction(autocall_clause(a)), 20);
    const auto p = build_autocallable_pipeline(a, f.phases);
    const auto pair = make_price_pair(classical_price_autocallable(a),
                                      quantum_price(p, a.joint_probs), f.poly.max_err);
    INFO("classical " << pair.classical << " quantum " << pair.quantum);
    CHECK(pair.within_budget());
    CHECK(pair.classical > 0.0);
}

TEST_CASE("autocallable normalisation above one") {
    Autocallable a = small_autocall();
    a.schedule = {{std::exp(0.5), 1, 1.6}};
    CHECK(a.normalization() == 1.6);
    const auto f = fit(poly::TargetFunction(autocall_clause(a)), 20);
    const auto p = build_autocallable_pipeline(a, f.phases);
    const auto pair = make_price_pair(classical_price_autocallable(a),
                                      quantum_price(p, a.joint_probs), f.poly.max_err, 1.6);
    CHECK(pair.within_budget());
}

TEST_CASE("final clause amplitude on a single register") {
    // K_T = 1, p = 5, s = 32 on a 6-qubit unsigned register
    const poly::TargetFunction t(poly::AutocallClause{1.0, 5, 32.0, 1.0});
    const auto f = fit(t, 20);
    const FixedPointFormat y{6, 5, false, 0.0};
    const auto q = circ::build_qsp(circ::build_u_sqrt(y), f.phases);
    for (std::uint64_t x = 0; x < y.levels(); ++x) {
        const auto st = sim::run(q.circuit, sim::StateVector::basis(q.circuit.width(), x));
        const double amp = std::sqrt(sim::probability(st, q.success));
        const double a = std::sqrt(y.decode(x) / 32.0);
        const double want = std::sqrt(1.0 - (1.0 - std::exp(y.decode(x) - 32.0)));
        CHECK(std::abs(amp - want) <= 1e-3);
        CHECK(std::abs(amp - std::abs(poly::eval(f.poly, a))) <= 1e-6);
    }
}
