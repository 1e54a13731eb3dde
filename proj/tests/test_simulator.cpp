#include <doctest.h>

#include "circuit_oracle.hpp"
#include "qspp/builders.hpp"
#include "qspp/errors.hpp"
#include "qspp/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace qspp;
using namespace qspp::sim;
using qspp::circ::Circuit;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit random_circuit(std::mt19937_64 &rng, int width, int gates) {
    Circuit c;
    c.add_register("q", width);
    std::uniform_int_distribution<int> q(0, width - 1), kind(0, 6);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int k = 0; k < gates; ++k) {
        const int t = q(rng);
        int a = q(rng), b = q(rng);
        while (a == t) a = q(rng);
        while (b == t || b == a) b = q(rng);
        switch (kind(rng)) {
        case 0: c.h(t, {{a, false}}); break;
        case 1: c.x(t, {{a, true}, {b, false}}); break;
        case 2: c.ry(t, ang(rng), {{a, true}}); break;
        case 3: c.zphase(t, ang(rng)); break;
        case 4: c.h(t); break;
        case 5: c.compare({t}, {a}, b); break;
        default: c.phase(t, ang(rng), {{a, false}, {b, true}}); break;
        }
    }
    return c;
}

StateVector random_state(std::mt19937_64 &rng, int width) {
    StateVector s(width);
    std::normal_distribution<double> g;
    double n2 = 0.0;
    for (auto &a : s.amplitudes()) {
        a = amp_t(g(rng), g(rng));
        n2 += std::norm(a);
    }
    for (auto &a : s.amplitudes()) a /= std::sqrt(n2);
    return s;
}

double max_diff(const StateVector &a, const StateVector &b) {
    double m = 0.0;
    for (std::uint64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Discretised standard normal on 2^n midpoints of [-4, 4], normalised.
std::vector<double> normal_grid(int n) {
    const std::size_t N = std::size_t{1} << n;
    std::vector<double> p(N);
    double tot = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double x = -4.0 + 8.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(N);
        p[i] = std::exp(-0.5 * x * x);
        tot += p[i];
    }
    for (auto &v : p) v /= tot;
    return p;
}

} // namespace

TEST_CASE("single-gate examples") {
    Circuit h;
    h.add_register("q", 1);
    h.h(0);
    const auto s = run(h, StateVector(1));
    CHECK(std::abs(s[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s[1] - 1.0 / std::sqrt(2.0)) < 1e-15);

    Circuit xx;
    xx.add_register("q", 2);
    xx.x(0);
    xx.x(1);
    const auto t = run(xx, StateVector(2));
    CHECK(t[3] == amp_t(1.0));
    CHECK(std::abs(t[0]) == 0.0);
}

TEST_CASE("U_sqrt statevector example") {
    const auto u = circ::build_u_sqrt({3, 0, false, 0.0});
    const auto s = run(u.circuit, StateVector::basis(u.circuit.width(), 3));
    CHECK(zero_probability(s, u.out_zeros) == doctest::Approx(3.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("probability examples") {
    CHECK(zero_probability(StateVector(3), {0, 1, 2}) == 1.0);
    Circuit c;
    c.add_register("q", 2);
    c.h(0);
    c.h(1);
    const auto s = run(c, StateVector(2));
    CHECK(probability(s, ProjectorSpec{{0}, {0}}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(probability(s, ProjectorSpec{{}, {}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(probability(StateVector(2), ProjectorSpec{{1}, {1}}) == 0.0);
    CHECK_THROWS_AS((void)probability(s, ProjectorSpec{{2}, {0}}), InvalidArgument);
}

TEST_CASE("distribution injection") {
    std::vector<double> delta(8, 0.0);
    delta[5] = 1.0;
    const auto d = inject_distribution(5, delta, {1, 2, 4});
    CHECK(d[(1U << 1) | (1U << 4)] == amp_t(1.0));
    CHECK(d.norm() == 1.0);

    const std::vector<double> uniform(16, 1.0 / 16.0);
    const auto u = inject_distribution(4, uniform, {0, 1, 2, 3});
    for (std::uint64_t i = 0; i < 16; ++i) CHECK(u[i].real() == 0.25);

    const auto p = normal_grid(6);
    const auto s = inject_distribution(8, p, {0, 1, 2, 3, 4, 5});
    CHECK(std::abs(s.norm() - 1.0) < 1e-15);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::abs(s[i].real() - std::sqrt(p[i])) < 1e-15);
    CHECK(zero_probability(s, {6, 7}) == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS((void)inject_distribution(3, {0.5, 0.4}, {0}), InvalidArgument);
    CHECK_THROWS_AS((void)inject_distribution(3, {1.5, -0.5}, {0}), InvalidArgument);
    CHECK_THROWS_AS((void)inject_distribution(3, {0.5, 0.25, 0.25}, {0}), InvalidArgument);
}

TEST_CASE("capacity and width checks") {
    Circuit c;
    c.add_register("q", 8);
    CHECK_THROWS_AS((void)run(c, StateVector(8), {.width_cap = 6}), CapacityError);
    CHECK_THROWS_AS((void)run(c, StateVector(7)), InvalidArgument);
    CHECK_THROWS_AS((void)StateVector(30), CapacityError);
}

TEST_CASE("norm is preserved after every gate") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit c = random_circuit(rng, 6, 80);
        auto s = random_state(rng, 6);
        for (const auto &g : c.gates()) {
            apply(s, g);
            REQUIRE(std::abs(s.norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("gate application matches the dense oracle") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit c = random_circuit(rng, 5, 40);
        const auto s0 = random_state(rng, 5);
        const auto s1 = run(c, s0);
        Eigen::VectorXcd v(32);
        for (int i = 0; i < 32; ++i) v(i) = s0[static_cast<std::uint64_t>(i)];
        const Eigen::VectorXcd w = oracle::circuit_matrix(c) * v;
        for (int i = 0; i < 32; ++i)
            CHECK(std::abs(w(i) - s1[static_cast<std::uint64_t>(i)]) < 1e-12);
    }
}

TEST_CASE("linearity") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit c = random_circuit(rng, 5, 50);
        const auto a = random_state(rng, 5), b = random_state(rng, 5);
        const amp_t al(0.6, 0.3), be(-0.2, 0.7);
        StateVector mix(5);
        for (std::uint64_t i = 0; i < mix.size(); ++i) mix.amplitudes()[i] = al * a[i] + be * b[i];
        const auto ra = run(c, a), rb = run(c, b), rm = run(c, mix);
        double m = 0.0;
        for (std::uint64_t i = 0; i < mix.size(); ++i)
            m = std::max(m, std::abs(rm[i] - (al * ra[i] + be * rb[i])));
        CHECK(m < 1e-12);
    }
}

TEST_CASE("composition") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Circuit c1 = random_circuit(rng, 6, 40), c2 = random_circuit(rng, 6, 40);
        Circuit both = c1;
        both.append(c2);
        const auto s = random_state(rng, 6);
        CHECK(max_diff(run(c2, run(c1, s)), run(both, s)) < 1e-12);
    }
}

TEST_CASE("permutation circuits keep basis states exact") {
    const Circuit cmp = circ::build_comparator(3);
    const Circuit add = circ::build_const_adder({5, 2, true, 0.0}, 2.0, {5, 2, false, 0.0});
    for (const Circuit *c : {&cmp, &add}) {
        for (std::uint64_t in = 0; in < (std::uint64_t{1} << c->width()); in += 3) {
            const auto s = run(*c, StateVector::basis(c->width(), in));
            const std::uint64_t out = run_basis(*c, in);
            for (std::uint64_t i = 0; i < s.size(); ++i) {
                if (i == out) REQUIRE(s[i] == amp_t(1.0));
                else REQUIRE(std::abs(s[i]) < 1e-15);
            }
        }
    }
    Circuit h;
    h.add_register("q", 1);
    h.h(0);
    CHECK_THROWS_AS((void)run_basis(h, 0), InvalidArgument);
}

TEST_CASE("threaded runs are bit-identical") {
    std::mt19937_64 rng(5);
    const Circuit c = random_circuit(rng, 17, 60);
    const auto s = random_state(rng, 17);
    const auto one = run(c, s, {.threads = 1});
    const auto four = run(c, s, {.threads = 4});
    for (std::uint64_t i = 0; i < one.size(); ++i) REQUIRE(one[i] == four[i]);
}

TEST_CASE("rotation noise is seeded and bounded") {
    Circuit c;
    c.add_register("q", 1);
    c.ry(0, 1.0, {}, 1e-3);
    const auto exact = run(c, StateVector(1));
    const auto n1 = run(c, StateVector(1), {.rotation_noise = 1e-2, .seed = 9});
    const auto n2 = run(c, StateVector(1), {.rotation_noise = 1e-2, .seed = 9});
    CHECK(n1[0] == n2[0]);
    CHECK(n1[0] != exact[0]);
    // the gate's own precision bounds the angle shift: |d cos(theta/2)| <= eps / 2
    CHECK(std::abs(n1[0] - exact[0]) <= 0.5e-3 + 1e-15);
}

TEST_CASE("exact dyadic mode agrees with the statevector") {
    Circuit c;
    c.add_register("a", 3);
    c.add_register("b", 3);
    c.add_register("r", 1);
    for (int q = 0; q < 3; ++q) c.h(q);
    c.x(4);
    c.compare({0, 1, 2}, {3, 4, 5}, 6);
    c.phase(6, kPi, {{0, true}});
    c.h(1);
    const auto proj = ProjectorSpec{{6, 1}, {1, 0}};
    for (std::uint64_t in : {0ULL, 8ULL, 40ULL}) {
        const auto d = exact_probability(c, in, proj);
        const auto s = run(c, StateVector::basis(7, in));
        CHECK(d.value() == doctest::Approx(probability(s, proj)).epsilon(1e-14));
    }
    Circuit bad;
    bad.add_register("q", 1);
    bad.ry(0, 0.3);
    CHECK_THROWS_AS((void)exact_probability(bad, 0, ProjectorSpec{{0}, {0}}), InvalidArgument);
    CHECK(Dyadic{3, 3}.equals(6, 4));
    CHECK_FALSE(Dyadic{3, 3}.equals(7, 4));
}

TEST_CASE("state CSV dump") {
    Circuit c;
    c.add_register("q", 2);
    c.x(1);
    std::ostringstream os;
    write_state_csv(os, run(c, StateVector(2)));
    CHECK(os.str() == "index,bits,re,im,prob\n2,10,1,0,1\n");
}
