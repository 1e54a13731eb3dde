#include <doctest.h>

#include "qspp/builders.hpp"
#include "qspp/errors.hpp"
#include "qspp/io.hpp"

#include <cmath>

using namespace qspp;
using io::json;

TEST_CASE("polynomial and phase round trip") {
    poly::ChebyshevPolynomial p;
    p.parity = poly::Parity::Even;
    p.degree = 4;
    p.coeffs = {0.1, -0.2, 0.3};
    p.max_err = 1.5e-4;
    p.fit_domain = {0.0, 0.75};
    const auto back = io::poly_from_json(json::parse(io::to_json(p).dump()));
    CHECK(back.coeffs == p.coeffs);
    CHECK(back.degree == 4);
    CHECK(back.max_err == p.max_err);
    CHECK(back.fit_domain.hi == 0.75);

    json bad = io::to_json(p);
    bad["coeffs"] = {0.1};
    CHECK_THROWS_AS((void)io::poly_from_json(bad), InvalidArgument);
    bad = io::to_json(p);
    bad.erase("parity");
    CHECK_THROWS_AS((void)io::poly_from_json(bad), InvalidArgument);

    const qsp::PhaseFactors ph{{0.25, -1.0, 0.5}};
    const auto phb = io::phases_from_json(io::to_json(ph));
    CHECK(phb.phases == ph.phases);
    CHECK_THROWS_AS((void)io::phases_from_json(json{{"phases", json::array()}}), InvalidArgument);
    CHECK_THROWS_AS((void)io::phases_from_json(json{{"phases", {1.0}}, {"convention", "other"}}),
                    InvalidArgument);
}

TEST_CASE("circuit round trip preserves every gate") {
    const auto u = circ::build_u_sqrt({4, 2, false, 0.0});
    const json j = io::to_json(u.circuit);
    const auto c = io::circuit_from_json(json::parse(j.dump()));
    CHECK(io::to_json(c) == j);
    CHECK(c.width() == u.circuit.width());
    for (std::uint64_t x = 0; x < 16; ++x) {
        const auto a = sim::run(u.circuit, sim::StateVector::basis(u.circuit.width(), x));
        const auto b = sim::run(c, sim::StateVector::basis(c.width(), x));
        for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i] == b[i]);
    }

    json bad = j;
    bad["gates"][0]["target"] = 99;
    CHECK_THROWS_AS((void)io::circuit_from_json(bad), InvalidArgument);
    bad = j;
    bad["gates"][0]["kind"] = "swap";
    CHECK_THROWS_AS((void)io::circuit_from_json(bad), InvalidArgument);
}

TEST_CASE("contracts and targets from json") {
    const auto call = io::call_from_json(json::parse(R"({
        "spot": 100, "strike": 110, "format": {"n": 5, "p": 3, "signed": true},
        "distribution": {"mu": 0.1, "sigma": 0.5}})"));
    CHECK(call.probs.size() == 32);
    CHECK(call.strike == 110.0);
    CHECK_THROWS_AS((void)io::call_from_json(json::parse(R"({"spot": 100})")), InvalidArgument);
    CHECK_THROWS_AS((void)io::call_from_json(json::parse(R"({
        "spot": "x", "strike": 110, "format": {"n": 5, "p": 3}, "probs": []})")),
                    InvalidArgument);

    const auto ac = io::autocall_from_json(json::parse(R"({
        "format": {"n": 3, "p": 2, "signed": true}, "timesteps": 2,
        "schedule": [{"threshold": 1.5, "timestep": 1, "payoff": 0.8}],
        "barrier": 0.6, "strike_return": 1.0,
        "marginals": [{"sigma": 0.8}, {"mu": -0.3, "sigma": 1.0}]})"));
    CHECK(ac.joint_probs.size() == 64);
    CHECK_THROWS_AS((void)io::autocall_from_json(json::parse(R"({
        "format": {"n": 3, "p": 2, "signed": true}, "timesteps": 2, "barrier": 0.6,
        "strike_return": 1.0, "marginals": [{"sigma": 0.8}]})")),
                    InvalidArgument);

    const auto t = io::target_from_json(json::parse(R"({"kind": "autocall", "strike_return": 1, "p": 5, "s": 32})"));
    CHECK(t(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)io::target_from_json(json::parse(R"({"kind": "put"})")), InvalidArgument);
}

TEST_CASE("method rows and rules") {
    const auto rows = io::method_rows_from_json(json::parse(R"([
        {"label": "a", "t_count": 10, "t_depth": 5, "logical_qubits": 3},
        {"label": "b", "t_count": 20, "t_depth": 5, "logical_qubits": 3, "source": "computed"}])"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].source == "computed");
    CHECK(rows[0].source == "published");
    CHECK_THROWS_AS((void)io::method_rows_from_json(json::parse(R"([{"label": "a"}])")), InvalidArgument);
    CHECK_THROWS_AS((void)io::method_rows_from_json(json::parse(R"({"label": "a"})")), InvalidArgument);

    const auto r = io::rules_from_json(json::parse(R"({"rotation_coefficient": 4.0})"));
    CHECK(r.rotation_coefficient == 4.0);
    CHECK(r.toffoli_t_count == 7);
    CHECK_THROWS_AS((void)io::rules_from_json(json::parse(R"({"toffoli_t_count": -1})")), InvalidArgument);
}

TEST_CASE("serialisation is byte-stable") {
    const auto rep = est::advantage_report(est::published_rows()[2], 1e-3, 0.32);
    CHECK(io::to_json(rep).dump(2) == io::to_json(rep).dump(2));
    const auto pair = pricing::make_price_pair(0.5, 0.5004, 1e-3);
    const json j = io::to_json(pair);
    CHECK(j.at("within_budget").get<bool>());
    CHECK(j.at("budget").get<double>() == 2e-3 + 1e-8);
}
