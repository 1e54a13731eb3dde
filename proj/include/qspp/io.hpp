#pragma once

/**
 * @file
 * JSON encodings of polynomials, phase factors, circuits, resource counts,
 * price reports and contracts. Keys are emitted in sorted order so that
 * identical inputs serialise to identical bytes.
 *
 * Malformed documents raise InvalidArgument naming the offending field.
 */

#include "qspp/estimator.hpp"
#include "qspp/polyapprox.hpp"
#include "qspp/pricing.hpp"
#include "qspp/qspphase.hpp"
#include "qspp/resources.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qspp::io {

using json = nlohmann::json;

/// Reads and parses a file. @throws InvalidArgument if unreadable or not JSON.
[[nodiscard]] json read_json_file(const std::string &path);
/// Writes `j` with two-space indentation and a trailing newline.
void write_json_file(const std::string &path, const json &j);

[[nodiscard]] json to_json(const poly::ChebyshevPolynomial &p);
[[nodiscard]] poly::ChebyshevPolynomial poly_from_json(const json &j);

[[nodiscard]] json to_json(const qsp::PhaseFactors &p);
[[nodiscard]] qsp::PhaseFactors phases_from_json(const json &j);

[[nodiscard]] json to_json(const circ::Circuit &c);
[[nodiscard]] circ::Circuit circuit_from_json(const json &j);

[[nodiscard]] json to_json(const circ::ResourceCount &r);
[[nodiscard]] circ::ResourceRules rules_from_json(const json &j);

[[nodiscard]] json to_json(const pricing::PricePair &p);
[[nodiscard]] json to_json(const est::AdvantageReport &r);
[[nodiscard]] json to_json(const est::Improvement &i);
[[nodiscard]] std::vector<est::MethodRow> method_rows_from_json(const json &j);

[[nodiscard]] json to_json(const circ::FixedPointFormat &f);
[[nodiscard]] circ::FixedPointFormat format_from_json(const json &j);

/**
 * @brief Target description.
 *
 * {"kind": "autocall", "strike_return", "p", "s", "norm"},
 * {"kind": "call", "spot", "strike", "f_max", "p", "s"} or
 * {"kind": "general", "A", "B", "C", "p", "s"}.
 */
[[nodiscard]] poly::TargetFunction target_from_json(const json &j);

/**
 * @brief European call: spot, strike, format, optional f_max, and either
 *        "probs" or "distribution": {"mu", "sigma"}.
 */
[[nodiscard]] pricing::EuropeanCall call_from_json(const json &j);

/**
 * @brief Autocallable: format, timesteps, schedule [{threshold, timestep,
 *        payoff}], barrier, strike_return, and either "joint_probs" or
 *        "marginals": [{"mu", "sigma"}] (one per timestep).
 */
[[nodiscard]] pricing::Autocallable autocall_from_json(const json &j);

[[nodiscard]] poly::Parity parity_from_string(const std::string &s);
[[nodiscard]] std::string to_string(poly::Parity p);

} // namespace qspp::io
