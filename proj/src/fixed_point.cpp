#include "qspp/fixed_point.hpp"

#include "qspp/errors.hpp"

#include <cmath>
#include <sstream>

namespace qspp::circ {

void FixedPointFormat::validate() const {
    if (n < 1 || n > 62) throw InvalidArgument("fixed point: n must lie in [1, 62]");
    if (p < 0 || p > n) throw InvalidArgument("fixed point: p must lie in [0, n]");
    if (is_signed && p < 1)
        throw InvalidArgument("fixed point: signed format needs a sign digit (p >= 1)");
    if (!(shift >= 0.0) || !std::isfinite(shift))
        throw InvalidArgument("fixed point: shift must be finite and non-negative");
}

double FixedPointFormat::resolution() const { return std::ldexp(1.0, -frac_bits()); }

double FixedPointFormat::min_value() const {
    return is_signed ? -std::ldexp(1.0, p - 1) : 0.0;
}

double FixedPointFormat::max_value() const {
    return is_signed ? std::ldexp(1.0, p - 1) : std::ldexp(1.0, p);
}

std::int64_t FixedPointFormat::to_integer(std::uint64_t bits) const {
    bits &= levels() - 1;
    if (is_signed && (bits >> (n - 1)) & 1U)
        return static_cast<std::int64_t>(bits) - static_cast<std::int64_t>(levels());
    return static_cast<std::int64_t>(bits);
}

std::uint64_t FixedPointFormat::from_integer(std::int64_t value) const {
    const auto lo = is_signed ? -static_cast<std::int64_t>(levels() / 2) : 0;
    const auto hi = is_signed ? static_cast<std::int64_t>(levels() / 2)
                              : static_cast<std::int64_t>(levels());
    if (value < lo || value >= hi)
        throw RangeError("fixed point: integer " + std::to_string(value) +
                         " outside " + describe());
    return static_cast<std::uint64_t>(value) & (levels() - 1);
}

double FixedPointFormat::decode(std::uint64_t bits) const {
    return std::ldexp(static_cast<double>(to_integer(bits)), -frac_bits());
}

std::uint64_t FixedPointFormat::encode(double value) const {
    const double scaled = std::ldexp(value, frac_bits());
    const double rounded = std::nearbyint(scaled);
    if (!std::isfinite(value) || std::abs(scaled - rounded) > 1e-9 * (1.0 + std::abs(scaled)))
        throw RangeError("fixed point: value not on the " + describe() + " grid");
    return from_integer(static_cast<std::int64_t>(rounded));
}

std::string FixedPointFormat::describe() const {
    std::ostringstream os;
    os << (is_signed ? "signed" : "unsigned") << "(n=" << n << ", p=" << p;
    if (shift != 0.0) os << ", shift=" << shift;
    os << ")";
    return os.str();
}

} // namespace qspp::circ
