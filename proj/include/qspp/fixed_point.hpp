#pragma once

#include <cstdint>
#include <string>

namespace qspp::circ {

/**
 * @brief Binary fixed-point layout of an n-qubit register.
 *
 * Bit 0 is the least significant. Unsigned values lie in [0, 2^p); signed
 * values use two's complement with p counting the sign digit, so they lie in
 * [-2^{p-1}, 2^{p-1}). The resolution is 2^{-(n-p)}. `shift` records a
 * classical offset the surrounding pipeline adds before the value is used;
 * the codec itself ignores it.
 */
struct FixedPointFormat {
    int n = 1;
    int p = 0;
    bool is_signed = false;
    double shift = 0.0;

    /// @throws InvalidArgument on inconsistent fields.
    void validate() const;

    [[nodiscard]] int frac_bits() const noexcept { return n - p; }
    [[nodiscard]] double resolution() const;
    [[nodiscard]] double min_value() const;
    /// Exclusive upper bound.
    [[nodiscard]] double max_value() const;
    [[nodiscard]] std::uint64_t levels() const noexcept {
        return std::uint64_t{1} << n;
    }

    /// Integer represented by the bit pattern (sign-extended if signed).
    [[nodiscard]] std::int64_t to_integer(std::uint64_t bits) const;
    [[nodiscard]] std::uint64_t from_integer(std::int64_t value) const;

    [[nodiscard]] double decode(std::uint64_t bits) const;
    /// @throws RangeError when value is off-grid or out of range.
    [[nodiscard]] std::uint64_t encode(double value) const;

    [[nodiscard]] std::string describe() const;
};

} // namespace qspp::circ
