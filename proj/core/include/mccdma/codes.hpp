#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mccdma {

// A spreading chip, always +1 or -1.
using Chip = std::int8_t;

/// Square Hadamard matrix of +-1 chips, built by Sylvester doubling.
/// Row 0 is all ones and distinct rows are mutually orthogonal.
class WalshMatrix {
public:
    WalshMatrix() = default;

    int order() const noexcept { return order_; }
    std::span<const Chip> row(int index) const;
    Chip at(int row, int column) const { return chips_[static_cast<std::size_t>(row * order_ + column)]; }

private:
    friend WalshMatrix generate_walsh(int order);
    int order_ = 0;
    std::vector<Chip> chips_;
};

WalshMatrix generate_walsh(int order);

/// One period of a maximal-length LFSR sequence mapped to chips (bit 0 -> +1, bit 1 -> -1).
struct PnSequence {
    int degree = 0;
    std::vector<int> taps;
    std::uint32_t seed = 0;
    std::vector<Chip> chips;

    std::size_t length() const noexcept { return chips.size(); }
};

// Built-in primitive polynomials for degrees 3..10, as exponent lists
// ({3, 1} is x^3 + x + 1; the constant term is implicit).
// Throws DimensionError outside the table.
std::span<const int> primitive_taps(int degree);

/// Fibonacci LFSR with recurrence a[i+n] = a[i] ^ XOR_{t in taps, t < n} a[i+t].
/// Bit j of `seed` is the initial a[j]. The result is checked to have period exactly
/// 2^degree - 1; a non-primitive tap set raises DegenerateError.
PnSequence generate_msequence(int degree, std::span<const int> taps, std::uint32_t seed);

// Register state reached after `steps` clock cycles from `seed`. Seeding
// generate_msequence with it yields the same sequence cyclically advanced by `steps`.
std::uint32_t advance_lfsr_state(int degree, std::span<const int> taps, std::uint32_t seed,
                                 std::uint64_t steps);

// One PN sequence per user from a single polynomial: user k is the base sequence
// advanced by k * floor(N_c / users) chips. Requires users <= N_c.
std::vector<PnSequence> assign_user_codes(int degree, std::span<const int> taps, int users);

/// sum_i a[i] * b[(i + shift) mod L], exact.
std::int64_t periodic_correlation(std::span<const Chip> a, std::span<const Chip> b, std::int64_t shift);

}  // namespace mccdma
