#include "mccdma/codes.hpp"

#include <array>
#include <string>

#include "mccdma/errors.hpp"

namespace mccdma {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct TapEntry {
    int degree;
    std::array<int, 4> taps;
    int count;
};

constexpr std::array<TapEntry, 8> kPrimitiveTable{{
    {3, {3, 1, 0, 0}, 2},
    {4, {4, 1, 0, 0}, 2},
    {5, {5, 2, 0, 0}, 2},
    {6, {6, 1, 0, 0}, 2},
    {7, {7, 1, 0, 0}, 2},
    {8, {8, 4, 3, 2}, 4},
    {9, {9, 4, 0, 0}, 2},
    {10, {10, 3, 0, 0}, 2},
}};

// Feedback mask over register positions: bit t set when a[i+t] enters the XOR.
std::uint32_t feedback_mask(int degree, std::span<const int> taps) {
    if (taps.empty()) {
        throw DegenerateError("LFSR tap set is empty");
    }
    std::uint32_t mask = 1U;  // a[i], the x^0 term of the polynomial
    for (int t : taps) {
        if (t <= 0 || t > degree) {
            throw DomainError("LFSR tap " + std::to_string(t) + " outside [1, " + std::to_string(degree) + "]");
        }
        if (t < degree) {
            mask ^= 1U << t;
        }
    }
    return mask;
}

void check_degree(int degree) {
    if (degree < 2 || degree > 31) {
        throw DimensionError("LFSR degree must lie in [2, 31], got " + std::to_string(degree));
    }
}

std::uint32_t step(std::uint32_t state, std::uint32_t mask, int degree) {
    const auto fb = static_cast<std::uint32_t>(__builtin_parity(state & mask));
    return (state >> 1) | (fb << (degree - 1));
}

}  // namespace

std::span<const Chip> WalshMatrix::row(int index) const {
    if (index < 0 || index >= order_) {
        throw DimensionError("Walsh row " + std::to_string(index) + " out of range for order " +
                             std::to_string(order_));
    }
    return {chips_.data() + static_cast<std::size_t>(index * order_), static_cast<std::size_t>(order_)};
}

WalshMatrix generate_walsh(int order) {
    if (!is_power_of_two(order)) {
        throw DimensionError("Walsh order must be a positive power of two, got " + std::to_string(order));
    }
    WalshMatrix w;
    w.order_ = order;
    w.chips_.assign(static_cast<std::size_t>(order) * order, 1);
    // H_{2n} = [[H_n, H_n], [H_n, -H_n]]
    for (int n = 1; n < order; n *= 2) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const Chip h = w.chips_[static_cast<std::size_t>(i * order + j)];
                w.chips_[static_cast<std::size_t>(i * order + j + n)] = h;
                w.chips_[static_cast<std::size_t>((i + n) * order + j)] = h;
                w.chips_[static_cast<std::size_t>((i + n) * order + j + n)] = static_cast<Chip>(-h);
            }
        }
    }
    return w;
}

std::span<const int> primitive_taps(int degree) {
    for (const auto& e : kPrimitiveTable) {
        if (e.degree == degree) {
            return {e.taps.data(), static_cast<std::size_t>(e.count)};
        }
    }
    throw DimensionError("no built-in primitive polynomial for degree " + std::to_string(degree) +
                         "; supply taps explicitly");
}

std::uint32_t advance_lfsr_state(int degree, std::span<const int> taps, std::uint32_t seed,
                                 std::uint64_t steps) {
    check_degree(degree);
    const std::uint32_t mask = feedback_mask(degree, taps);
    const std::uint32_t full = (1U << degree) - 1U;
    if ((seed & full) == 0 || seed > full) {
        throw DegenerateError("LFSR seed must be a nonzero " + std::to_string(degree) + "-bit state");
    }
    const std::uint64_t period = full;
    std::uint32_t state = seed;
    for (std::uint64_t i = 0; i < steps % period; ++i) {
        state = step(state, mask, degree);
    }
    return state;
}

PnSequence generate_msequence(int degree, std::span<const int> taps, std::uint32_t seed) {
    check_degree(degree);
    const std::uint32_t mask = feedback_mask(degree, taps);
    const std::uint32_t full = (1U << degree) - 1U;
    if ((seed & full) == 0 || seed > full) {
        throw DegenerateError("LFSR seed must be a nonzero " + std::to_string(degree) + "-bit state");
    }

    PnSequence pn;
    pn.degree = degree;
    pn.taps.assign(taps.begin(), taps.end());
    pn.seed = seed;
    pn.chips.resize(full);

    std::uint32_t state = seed;
    for (std::uint32_t i = 0; i < full; ++i) {
        pn.chips[i] = (state & 1U) ? Chip{-1} : Chip{1};
        state = step(state, mask, degree);
        if (state == seed && i + 1 < full) {
            throw DegenerateError("taps are not primitive: period " + std::to_string(i + 1) + " < " +
                                  std::to_string(full));
        }
    }
    return pn;
}

std::vector<PnSequence> assign_user_codes(int degree, std::span<const int> taps, int users) {
    const std::uint64_t length = (1ULL << degree) - 1ULL;
    if (users < 1 || static_cast<std::uint64_t>(users) > length) {
        throw DimensionError("cannot assign " + std::to_string(users) + " distinct shifts of a length-" +
                             std::to_string(length) + " sequence");
    }
    const std::uint64_t spacing = length / static_cast<std::uint64_t>(users);
    std::vector<PnSequence> codes;
    codes.reserve(static_cast<std::size_t>(users));
    std::uint32_t state = 1U;
    for (int k = 0; k < users; ++k) {
        codes.push_back(generate_msequence(degree, taps, state));
        state = advance_lfsr_state(degree, taps, state, spacing);
    }
    return codes;
}

std::int64_t periodic_correlation(std::span<const Chip> a, std::span<const Chip> b, std::int64_t shift) {
    if (a.size() != b.size()) {
        throw DimensionError("periodic_correlation: lengths " + std::to_string(a.size()) + " and " +
                             std::to_string(b.size()) + " differ");
    }
    const auto len = static_cast<std::int64_t>(a.size());
    if (len == 0) {
        return 0;
    }
    std::int64_t s = shift % len;
    if (s < 0) {
        s += len;
    }
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < len; ++i) {
        sum += static_cast<std::int64_t>(a[static_cast<std::size_t>(i)]) *
               b[static_cast<std::size_t>((i + s) % len)];
    }
    return sum;
}

}  // namespace mccdma
