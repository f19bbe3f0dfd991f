#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mccdma/codes.hpp"

namespace mccdma {

using Sample = std::complex<double>;

/// System dimensions of the multi-code multi-carrier link.
struct LinkConfig {
    int users = 1;          // K
    int substreams = 1;     // R
    int subcarriers = 1;    // M
    int walsh_order = 1;    // N_a
    int pn_length = 7;      // N_c, 2^n - 1
    double symbol_duration = 1.0;  // T_sym, seconds per subcarrier symbol
    int oversampling = 4;   // Q, samples per PN chip
    double power = 0.5;     // P, watts per user

    // Throws ConfigError when an invariant is broken.
    void validate() const;

    int samples_per_symbol() const noexcept { return oversampling * pn_length; }
    double sample_rate() const noexcept { return samples_per_symbol() / symbol_duration; }
    int bits_per_symbol() const noexcept { return substreams * subcarriers; }
    // Walsh chip boundaries fall on sample boundaries, so substream and
    // subcarrier orthogonality is exact rather than approximate.
    bool walsh_aligned() const noexcept { return samples_per_symbol() % walsh_order == 0; }
};

/// BPSK symbols of one user, d_krm in {+1, -1}, for a number of symbol slots.
class UserSymbols {
public:
    UserSymbols() = default;
    UserSymbols(int user, int substreams, int subcarriers, int slots);

    int user() const noexcept { return user_; }
    int substreams() const noexcept { return substreams_; }
    int subcarriers() const noexcept { return subcarriers_; }
    int slots() const noexcept { return slots_; }

    // r in [0, R), m in [0, M), slot in [0, slots)
    std::int8_t at(int r, int m, int slot) const { return values_[index(r, m, slot)]; }
    void set(int r, int m, int slot, int value);

    std::span<const std::int8_t> values() const noexcept { return values_; }

private:
    std::size_t index(int r, int m, int slot) const {
        return (static_cast<std::size_t>(slot) * subcarriers_ + m) * substreams_ + r;
    }
    int user_ = 0;
    int substreams_ = 0;
    int subcarriers_ = 0;
    int slots_ = 0;
    std::vector<std::int8_t> values_;
};

/// Complex-envelope sample stream.
struct BasebandFrame {
    std::vector<Sample> samples;
    double sample_rate = 1.0;
    double t0 = 0.0;

    std::size_t size() const noexcept { return samples.size(); }
    double mean_power() const;
};

/// Round-robin split: bit i goes to lane i % lanes, slot i / lanes.
std::vector<std::vector<int>> serial_to_parallel(std::span<const int> bits, int lanes);
std::vector<int> parallel_to_serial(const std::vector<std::vector<int>>& lanes);

// Serial user stream -> d_krm: first split over R substreams, then each
// substream over M subcarriers. The stream must hold R*M*slots bits.
UserSymbols split_user_bits(std::span<const int> bits, int user, const LinkConfig& config);
std::vector<int> merge_user_bits(const UserSymbols& symbols);

/// Super-stream chips sum_r d_r * a_r[n] for one symbol; walsh rows 0..R-1 serve substreams 1..R.
std::vector<int> multicode_spread(std::span<const int> substream_symbols, const WalshMatrix& walsh);

/// Centre frequency of subcarrier m (1-based): m * N_a / T_sym.
double subcarrier_frequency(int m, const LinkConfig& config);

/// Precomputed carrier and chip-index tables for one LinkConfig. Turns UserSymbols
/// into a frame: sqrt(2P) * C(t) * sum_m sum_r d_rm a_r(t) exp(j 2 pi f_m t).
class Modulator {
public:
    Modulator(const LinkConfig& config, WalshMatrix walsh);

    const LinkConfig& config() const noexcept { return config_; }
    const WalshMatrix& walsh() const noexcept { return walsh_; }

    BasebandFrame modulate(const UserSymbols& symbols, const PnSequence& pn) const;

    // Only (r, m) slots for which include(r, m) is true contribute.
    template <typename Predicate>
    BasebandFrame modulate_masked(const UserSymbols& symbols, const PnSequence& pn, Predicate include) const {
        std::vector<std::uint8_t> mask(static_cast<std::size_t>(config_.substreams * config_.subcarriers));
        for (int m = 0; m < config_.subcarriers; ++m) {
            for (int r = 0; r < config_.substreams; ++r) {
                mask[static_cast<std::size_t>(m * config_.substreams + r)] = include(r, m) ? 1 : 0;
            }
        }
        return modulate_impl(symbols, pn, mask);
    }

    // exp(j 2 pi f_m t) for sample i of a symbol (t = i / fs); m is 0-based.
    Sample carrier(int m, int i) const { return carriers_[static_cast<std::size_t>(i * config_.subcarriers + m)]; }
    int walsh_chip(int i) const { return walsh_chip_[static_cast<std::size_t>(i)]; }
    int pn_chip(int i) const { return i / config_.oversampling; }

private:
    BasebandFrame modulate_impl(const UserSymbols& symbols, const PnSequence& pn,
                                std::span<const std::uint8_t> mask) const;
    void check(const UserSymbols& symbols, const PnSequence& pn) const;

    LinkConfig config_;
    WalshMatrix walsh_;
    std::vector<Sample> carriers_;    // [sample][subcarrier]
    std::vector<int> walsh_chip_;     // sample -> Walsh chip index
};

BasebandFrame modulate_user(const UserSymbols& symbols, const WalshMatrix& walsh, const PnSequence& pn,
                            const LinkConfig& config);

}  // namespace mccdma
