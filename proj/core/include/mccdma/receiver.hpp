#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mccdma/channel.hpp"
#include "mccdma/link.hpp"
#include "mccdma/txchain.hpp"

namespace mccdma {

/// Despreading correlator bank of one user. For symbol slot j, substream r and
/// subcarrier m (0-based) it returns
///
///   z = e^{-j phase} / S * sum_i y[jS + D + i] conj(carrier_m[i]) C[i / Q] a_r[w(i)]
///
/// where D is the reference path delay in samples and S the samples per symbol.
/// With this normalisation the desired term is sqrt(2P) A d; squaring and
/// multiplying by T^2 / 4 gives the (P/2) A^2 T^2 of a passband integrator.
class Correlator {
public:
    Correlator(const Modulator& modulator, const PnSequence& pn);

    // All R*M outputs of one slot, out[m * R + r].
    void correlate_slot(const BasebandFrame& frame, int slot, const PathTap& reference, std::span<Sample> out) const;
    Sample correlate(const BasebandFrame& frame, int slot, int r, int m, const PathTap& reference) const;

private:
    const Modulator* modulator_;
    const PnSequence* pn_;
};

// Scale between our correlator output and a passband integrator over T.
double passband_correlator_scale(const LinkConfig& config);

struct BitDecisions {
    UserSymbols bits;
    std::int64_t errors = 0;  // against the reference, when one was given
    std::int64_t compared = 0;
};

/// Coherent demodulation, PN and Walsh despreading, sign of the real part.
/// Throws ConfigError without a channel reference (the receiver must be synchronised).
BitDecisions recover_bits(const BasebandFrame& frame, int user, const Modulator& modulator, const PnSequence& pn,
                          const std::optional<PathTap>& channel_ref, const UserSymbols* reference = nullptr);

BitDecisions recover_bits(const BasebandFrame& frame, int user, const WalshMatrix& walsh, const PnSequence& pn,
                          const LinkConfig& config, const std::optional<PathTap>& channel_ref,
                          const UserSymbols* reference = nullptr);

enum Component : int { kDs = 0, kMpi, kIssi, kIci, kMui, kNoise, kComponentCount };

template <typename T>
struct Components {
    std::array<T, kComponentCount> values{};

    T& operator[](Component c) { return values[static_cast<std::size_t>(c)]; }
    const T& operator[](Component c) const { return values[static_cast<std::size_t>(c)]; }
    T sum() const {
        T s{};
        for (const auto& v : values) s += v;
        return s;
    }
};

struct CorrelatorOutput {
    double z_total = 0.0;
    Components<double> components;
    int user = 0;
    int substream = 0;
    int subcarrier = 0;
    int slot = 0;

    double interference() const { return components.sum() - components[kDs]; }
};

/// Complex version: z_total is the correlation of the received frame itself, each
/// component that of its own re-synthesised sub-frame.
struct ComplexDecomposition {
    Sample z_total;
    Components<Sample> components;
    int slot = 0;
};

/// Splits the reference correlator (user 1, substream 1, subcarrier 1) into desired,
/// multipath, inter-substream, inter-carrier, multi-user and noise parts, for every
/// slot of the block. Only defined before an amplifier: a nonlinear scenario throws
/// UnsupportedModeError. The block must have been run with keep_noise when noise is on.
std::vector<ComplexDecomposition> decompose_complex(const LinkSimulator& link, const TrialBlock& block);
std::vector<CorrelatorOutput> decompose_correlator_output(const LinkSimulator& link, const TrialBlock& block);

struct InterferenceVariances {
    double mpi = 0.0;
    double issi = 0.0;
    double ici = 0.0;
    double mui = 0.0;
    double noise = 0.0;
    // Mean of z_DS^2 over the same symbols.
    double signal = 0.0;
    std::int64_t symbols = 0;

    double total() const { return mpi + issi + ici + mui + noise; }
};

/// Unbiased sample variances E|z - mean z|^2 of each complex component over n_symbols
/// reference-slot symbols. Taken over both quadratures, so for circular noise the
/// variance is twice the variance on the decision rail.
InterferenceVariances estimate_interference_variances(const Scenario& scenario, double ebn0_db,
                                                      std::int64_t n_symbols, std::uint64_t seed);

}  // namespace mccdma
