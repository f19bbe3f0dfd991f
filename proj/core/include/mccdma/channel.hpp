#pragma once

#include <random>
#include <span>
#include <vector>

#include "mccdma/txchain.hpp"

namespace mccdma {

using Rng = std::mt19937_64;

struct PathTap {
    double gain = 1.0;   // A_kl
    int delay = 0;       // PN chips
    double phase = 0.0;  // radians in [0, 2 pi)
};

/// Per-user tap lists, taps[k][l].
struct ChannelRealization {
    std::vector<std::vector<PathTap>> taps;
    int paths = 0;

    int users() const noexcept { return static_cast<int>(taps.size()); }
};

struct NoiseSpec {
    double ebn0_db = 0.0;
    bool enabled = true;
};

// Mean-square path gains 10^{-l * decay_db / 10}, normalised to sum to one.
std::vector<double> power_delay_profile(int paths, double decay_db);

/// Path l of user k has delay l chips and gain drawn from the power-delay profile.
/// With `fading` the gain is Rayleigh with that mean square; without it the gain is
/// the profile's root-mean-square value. Phases are uniform on [0, 2 pi) either way.
ChannelRealization draw_channel(Rng& rng, int users, int paths, double decay_db, bool fading = true);

/// out[i] = sum_l gain_l e^{j phase_l} in[i - delay_l * samples_per_chip], zero before the
/// frame start; the output keeps the input length.
BasebandFrame apply_multipath(const BasebandFrame& frame, std::span<const PathTap> taps, int samples_per_chip);

// Adds the multipath output of `frame` into `acc`, which must have the same length.
void accumulate_multipath(BasebandFrame& acc, const BasebandFrame& frame, std::span<const PathTap> taps,
                          int samples_per_chip);

// Noise density for a measured energy per information bit.
double noise_density(double eb, double ebn0_db);

// Adds complex white Gaussian noise with per-component variance (N0 / 2) * sample_rate.
BasebandFrame add_awgn(const BasebandFrame& frame, const NoiseSpec& noise, double eb_measured, Rng& rng);

// The noise alone, same length and rate as `like`.
BasebandFrame awgn_frame(const BasebandFrame& like, double n0, Rng& rng);

}  // namespace mccdma
