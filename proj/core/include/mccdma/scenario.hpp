#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mccdma/hpa.hpp"
#include "mccdma/txchain.hpp"

namespace mccdma {

struct ChannelSpec {
    int paths = 1;
    double decay_db = 0.0;
    bool fading = false;
};

struct StoppingRule {
    std::int64_t min_errors = 100;
    std::int64_t max_bits = 10'000'000;
    // Permits min_errors below 100 (tests, quick looks).
    bool allow_low_min_errors = false;
};

/// Everything needed to reproduce one BER curve.
struct Scenario {
    std::string name = "scenario";
    LinkConfig link;
    int pn_degree = 3;
    std::vector<int> pn_taps;  // empty: built-in table
    ChannelSpec channel;
    HpaMode hpa_mode = HpaMode::bypass;
    double ibo_db = 7.0;
    SalehParams saleh;
    // Counter-rotate by the mean AM/PM rotation of the reference user's amplifier
    // as well as by the channel phase.
    bool track_hpa_phase = true;
    bool noise = true;
    std::vector<double> ebn0_db{0.0};
    StoppingRule stopping;
    std::uint64_t seed = 1;
    int slots_per_block = 8;

    // Throws ConfigError.
    void validate() const;
    std::vector<int> resolved_taps() const;
};

}  // namespace mccdma
