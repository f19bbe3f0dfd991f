#pragma once

#include <vector>

#include "mccdma/channel.hpp"
#include "mccdma/codes.hpp"
#include "mccdma/scenario.hpp"
#include "mccdma/txchain.hpp"

namespace mccdma {

/// One block-fading trial: the data of every user, the channel and the frame at the
/// input of user 1's receiver.
struct TrialBlock {
    std::vector<UserSymbols> symbols;
    ChannelRealization channel;
    BasebandFrame received;
    BasebandFrame noise;  // empty unless kept
    double eb = 0.0;      // energy per information bit of user 1's transmitted frame
    double n0 = 0.0;      // zero when noise is off
    PathTap reference;    // receiver sync for user 1
};

/// Immutable per-scenario transmit machinery (codes, modulator tables). Thread safe.
class LinkSimulator {
public:
    explicit LinkSimulator(const Scenario& scenario);

    const Scenario& scenario() const noexcept { return scenario_; }
    const Modulator& modulator() const noexcept { return modulator_; }
    const PnSequence& pn(int user) const { return pn_.at(static_cast<std::size_t>(user)); }

    // Transmit frame of one user after the optional predistorter and amplifier.
    BasebandFrame transmit(const UserSymbols& symbols) const;

    TrialBlock run_block(Rng& rng, double ebn0_db, bool keep_noise = false) const;

private:
    Scenario scenario_;
    Modulator modulator_;
    std::vector<PnSequence> pn_;
};

UserSymbols random_symbols(Rng& rng, int user, const LinkConfig& config, int slots);

}  // namespace mccdma
