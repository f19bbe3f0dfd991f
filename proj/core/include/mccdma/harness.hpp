#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mccdma/analysis.hpp"
#include "mccdma/link.hpp"
#include "mccdma/scenario.hpp"

namespace mccdma {

struct RunReport {
    std::vector<BerRecord> records;
    std::vector<double> wall_seconds;    // per record
    std::vector<std::uint64_t> seeds;    // per record: stream key of the sweep point
    std::string config_echo;             // describe() of every scenario, in run order
    std::vector<std::string> warnings;   // monotonicity flags and similar

    void append(RunReport&& other);
};

struct TrialCount {
    std::int64_t errors = 0;
    std::int64_t bits = 0;
};

// One block of user 1's bits at one sweep point; pure function of its arguments.
TrialCount run_trial(const LinkSimulator& link, std::uint64_t master, std::uint64_t point, std::uint64_t trial,
                     double ebn0_db);

/// Monte Carlo BER of every sweep point. Trials are evaluated in chunks on up to
/// `workers` threads but merged strictly in trial order, and the point stops at the
/// first trial that satisfies the stopping rule, so the report does not depend on
/// the worker count.
RunReport run_scenario(const Scenario& scenario, int workers = 1);

/// Theoretical curve built from interference variances measured by correlator
/// decomposition over `symbols` reference symbols per point. Linear transmitter only.
RunReport theoretical_report(const Scenario& scenario, std::int64_t symbols = 1000,
                             ErfcArgument argument = ErfcArgument::sqrt_gamma);

std::span<const std::string_view> preset_names();
// Throws ConfigError for an unknown name. `base` supplies every field a preset does not set.
std::vector<Scenario> preset(std::string_view name, const Scenario& base);
std::vector<Scenario> preset(std::string_view name);
// Link, code and channel settings shared by the presets.
Scenario preset_base();

inline constexpr std::string_view kCsvHeader = "scenario,ebn0_db,k,r,m,hpa_mode,ibo_db,bits,errors,ber,ci95,source,seed";

std::string format_csv(std::span<const BerRecord> records);
std::vector<BerRecord> parse_csv(std::string_view text);
// Throws IoError when the file cannot be written.
void emit_csv(const RunReport& report, const std::filesystem::path& path);

}  // namespace mccdma
