// Monte Carlo BER simulator: config file and optional preset in, CSV out.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mccdma/config.hpp"
#include "mccdma/errors.hpp"
#include "mccdma/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kIoError = 2;

template <typename T>
std::optional<T> env_number(const char* name) {
    const char* text = std::getenv(name);
    if (!text || !*text) {
        return std::nullopt;
    }
    const std::string_view view(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(view.data(), view.data() + view.size(), value);
    if (ec != std::errc{} || ptr != view.data() + view.size()) {
        throw mccdma::ConfigError(std::string("bad value for ") + name + ": '" + text + "'");
    }
    return value;
}

int run(int argc, char** argv) {
    CLI::App app{"Multicode multicarrier CDMA link simulator"};
    std::string config_path;
    std::string preset_name;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::optional<int> workers;
    bool decompose = false;
    std::int64_t decompose_symbols = 1000;

    app.add_option("--config", config_path, "key=value scenario file")->required();
    app.add_option("--preset", preset_name, "named preset")->check(CLI::IsMember({"fig5", "fig6", "fig7", "fig8"}));
    app.add_option("--seed", seed, "master seed (overrides SIM_SEED and the file)");
    app.add_option("--out", out_path, "CSV output path (default: stdout)");
    app.add_option("--workers", workers, "worker threads (overrides SIM_WORKERS)")->check(CLI::PositiveNumber);
    app.add_flag("--decompose", decompose, "emit theoretical BER from measured interference variances");
    app.add_option("--decompose-symbols", decompose_symbols, "symbols per point for --decompose")
        ->check(CLI::Range(std::int64_t{2}, std::int64_t{100'000'000}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    const auto file = mccdma::load_config(config_path);
    mccdma::Scenario base = preset_name.empty() ? mccdma::Scenario{} : mccdma::preset_base();
    mccdma::apply_config(base, file);

    if (!seed) seed = env_number<std::uint64_t>("SIM_SEED");
    if (!workers) workers = env_number<int>("SIM_WORKERS");
    if (seed) base.seed = *seed;
    const int threads = workers.value_or(1);
    if (threads < 1) {
        throw mccdma::ConfigError("workers must be >= 1");
    }

    std::vector<mccdma::Scenario> scenarios =
        preset_name.empty() ? std::vector<mccdma::Scenario>{base} : mccdma::preset(preset_name, base);
    for (const auto& s : scenarios) {
        s.validate();
    }

    mccdma::RunReport report;
    for (const auto& s : scenarios) {
        auto part = decompose ? mccdma::theoretical_report(s, decompose_symbols) : mccdma::run_scenario(s, threads);
        for (std::size_t i = 0; i < part.records.size(); ++i) {
            const auto& r = part.records[i];
            std::fprintf(stderr, "%s Eb/N0=%g dB: ber=%.4g (%lld/%lld) %.2fs\n", r.scenario.c_str(), r.ebn0_db, r.ber,
                         static_cast<long long>(r.errors), static_cast<long long>(r.bits), part.wall_seconds[i]);
        }
        report.append(std::move(part));
    }
    for (const auto& w : report.warnings) {
        std::fprintf(stderr, "warning: %s\n", w.c_str());
    }

    if (out_path.empty()) {
        std::cout << mccdma::format_csv(report.records) << std::flush;
        if (!std::cout) {
            throw mccdma::IoError("write to stdout failed");
        }
    } else {
        mccdma::emit_csv(report, out_path);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const mccdma::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kConfigError;
    }
}
