#include "mccdma/harness.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <chrono>
#include <charconv>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "mccdma/config.hpp"
#include "mccdma/errors.hpp"
#include "mccdma/receiver.hpp"
#include "mccdma/rng.hpp"

namespace mccdma {

void RunReport::append(RunReport&& other) {
    records.insert(records.end(), other.records.begin(), other.records.end());
    wall_seconds.insert(wall_seconds.end(), other.wall_seconds.begin(), other.wall_seconds.end());
    seeds.insert(seeds.end(), other.seeds.begin(), other.seeds.end());
    config_echo += other.config_echo;
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

namespace {

// The stream of a sweep point is keyed by its Eb/N0 value, so a point gives the same
// result whatever else is in the sweep.
std::uint64_t point_stream(double ebn0_db) { return std::bit_cast<std::uint64_t>(ebn0_db); }

BerRecord blank_record(const Scenario& s, double ebn0_db) {
    BerRecord r;
    r.scenario = s.name;
    r.ebn0_db = ebn0_db;
    r.users = s.link.users;
    r.substreams = s.link.substreams;
    r.subcarriers = s.link.subcarriers;
    r.hpa_mode = std::string(to_string(s.hpa_mode));
    r.ibo_db = s.hpa_mode == HpaMode::bypass ? 0.0 : s.ibo_db;
    r.seed = s.seed;
    return r;
}

struct PointResult {
    TrialCount total;
    bool censored = false;
};

// Folds trial t into the running total; true once the point is finished.
bool absorb(PointResult& acc, const TrialCount& trial, const StoppingRule& rule) {
    acc.total.errors += trial.errors;
    acc.total.bits += trial.bits;
    if (acc.total.errors >= rule.min_errors) {
        return true;
    }
    if (acc.total.bits >= rule.max_bits) {
        acc.censored = true;
        return true;
    }
    return false;
}

PointResult run_point_serial(const LinkSimulator& link, std::uint64_t stream, double ebn0_db) {
    const auto& s = link.scenario();
    PointResult acc;
    for (std::uint64_t t = 0;; ++t) {
        if (absorb(acc, run_trial(link, s.seed, stream, t, ebn0_db), s.stopping)) {
            return acc;
        }
    }
}

PointResult run_point_parallel(const LinkSimulator& link, std::uint64_t stream, double ebn0_db, int workers) {
    const auto& s = link.scenario();
    std::mutex mu;
    std::condition_variable ready;
    std::map<std::uint64_t, TrialCount> finished;
    std::exception_ptr failure;
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};

    auto work = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
            try {
                const auto count = run_trial(link, s.seed, stream, t, ebn0_db);
                const std::lock_guard lock(mu);
                finished.emplace(t, count);
            } catch (...) {
                const std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
            ready.notify_one();
        }
    };

    PointResult acc;
    {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
        for (std::uint64_t t = 0;; ++t) {
            TrialCount count;
            {
                std::unique_lock lock(mu);
                ready.wait(lock, [&] { return failure || finished.contains(t); });
                if (failure) break;
                count = finished.at(t);
                finished.erase(t);
            }
            if (absorb(acc, count, s.stopping)) {
                break;
            }
        }
        stop = true;
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return acc;
}

void flag_non_monotone(const std::vector<BerRecord>& records, std::vector<std::string>& warnings) {
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& a = records[i - 1];
        const auto& b = records[i];
        if (b.ebn0_db > a.ebn0_db && b.ber > a.ber) {
            const bool overlap = b.ber - b.ci95 <= a.ber + a.ci95;
            char text[256];
            std::snprintf(text, sizeof text, "%s: BER rises from %g at %g dB to %g at %g dB%s", a.scenario.c_str(),
                          a.ber, a.ebn0_db, b.ber, b.ebn0_db, overlap ? " (within CI overlap)" : "");
            warnings.emplace_back(text);
        }
    }
}

}  // namespace

TrialCount run_trial(const LinkSimulator& link, std::uint64_t master, std::uint64_t point, std::uint64_t trial,
                     double ebn0_db) {
    auto rng = trial_rng(master, point, trial);
    const auto block = link.run_block(rng, ebn0_db);
    const auto decisions = recover_bits(block.received, 0, link.modulator(), link.pn(0), block.reference,
                                        &block.symbols.front());
    return {decisions.errors, decisions.compared};
}

RunReport run_scenario(const Scenario& scenario, int workers) {
    scenario.validate();
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    const LinkSimulator link(scenario);
    RunReport report;
    report.config_echo = describe(scenario);
    for (const double ebn0 : scenario.ebn0_db) {
        const auto stream = point_stream(ebn0);
        const auto start = std::chrono::steady_clock::now();
        const auto result =
            workers == 1 ? run_point_serial(link, stream, ebn0) : run_point_parallel(link, stream, ebn0, workers);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

        auto rec = blank_record(scenario, ebn0);
        rec.bits = result.total.bits;
        rec.errors = result.total.errors;
        rec.ber = static_cast<double>(rec.errors) / static_cast<double>(rec.bits);
        rec.ci95 = binomial_ci95(rec.errors, rec.bits);
        rec.source = result.censored ? BerSource::monte_carlo_censored : BerSource::monte_carlo;
        report.records.push_back(std::move(rec));
        report.wall_seconds.push_back(elapsed.count());
        report.seeds.push_back(splitmix64(splitmix64(scenario.seed) ^ stream));
    }
    flag_non_monotone(report.records, report.warnings);
    return report;
}

RunReport theoretical_report(const Scenario& scenario, std::int64_t symbols, ErfcArgument argument) {
    scenario.validate();
    RunReport report;
    report.config_echo = describe(scenario);
    std::vector<TheoryPoint> points;
    for (const double ebn0 : scenario.ebn0_db) {
        const auto start = std::chrono::steady_clock::now();
        const auto v = estimate_interference_variances(scenario, ebn0, symbols, scenario.seed);
        points.push_back({ebn0, v, v.signal});
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        report.wall_seconds.push_back(elapsed.count());
        report.seeds.push_back(scenario.seed);
    }
    TheoryOptions options;
    options.fading = scenario.channel.fading;
    options.argument = argument;
    const auto proto = blank_record(scenario, 0.0);
    options.scenario = proto.scenario;
    options.users = proto.users;
    options.substreams = proto.substreams;
    options.subcarriers = proto.subcarriers;
    options.hpa_mode = proto.hpa_mode;
    options.ibo_db = proto.ibo_db;
    options.seed = proto.seed;
    report.records = theoretical_curve(points, options);
    return report;
}

namespace {

constexpr std::array<std::string_view, 4> kPresetNames{"fig5", "fig6", "fig7", "fig8"};

Scenario variant(const Scenario& base, std::string name, int users, int substreams, int subcarriers) {
    Scenario s = base;
    s.name = std::move(name);
    s.link.users = users;
    s.link.substreams = substreams;
    s.link.subcarriers = subcarriers;
    s.link.walsh_order = static_cast<int>(std::bit_ceil(static_cast<unsigned>(substreams)));
    return s;
}

}  // namespace

std::span<const std::string_view> preset_names() { return kPresetNames; }

Scenario preset_base() {
    Scenario s;
    // A long code keeps K=20 users at R=M=8 out of the interference floor, so the
    // amplifier settings stay visible in the curves.
    s.pn_degree = 14;
    s.pn_taps = {14, 5, 3, 1};
    s.link.pn_length = (1 << 14) - 1;
    s.link.oversampling = 2;
    s.channel = ChannelSpec{1, 0.0, false};
    // Frames of a single slot stay small enough to be reused by the allocator.
    s.slots_per_block = 1;
    s.ebn0_db.clear();
    for (int e = 0; e <= 16; e += 2) {
        s.ebn0_db.push_back(e);
    }
    return s;
}

std::vector<Scenario> preset(std::string_view name, const Scenario& base) {
    std::vector<Scenario> out;
    if (name == "fig5") {
        out.push_back(variant(base, "fig5-multicode", 20, 8, 1));
        out.push_back(variant(base, "fig5-multicarrier", 20, 1, 8));
        out.push_back(variant(base, "fig5-mc-mc", 20, 8, 8));
    } else if (name == "fig6") {
        for (const int k : {1, 10, 50}) {
            out.push_back(variant(base, "fig6-k" + std::to_string(k), k, 8, 8));
        }
    } else if (name == "fig7") {
        for (const int m : {2, 4, 8}) {
            out.push_back(variant(base, "fig7-m" + std::to_string(m), 20, 8, m));
        }
    } else if (name == "fig8") {
        for (const double ibo : {7.0, 9.0}) {
            auto s = variant(base, "fig8-ibo" + std::to_string(static_cast<int>(ibo)), 20, 8, 8);
            s.hpa_mode = HpaMode::saleh;
            s.ibo_db = ibo;
            out.push_back(std::move(s));
        }
        auto pd = variant(base, "fig8-pd", 20, 8, 8);
        pd.hpa_mode = HpaMode::saleh_pd;
        out.push_back(std::move(pd));
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected fig5, fig6, fig7 or fig8)");
    }
    return out;
}

std::vector<Scenario> preset(std::string_view name) { return preset(name, preset_base()); }

namespace {

// Six significant digits when they reproduce the value exactly, else round-trip precision.
std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.6g", v);
    if (std::strtod(buf, nullptr) != v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
    }
    return buf;
}

std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_row(std::string_view line, std::size_t line_no) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) {
        throw ConfigError("CSV line " + std::to_string(line_no) + ": unterminated quote");
    }
    return fields;
}

template <typename T>
T field_number(const std::string& text, std::size_t line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("CSV line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    return value;
}

}  // namespace

std::string format_csv(std::span<const BerRecord> records) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += quote(r.scenario);
        out += ',' + format_double(r.ebn0_db);
        out += ',' + std::to_string(r.users);
        out += ',' + std::to_string(r.substreams);
        out += ',' + std::to_string(r.subcarriers);
        out += ',' + quote(r.hpa_mode);
        out += ',' + format_double(r.ibo_db);
        out += ',' + std::to_string(r.bits);
        out += ',' + std::to_string(r.errors);
        out += ',' + format_double(r.ber);
        out += ',' + format_double(r.ci95);
        out += ',';
        out += to_string(r.source);
        out += ',' + std::to_string(r.seed);
        out += '\n';
    }
    return out;
}

std::vector<BerRecord> parse_csv(std::string_view text) {
    std::vector<BerRecord> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1) {
            if (line != kCsvHeader) throw ConfigError("CSV header does not match the BER record schema");
            continue;
        }
        if (line.empty()) continue;
        const auto f = split_row(line, line_no);
        if (f.size() != 13) {
            throw ConfigError("CSV line " + std::to_string(line_no) + ": expected 13 fields");
        }
        BerRecord r;
        r.scenario = f[0];
        r.ebn0_db = field_number<double>(f[1], line_no);
        r.users = field_number<int>(f[2], line_no);
        r.substreams = field_number<int>(f[3], line_no);
        r.subcarriers = field_number<int>(f[4], line_no);
        r.hpa_mode = f[5];
        r.ibo_db = field_number<double>(f[6], line_no);
        r.bits = field_number<std::int64_t>(f[7], line_no);
        r.errors = field_number<std::int64_t>(f[8], line_no);
        r.ber = field_number<double>(f[9], line_no);
        r.ci95 = field_number<double>(f[10], line_no);
        r.source = parse_ber_source(f[11]);
        r.seed = field_number<std::uint64_t>(f[12], line_no);
        out.push_back(std::move(r));
    }
    if (line_no == 0) {
        throw ConfigError("CSV is empty");
    }
    return out;
}

void emit_csv(const RunReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    const auto text = format_csv(report.records);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) {
        throw IoError("write to " + path.string() + " failed");
    }
}

}  // namespace mccdma
