#include "mccdma/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <system_error>

#include "mccdma/errors.hpp"

namespace mccdma {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("bad value '" + std::string(text) + "' for key '" + std::string(key) + "'");
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "off" || text == "no") return false;
    throw ConfigError("bad boolean '" + std::string(text) + "' for key '" + std::string(key) + "'");
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
    std::vector<T> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        const auto item = trim(text.substr(0, comma));
        if (!item.empty()) {
            out.push_back(parse_number<T>(key, item));
        }
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

using Setter = std::function<void(Scenario&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"name", [](Scenario& s, auto, auto v) { s.name = std::string(v); }},
        {"users", [](Scenario& s, auto k, auto v) { s.link.users = parse_number<int>(k, v); }},
        {"substreams", [](Scenario& s, auto k, auto v) { s.link.substreams = parse_number<int>(k, v); }},
        {"subcarriers", [](Scenario& s, auto k, auto v) { s.link.subcarriers = parse_number<int>(k, v); }},
        {"walsh_order", [](Scenario& s, auto k, auto v) { s.link.walsh_order = parse_number<int>(k, v); }},
        {"pn_degree",
         [](Scenario& s, auto k, auto v) {
             s.pn_degree = parse_number<int>(k, v);
             if (s.pn_degree < 2 || s.pn_degree > 24) throw ConfigError("pn_degree must lie in [2, 24]");
             s.link.pn_length = (1 << s.pn_degree) - 1;
             s.pn_taps.clear();
         }},
        {"pn_taps", [](Scenario& s, auto k, auto v) { s.pn_taps = parse_list<int>(k, v); }},
        {"symbol_duration", [](Scenario& s, auto k, auto v) { s.link.symbol_duration = parse_number<double>(k, v); }},
        {"oversampling", [](Scenario& s, auto k, auto v) { s.link.oversampling = parse_number<int>(k, v); }},
        {"power", [](Scenario& s, auto k, auto v) { s.link.power = parse_number<double>(k, v); }},
        {"paths", [](Scenario& s, auto k, auto v) { s.channel.paths = parse_number<int>(k, v); }},
        {"decay_db", [](Scenario& s, auto k, auto v) { s.channel.decay_db = parse_number<double>(k, v); }},
        {"fading", [](Scenario& s, auto k, auto v) { s.channel.fading = parse_bool(k, v); }},
        {"hpa_mode", [](Scenario& s, auto, auto v) { s.hpa_mode = parse_hpa_mode(v); }},
        {"ibo_db", [](Scenario& s, auto k, auto v) { s.ibo_db = parse_number<double>(k, v); }},
        {"alpha_a", [](Scenario& s, auto k, auto v) { s.saleh.alpha_a = parse_number<double>(k, v); }},
        {"beta_a", [](Scenario& s, auto k, auto v) { s.saleh.beta_a = parse_number<double>(k, v); }},
        {"alpha_phi", [](Scenario& s, auto k, auto v) { s.saleh.alpha_phi = parse_number<double>(k, v); }},
        {"beta_phi", [](Scenario& s, auto k, auto v) { s.saleh.beta_phi = parse_number<double>(k, v); }},
        {"ampm_quadratic", [](Scenario& s, auto k, auto v) { s.saleh.ampm_quadratic = parse_bool(k, v); }},
        {"track_hpa_phase", [](Scenario& s, auto k, auto v) { s.track_hpa_phase = parse_bool(k, v); }},
        {"noise", [](Scenario& s, auto k, auto v) { s.noise = parse_bool(k, v); }},
        {"ebn0_db", [](Scenario& s, auto k, auto v) { s.ebn0_db = parse_list<double>(k, v); }},
        {"min_errors", [](Scenario& s, auto k, auto v) { s.stopping.min_errors = parse_number<std::int64_t>(k, v); }},
        {"max_bits", [](Scenario& s, auto k, auto v) { s.stopping.max_bits = parse_number<std::int64_t>(k, v); }},
        {"allow_low_min_errors",
         [](Scenario& s, auto k, auto v) { s.stopping.allow_low_min_errors = parse_bool(k, v); }},
        {"seed", [](Scenario& s, auto k, auto v) { s.seed = parse_number<std::uint64_t>(k, v); }},
        {"slots_per_block", [](Scenario& s, auto k, auto v) { s.slots_per_block = parse_number<int>(k, v); }},
    };
    return table;
}

}  // namespace

ConfigMap parse_config_text(std::string_view text) {
    ConfigMap out;
    int line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
        out.insert_or_assign(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void apply_config(Scenario& scenario, const ConfigMap& config) {
    const auto& table = setters();
    // pn_degree first: it resets the taps to the built-in table, which an explicit
    // pn_taps list then overrides.
    if (const auto it = config.find("pn_degree"); it != config.end()) {
        table.at("pn_degree")(scenario, it->first, it->second);
    }
    for (const auto& [key, value] : config) {
        if (key == "pn_degree") continue;
        const auto setter = table.find(key);
        if (setter == table.end()) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        setter->second(scenario, key, value);
    }
}

void apply_saleh_config(SalehParams& params, const ConfigMap& config) {
    Scenario s;
    s.saleh = params;
    for (const auto& [key, value] : config) {
        if (key != "alpha_a" && key != "beta_a" && key != "alpha_phi" && key != "beta_phi" && key != "ampm_quadratic") {
            throw ConfigError("unknown amplifier key '" + key + "'");
        }
        setters().at(key)(s, key, value);
    }
    s.saleh.validate();
    params = s.saleh;
}

std::string describe(const Scenario& s) {
    std::ostringstream out;
    auto list = [](const auto& values) {
        std::string text;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) text += ',';
            if constexpr (std::is_same_v<std::decay_t<decltype(values[i])>, double>) {
                text += fmt(values[i]);
            } else {
                text += std::to_string(values[i]);
            }
        }
        return text;
    };
    out << "name=" << s.name << '\n'
        << "users=" << s.link.users << '\n'
        << "substreams=" << s.link.substreams << '\n'
        << "subcarriers=" << s.link.subcarriers << '\n'
        << "walsh_order=" << s.link.walsh_order << '\n'
        << "pn_degree=" << s.pn_degree << '\n';
    if (!s.pn_taps.empty()) out << "pn_taps=" << list(s.pn_taps) << '\n';
    out << "symbol_duration=" << fmt(s.link.symbol_duration) << '\n'
        << "oversampling=" << s.link.oversampling << '\n'
        << "power=" << fmt(s.link.power) << '\n'
        << "paths=" << s.channel.paths << '\n'
        << "decay_db=" << fmt(s.channel.decay_db) << '\n'
        << "fading=" << (s.channel.fading ? "true" : "false") << '\n'
        << "hpa_mode=" << to_string(s.hpa_mode) << '\n'
        << "ibo_db=" << fmt(s.ibo_db) << '\n'
        << "alpha_a=" << fmt(s.saleh.alpha_a) << '\n'
        << "beta_a=" << fmt(s.saleh.beta_a) << '\n'
        << "alpha_phi=" << fmt(s.saleh.alpha_phi) << '\n'
        << "beta_phi=" << fmt(s.saleh.beta_phi) << '\n'
        << "ampm_quadratic=" << (s.saleh.ampm_quadratic ? "true" : "false") << '\n'
        << "track_hpa_phase=" << (s.track_hpa_phase ? "true" : "false") << '\n'
        << "noise=" << (s.noise ? "true" : "false") << '\n'
        << "ebn0_db=" << list(s.ebn0_db) << '\n'
        << "min_errors=" << s.stopping.min_errors << '\n'
        << "max_bits=" << s.stopping.max_bits << '\n'
        << "allow_low_min_errors=" << (s.stopping.allow_low_min_errors ? "true" : "false") << '\n'
        << "seed=" << s.seed << '\n'
        << "slots_per_block=" << s.slots_per_block << '\n';
    return out.str();
}

}  // namespace mccdma
