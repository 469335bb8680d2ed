#include "subnyq/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "subnyq/errors.hpp"

namespace subnyq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Parsed key/value lines grouped by section, with consumption tracking so
// unknown keys are rejected.
struct RawConfig {
    std::string origin;
    std::map<std::string, std::string> entries;  // "section.key" -> value
    mutable std::map<std::string, bool> used;

    [[noreturn]] void fail(const std::string& path, const std::string& why) const {
        throw ConfigError(origin + ": " + path + ": " + why);
    }

    bool has(const std::string& path) const { return entries.count(path) != 0; }

    std::string get_string(const std::string& path) const {
        auto it = entries.find(path);
        if (it == entries.end()) fail(path, "missing required key");
        used[path] = true;
        return it->second;
    }

    std::string get_string_or(const std::string& path, const std::string& fallback) const {
        if (!has(path)) return fallback;
        return get_string(path);
    }

    double get_number(const std::string& path) const {
        const std::string v = get_string(path);
        try {
            return parse_si_number(v);
        } catch (const ConfigError& e) {
            fail(path, e.what());
        }
    }

    double get_number_or(const std::string& path, double fallback) const {
        if (!has(path)) return fallback;
        return get_number(path);
    }

    std::uint64_t get_seed_or(const std::string& path, std::uint64_t fallback) const {
        if (!has(path)) return fallback;
        const std::string v = get_string(path);
        try {
            std::size_t pos = 0;
            const std::uint64_t seed = std::stoull(v, &pos);
            if (pos != v.size()) throw std::invalid_argument("trailing characters");
            return seed;
        } catch (const std::exception&) {
            fail(path, "expected an unsigned integer, got '" + v + "'");
        }
    }

    std::vector<double> get_number_list(const std::string& path) const {
        const std::string v = get_string(path);
        std::vector<double> out;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto t = trim(item);
            if (t.empty()) fail(path, "empty element in list");
            try {
                out.push_back(parse_si_number(t));
            } catch (const ConfigError& e) {
                fail(path, e.what());
            }
        }
        if (out.empty()) fail(path, "empty list");
        return out;
    }

    void reject_unknown() const {
        for (const auto& [path, value] : entries) {
            if (!used[path]) fail(path, "unknown key");
        }
    }
};

RawConfig tokenize(std::string_view text, const std::string& origin) {
    RawConfig raw;
    raw.origin = origin;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": key outside a [section] or empty key");
        }
        raw.entries[section + "." + std::string(key)] = std::string(value);
    }
    return raw;
}

SourceSpec parse_source(const RawConfig& raw, const std::string& section) {
    SourceSpec spec;
    spec.kind = source_kind_from_string(raw.get_string(section + ".kind"));
    const bool has_symbol = raw.has(section + ".symbol_rate");
    const bool has_bw = raw.has(section + ".bandwidth");
    if (has_symbol == has_bw) {
        raw.fail(section, "exactly one of symbol_rate or bandwidth is required");
    }
    spec.symbol_rate_hz = raw.get_number(has_symbol ? section + ".symbol_rate"
                                                    : section + ".bandwidth");
    spec.rms = raw.get_number_or(section + ".rms", 1.0);
    return spec;
}

}  // namespace

double parse_si_number(std::string_view text) {
    const auto t = trim(text);
    if (t.empty()) throw ConfigError("empty number");
    std::string buf(t);
    const char* begin = buf.c_str();
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) throw ConfigError("expected a number, got '" + buf + "'");
    std::string_view rest = trim(std::string_view(end));
    if (!rest.empty()) {
        if (rest.size() != 1) throw ConfigError("bad numeric suffix in '" + buf + "'");
        switch (rest.front()) {
            case 'f': value *= 1e-15; break;
            case 'p': value *= 1e-12; break;
            case 'n': value *= 1e-9; break;
            case 'u': value *= 1e-6; break;
            case 'm': value *= 1e-3; break;
            case 'k': value *= 1e3; break;
            case 'M': value *= 1e6; break;
            case 'G': value *= 1e9; break;
            case 'T': value *= 1e12; break;
            default: throw ConfigError("unknown SI suffix '" + std::string(rest) + "'");
        }
    }
    if (!std::isfinite(value)) throw ConfigError("number out of range: '" + buf + "'");
    return value;
}

ScenarioConfig parse_config_text(std::string_view text, const std::string& origin) {
    const RawConfig raw = tokenize(text, origin);
    ScenarioConfig cfg;
    cfg.sample_rate_hz = raw.get_number("run.sample_rate");
    cfg.duration_s = raw.get_number("run.duration");
    cfg.master_seed = raw.get_seed_or("run.master_seed", 1);

    cfg.soi = parse_source(raw, "soi");
    cfg.interference = parse_source(raw, "interference");

    try {
        cfg.mixing = MixingMatrix(raw.get_number("mixing.a11"), raw.get_number("mixing.a12"),
                                  raw.get_number("mixing.a21"), raw.get_number("mixing.a22"));
    } catch (const SingularMatrix& e) {
        raw.fail("mixing", e.what());
    }

    cfg.pulse.rep_rate_hz = raw.get_number("pulse.rep_rate");
    cfg.pulse.pulse_width_s = raw.get_number("pulse.width");
    cfg.pulse.shape = pulse_shape_from_string(raw.get_string_or("pulse.shape", "rect"));
    cfg.pulse.offset_s = raw.get_number_or("pulse.offset", 0.0);
    cfg.pulse.jitter_rms_s = raw.get_number_or("pulse.jitter_rms", 0.0);

    if (raw.has("grids.theta")) cfg.theta_grid.angles_deg = raw.get_number_list("grids.theta");
    if (raw.has("grids.phi")) cfg.phi_grid.angles_deg = raw.get_number_list("grids.phi");

    raw.reject_unknown();
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void ScenarioConfig::validate() const {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("run.sample_rate: must be positive");
    if (!(duration_s > 0.0)) throw ConfigError("run.duration: must be positive");
    const double fsamp = sample_rate_hz * duration_s;
    if (fsamp > 4e9) throw ConfigError("run.duration: more than 4e9 samples requested");
    const auto n_total = static_cast<std::int64_t>(std::llround(fsamp));
    if (n_total < 1 || std::abs(fsamp - static_cast<double>(n_total)) > 1e-6) {
        throw ConfigError("run.duration: must cover a whole number of samples");
    }

    auto check_source = [&](const SourceSpec& s, const std::string& path) {
        if (!(s.symbol_rate_hz > 0.0)) {
            throw ConfigError(path + ": symbol_rate/bandwidth must be positive");
        }
        if (s.kind == SourceKind::gaussian) {
            if (s.rms < 0.0) throw ConfigError(path + ".rms: must be nonnegative");
        } else {
            if (!(s.rms > 0.0)) throw ConfigError(path + ".rms: must be positive");
            std::int64_t sps = 0;
            try {
                sps = samples_per_symbol(s.symbol_rate_hz, sample_rate_hz);
            } catch (const ConfigError& e) {
                throw ConfigError(path + ".symbol_rate: " + e.what());
            }
            if (n_total % sps != 0) {
                throw ConfigError(path + ": duration must cover a whole number of symbols");
            }
        }
    };
    check_source(soi, "soi");
    check_source(interference, "interference");

    pulse.validate();
    if (pulse.period_s() < 2.0 / sample_rate_hz) {
        throw ConfigError("pulse.rep_rate: period must be at least 2 sample periods");
    }
    if (pulse.offset_s > duration_s) {
        throw ConfigError("pulse.offset: no pulse falls inside the waveform duration");
    }

    auto check_grid = [](const AngleGrid& g, std::size_t need, const std::string& path) {
        for (double a : g.angles_deg) {
            if (!(a >= 0.0) || !(a < 180.0)) {
                throw ConfigError(path + ": angles must lie in [0, 180) degrees");
            }
        }
        if (g.distinct_mod_180() < need) {
            throw ConfigError(path + ": need at least " + std::to_string(need) +
                              " distinct angles");
        }
    };
    check_grid(theta_grid, 3, "grids.theta");
    check_grid(phi_grid, 5, "grids.phi");
}

std::vector<std::string> ScenarioConfig::warnings() const {
    std::vector<std::string> out;
    if (soi.kind != SourceKind::gaussian) {
        const double period_samples = sample_rate_hz / pulse.rep_rate_hz;
        const auto period_int = static_cast<std::int64_t>(std::llround(period_samples));
        const double sps = sample_rate_hz / soi.symbol_rate_hz;
        const auto sps_int = static_cast<std::int64_t>(std::llround(sps));
        if (std::abs(period_samples - static_cast<double>(period_int)) < 1e-6 && sps_int > 0 &&
            std::gcd(period_int, sps_int) > 1) {
            out.push_back("pulse.rep_rate: pulse period (" + std::to_string(period_int) +
                          " samples) shares a factor with the symbol period (" +
                          std::to_string(sps_int) +
                          " samples); gates hit few symbol phases and moment estimates may be "
                          "biased");
        }
    }
    return out;
}

}  // namespace subnyq
