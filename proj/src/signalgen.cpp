#include "subnyq/signalgen.hpp"

#include <cmath>
#include <cstdint>

#include "subnyq/errors.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

namespace {

// Levels of the 16QAM real part, scaled to unit variance.
constexpr double kQamScale = 0.4472135954999579392818347337462552470881236719223051448541;  // 1/sqrt(5)
constexpr double kQamLevels[4] = {-3.0 * kQamScale, -1.0 * kQamScale, 1.0 * kQamScale,
                                  3.0 * kQamScale};

Waveform hold_symbols(std::span<const double> symbols, std::int64_t sps, double sample_rate_hz) {
    std::vector<double> out;
    out.resize(symbols.size() * static_cast<std::size_t>(sps));
    std::size_t k = 0;
    for (double level : symbols) {
        for (std::int64_t j = 0; j < sps; ++j) out[k++] = level;
    }
    return Waveform(sample_rate_hz, 0.0, std::move(out));
}

}  // namespace

std::string to_string(SourceKind kind) {
    switch (kind) {
        case SourceKind::nrz_binary: return "nrz_binary";
        case SourceKind::qam16_real: return "qam16_real";
        case SourceKind::gaussian: return "gaussian";
    }
    return "unknown";
}

SourceKind source_kind_from_string(const std::string& name) {
    if (name == "nrz_binary") return SourceKind::nrz_binary;
    if (name == "qam16_real") return SourceKind::qam16_real;
    if (name == "gaussian") return SourceKind::gaussian;
    throw ConfigError("unknown source kind '" + name +
                      "' (expected nrz_binary, qam16_real or gaussian)");
}

std::int64_t samples_per_symbol(double symbol_rate_hz, double sample_rate_hz) {
    if (!(symbol_rate_hz > 0.0)) throw ConfigError("symbol rate must be positive");
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample rate must be positive");
    const double q = sample_rate_hz / symbol_rate_hz;
    const auto sps = static_cast<std::int64_t>(std::llround(q));
    if (sps < 1 || std::abs(q - static_cast<double>(sps)) > 1e-9 * q) {
        throw ConfigError("symbol period must be an integer multiple of the sample period "
                          "(sample_rate/symbol_rate = " +
                          std::to_string(q) + ")");
    }
    return sps;
}

Waveform gen_nrz(double bit_rate_hz, std::size_t n_bits, double sample_rate_hz,
                 std::uint64_t seed) {
    if (n_bits < 1) throw ConfigError("gen_nrz: n_bits must be >= 1");
    const std::int64_t sps = samples_per_symbol(bit_rate_hz, sample_rate_hz);
    Rng rng(seed);
    std::vector<double> symbols(n_bits);
    for (auto& s : symbols) s = rng.bits(1) ? 1.0 : -1.0;
    return hold_symbols(symbols, sps, sample_rate_hz);
}

Waveform gen_nrz_from_bits(std::span<const int> bits, double bit_rate_hz,
                           double sample_rate_hz) {
    if (bits.empty()) throw ConfigError("gen_nrz_from_bits: bit pattern must be nonempty");
    const std::int64_t sps = samples_per_symbol(bit_rate_hz, sample_rate_hz);
    std::vector<double> symbols(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) symbols[i] = bits[i] ? 1.0 : -1.0;
    return hold_symbols(symbols, sps, sample_rate_hz);
}

Waveform gen_qam16_real(double symbol_rate_hz, std::size_t n_symbols, double sample_rate_hz,
                        std::uint64_t seed) {
    if (n_symbols < 1) throw ConfigError("gen_qam16_real: n_symbols must be >= 1");
    const std::int64_t sps = samples_per_symbol(symbol_rate_hz, sample_rate_hz);
    Rng rng(seed);
    std::vector<double> symbols(n_symbols);
    for (auto& s : symbols) s = kQamLevels[rng.bits(2)];
    return hold_symbols(symbols, sps, sample_rate_hz);
}

Waveform gen_gaussian(double sample_rate_hz, std::size_t n_samples, double rms,
                      std::uint64_t seed) {
    if (rms < 0.0) throw ConfigError("gen_gaussian: rms must be >= 0");
    if (n_samples < 1) throw ConfigError("gen_gaussian: n_samples must be >= 1");
    Rng rng(seed);
    std::vector<double> out(n_samples);
    if (rms == 0.0) {
        // all zeros
    } else {
        for (auto& v : out) v = rms * rng.normal();
    }
    return Waveform(sample_rate_hz, 0.0, std::move(out));
}

Waveform normalize_rms(const Waveform& w, double target_rms) {
    if (!(target_rms > 0.0)) throw ConfigError("normalize_rms: target_rms must be positive");
    const double r = w.rms();
    if (r == 0.0) throw DegenerateSignal("normalize_rms: input has zero RMS");
    const double scale = target_rms / r;
    std::vector<double> out(w.samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = scale * w.samples[i];
    return Waveform(w.sample_rate_hz, w.start_time_s, std::move(out));
}

Waveform generate(const SourceSpec& spec, double sample_rate_hz, double duration_s) {
    if (!(duration_s > 0.0)) throw ConfigError("generate: duration must be positive");
    const double fsamp = sample_rate_hz * duration_s;
    const auto n_total = static_cast<std::int64_t>(std::llround(fsamp));
    if (n_total < 1 || std::abs(fsamp - static_cast<double>(n_total)) > 1e-6) {
        throw ConfigError("generate: duration must cover a whole number of samples");
    }
    switch (spec.kind) {
        case SourceKind::gaussian:
            return gen_gaussian(sample_rate_hz, static_cast<std::size_t>(n_total), spec.rms,
                                spec.seed);
        case SourceKind::nrz_binary:
        case SourceKind::qam16_real: {
            if (!(spec.rms > 0.0)) {
                throw ConfigError("generate: rms must be positive for symbol sources");
            }
            const std::int64_t sps = samples_per_symbol(spec.symbol_rate_hz, sample_rate_hz);
            if (n_total % sps != 0) {
                throw ConfigError("generate: duration must cover a whole number of symbols (" +
                                  std::to_string(n_total) + " samples, " + std::to_string(sps) +
                                  " samples/symbol)");
            }
            const auto n_sym = static_cast<std::size_t>(n_total / sps);
            Waveform w = spec.kind == SourceKind::nrz_binary
                             ? gen_nrz(spec.symbol_rate_hz, n_sym, sample_rate_hz, spec.seed)
                             : gen_qam16_real(spec.symbol_rate_hz, n_sym, sample_rate_hz,
                                              spec.seed);
            if (spec.rms != 1.0) {
                // Scale the level alphabet, keeping the piecewise-constant shape.
                for (auto& v : w.samples) v *= spec.rms;
            }
            return w;
        }
    }
    throw ConfigError("generate: unknown source kind");
}

}  // namespace subnyq
