// Source waveform generators: NRZ binary, the real part of 16QAM, and white
// Gaussian noise, all as uniformly sampled baseband signals.

#ifndef SUBNYQ_SIGNALGEN_HPP
#define SUBNYQ_SIGNALGEN_HPP

#include <cstdint>
#include <span>
#include <string>

#include "subnyq/waveform.hpp"

namespace subnyq {

enum class SourceKind { nrz_binary, qam16_real, gaussian };

std::string to_string(SourceKind kind);
SourceKind source_kind_from_string(const std::string& name);

struct SourceSpec {
    SourceKind kind = SourceKind::nrz_binary;
    // Symbol rate for nrz_binary/qam16_real; occupied bandwidth for gaussian.
    double symbol_rate_hz = 0.0;
    double rms = 1.0;
    std::uint64_t seed = 0;
};

// Integer samples per symbol, or ConfigError if the symbol period is not an
// integer multiple of the sample period.
std::int64_t samples_per_symbol(double symbol_rate_hz, double sample_rate_hz);

// Piecewise-constant +/-1 waveform, one level per bit, RMS exactly 1.
Waveform gen_nrz(double bit_rate_hz, std::size_t n_bits, double sample_rate_hz,
                 std::uint64_t seed);

// Test hook: same shaping from an explicit bit pattern (nonzero -> +1).
Waveform gen_nrz_from_bits(std::span<const int> bits, double bit_rate_hz,
                           double sample_rate_hz);

// Piecewise-constant waveform over {-3,-1,+1,+3}/sqrt(5), equiprobable.
// Models the real part of a 16QAM baseband signal; unit symbol variance.
Waveform gen_qam16_real(double symbol_rate_hz, std::size_t n_symbols, double sample_rate_hz,
                        std::uint64_t seed);

// Independent zero-mean normal samples with standard deviation rms.
Waveform gen_gaussian(double sample_rate_hz, std::size_t n_samples, double rms,
                      std::uint64_t seed);

// Rescale to the target RMS; shape preserved up to one positive scalar.
Waveform normalize_rms(const Waveform& w, double target_rms);

// Dispatcher used by the pipeline: n symbols/samples derived from duration.
Waveform generate(const SourceSpec& spec, double sample_rate_hz, double duration_s);

}  // namespace subnyq

#endif
