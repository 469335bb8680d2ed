#include "subnyq/waveform.hpp"

#include <cmath>
#include <utility>

#include "subnyq/errors.hpp"
#include "subnyq/kernels.hpp"

namespace subnyq {

Waveform::Waveform(double rate_hz, double start_s, std::vector<double> data)
    : sample_rate_hz(rate_hz), start_time_s(start_s), samples(std::move(data)) {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("waveform: sample_rate_hz must be positive");
    if (samples.empty()) throw ConfigError("waveform: samples must be nonempty");
    if (!kernels::all_finite(samples)) throw ConfigError("waveform: samples must all be finite");
}

double Waveform::rms() const { return std::sqrt(kernels::mean_sq(samples)); }

}  // namespace subnyq
