#include "subnyq/sampler.hpp"

#include <cmath>
#include <cstdint>

#include "subnyq/errors.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

namespace {

struct GateWindow {
    std::vector<double> weights;  // relative weights; value = sum(w*x)/sum(w)
    std::int64_t lo = 0;          // first sample offset from the (rounded) center
    double weight_sum = 0.0;
};

GateWindow build_window(const PulseTrain& p, double dt) {
    GateWindow win;
    if (p.shape == PulseShape::rect) {
        const auto len = std::max<std::int64_t>(1, std::llround(p.pulse_width_s / dt));
        win.weights.assign(static_cast<std::size_t>(len), 1.0);
        win.lo = -(len / 2);
        win.weight_sum = static_cast<double>(len);  // exact, so gate(const)=const for rect
    } else {
        // pulse_width_s is the FWHM; support truncated at 3 sigma
        const double sigma = p.pulse_width_s / (2.0 * std::sqrt(2.0 * std::log(2.0)));
        const auto half = std::max<std::int64_t>(0, static_cast<std::int64_t>(
                                                        std::ceil(3.0 * sigma / dt)));
        win.lo = -half;
        win.weights.resize(static_cast<std::size_t>(2 * half + 1));
        double s = 0.0;
        for (std::int64_t k = -half; k <= half; ++k) {
            const double t = static_cast<double>(k) * dt;
            const double w = std::exp(-0.5 * (t * t) / (sigma * sigma));
            win.weights[static_cast<std::size_t>(k + half)] = w;
            s += w;
        }
        win.weight_sum = s;
    }
    return win;
}

// Pulse centers as sample indices of the target waveform geometry, jitter
// applied, windows that do not fit dropped. Centers are computed serially so
// the jitter stream is well-defined; gating itself parallelizes per pulse.
std::vector<std::int64_t> pulse_centers(const Waveform& w, const PulseTrain& p,
                                        const GateWindow& win, std::uint64_t seed) {
    const double dt = w.dt();
    const double period = p.period_s();
    if (period < 2.0 * dt) {
        throw ConfigError("gate: pulse train period must be at least 2 waveform sample periods");
    }
    const double t_end = w.end_time_s();
    const auto n = static_cast<std::int64_t>(w.size());
    Rng jitter_rng(seed);

    std::vector<std::int64_t> centers;
    const double first = p.offset_s;
    if (first > t_end) return centers;
    const auto m_max = static_cast<std::int64_t>(std::floor((t_end - first) / period));
    centers.reserve(static_cast<std::size_t>(m_max + 1));
    std::int64_t last_kept = INT64_MIN;
    for (std::int64_t m = 0; m <= m_max; ++m) {
        double t = first + static_cast<double>(m) * period;
        if (p.jitter_rms_s > 0.0) t += p.jitter_rms_s * jitter_rng.normal();
        const auto c = std::llround((t - w.start_time_s) / dt);
        if (c + win.lo < 0) continue;
        if (c + win.lo + static_cast<std::int64_t>(win.weights.size()) > n) continue;
        if (c <= last_kept) continue;  // jitter may reorder; keep times strictly increasing
        centers.push_back(c);
        last_kept = c;
    }
    return centers;
}

double gate_one(const Waveform& w, const GateWindow& win, std::int64_t center) {
    const double* x = w.samples.data() + (center + win.lo);
    double s = 0.0;
    for (std::size_t k = 0; k < win.weights.size(); ++k) s += win.weights[k] * x[k];
    return s / win.weight_sum;
}

SampleSet gate_impl(const std::vector<const Waveform*>& inputs, const PulseTrain& p,
                    std::uint64_t seed) {
    p.validate();
    const Waveform& ref = *inputs.front();
    const GateWindow win = build_window(p, ref.dt());
    const std::vector<std::int64_t> centers = pulse_centers(ref, p, win, seed);
    if (centers.empty()) throw EmptySampleSet("gate: no pulse window fits inside the waveform");

    SampleSet out;
    out.source_rate_hz = ref.sample_rate_hz;
    out.times_s.resize(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        out.times_s[i] = ref.start_time_s + static_cast<double>(centers[i]) * ref.dt();
    }
    for (const Waveform* w : inputs) {
        std::vector<double>& ch = out.channels.emplace_back(centers.size());
        const auto npulse = static_cast<std::int64_t>(centers.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < npulse; ++i) {
            ch[static_cast<std::size_t>(i)] = gate_one(*w, win, centers[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

}  // namespace

std::string to_string(PulseShape shape) {
    return shape == PulseShape::rect ? "rect" : "gaussian";
}

PulseShape pulse_shape_from_string(const std::string& name) {
    if (name == "rect") return PulseShape::rect;
    if (name == "gaussian") return PulseShape::gaussian;
    throw ConfigError("unknown pulse shape '" + name + "' (expected rect or gaussian)");
}

void PulseTrain::validate() const {
    if (!(rep_rate_hz > 0.0)) throw ConfigError("pulse.rep_rate: must be positive");
    if (!(pulse_width_s > 0.0)) throw ConfigError("pulse.width: must be positive");
    if (!(pulse_width_s < period_s())) {
        throw ConfigError("pulse.width: pulses must not overlap (width >= repetition period)");
    }
    if (offset_s < 0.0) throw ConfigError("pulse.offset: must be nonnegative");
    if (jitter_rms_s < 0.0) throw ConfigError("pulse.jitter_rms: must be nonnegative");
}

SampleSet gate(const Waveform& w, const PulseTrain& p, std::uint64_t seed) {
    return gate_impl({&w}, p, seed);
}

SampleSet gate_pair(const Waveform& w1, const Waveform& w2, const PulseTrain& p,
                    std::uint64_t seed) {
    if (!w1.same_geometry(w2)) {
        throw ConfigError("gate_pair: waveforms must share sample rate, start time and length");
    }
    return gate_impl({&w1, &w2}, p, seed);
}

double sampling_ratio(const PulseTrain& p, double signal_bandwidth_hz) {
    if (!(signal_bandwidth_hz > 0.0)) {
        throw ConfigError("sampling_ratio: bandwidth must be positive");
    }
    return p.rep_rate_hz / (2.0 * signal_bandwidth_hz);
}

}  // namespace subnyq
