// Optical pulse-train gating: extract a sparse, sub-Nyquist set of samples
// from a full-rate waveform. A gate is modeled as a normalized windowed
// average around each pulse center; a pulse narrower than one sample period
// degenerates to an instantaneous (single-sample) gate.

#ifndef SUBNYQ_SAMPLER_HPP
#define SUBNYQ_SAMPLER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "subnyq/waveform.hpp"

namespace subnyq {

enum class PulseShape { rect, gaussian };

std::string to_string(PulseShape shape);
PulseShape pulse_shape_from_string(const std::string& name);

struct PulseTrain {
    double rep_rate_hz = 0.0;
    double pulse_width_s = 0.0;  // FWHM for gaussian shape
    PulseShape shape = PulseShape::rect;
    double offset_s = 0.0;       // time of first pulse center
    double jitter_rms_s = 0.0;

    // Throws ConfigError on violated invariants (non-overlap, signs).
    void validate() const;

    double period_s() const { return 1.0 / rep_rate_hz; }
};

struct SampleSet {
    std::vector<double> times_s;                 // strictly increasing
    std::vector<std::vector<double>> channels;   // one or two, same length as times_s
    double source_rate_hz = 0.0;                 // the gated waveform's sample rate

    std::size_t size() const { return times_s.size(); }
    std::size_t channel_count() const { return channels.size(); }
};

// One output sample per pulse: the pulse-shape-weighted average of waveform
// samples under the gate window. Pulses whose window extends past the
// waveform edge are dropped. Jitter, when nonzero, perturbs each pulse
// center independently from the seeded generator.
SampleSet gate(const Waveform& w, const PulseTrain& p, std::uint64_t seed);

// Both channels gated at identical (jittered) pulse times: the same physical
// pulse train hits both receiver branches.
SampleSet gate_pair(const Waveform& w1, const Waveform& w2, const PulseTrain& p,
                    std::uint64_t seed);

// Gated samples per Nyquist-rate sample: rep_rate / (2 * bandwidth).
double sampling_ratio(const PulseTrain& p, double signal_bandwidth_hz);

}  // namespace subnyq

#endif
