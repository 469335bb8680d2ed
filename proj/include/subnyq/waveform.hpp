// Waveform: a uniformly sampled real-valued signal, the common currency of
// the pipeline. Duration is always derived from the sample count, never
// stored.

#ifndef SUBNYQ_WAVEFORM_HPP
#define SUBNYQ_WAVEFORM_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace subnyq {

struct Waveform {
    double sample_rate_hz = 0.0;
    double start_time_s = 0.0;
    std::vector<double> samples;

    // Validates: positive rate, nonempty samples, every value finite.
    Waveform(double rate_hz, double start_s, std::vector<double> data);

    std::size_t size() const { return samples.size(); }
    double dt() const { return 1.0 / sample_rate_hz; }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
    double end_time_s() const { return start_time_s + duration_s(); }
    double time_at(std::size_t index) const { return start_time_s + static_cast<double>(index) * dt(); }

    double rms() const;

    bool same_geometry(const Waveform& other) const {
        return sample_rate_hz == other.sample_rate_hz && start_time_s == other.start_time_s &&
               samples.size() == other.samples.size();
    }

    std::span<const double> view() const { return samples; }
};

}  // namespace subnyq

#endif
