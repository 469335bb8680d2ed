#include <doctest.h>

#include <cmath>
#include <vector>

#include "subnyq/errors.hpp"
#include "subnyq/rng.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/signalgen.hpp"

using namespace subnyq;

namespace {

Waveform random_wave(std::size_t n, double rate, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.normal();
    return Waveform(rate, 0.0, std::move(v));
}

PulseTrain rect_train(double rep, double width, double offset = 0.0) {
    PulseTrain p;
    p.rep_rate_hz = rep;
    p.pulse_width_s = width;
    p.shape = PulseShape::rect;
    p.offset_s = offset;
    return p;
}

}  // namespace

TEST_CASE("gating preserves constants") {
    const Waveform w(1e9, 0.0, std::vector<double>(100000, 0.75));
    SUBCASE("rect gate is exact") {
        const SampleSet s = gate(w, rect_train(1e6, 5e-9, 50e-9), 1);
        CHECK(s.size() > 0);
        for (double v : s.channels[0]) CHECK(v == 0.75);
    }
    SUBCASE("gaussian gate to machine precision") {
        PulseTrain p = rect_train(1e6, 5e-9, 50e-9);
        p.shape = PulseShape::gaussian;
        const SampleSet s = gate(w, p, 1);
        for (double v : s.channels[0]) CHECK(v == doctest::Approx(0.75).epsilon(1e-14));
    }
}

TEST_CASE("a 5 ns rect gate aligned to a 200 Mbps bit returns that bit exactly") {
    // 10 GS/s, 50 samples/bit; window [c-25, c+25) centered mid-bit covers
    // exactly one bit
    const Waveform w = gen_nrz(200e6, 2000, 10e9, 31);
    const double dt = 1e-10;
    const PulseTrain p = rect_train(4e6, 5e-9, 25.0 * dt);  // period 2500 samples, bit-aligned
    const SampleSet s = gate(w, p, 0);
    REQUIRE(s.size() > 10);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto bit_start = static_cast<std::size_t>(std::llround(s.times_s[i] / dt)) - 25;
        CHECK(s.channels[0][i] == w.samples[bit_start]);
    }
}

TEST_CASE("gating is linear in the waveform argument") {
    const Waveform w1 = random_wave(50000, 1e9, 5);
    const Waveform w2 = random_wave(50000, 1e9, 6);
    const PulseTrain p = rect_train(2e6, 7e-9, 3e-9);
    const double a = 1.7, b = -0.4;
    std::vector<double> combo(w1.size());
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * w1.samples[i] + b * w2.samples[i];
    const SampleSet left = gate(Waveform(1e9, 0.0, std::move(combo)), p, 9);
    const SampleSet right1 = gate(w1, p, 9);
    const SampleSet right2 = gate(w2, p, 9);
    REQUIRE(left.size() == right1.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
        const double rhs = a * right1.channels[0][i] + b * right2.channels[0][i];
        CHECK(left.channels[0][i] == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("gating commutes with 2x2 mixing") {
    const Waveform s1 = random_wave(40000, 1e9, 7);
    const Waveform s2 = random_wave(40000, 1e9, 8);
    const PulseTrain p = rect_train(3e6, 4e-9, 11e-9);
    const double A[2][2] = {{1.0, 0.5}, {0.3, 1.0}};

    std::vector<double> m1(s1.size()), m2(s1.size());
    for (std::size_t i = 0; i < m1.size(); ++i) {
        m1[i] = A[0][0] * s1.samples[i] + A[0][1] * s2.samples[i];
        m2[i] = A[1][0] * s1.samples[i] + A[1][1] * s2.samples[i];
    }
    const SampleSet mixed_then_gated =
        gate_pair(Waveform(1e9, 0.0, std::move(m1)), Waveform(1e9, 0.0, std::move(m2)), p, 3);
    const SampleSet gated_sources = gate_pair(s1, s2, p, 3);
    REQUIRE(mixed_then_gated.size() == gated_sources.size());
    for (std::size_t i = 0; i < gated_sources.size(); ++i) {
        const double g1 = A[0][0] * gated_sources.channels[0][i] +
                          A[0][1] * gated_sources.channels[1][i];
        const double g2 = A[1][0] * gated_sources.channels[0][i] +
                          A[1][1] * gated_sources.channels[1][i];
        CHECK(mixed_then_gated.channels[0][i] == doctest::Approx(g1).epsilon(1e-12));
        CHECK(mixed_then_gated.channels[1][i] == doctest::Approx(g2).epsilon(1e-12));
    }
}

TEST_CASE("pulses not fitting inside the waveform are dropped, not truncated") {
    // 1000 samples at 1 GHz = 1 us; window 101 samples; centers every 200
    const Waveform w = random_wave(1000, 1e9, 11);
    const PulseTrain p = rect_train(5e6, 101e-9, 0.0);
    // window [c-50, c+51) must fit in [0, 1000): of the candidate centers
    // {0, 200, ..., 1000}, 0 underruns and 1000 overruns

    const SampleSet s = gate(w, p, 0);
    CHECK(s.size() == 4);
    CHECK(s.times_s.front() == doctest::Approx(200e-9));
    CHECK(s.times_s.back() == doctest::Approx(800e-9));
}

TEST_CASE("no pulse inside the waveform raises EmptySampleSet") {
    const Waveform w = random_wave(100, 1e9, 12);
    CHECK_THROWS_AS(gate(w, rect_train(1e6, 5e-9, 1.0), 0), EmptySampleSet);  // offset past end
    CHECK_THROWS_AS(gate(w, rect_train(1e6, 900e-9, 0.0), 0), EmptySampleSet);  // window too wide
}

TEST_CASE("zero jitter gates identically for any seed") {
    const Waveform w = random_wave(20000, 1e9, 13);
    const PulseTrain p = rect_train(2e6, 5e-9, 3e-9);
    const SampleSet a = gate(w, p, 1);
    const SampleSet b = gate(w, p, 999);
    CHECK(a.times_s == b.times_s);
    CHECK(a.channels[0] == b.channels[0]);
}

TEST_CASE("jitter is seeded and deterministic") {
    const Waveform w = random_wave(200000, 1e9, 14);
    PulseTrain p = rect_train(1e6, 5e-9, 100e-9);
    p.jitter_rms_s = 20e-9;
    const SampleSet a = gate(w, p, 5);
    const SampleSet b = gate(w, p, 5);
    const SampleSet c = gate(w, p, 6);
    CHECK(a.times_s == b.times_s);
    CHECK(a.channels[0] == b.channels[0]);
    CHECK(a.times_s != c.times_s);
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.times_s[i] > a.times_s[i - 1]);
}

TEST_CASE("gate_pair hits both branches with the same pulses") {
    const Waveform w1 = random_wave(30000, 1e9, 15);
    const Waveform w2 = random_wave(30000, 1e9, 16);
    PulseTrain p = rect_train(2e6, 5e-9, 7e-9);
    p.jitter_rms_s = 5e-9;

    const SampleSet both = gate_pair(w1, w2, p, 4);
    REQUIRE(both.channel_count() == 2);
    const SampleSet swapped = gate_pair(w2, w1, p, 4);
    CHECK(both.channels[0] == swapped.channels[1]);
    CHECK(both.channels[1] == swapped.channels[0]);

    const SampleSet same = gate_pair(w1, w1, p, 4);
    CHECK(same.channels[0] == same.channels[1]);

    const Waveform shorter = random_wave(29999, 1e9, 17);
    CHECK_THROWS_AS(gate_pair(w1, shorter, p, 4), ConfigError);
}

TEST_CASE("sampling_ratio arithmetic") {
    CHECK(sampling_ratio(rect_train(2e6, 1e-9), 200e6) == 0.005);  // 1/200
    CHECK(sampling_ratio(rect_train(4e3, 1e-9), 200e6) == doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(sampling_ratio(rect_train(400e6, 1e-10), 200e6) == 1.0);  // Nyquist
    CHECK_THROWS_AS(sampling_ratio(rect_train(1e6, 1e-9), 0.0), ConfigError);
}

TEST_CASE("pulse train invariants") {
    CHECK_THROWS_AS(rect_train(1e6, 2e-6).validate(), ConfigError);  // overlapping pulses
    CHECK_THROWS_AS(rect_train(0.0, 1e-9).validate(), ConfigError);
    PulseTrain neg = rect_train(1e6, 1e-9);
    neg.jitter_rms_s = -1.0;
    CHECK_THROWS_AS(neg.validate(), ConfigError);
    // period must be >= 2 sample periods
    const Waveform w = random_wave(1000, 1e9, 18);
    CHECK_THROWS_AS(gate(w, rect_train(600e6, 1e-10), 0), ConfigError);
}

TEST_CASE("sub-sample pulse width degenerates to a single-sample gate") {
    const Waveform w = random_wave(5000, 1e9, 19);
    const SampleSet s = gate(w, rect_train(4e6, 100e-15, 0.0), 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto idx = static_cast<std::size_t>(std::llround(s.times_s[i] * 1e9));
        CHECK(s.channels[0][i] == w.samples[idx]);
    }
}
