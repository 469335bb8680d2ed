#include <doctest.h>

#include <cmath>
#include <vector>

#include "subnyq/angles.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/evalkit.hpp"
#include "subnyq/rng.hpp"
#include "subnyq/signalgen.hpp"

using namespace subnyq;

namespace {

Waveform noise_wave(std::size_t n, std::uint64_t seed) {
    return gen_gaussian(1e6, n, 1.0, seed);
}

const std::vector<double> kPhiGrid{0.0, 22.5, 45.0, 67.5, 90.0, 112.5, 135.0, 157.5};

}  // namespace

TEST_CASE("correlation_metric: identity, sign/scale invariance, null level") {
    const Waveform w = noise_wave(100000, 1);
    CHECK(correlation_metric(w, w) == doctest::Approx(1.0).epsilon(1e-14));

    Waveform scaled = w;
    for (double& v : scaled.samples) v *= -3.0;
    CHECK(correlation_metric(scaled, w) == doctest::Approx(1.0).epsilon(1e-14));

    // affine invariance: corr(w, a*w + b) = 1 for a != 0
    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
        const double a = (rng.uniform01() - 0.5) * 6.0 + ((rng.bits(1) != 0u) ? 0.7 : -0.7);
        const double b = (rng.uniform01() - 0.5) * 4.0;
        Waveform affine = w;
        for (double& v : affine.samples) v = a * v + b;
        CHECK(correlation_metric(affine, w) == doctest::Approx(1.0).epsilon(1e-12));
    }

    // independent signals: correlation at the 1/sqrt(N) noise level
    const std::size_t n = 1000000;
    const Waveform g = noise_wave(n, 3);
    Waveform binary(1e6, 0.0, std::vector<double>(n, 1.0));
    Rng brng(4);
    for (double& v : binary.samples) v = (brng.bits(1) != 0u) ? 1.0 : -1.0;
    CHECK(correlation_metric(g, binary) <= 0.01);

    const Waveform flat(1e6, 0.0, std::vector<double>(100, 2.0));
    const Waveform flat2(1e6, 0.0, std::vector<double>(100, 5.0));
    CHECK_THROWS_AS(correlation_metric(flat, flat2), DegenerateSignal);
}

TEST_CASE("sinr_gain_db: no processing, perfect rejection, oracle demix") {
    const MixingMatrix A(1, 0.5, 0.3, 1);

    DemixMatrix ident;  // channel 1 is also the best input channel here
    CHECK(sinr_gain_db(A, ident, 1.0, 1.0) == 0.0);

    const double det = A.det();
    DemixMatrix inv;
    inv.w11 = A.a22 / det;
    inv.w12 = -A.a12 / det;
    inv.w21 = -A.a21 / det;
    inv.w22 = A.a11 / det;
    CHECK(sinr_gain_db(A, inv, 1.0, 1.0) == kSinrCapDb);

    // oracle-moment demix of the [[1,.5],[.5,1]] scenario rejects by >= 60 dB
    const MixingMatrix B(1, 0.5, 0.5, 1);
    const CovOracle cov = cov_oracle(B, 1.0, 1.0);
    const PcaModel pca = build_pca(SecondMomentFit{cov.q1, cov.q2, cov.theta0_deg, 0.0});
    const double alpha = residual_rotation_oracle(B, cov, 1.0, 1.0);
    MomentCurve c4;
    c4.order = 4;
    c4.angles_deg = kPhiGrid;
    const double scale = cov.q1 + cov.q2;
    for (double a : kPhiGrid) {
        c4.values.push_back(scale * scale * kurt_curve_oracle(1.64, 3.0, alpha, a));
    }
    DemixMatrix w = compose_demix(build_ica(fit_fourth_moment(c4)), pca);
    const Mat2 g = w.mat() * B.mat();
    w.soi_channel = std::abs(g.a) >= std::abs(g.b) ? 1 : 2;
    CHECK(sinr_gain_db(B, w, 1.0, 1.0) >= 60.0);
    CHECK(sinr_gain_db(B, ident, 1.0, 0.0) == kSinrCapDb);  // no interference at all
}

TEST_CASE("eye_diagram: constant waveform lands in a single amplitude row") {
    const Waveform w(1e9, 0.0, std::vector<double>(1000, 1.5));
    const EyeDiagram eye = eye_diagram(w, 50e-9, 10, 16);
    CHECK(eye.total() == 1000);
    std::size_t rows_with_mass = 0;
    for (std::size_t a = 0; a < eye.amplitude_bins; ++a) {
        std::uint64_t row = 0;
        for (std::size_t p = 0; p < eye.phase_bins; ++p) row += eye.at(p, a);
        if (row > 0) ++rows_with_mass;
    }
    CHECK(rows_with_mass == 1);
}

TEST_CASE("eye_diagram: clean NRZ has an open eye") {
    const Waveform w = gen_nrz(1e6, 500, 50e6, 9);
    const EyeDiagram eye = eye_diagram(w, 1e-6, 25, 32);
    CHECK(eye.total() == w.size());
    CHECK(eye_midband_fraction(eye) == 0.0);
    CHECK_THROWS_AS(eye_diagram(w, 1.0, 25, 32), ConfigError);  // shorter than one symbol
}

TEST_CASE("eye_diagram folds sparse sample sets by timestamp") {
    SampleSet s;
    s.times_s = {0.15e-6, 0.65e-6, 1.15e-6, 1.65e-6};  // phases 0.15, 0.65, 0.15, 0.65
    s.channels = {{1.0, -1.0, 1.0, -1.0}};
    s.source_rate_hz = 1e9;
    const EyeDiagram eye = eye_diagram(s, 0, 1e-6, 10, 4);
    CHECK(eye.total() == 4);
    CHECK(eye.at(1, 3) == 2);  // phase bin 1, top amplitude
    CHECK(eye.at(6, 0) == 2);
    CHECK_THROWS_AS(eye_diagram(s, 1, 1e-6, 10, 4), ConfigError);
}

TEST_CASE("ber: clean, inverted and chance-level inputs") {
    const Waveform w = gen_nrz(1e6, 10000, 8e6, 11);
    std::vector<int> bits(10000);
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = w.samples[i * 8] > 0 ? 1 : 0;
    CHECK(ber(w, bits, 1e6) == 0.0);

    Waveform inv = w;
    for (double& v : inv.samples) v = -v;
    CHECK(ber(inv, bits, 1e6) == 0.0);  // polarity search

    const Waveform noise = gen_gaussian(8e6, 80000, 1.0, 12);
    const double chance = ber(noise, bits, 1e6);
    CHECK(chance >= 0.45);
    CHECK(chance <= 0.5);

    CHECK_THROWS_AS(ber(w, std::vector<int>(20000, 1), 1e6), ConfigError);
}

TEST_CASE("cov_oracle examples") {
    const CovOracle iso = cov_oracle(MixingMatrix(1, 0, 0, 1), 1.0, 1.0);
    CHECK(iso.q1 == 1.0);
    CHECK(iso.q2 == 0.0);

    const CovOracle c = cov_oracle(MixingMatrix(1, 0.5, 0.5, 1), 1.0, 1.0);
    CHECK(c.q1 == 1.25);
    CHECK(c.q2 == 1.0);
    CHECK(c.theta0_deg == 45.0);

    const CovOracle scaled = cov_oracle(MixingMatrix(2, 1.0, 1.0, 2), 1.0, 1.0);
    CHECK(scaled.q1 == 4.0 * c.q1);
    CHECK(scaled.q2 == 4.0 * c.q2);
    CHECK(scaled.theta0_deg == c.theta0_deg);

    CHECK_THROWS_AS(cov_oracle(MixingMatrix(1, 0, 0, 1), 0.0, 1.0), ConfigError);
}

TEST_CASE("cov_oracle matches direct 2x2 eigendecomposition on 1000 random matrices") {
    Rng rng(13);
    int tested = 0;
    while (tested < 1000) {
        const double a11 = rng.uniform01() * 2.0 - 1.0;
        const double a12 = rng.uniform01() * 2.0 - 1.0;
        const double a21 = rng.uniform01() * 2.0 - 1.0;
        const double a22 = rng.uniform01() * 2.0 - 1.0;
        const double det = a11 * a22 - a12 * a21;
        if (std::abs(det) < 0.05) continue;
        const MixingMatrix A(a11, a12, a21, a22);
        if (A.cond() > 10.0) continue;
        const double vs = 0.5 + rng.uniform01();
        const double vi = 0.5 + rng.uniform01();
        const CovOracle cov = cov_oracle(A, vs, vi);
        if (cov.q2 < 1e-9 * cov.q1) continue;  // isotropic: angle undefined
        ++tested;

        // independent route: eigenvector of C for the larger eigenvalue
        const double c11 = a11 * a11 * vs + a12 * a12 * vi;
        const double c22 = a21 * a21 * vs + a22 * a22 * vi;
        const double c12 = a11 * a21 * vs + a12 * a22 * vi;
        const double tr = c11 + c22;
        const double lam1 = 0.5 * (tr + std::sqrt((c11 - c22) * (c11 - c22) + 4 * c12 * c12));
        double angle;
        if (std::abs(c12) > 1e-14 * tr) {
            angle = atan2_deg(lam1 - c11, c12);
        } else {
            angle = c11 >= c22 ? 0.0 : 90.0;
        }
        CHECK(angle_distance_deg(angle, cov.theta0_deg, 180.0) <= 1e-9);
        CHECK(lam1 == doctest::Approx(cov.q1 + cov.q2).epsilon(1e-12));
    }
}

TEST_CASE("kurt_curve_oracle closed form") {
    // two Gaussians: flat at 3
    for (double phi = 0.0; phi < 180.0; phi += 15.0) {
        CHECK(kurt_curve_oracle(3.0, 3.0, 10.0, phi) == doctest::Approx(3.0).epsilon(1e-14));
    }
    // phi = alpha picks out source 1 exactly
    CHECK(kurt_curve_oracle(1.64, 3.0, 37.0, 37.0) == 1.64);

    // harmonic expansion identity: p1 + p2 cos2psi + p3 cos4psi
    const double k1 = 1.64, k2 = 3.0;
    const double p1 = 3.0 * (k1 + k2) / 8.0 + 0.75;
    const double p2 = (k1 - k2) / 2.0;
    const double p3 = (k1 + k2 - 6.0) / 8.0;
    CHECK(p1 == doctest::Approx(2.49).epsilon(1e-12));
    CHECK(p2 == doctest::Approx(-0.68).epsilon(1e-12));
    CHECK(p3 == doctest::Approx(-0.17).epsilon(1e-12));
    for (double phi = 0.0; phi < 180.0; phi += 3.7) {
        const double direct = kurt_curve_oracle(k1, k2, 12.0, phi);
        const double harmonic = p1 + p2 * cos_deg(2.0 * (phi - 12.0)) +
                                p3 * cos_deg(4.0 * (phi - 12.0));
        CHECK(direct == doctest::Approx(harmonic).epsilon(1e-12));
    }
}

TEST_CASE("kurt_curve_oracle agrees with Monte Carlo within 3 standard errors") {
    const std::size_t n = 1000000;
    Rng rng(14);
    const double scale = 1.0 / std::sqrt(5.0);
    const double levels[4] = {-3.0 * scale, -scale, scale, 3.0 * scale};
    std::vector<double> s1(n), s2(n);
    for (std::size_t i = 0; i < n; ++i) {
        s1[i] = levels[rng.bits(2)];
        s2[i] = rng.normal();
    }
    for (double psi = 0.0; psi < 180.0; psi += 15.0) {
        const double c = cos_deg(psi);
        const double sn = sin_deg(psi);
        double m4 = 0.0, m8 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = c * s1[i] + sn * s2[i];
            const double y2 = y * y;
            m4 += y2 * y2;
            m8 += y2 * y2 * y2 * y2;
        }
        m4 /= static_cast<double>(n);
        m8 /= static_cast<double>(n);
        const double se = std::sqrt((m8 - m4 * m4) / static_cast<double>(n));
        const double closed = kurt_curve_oracle(1.64, 3.0, 0.0, psi);
        CHECK(std::abs(closed - m4) <= 3.0 * se);
    }
}

TEST_CASE("grid_fit_second agrees with the least-squares fit") {
    const std::vector<double> grid{0.0, 45.0, 90.0, 135.0};
    MomentCurve c;
    c.order = 2;
    c.angles_deg = grid;
    for (double a : grid) c.values.push_back(2.0 + 1.0 * cos_deg(2.0 * (a - 30.0)));

    SUBCASE("exact curve") {
        const GridFitSecond g = grid_fit_second(c);
        CHECK(angle_distance_deg(g.theta0_deg, 30.0, 180.0) <= kGridStepDeg / 2 + 1e-9);
        CHECK(g.q1 == doctest::Approx(2.0).epsilon(1e-4));
        CHECK(g.q2 == doctest::Approx(1.0).epsilon(1e-3));
        CHECK_FALSE(g.degenerate);
        const SecondMomentFit f = fit_second_moment(c);
        CHECK(angle_distance_deg(g.theta0_deg, f.theta0_deg, 180.0) <= kGridStepDeg);
    }
    SUBCASE("noisy curve") {
        Rng rng(15);
        for (double& v : c.values) v += 0.02 * rng.normal();
        const GridFitSecond g = grid_fit_second(c);
        const SecondMomentFit f = fit_second_moment(c);
        CHECK(angle_distance_deg(g.theta0_deg, f.theta0_deg, 180.0) <= kGridStepDeg);
    }
    SUBCASE("flat curve ties break to the lowest angle with a degenerate flag") {
        for (double& v : c.values) v = 4.0;
        const GridFitSecond g = grid_fit_second(c);
        CHECK(g.degenerate);
        CHECK(g.theta0_deg <= kGridStepDeg);
        CHECK(g.sse <= 1e-18);
    }
}

TEST_CASE("grid_fit_fourth agrees with the least-squares fit") {
    const std::vector<double> grid = kPhiGrid;
    MomentCurve c;
    c.order = 4;
    c.angles_deg = grid;
    for (double a : grid) {
        c.values.push_back(2.49 - 0.68 * cos_deg(2.0 * (a - 20.0)) -
                           0.17 * cos_deg(4.0 * (a - 20.0)));
    }
    SUBCASE("exact curve") {
        const GridFitFourth g = grid_fit_fourth(c);
        CHECK(angle_distance_deg(g.phi0_deg, 20.0, 90.0) <= kGridStepDeg / 2 + 1e-9);
        CHECK(g.p1 == doctest::Approx(2.49).epsilon(1e-4));
        CHECK(g.p2 == doctest::Approx(-0.68).epsilon(1e-2));
        CHECK(g.p3 == doctest::Approx(-0.17).epsilon(1e-2));
        CHECK_FALSE(g.degenerate);
        const FourthMomentFit f = fit_fourth_moment(c);
        CHECK(angle_distance_deg(g.phi0_deg, f.phi0_deg, 90.0) <= kGridStepDeg);
    }
    SUBCASE("noisy curve") {
        Rng rng(16);
        for (double& v : c.values) v += 0.05 * rng.normal();
        const GridFitFourth g = grid_fit_fourth(c);
        const FourthMomentFit f = fit_fourth_moment(c);
        CHECK(angle_distance_deg(g.phi0_deg, f.phi0_deg, 90.0) <= kGridStepDeg);
    }
    SUBCASE("flat curve is degenerate") {
        for (double& v : c.values) v = 3.0;
        const GridFitFourth g = grid_fit_fourth(c);
        CHECK(g.degenerate);
        CHECK(g.sse <= 1e-18);
    }
}
