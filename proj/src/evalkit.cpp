#include "subnyq/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subnyq/angles.hpp"
#include "subnyq/detail/smallsolve.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/kernels.hpp"
#include "subnyq/signalgen.hpp"

namespace subnyq {

namespace {

struct CenteredStats {
    double mean = 0.0;
    double var = 0.0;  // mean-removed second moment
};

CenteredStats centered_stats(std::span<const double> x) {
    CenteredStats st;
    st.mean = kernels::mean(x);
    st.var = kernels::mean_sq(x) - st.mean * st.mean;
    return st;
}

double ratio_db(double num, double den) {
    if (den <= 0.0) return kSinrCapDb;
    if (num <= 0.0) return -kSinrCapDb;
    return std::clamp(10.0 * std::log10(num / den), -kSinrCapDb, kSinrCapDb);
}

EyeDiagram fold_eye(std::span<const double> values, const double* times, double t0, double dt,
                    double symbol_period_s, std::size_t phase_bins, std::size_t amplitude_bins) {
    if (values.empty()) throw EmptySampleSet("eye_diagram: empty input");
    if (!(symbol_period_s > 0.0)) throw ConfigError("eye_diagram: symbol period must be positive");
    if (phase_bins < 1 || amplitude_bins < 1) {
        throw ConfigError("eye_diagram: bin counts must be >= 1");
    }
    EyeDiagram eye;
    eye.symbol_period_s = symbol_period_s;
    eye.phase_bins = phase_bins;
    eye.amplitude_bins = amplitude_bins;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    eye.amp_min = *lo;
    eye.amp_max = *hi;
    eye.counts.assign(phase_bins * amplitude_bins, 0);
    const double amp_span = eye.amp_max - eye.amp_min;
    const double inv_period = 1.0 / symbol_period_s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double t = times != nullptr ? times[i] : t0 + static_cast<double>(i) * dt;
        double phase = std::fmod(t, symbol_period_s) * inv_period;
        if (phase < 0.0) phase += 1.0;
        auto pbin = static_cast<std::size_t>(phase * static_cast<double>(phase_bins));
        if (pbin >= phase_bins) pbin = phase_bins - 1;
        std::size_t abin = amplitude_bins / 2;
        if (amp_span > 0.0) {
            const double rel = (values[i] - eye.amp_min) / amp_span;
            abin = static_cast<std::size_t>(rel * static_cast<double>(amplitude_bins));
            if (abin >= amplitude_bins) abin = amplitude_bins - 1;
        }
        ++eye.counts[pbin * amplitude_bins + abin];
    }
    return eye;
}

}  // namespace

double correlation_metric(const Waveform& est, const Waveform& truth) {
    if (!est.same_geometry(truth)) {
        throw ConfigError("correlation_metric: inputs must share geometry");
    }
    const CenteredStats a = centered_stats(est.samples);
    const CenteredStats b = centered_stats(truth.samples);
    const double m2a = kernels::mean_sq(est.samples);
    const double m2b = kernels::mean_sq(truth.samples);
    if (a.var <= 1e-15 * std::max(m2a, 1e-300) || b.var <= 1e-15 * std::max(m2b, 1e-300)) {
        throw DegenerateSignal("correlation_metric: zero-variance input");
    }
    const double cross = kernels::mean_prod(est.samples, truth.samples) - a.mean * b.mean;
    return std::min(1.0, std::abs(cross) / std::sqrt(a.var * b.var));
}

double sinr_gain_db(const MixingMatrix& A, const DemixMatrix& W, double power_soi,
                    double power_int) {
    const Mat2 g = W.mat() * A.mat();
    const double gs = W.soi_channel == 1 ? g.a : g.c;
    const double gi = W.soi_channel == 1 ? g.b : g.d;
    if (gi * gi * power_int == 0.0) return kSinrCapDb;  // perfect rejection
    const double after_db = ratio_db(gs * gs * power_soi, gi * gi * power_int);
    const double before_db =
        std::max(ratio_db(A.a11 * A.a11 * power_soi, A.a12 * A.a12 * power_int),
                 ratio_db(A.a21 * A.a21 * power_soi, A.a22 * A.a22 * power_int));
    return std::clamp(after_db - before_db, -kSinrCapDb, kSinrCapDb);
}

std::uint64_t EyeDiagram::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

EyeDiagram eye_diagram(const Waveform& w, double symbol_period_s, std::size_t phase_bins,
                       std::size_t amplitude_bins) {
    if (w.duration_s() < symbol_period_s) {
        throw ConfigError("eye_diagram: waveform shorter than one symbol period");
    }
    return fold_eye(w.samples, nullptr, w.start_time_s, w.dt(), symbol_period_s, phase_bins,
                    amplitude_bins);
}

EyeDiagram eye_diagram(const SampleSet& s, std::size_t channel, double symbol_period_s,
                       std::size_t phase_bins, std::size_t amplitude_bins) {
    if (channel >= s.channel_count()) throw ConfigError("eye_diagram: channel out of range");
    return fold_eye(s.channels[channel], s.times_s.data(), 0.0, 0.0, symbol_period_s, phase_bins,
                    amplitude_bins);
}

double eye_midband_fraction(const EyeDiagram& eye) {
    // Middle third of the amplitude range; a decodable two-level eye keeps it
    // empty at the sampling phase.
    const std::size_t lo = eye.amplitude_bins / 3;
    const std::size_t hi = eye.amplitude_bins - eye.amplitude_bins / 3;
    double best = 1.0;
    for (std::size_t p = 0; p < eye.phase_bins; ++p) {
        std::uint64_t col = 0;
        std::uint64_t mid = 0;
        for (std::size_t a = 0; a < eye.amplitude_bins; ++a) {
            const std::uint64_t c = eye.at(p, a);
            col += c;
            if (a >= lo && a < hi) mid += c;
        }
        if (col == 0) continue;
        best = std::min(best, static_cast<double>(mid) / static_cast<double>(col));
    }
    return best;
}

double ber(const Waveform& est, std::span<const int> true_bits, double bit_rate_hz) {
    if (true_bits.empty()) throw ConfigError("ber: no reference bits");
    const std::int64_t spb = samples_per_symbol(bit_rate_hz, est.sample_rate_hz);
    const std::size_t needed = true_bits.size() * static_cast<std::size_t>(spb);
    if (est.size() < needed) {
        throw ConfigError("ber: waveform shorter than the reference bit stream");
    }
    std::size_t err_pos = 0;
    std::size_t err_neg = 0;
    for (std::size_t i = 0; i < true_bits.size(); ++i) {
        const double v = est.samples[i * static_cast<std::size_t>(spb) +
                                     static_cast<std::size_t>(spb / 2)];
        const bool detected = v >= 0.0;
        const bool truth = true_bits[i] != 0;
        if (detected != truth) ++err_pos;
        if (detected == truth) ++err_neg;  // inverted polarity
    }
    return static_cast<double>(std::min(err_pos, err_neg)) /
           static_cast<double>(true_bits.size());
}

double CovOracle::curve(double theta_deg) const {
    return q1 + q2 * cos_deg(fold_deg(2.0 * (theta_deg - theta0_deg), 360.0));
}

CovOracle cov_oracle(const MixingMatrix& A, double var_soi, double var_int) {
    if (!(var_soi > 0.0) || !(var_int > 0.0)) {
        throw ConfigError("cov_oracle: variances must be positive");
    }
    const double c11 = A.a11 * A.a11 * var_soi + A.a12 * A.a12 * var_int;
    const double c22 = A.a21 * A.a21 * var_soi + A.a22 * A.a22 * var_int;
    const double c12 = A.a11 * A.a21 * var_soi + A.a12 * A.a22 * var_int;
    CovOracle out;
    out.q1 = 0.5 * (c11 + c22);
    out.q2 = 0.5 * std::hypot(c11 - c22, 2.0 * c12);
    out.theta0_deg = fold_deg(0.5 * atan2_deg(2.0 * c12, c11 - c22), 180.0);
    return out;
}

double kurt_curve_oracle(double kappa1, double kappa2, double alpha_deg, double phi_deg) {
    const double psi = phi_deg - alpha_deg;
    const double c = cos_deg(psi);
    const double s = sin_deg(psi);
    const double c2 = c * c;
    const double s2 = s * s;
    return kappa1 * c2 * c2 + kappa2 * s2 * s2 + 6.0 * c2 * s2;
}

double residual_rotation_oracle(const MixingMatrix& A, const CovOracle& cov, double var_soi,
                                double var_int) {
    SecondMomentFit fit;
    fit.q1 = cov.q1;
    fit.q2 = cov.q2;
    fit.theta0_deg = cov.theta0_deg;
    const PcaModel pca = build_pca(fit);
    const Mat2 m = pca.Sigma() * pca.U().transpose() * A.mat() *
                   Mat2::diag(std::sqrt(var_soi), std::sqrt(var_int));
    return fold_deg(atan2_deg(m.c, m.a), 90.0);
}

GridFitSecond grid_fit_second(const MomentCurve& curve) {
    const std::size_t n = curve.angles_deg.size();
    if (n < 3) throw InsufficientAngles("grid_fit_second: need >= 3 curve points");
    GridFitSecond best;
    best.sse = -1.0;
    const auto steps = static_cast<int>(std::lround(180.0 / kGridStepDeg));
    for (int k = 0; k < steps; ++k) {
        const double g = static_cast<double>(k) * kGridStepDeg;
        double s01 = 0.0, s11 = 0.0, t0 = 0.0, t1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = cos_deg(fold_deg(2.0 * (curve.angles_deg[i] - g), 360.0));
            s01 += c;
            s11 += c * c;
            t0 += curve.values[i];
            t1 += curve.values[i] * c;
        }
        const double s00 = static_cast<double>(n);
        const double det = s00 * s11 - s01 * s01;
        if (std::abs(det) < 1e-12 * std::max(s00 * s11, 1.0)) continue;
        const double q1 = (s11 * t0 - s01 * t1) / det;
        const double q2 = (s00 * t1 - s01 * t0) / det;
        if (q2 < 0.0) continue;  // the mirrored candidate 90 degrees away covers it
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double c = cos_deg(fold_deg(2.0 * (curve.angles_deg[i] - g), 360.0));
            const double r = curve.values[i] - q1 - q2 * c;
            sse += r * r;
        }
        if (best.sse < 0.0 || sse < best.sse) {
            best.q1 = q1;
            best.q2 = q2;
            best.theta0_deg = g;
            best.sse = sse;
        }
    }
    if (best.sse < 0.0) throw InsufficientAngles("grid_fit_second: no candidate angle is solvable");
    best.degenerate = best.q2 <= 1e-3 * std::max(std::abs(best.q1), 1e-300);
    return best;
}

GridFitFourth grid_fit_fourth(const MomentCurve& curve) {
    const std::size_t n = curve.angles_deg.size();
    if (n < 5) throw InsufficientAngles("grid_fit_fourth: need >= 5 curve points");
    GridFitFourth best;
    best.sse = -1.0;
    const auto steps = static_cast<int>(std::lround(90.0 / kGridStepDeg));
    for (int k = 0; k < steps; ++k) {
        const double g = static_cast<double>(k) * kGridStepDeg;
        // Basis per candidate: {1, cos 2phi, sin 2phi, cos(4(phi-g))}. Only the
        // 4phi phase is pinned, so the search minimizes the same functional the
        // closed-form fit extracts.
        std::array<std::array<double, 4>, 4> gram{};
        std::array<double, 4> rhs{};
        for (std::size_t i = 0; i < n; ++i) {
            const double phi = curve.angles_deg[i];
            const std::array<double, 4> row = {
                1.0, cos_deg(fold_deg(2.0 * phi, 360.0)), sin_deg(fold_deg(2.0 * phi, 360.0)),
                cos_deg(fold_deg(4.0 * (phi - g), 360.0))};
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) gram[a][b] += row[a] * row[b];
                rhs[a] += row[a] * curve.values[i];
            }
        }
        if (!detail::solve_dense<4>(gram, rhs)) continue;
        if (rhs[3] > 0.0) continue;  // p3 <= 0 convention; candidate g+45 has the flipped sign
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double phi = curve.angles_deg[i];
            const double model = rhs[0] + rhs[1] * cos_deg(fold_deg(2.0 * phi, 360.0)) +
                                 rhs[2] * sin_deg(fold_deg(2.0 * phi, 360.0)) +
                                 rhs[3] * cos_deg(fold_deg(4.0 * (phi - g), 360.0));
            const double r = curve.values[i] - model;
            sse += r * r;
        }
        if (best.sse < 0.0 || sse < best.sse) {
            best.p1 = rhs[0];
            best.p2 = rhs[1] * cos_deg(fold_deg(2.0 * g, 360.0)) +
                      rhs[2] * sin_deg(fold_deg(2.0 * g, 360.0));
            best.p3 = rhs[3];
            best.phi0_deg = g;
            best.sse = sse;
        }
    }
    if (best.sse < 0.0) throw InsufficientAngles("grid_fit_fourth: no candidate angle is solvable");
    best.degenerate = std::abs(best.p3) <= 1e-3 * std::max(std::abs(best.p1), 1e-300);
    return best;
}

}  // namespace subnyq
