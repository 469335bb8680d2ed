#include "subnyq/separator.hpp"

#include <cmath>
#include <string>

#include "subnyq/angles.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/kernels.hpp"

namespace subnyq {

Mat2 Mat2::rotation_deg(double angle_deg) {
    const double c = cos_deg(angle_deg);
    const double s = sin_deg(angle_deg);
    return {c, -s, s, c};
}

MixingMatrix::MixingMatrix(double a11_, double a12_, double a21_, double a22_)
    : a11(a11_), a12(a12_), a21(a21_), a22(a22_) {
    const double norm_sq = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
    if (std::abs(det()) < 1e-12 * norm_sq) {
        throw SingularMatrix("mixing matrix is singular (|det| < 1e-12 * ||A||^2)");
    }
}

double MixingMatrix::cond() const {
    // Singular values of a 2x2 from the Gram trace/determinant.
    const double t = a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22;
    const double d = std::abs(det());
    const double disc = std::sqrt(std::max(0.0, t * t - 4.0 * d * d));
    const double s1 = std::sqrt((t + disc) / 2.0);
    const double s2 = std::sqrt(std::max(0.0, (t - disc) / 2.0));
    return s1 / s2;
}

std::pair<Waveform, Waveform> mix(const MixingMatrix& A, const Waveform& s_soi,
                                  const Waveform& s_int) {
    if (!s_soi.same_geometry(s_int)) {
        throw ConfigError("mix: sources must share sample rate, start time and length");
    }
    std::vector<double> x1(s_soi.size());
    std::vector<double> x2(s_soi.size());
    kernels::mix2(A.a11, A.a12, A.a21, A.a22, s_soi.samples, s_int.samples, x1, x2);
    return {Waveform(s_soi.sample_rate_hz, s_soi.start_time_s, std::move(x1)),
            Waveform(s_soi.sample_rate_hz, s_soi.start_time_s, std::move(x2))};
}

PcaModel build_pca(const SecondMomentFit& fit) {
    if (!(fit.q2 >= 0.0) || !(fit.q1 > fit.q2) || fit.q1 - fit.q2 <= 1e-12 * fit.q1) {
        throw DegenerateCovariance(
            "build_pca: requires q1 > q2 >= 0 strictly (got q1=" + std::to_string(fit.q1) +
            ", q2=" + std::to_string(fit.q2) + ")");
    }
    PcaModel m;
    m.theta0_deg = fit.theta0_deg;
    m.sigma_ratio = std::sqrt((fit.q1 + fit.q2) / (fit.q1 - fit.q2));
    return m;
}

SampleSet whiten(const SampleSet& s, const PcaModel& m) {
    if (s.channel_count() != 2) throw ConfigError("whiten: two channels required");
    // Sigma * U^T = [[c, s], [-r*s, r*c]] for theta0 with c=cos, s=sin, r=sigma_ratio.
    const double c = cos_deg(m.theta0_deg);
    const double sn = sin_deg(m.theta0_deg);
    SampleSet out;
    out.times_s = s.times_s;
    out.source_rate_hz = s.source_rate_hz;
    out.channels.resize(2);
    out.channels[0].resize(s.size());
    out.channels[1].resize(s.size());
    kernels::mix2(c, sn, -m.sigma_ratio * sn, m.sigma_ratio * c, s.channels[0], s.channels[1],
                  out.channels[0], out.channels[1]);
    return out;
}

IcaModel build_ica(const FourthMomentFit& fit) {
    if (!fit.identifiable) {
        throw IcaUnidentifiable("build_ica: fourth-moment curve is flat; rotation angle "
                                "cannot be extracted");
    }
    return IcaModel{fit.phi0_deg};
}

DemixMatrix compose_demix(const IcaModel& ica, const PcaModel& pca) {
    const Mat2 w = ica.V().transpose() * (pca.Sigma() * pca.U().transpose());
    DemixMatrix out;
    out.w11 = w.a;
    out.w12 = w.b;
    out.w21 = w.c;
    out.w22 = w.d;
    out.soi_channel = 1;
    out.pca = pca;
    out.ica = ica;
    return out;
}

int resolve_soi(const SampleSet& demixed) {
    if (demixed.channel_count() != 2) throw ConfigError("resolve_soi: two channels required");
    auto kurtosis = [](std::span<const double> x) {
        const double m2 = kernels::mean_sq(x);
        if (m2 <= 0.0) return 3.0;  // zero-variance: treat as Gaussian-like
        return kernels::mean_quad(x) / (m2 * m2);
    };
    const double k1 = kurtosis(demixed.channels[0]);
    const double k2 = kurtosis(demixed.channels[1]);
    return std::abs(k1 - 3.0) >= std::abs(k2 - 3.0) ? 1 : 2;
}

std::pair<Waveform, Waveform> apply_demix(const DemixMatrix& W, const Waveform& x1,
                                          const Waveform& x2) {
    if (!x1.same_geometry(x2)) {
        throw ConfigError("apply_demix: inputs must share sample rate, start time and length");
    }
    std::vector<double> y1(x1.size());
    std::vector<double> y2(x1.size());
    kernels::mix2(W.w11, W.w12, W.w21, W.w22, x1.samples, x2.samples, y1, y2);
    return {Waveform(x1.sample_rate_hz, x1.start_time_s, std::move(y1)),
            Waveform(x1.sample_rate_hz, x1.start_time_s, std::move(y2))};
}

SampleSet apply_demix_samples(const DemixMatrix& W, const SampleSet& s) {
    if (s.channel_count() != 2) throw ConfigError("apply_demix: two channels required");
    SampleSet out;
    out.times_s = s.times_s;
    out.source_rate_hz = s.source_rate_hz;
    out.channels.resize(2);
    out.channels[0].resize(s.size());
    out.channels[1].resize(s.size());
    kernels::mix2(W.w11, W.w12, W.w21, W.w22, s.channels[0], s.channels[1], out.channels[0],
                  out.channels[1]);
    return out;
}

}  // namespace subnyq
