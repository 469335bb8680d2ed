// The 2x2 mixing model and the de-mixing transform assembled from moment
// fits: PCA whitening (rotation U from theta0 plus the diagonal rescale
// Sigma), ICA rotation (V from phi0), and their composition
// W = V^T * Sigma * U^T, applied to full-rate signals.

#ifndef SUBNYQ_SEPARATOR_HPP
#define SUBNYQ_SEPARATOR_HPP

#include <utility>

#include "subnyq/estimator.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/waveform.hpp"

namespace subnyq {

// Minimal 2x2 matrix, row-major.
struct Mat2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double det() const { return a * d - b * c; }
    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    static Mat2 rotation_deg(double angle_deg);
    static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
};

struct MixingMatrix {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

    MixingMatrix() = default;
    // Throws SingularMatrix when |det| < 1e-12 * squared norm.
    MixingMatrix(double a11_, double a12_, double a21_, double a22_);

    double det() const { return a11 * a22 - a12 * a21; }
    double cond() const;  // ratio of singular values
    Mat2 mat() const { return {a11, a12, a21, a22}; }
};

// x1 = a11*s_soi + a12*s_int; x2 = a21*s_soi + a22*s_int, elementwise.
std::pair<Waveform, Waveform> mix(const MixingMatrix& A, const Waveform& s_soi,
                                  const Waveform& s_int);

struct PcaModel {
    double theta0_deg = 0.0;
    double sigma_ratio = 1.0;  // sqrt((q1+q2)/(q1-q2)) >= 1

    Mat2 U() const { return Mat2::rotation_deg(theta0_deg); }
    Mat2 Sigma() const { return Mat2::diag(1.0, sigma_ratio); }
};

// Requires q1 > q2 >= 0 strictly; throws DegenerateCovariance otherwise
// (possible under sampling noise; the caller may retry with more samples).
PcaModel build_pca(const SecondMomentFit& fit);

// X' = Sigma * U^T * X per sample pair: rotate channels into the principal
// component basis, then rescale the minor component.
SampleSet whiten(const SampleSet& s, const PcaModel& m);

struct IcaModel {
    double phi0_deg = 0.0;

    Mat2 V() const { return Mat2::rotation_deg(phi0_deg); }
};

// Throws IcaUnidentifiable when fit.identifiable is false.
IcaModel build_ica(const FourthMomentFit& fit);

struct DemixMatrix {
    double w11 = 1.0, w12 = 0.0, w21 = 0.0, w22 = 1.0;
    int soi_channel = 1;  // 1 or 2
    PcaModel pca;
    IcaModel ica;

    Mat2 mat() const { return {w11, w12, w21, w22}; }
};

// W = V^T * Sigma * U^T. soi_channel defaults to 1; the pipeline resolves it
// with resolve_soi on the demixed sparse samples.
DemixMatrix compose_demix(const IcaModel& ica, const PcaModel& pca);

// The channel whose sample kurtosis is farther from 3 (Gaussian); ties break
// toward channel 1. A zero-variance channel counts as Gaussian-like.
int resolve_soi(const SampleSet& demixed);

// Elementwise 2x2 product at full rate; channel soi_channel is the SOI
// estimate.
std::pair<Waveform, Waveform> apply_demix(const DemixMatrix& W, const Waveform& x1,
                                          const Waveform& x2);

// Same transform on sparse gated samples (used for SOI resolution).
SampleSet apply_demix_samples(const DemixMatrix& W, const SampleSet& s);

}  // namespace subnyq

#endif
