// Rotated projections of the two gated channels and the sinusoidal moment
// models fitted from a small set of angles:
//
//   E[x(theta)^2] = q1 + q2*cos(2(theta - theta0))
//   E[x(phi)^4]   = p1 + p2*cos(2(phi - phi0)) + p3*cos(4(phi - phi0))
//
// Fits are linearized harmonic least squares: closed-form, deterministic,
// and exact on noiseless data.

#ifndef SUBNYQ_ESTIMATOR_HPP
#define SUBNYQ_ESTIMATOR_HPP

#include <span>
#include <vector>

#include "subnyq/sampler.hpp"

namespace subnyq {

struct AngleGrid {
    std::vector<double> angles_deg;

    // Number of distinct values mod 180 degrees (1e-9 deg tolerance).
    std::size_t distinct_mod_180() const;
};

// cos(theta)*ch1 + sin(theta)*ch2, elementwise. Exact channel selection at
// 0 and 90 degrees.
std::vector<double> project(const SampleSet& s, double theta_deg);

double second_moment(std::span<const double> x);  // mean of squares
double fourth_moment(std::span<const double> x);  // mean of fourth powers

struct MomentCurve {
    int order = 2;  // 2 or 4
    std::vector<double> angles_deg;
    std::vector<double> values;
};

// Pairs (angle, E[project(s, angle)^order]) in grid order. Requires >=3
// distinct angles (mod 180) for order 2 and >=5 for order 4.
MomentCurve moment_curve(const SampleSet& s, const AngleGrid& grid, int order);

struct SecondMomentFit {
    double q1 = 0.0;
    double q2 = 0.0;           // >= 0
    double theta0_deg = 0.0;   // in [0, 180)
    double residual_rms = 0.0;

    // Isotropic covariance: theta0 is unreliable.
    bool degenerate() const { return q2 < 1e-3 * q1; }
};

struct FourthMomentFit {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;           // reported <= 0: phi0 marks the kurtosis minimum
    double phi0_deg = 0.0;     // in [0, 90)
    double residual_rms = 0.0;
    bool identifiable = false;
};

// Least squares on {1, cos 2t, sin 2t}; q2 = sqrt(a1^2+a2^2),
// theta0 = atan2(a2, a1)/2 folded into [0, 180).
SecondMomentFit fit_second_moment(const MomentCurve& curve);

// Least squares on {1, cos 2t, sin 2t, cos 4t, sin 4t}. phi0 comes from the
// 4phi harmonic; the kurtosis contrast of a symmetric-source mixture lives
// there, and the 2phi term absorbs whitening imperfection. For a sub-Gaussian
// signal of interest the 4th moment is minimal on the signal axis, so the
// reported convention is p3 = -sqrt(b3^2+b4^2) with phi0 shifted 45 degrees
// onto that minimizing axis; p2 is the projection of the 2phi component onto
// the shared phase. identifiable is false when the 4phi amplitude falls below
// the noise floor (flat curve, e.g. two Gaussian sources).
FourthMomentFit fit_fourth_moment(const MomentCurve& curve);

}  // namespace subnyq

#endif
