// Separation quality metrics and analytic oracles that ground-truth every
// fitted quantity. Metrics are invariant to the sign/scale ambiguity
// inherent to blind source separation; oracles are independent routes (eigen
// algebra, closed forms, brute-force grids) against the estimation chain.

#ifndef SUBNYQ_EVALKIT_HPP
#define SUBNYQ_EVALKIT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subnyq/estimator.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/separator.hpp"
#include "subnyq/waveform.hpp"

namespace subnyq {

struct SeparationReport {
    double corr_soi = 0.0;       // |Pearson correlation| with the true SOI
    double sinr_gain_db = 0.0;   // capped at 120 dB
    double kurtosis_out1 = 0.0;
    double kurtosis_out2 = 0.0;
    std::optional<double> ber;   // present for binary SOI scenarios
};

// |Pearson correlation| of mean-removed signals; invariant to sign and
// affine rescaling of either argument. Zero-variance input throws
// DegenerateSignal.
double correlation_metric(const Waveform& est, const Waveform& truth);

inline constexpr double kSinrCapDb = 120.0;

// SINR improvement of the SOI output row of G = W*A over the best input
// channel, given the true source powers. Zero interference leakage returns
// the 120 dB cap.
double sinr_gain_db(const MixingMatrix& A, const DemixMatrix& W, double power_soi,
                    double power_int);

struct EyeDiagram {
    double symbol_period_s = 0.0;
    std::size_t phase_bins = 0;
    std::size_t amplitude_bins = 0;
    double amp_min = 0.0;
    double amp_max = 0.0;
    std::vector<std::uint64_t> counts;  // phase-major: counts[phase*amplitude_bins + amp]

    std::uint64_t total() const;
    std::uint64_t at(std::size_t phase, std::size_t amp) const {
        return counts[phase * amplitude_bins + amp];
    }
};

EyeDiagram eye_diagram(const Waveform& w, double symbol_period_s, std::size_t phase_bins,
                       std::size_t amplitude_bins);
EyeDiagram eye_diagram(const SampleSet& s, std::size_t channel, double symbol_period_s,
                       std::size_t phase_bins, std::size_t amplitude_bins);

// Fraction of samples in the middle-third amplitude band at the optimal
// sampling phase (the phase column minimizing that fraction). 0 for a clean
// open eye.
double eye_midband_fraction(const EyeDiagram& eye);

// Mid-bit threshold detection against the true bits; the polarity with fewer
// errors wins (sign ambiguity).
double ber(const Waveform& est, std::span<const int> true_bits, double bit_rate_hz);

struct CovOracle {
    double q1 = 0.0;
    double q2 = 0.0;
    double theta0_deg = 0.0;  // in [0, 180)

    double curve(double theta_deg) const;  // q1 + q2*cos(2(theta - theta0))
};

// Ground truth of the second-moment sinusoid from C = A*diag(var)*A^T.
CovOracle cov_oracle(const MixingMatrix& A, double var_soi, double var_int);

// E[(cos(psi)s1 + sin(psi)s2)^4] for independent unit-variance whitened
// sources with 4th moments kappa1, kappa2 and residual rotation alpha:
//   kappa1*cos^4(psi) + kappa2*sin^4(psi) + 6*cos^2(psi)*sin^2(psi),
// psi = phi - alpha. Equals p1 + p2*cos(2 psi) + p3*cos(4 psi) with
// p1 = 3(k1+k2)/8 + 3/4, p2 = (k1-k2)/2, p3 = (k1+k2-6)/8.
double kurt_curve_oracle(double kappa1, double kappa2, double alpha_deg, double phi_deg);

// Residual rotation left after oracle whitening of the mixture: the angle of
// the orthogonal factor of Sigma * U^T * A * diag(sqrt(var)). This is the
// ground truth phi0 compares against, folded into [0, 90).
double residual_rotation_oracle(const MixingMatrix& A, const CovOracle& cov, double var_soi,
                                double var_int);

struct GridFitSecond {
    double q1 = 0.0;
    double q2 = 0.0;
    double theta0_deg = 0.0;
    double sse = 0.0;
    bool degenerate = false;  // flat curve: every angle ties
};

struct GridFitFourth {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double phi0_deg = 0.0;
    double sse = 0.0;
    bool degenerate = false;
};

inline constexpr double kGridStepDeg = 0.1;

// Exhaustive search over theta0 on a 0.1-degree grid with a closed-form
// amplitude solve per candidate; returns the residual-minimizing parameters
// under the q2 >= 0 convention. Ties resolve to the lowest angle.
GridFitSecond grid_fit_second(const MomentCurve& curve);

// Same brute-force search for phi0 in [0, 90). Per candidate the 4phi phase
// is pinned while the constant and both 2phi amplitudes stay free, so the
// search minimizes the same functional fit_fourth_moment extracts in closed
// form; p3 <= 0 convention as in the fit.
GridFitFourth grid_fit_fourth(const MomentCurve& curve);

}  // namespace subnyq

#endif
