// End-to-end orchestration: generate -> mix -> gate -> moment fits -> PCA/ICA
// -> demix -> full-rate separation -> metrics, plus the sampling-ratio sweep.

#ifndef SUBNYQ_PIPELINE_HPP
#define SUBNYQ_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "subnyq/config.hpp"
#include "subnyq/evalkit.hpp"

namespace subnyq {

struct StageTimings {
    double generate_ms = 0.0;
    double mix_ms = 0.0;
    double gate_ms = 0.0;
    double fit_ms = 0.0;
    double apply_ms = 0.0;
    double metrics_ms = 0.0;
    double total_ms = 0.0;
};

struct RunReport {
    ScenarioConfig config;  // echo; re-running it reproduces every number
    std::string status;     // "ok", "degenerate_covariance", "ica_unidentifiable"
    std::size_t n_gated = 0;
    double sampling_ratio = 0.0;

    SecondMomentFit fit2;
    std::optional<FourthMomentFit> fit4;
    DemixMatrix demix;

    // Ground truth computed from the gated true sources (simulation knows them).
    double gated_var_soi = 0.0;
    double gated_var_int = 0.0;
    double gated_kurt_soi = 0.0;
    double gated_kurt_int = 0.0;
    std::optional<CovOracle> cov;        // needs both gated variances positive
    std::optional<double> alpha_deg;     // residual-rotation oracle
    std::optional<double> theta0_err_deg;
    std::optional<double> phi0_err_deg;
    std::optional<double> whiteness;     // |offdiag cov| / mean variance, whitened samples

    MomentCurve curve2;                  // estimated second-moment curve
    std::vector<double> curve2_theory;   // oracle curve on the same grid (empty if no oracle)
    std::optional<MomentCurve> curve4;
    std::vector<double> curve4_theory;

    SeparationReport separation;
    std::optional<EyeDiagram> eye;

    StageTimings timings;  // wall clock; the one block excluded from determinism
};

// Executes the full pipeline. DegenerateCovariance and IcaUnidentifiable are
// reported in status (with an identity / PCA-only fallback demix) rather than
// thrown; config and I/O errors propagate.
RunReport run_pipeline(const ScenarioConfig& cfg);

// Pulse train for a requested sampling ratio: the repetition period is the
// nearest whole number of samples nudged, for symbol sources, to be coprime
// with the symbol period so gates sweep symbol phases.
PulseTrain derive_pulse_for_ratio(const ScenarioConfig& cfg, double ratio);

struct SweepRow {
    double ratio_requested = 0.0;
    double ratio_achieved = 0.0;
    double rep_rate_hz = 0.0;
    int trials = 0;
    int failures = 0;
    double theta0_err_med_deg = 0.0;
    double theta0_err_iqr_deg = 0.0;
    double phi0_err_med_deg = 0.0;
    double phi0_err_iqr_deg = 0.0;
    double corr_soi_med = 0.0;
    double corr_soi_iqr = 0.0;
};

// Independent seeded runs per ratio. Trial seeds derive from the master seed,
// the ratio value and the trial index, so removing a ratio never changes
// another ratio's rows. Failed trials are recorded and count as worst-case
// (corr 0, fully ambiguous angles). Trials may execute concurrently; row
// order is deterministic.
std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::vector<double>& ratios,
                                int trials);

}  // namespace subnyq

#endif
