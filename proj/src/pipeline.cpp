#include "subnyq/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>

#include "subnyq/angles.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/kernels.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double kurtosis_of(std::span<const double> x) {
    const double m2 = kernels::mean_sq(x);
    if (m2 <= 0.0) return 3.0;
    return kernels::mean_quad(x) / (m2 * m2);
}

std::vector<int> mid_bit_signs(const Waveform& w, double bit_rate_hz) {
    const auto spb = samples_per_symbol(bit_rate_hz, w.sample_rate_hz);
    const std::size_t n_bits = w.size() / static_cast<std::size_t>(spb);
    std::vector<int> bits(n_bits);
    for (std::size_t i = 0; i < n_bits; ++i) {
        bits[i] = w.samples[i * static_cast<std::size_t>(spb) +
                            static_cast<std::size_t>(spb / 2)] >= 0.0
                      ? 1
                      : 0;
    }
    return bits;
}

// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

}  // namespace

RunReport run_pipeline(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto t_start = Clock::now();
    RunReport rep;
    rep.config = cfg;
    rep.status = "ok";

    SourceSpec soi_spec = cfg.soi;
    SourceSpec int_spec = cfg.interference;
    soi_spec.seed = derive_seed(cfg.master_seed, 0);
    int_spec.seed = derive_seed(cfg.master_seed, 1);
    const std::uint64_t jitter_seed = derive_seed(cfg.master_seed, 2);

    // generate
    auto t0 = Clock::now();
    std::optional<Waveform> s_soi = generate(soi_spec, cfg.sample_rate_hz, cfg.duration_s);
    std::optional<Waveform> s_int = generate(int_spec, cfg.sample_rate_hz, cfg.duration_s);
    rep.timings.generate_ms = ms_since(t0);

    // mix
    t0 = Clock::now();
    auto [x1, x2] = mix(cfg.mixing, *s_soi, *s_int);
    rep.timings.mix_ms = ms_since(t0);

    // gate both mixture branches and, for the oracle, the true sources, with
    // the same pulse train and jitter stream
    t0 = Clock::now();
    const SampleSet gated = gate_pair(x1, x2, cfg.pulse, jitter_seed);
    const SampleSet gated_sources = gate_pair(*s_soi, *s_int, cfg.pulse, jitter_seed);
    rep.timings.gate_ms = ms_since(t0);
    rep.n_gated = gated.size();
    rep.sampling_ratio = sampling_ratio(cfg.pulse, cfg.signal_bandwidth_hz());

    const double power_soi = kernels::mean_sq(s_soi->samples);
    const double power_int = kernels::mean_sq(s_int->samples);
    s_int.reset();  // the full-rate interference is no longer needed

    rep.gated_var_soi = kernels::mean_sq(gated_sources.channels[0]);
    rep.gated_var_int = kernels::mean_sq(gated_sources.channels[1]);
    rep.gated_kurt_soi = kurtosis_of(gated_sources.channels[0]);
    rep.gated_kurt_int = kurtosis_of(gated_sources.channels[1]);
    if (rep.gated_var_soi > 0.0 && rep.gated_var_int > 0.0) {
        rep.cov = cov_oracle(cfg.mixing, rep.gated_var_soi, rep.gated_var_int);
    }

    // moment fits and demix assembly
    t0 = Clock::now();
    rep.curve2 = moment_curve(gated, cfg.theta_grid, 2);
    rep.fit2 = fit_second_moment(rep.curve2);
    if (rep.cov) {
        rep.curve2_theory.reserve(rep.curve2.angles_deg.size());
        for (double a : rep.curve2.angles_deg) rep.curve2_theory.push_back(rep.cov->curve(a));
        rep.theta0_err_deg = angle_distance_deg(rep.fit2.theta0_deg, rep.cov->theta0_deg, 180.0);
    }

    bool have_pca = false;
    PcaModel pca;
    try {
        pca = build_pca(rep.fit2);
        have_pca = true;
    } catch (const DegenerateCovariance&) {
        rep.status = "degenerate_covariance";
    }

    if (have_pca) {
        const SampleSet whitened = whiten(gated, pca);
        const double w11 = kernels::mean_sq(whitened.channels[0]);
        const double w22 = kernels::mean_sq(whitened.channels[1]);
        const double w12 = kernels::mean_prod(whitened.channels[0], whitened.channels[1]);
        rep.whiteness = std::abs(w12) / (0.5 * (w11 + w22));

        rep.curve4 = moment_curve(whitened, cfg.phi_grid, 4);
        rep.fit4 = fit_fourth_moment(*rep.curve4);
        if (rep.cov) {
            rep.alpha_deg = residual_rotation_oracle(cfg.mixing, *rep.cov, rep.gated_var_soi,
                                                     rep.gated_var_int);
            const double scale = rep.cov->q1 + rep.cov->q2;
            rep.curve4_theory.reserve(rep.curve4->angles_deg.size());
            for (double a : rep.curve4->angles_deg) {
                rep.curve4_theory.push_back(
                    scale * scale *
                    kurt_curve_oracle(rep.gated_kurt_soi, rep.gated_kurt_int, *rep.alpha_deg, a));
            }
        }
        IcaModel ica;  // identity rotation fallback
        if (rep.fit4->identifiable) {
            ica = build_ica(*rep.fit4);
            if (rep.alpha_deg) {
                rep.phi0_err_deg =
                    angle_distance_deg(rep.fit4->phi0_deg, *rep.alpha_deg, 90.0);
            }
        } else {
            rep.status = "ica_unidentifiable";
        }
        rep.demix = compose_demix(ica, pca);
    } else {
        rep.demix = DemixMatrix{};  // identity fallback; nothing to whiten against
    }
    rep.demix.soi_channel = resolve_soi(apply_demix_samples(rep.demix, gated));
    rep.timings.fit_ms = ms_since(t0);

    // full-rate separation; elementwise kernel applied in place to keep the
    // peak at three full-rate buffers
    t0 = Clock::now();
    kernels::mix2(rep.demix.w11, rep.demix.w12, rep.demix.w21, rep.demix.w22, x1.samples,
                  x2.samples, x1.samples, x2.samples);
    const Waveform& y_soi = rep.demix.soi_channel == 1 ? x1 : x2;
    rep.timings.apply_ms = ms_since(t0);

    // metrics
    t0 = Clock::now();
    try {
        rep.separation.corr_soi = correlation_metric(y_soi, *s_soi);
    } catch (const DegenerateSignal&) {
        rep.separation.corr_soi = 0.0;
    }
    rep.separation.sinr_gain_db = sinr_gain_db(cfg.mixing, rep.demix, power_soi, power_int);
    rep.separation.kurtosis_out1 = kurtosis_of(x1.samples);
    rep.separation.kurtosis_out2 = kurtosis_of(x2.samples);
    if (cfg.soi.kind == SourceKind::nrz_binary) {
        const std::vector<int> bits = mid_bit_signs(*s_soi, cfg.soi.symbol_rate_hz);
        rep.separation.ber = ber(y_soi, bits, cfg.soi.symbol_rate_hz);
    }
    if (cfg.soi.kind != SourceKind::gaussian) {
        const auto sps = samples_per_symbol(cfg.soi.symbol_rate_hz, cfg.sample_rate_hz);
        const auto phase_bins = static_cast<std::size_t>(std::min<std::int64_t>(sps, 64));
        rep.eye = eye_diagram(y_soi, 1.0 / cfg.soi.symbol_rate_hz, phase_bins, 64);
    }
    rep.timings.metrics_ms = ms_since(t0);

    rep.timings.total_ms = ms_since(t_start);
    return rep;
}

PulseTrain derive_pulse_for_ratio(const ScenarioConfig& cfg, double ratio) {
    if (!(ratio > 0.0) || ratio > 1.0) {
        throw ConfigError("sweep: ratios must lie in (0, 1]");
    }
    const double rep_target = 2.0 * cfg.signal_bandwidth_hz() * ratio;
    auto period_samples =
        std::max<std::int64_t>(2, std::llround(cfg.sample_rate_hz / rep_target));
    if (cfg.soi.kind != SourceKind::gaussian) {
        const auto sps = samples_per_symbol(cfg.soi.symbol_rate_hz, cfg.sample_rate_hz);
        while (std::gcd(period_samples, sps) != 1) ++period_samples;
    }
    PulseTrain p = cfg.pulse;
    p.rep_rate_hz = cfg.sample_rate_hz / static_cast<double>(period_samples);
    return p;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& base, const std::vector<double>& ratios,
                                int trials) {
    if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
    if (ratios.empty()) throw ConfigError("sweep: no ratios given");

    struct TrialResult {
        double theta_err = 90.0;  // worst case under the 180-degree fold
        double phi_err = 45.0;    // worst case under the 90-degree fold
        double corr = 0.0;
        bool failed = true;
    };
    const std::size_t n_ratios = ratios.size();
    std::vector<TrialResult> results(n_ratios * static_cast<std::size_t>(trials));
    std::vector<PulseTrain> pulses(n_ratios);
    for (std::size_t r = 0; r < n_ratios; ++r) pulses[r] = derive_pulse_for_ratio(base, ratios[r]);

    const auto total = static_cast<std::int64_t>(results.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const std::size_t r = static_cast<std::size_t>(idx) / static_cast<std::size_t>(trials);
        const std::size_t t = static_cast<std::size_t>(idx) % static_cast<std::size_t>(trials);
        ScenarioConfig cfg = base;
        cfg.pulse = pulses[r];
        // Seeded by the ratio value, not its list position, so removing a
        // ratio never changes another ratio's trials.
        std::uint64_t ratio_bits;
        static_assert(sizeof(ratio_bits) == sizeof(double));
        std::memcpy(&ratio_bits, &ratios[r], sizeof(ratio_bits));
        cfg.master_seed = derive_seed(base.master_seed, ratio_bits, t);
        TrialResult& out = results[static_cast<std::size_t>(idx)];
        try {
            const RunReport rep = run_pipeline(cfg);
            out.failed = rep.status != "ok";
            out.corr = rep.separation.corr_soi;
            if (rep.theta0_err_deg) out.theta_err = *rep.theta0_err_deg;
            if (rep.phi0_err_deg) out.phi_err = *rep.phi0_err_deg;
        } catch (const Error&) {
            // recorded as a failure with worst-case metrics
        }
    }

    std::vector<SweepRow> rows(n_ratios);
    for (std::size_t r = 0; r < n_ratios; ++r) {
        SweepRow& row = rows[r];
        row.ratio_requested = ratios[r];
        row.rep_rate_hz = pulses[r].rep_rate_hz;
        row.ratio_achieved = sampling_ratio(pulses[r], base.signal_bandwidth_hz());
        row.trials = trials;
        std::vector<double> th, ph, co;
        for (int t = 0; t < trials; ++t) {
            const TrialResult& x = results[r * static_cast<std::size_t>(trials) +
                                           static_cast<std::size_t>(t)];
            row.failures += x.failed ? 1 : 0;
            th.push_back(x.theta_err);
            ph.push_back(x.phi_err);
            co.push_back(x.corr);
        }
        row.theta0_err_med_deg = quantile(th, 0.5);
        row.theta0_err_iqr_deg = quantile(th, 0.75) - quantile(th, 0.25);
        row.phi0_err_med_deg = quantile(ph, 0.5);
        row.phi0_err_iqr_deg = quantile(ph, 0.75) - quantile(ph, 0.25);
        row.corr_soi_med = quantile(co, 0.5);
        row.corr_soi_iqr = quantile(co, 0.75) - quantile(co, 0.25);
    }
    return rows;
}

}  // namespace subnyq
