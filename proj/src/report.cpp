#include "subnyq/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "subnyq/errors.hpp"

namespace subnyq {

namespace {

ordered_json source_to_json(const SourceSpec& s) {
    ordered_json j;
    j["kind"] = to_string(s.kind);
    j[s.kind == SourceKind::gaussian ? "bandwidth_hz" : "symbol_rate_hz"] = s.symbol_rate_hz;
    j["rms"] = s.rms;
    return j;
}

SourceSpec source_from_json(const ordered_json& j) {
    SourceSpec s;
    s.kind = source_kind_from_string(j.at("kind").get<std::string>());
    s.symbol_rate_hz = s.kind == SourceKind::gaussian ? j.at("bandwidth_hz").get<double>()
                                                      : j.at("symbol_rate_hz").get<double>();
    s.rms = j.at("rms").get<double>();
    return s;
}

ordered_json eye_to_json(const EyeDiagram& eye) {
    ordered_json j;
    j["symbol_period_s"] = eye.symbol_period_s;
    j["phase_bins"] = eye.phase_bins;
    j["amplitude_bins"] = eye.amplitude_bins;
    j["amp_min"] = eye.amp_min;
    j["amp_max"] = eye.amp_max;
    j["counts"] = eye.counts;
    return j;
}

EyeDiagram eye_from_json(const ordered_json& j) {
    EyeDiagram eye;
    eye.symbol_period_s = j.at("symbol_period_s").get<double>();
    eye.phase_bins = j.at("phase_bins").get<std::size_t>();
    eye.amplitude_bins = j.at("amplitude_bins").get<std::size_t>();
    eye.amp_min = j.at("amp_min").get<double>();
    eye.amp_max = j.at("amp_max").get<double>();
    eye.counts = j.at("counts").get<std::vector<std::uint64_t>>();
    return eye;
}

template <class T>
ordered_json opt_to_json(const std::optional<T>& v) {
    if (!v) return nullptr;
    return *v;
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << body;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_g17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json config_to_json(const ScenarioConfig& cfg) {
    ordered_json j;
    j["run"]["sample_rate_hz"] = cfg.sample_rate_hz;
    j["run"]["duration_s"] = cfg.duration_s;
    j["run"]["master_seed"] = cfg.master_seed;
    j["soi"] = source_to_json(cfg.soi);
    j["interference"] = source_to_json(cfg.interference);
    j["mixing"] = {{"a11", cfg.mixing.a11},
                   {"a12", cfg.mixing.a12},
                   {"a21", cfg.mixing.a21},
                   {"a22", cfg.mixing.a22}};
    j["pulse"]["rep_rate_hz"] = cfg.pulse.rep_rate_hz;
    j["pulse"]["width_s"] = cfg.pulse.pulse_width_s;
    j["pulse"]["shape"] = to_string(cfg.pulse.shape);
    j["pulse"]["offset_s"] = cfg.pulse.offset_s;
    j["pulse"]["jitter_rms_s"] = cfg.pulse.jitter_rms_s;
    j["grids"]["theta_deg"] = cfg.theta_grid.angles_deg;
    j["grids"]["phi_deg"] = cfg.phi_grid.angles_deg;
    return j;
}

ScenarioConfig config_from_json(const ordered_json& j) {
    ScenarioConfig cfg;
    cfg.sample_rate_hz = j.at("run").at("sample_rate_hz").get<double>();
    cfg.duration_s = j.at("run").at("duration_s").get<double>();
    cfg.master_seed = j.at("run").at("master_seed").get<std::uint64_t>();
    cfg.soi = source_from_json(j.at("soi"));
    cfg.interference = source_from_json(j.at("interference"));
    const auto& m = j.at("mixing");
    cfg.mixing = MixingMatrix(m.at("a11").get<double>(), m.at("a12").get<double>(),
                              m.at("a21").get<double>(), m.at("a22").get<double>());
    const auto& p = j.at("pulse");
    cfg.pulse.rep_rate_hz = p.at("rep_rate_hz").get<double>();
    cfg.pulse.pulse_width_s = p.at("width_s").get<double>();
    cfg.pulse.shape = pulse_shape_from_string(p.at("shape").get<std::string>());
    cfg.pulse.offset_s = p.at("offset_s").get<double>();
    cfg.pulse.jitter_rms_s = p.at("jitter_rms_s").get<double>();
    cfg.theta_grid.angles_deg = j.at("grids").at("theta_deg").get<std::vector<double>>();
    cfg.phi_grid.angles_deg = j.at("grids").at("phi_deg").get<std::vector<double>>();
    return cfg;
}

ordered_json report_to_json(const RunReport& rep) {
    ordered_json j;
    j["config"] = config_to_json(rep.config);
    j["status"] = rep.status;
    j["n_gated"] = rep.n_gated;
    j["sampling_ratio"] = rep.sampling_ratio;

    j["fits"]["second"] = {{"q1", rep.fit2.q1},
                           {"q2", rep.fit2.q2},
                           {"theta0_deg", rep.fit2.theta0_deg},
                           {"residual_rms", rep.fit2.residual_rms}};
    if (rep.fit4) {
        j["fits"]["fourth"] = {{"p1", rep.fit4->p1},
                               {"p2", rep.fit4->p2},
                               {"p3", rep.fit4->p3},
                               {"phi0_deg", rep.fit4->phi0_deg},
                               {"residual_rms", rep.fit4->residual_rms},
                               {"identifiable", rep.fit4->identifiable}};
    } else {
        j["fits"]["fourth"] = nullptr;
    }

    j["demix"] = {{"w11", rep.demix.w11},     {"w12", rep.demix.w12},
                  {"w21", rep.demix.w21},     {"w22", rep.demix.w22},
                  {"soi_channel", rep.demix.soi_channel}};

    ordered_json oracle;
    oracle["gated_var_soi"] = rep.gated_var_soi;
    oracle["gated_var_int"] = rep.gated_var_int;
    oracle["gated_kurt_soi"] = rep.gated_kurt_soi;
    oracle["gated_kurt_int"] = rep.gated_kurt_int;
    if (rep.cov) {
        oracle["q1"] = rep.cov->q1;
        oracle["q2"] = rep.cov->q2;
        oracle["theta0_deg"] = rep.cov->theta0_deg;
    } else {
        oracle["q1"] = nullptr;
        oracle["q2"] = nullptr;
        oracle["theta0_deg"] = nullptr;
    }
    oracle["alpha_deg"] = opt_to_json(rep.alpha_deg);
    oracle["theta0_err_deg"] = opt_to_json(rep.theta0_err_deg);
    oracle["phi0_err_deg"] = opt_to_json(rep.phi0_err_deg);
    j["oracle"] = oracle;

    j["whiteness"] = opt_to_json(rep.whiteness);

    j["curves"]["theta_deg"] = rep.curve2.angles_deg;
    j["curves"]["moment2_estimated"] = rep.curve2.values;
    j["curves"]["moment2_theory"] = rep.curve2_theory;
    if (rep.curve4) {
        j["curves"]["phi_deg"] = rep.curve4->angles_deg;
        j["curves"]["moment4_estimated"] = rep.curve4->values;
    } else {
        j["curves"]["phi_deg"] = ordered_json::array();
        j["curves"]["moment4_estimated"] = ordered_json::array();
    }
    j["curves"]["moment4_theory"] = rep.curve4_theory;

    j["separation"] = {{"corr_soi", rep.separation.corr_soi},
                       {"sinr_gain_db", rep.separation.sinr_gain_db},
                       {"kurtosis_out1", rep.separation.kurtosis_out1},
                       {"kurtosis_out2", rep.separation.kurtosis_out2},
                       {"ber", opt_to_json(rep.separation.ber)}};

    j["eye"] = rep.eye ? eye_to_json(*rep.eye) : ordered_json(nullptr);

    j["timings_ms"] = {{"generate", rep.timings.generate_ms}, {"mix", rep.timings.mix_ms},
                       {"gate", rep.timings.gate_ms},         {"fit", rep.timings.fit_ms},
                       {"apply", rep.timings.apply_ms},       {"metrics", rep.timings.metrics_ms},
                       {"total", rep.timings.total_ms}};
    return j;
}

RunReport report_from_json(const ordered_json& j) {
    RunReport rep;
    rep.config = config_from_json(j.at("config"));
    rep.status = j.at("status").get<std::string>();
    rep.n_gated = j.at("n_gated").get<std::size_t>();
    rep.sampling_ratio = j.at("sampling_ratio").get<double>();

    const auto& f2 = j.at("fits").at("second");
    rep.fit2.q1 = f2.at("q1").get<double>();
    rep.fit2.q2 = f2.at("q2").get<double>();
    rep.fit2.theta0_deg = f2.at("theta0_deg").get<double>();
    rep.fit2.residual_rms = f2.at("residual_rms").get<double>();
    if (!j.at("fits").at("fourth").is_null()) {
        const auto& f4 = j.at("fits").at("fourth");
        FourthMomentFit fit;
        fit.p1 = f4.at("p1").get<double>();
        fit.p2 = f4.at("p2").get<double>();
        fit.p3 = f4.at("p3").get<double>();
        fit.phi0_deg = f4.at("phi0_deg").get<double>();
        fit.residual_rms = f4.at("residual_rms").get<double>();
        fit.identifiable = f4.at("identifiable").get<bool>();
        rep.fit4 = fit;
    }

    const auto& d = j.at("demix");
    rep.demix.w11 = d.at("w11").get<double>();
    rep.demix.w12 = d.at("w12").get<double>();
    rep.demix.w21 = d.at("w21").get<double>();
    rep.demix.w22 = d.at("w22").get<double>();
    rep.demix.soi_channel = d.at("soi_channel").get<int>();

    const auto& o = j.at("oracle");
    rep.gated_var_soi = o.at("gated_var_soi").get<double>();
    rep.gated_var_int = o.at("gated_var_int").get<double>();
    rep.gated_kurt_soi = o.at("gated_kurt_soi").get<double>();
    rep.gated_kurt_int = o.at("gated_kurt_int").get<double>();
    if (!o.at("q1").is_null()) {
        CovOracle cov;
        cov.q1 = o.at("q1").get<double>();
        cov.q2 = o.at("q2").get<double>();
        cov.theta0_deg = o.at("theta0_deg").get<double>();
        rep.cov = cov;
    }
    if (!o.at("alpha_deg").is_null()) rep.alpha_deg = o.at("alpha_deg").get<double>();
    if (!o.at("theta0_err_deg").is_null()) {
        rep.theta0_err_deg = o.at("theta0_err_deg").get<double>();
    }
    if (!o.at("phi0_err_deg").is_null()) rep.phi0_err_deg = o.at("phi0_err_deg").get<double>();
    if (!j.at("whiteness").is_null()) rep.whiteness = j.at("whiteness").get<double>();

    const auto& c = j.at("curves");
    rep.curve2.order = 2;
    rep.curve2.angles_deg = c.at("theta_deg").get<std::vector<double>>();
    rep.curve2.values = c.at("moment2_estimated").get<std::vector<double>>();
    rep.curve2_theory = c.at("moment2_theory").get<std::vector<double>>();
    const auto phi = c.at("phi_deg").get<std::vector<double>>();
    if (!phi.empty()) {
        MomentCurve c4;
        c4.order = 4;
        c4.angles_deg = phi;
        c4.values = c.at("moment4_estimated").get<std::vector<double>>();
        rep.curve4 = c4;
    }
    rep.curve4_theory = c.at("moment4_theory").get<std::vector<double>>();

    const auto& s = j.at("separation");
    rep.separation.corr_soi = s.at("corr_soi").get<double>();
    rep.separation.sinr_gain_db = s.at("sinr_gain_db").get<double>();
    rep.separation.kurtosis_out1 = s.at("kurtosis_out1").get<double>();
    rep.separation.kurtosis_out2 = s.at("kurtosis_out2").get<double>();
    if (!s.at("ber").is_null()) rep.separation.ber = s.at("ber").get<double>();

    if (!j.at("eye").is_null()) rep.eye = eye_from_json(j.at("eye"));

    const auto& t = j.at("timings_ms");
    rep.timings.generate_ms = t.at("generate").get<double>();
    rep.timings.mix_ms = t.at("mix").get<double>();
    rep.timings.gate_ms = t.at("gate").get<double>();
    rep.timings.fit_ms = t.at("fit").get<double>();
    rep.timings.apply_ms = t.at("apply").get<double>();
    rep.timings.metrics_ms = t.at("metrics").get<double>();
    rep.timings.total_ms = t.at("total").get<double>();
    return rep;
}

void emit_report(const RunReport& rep, const std::string& dir) {
    std::string m2 = "theta_deg,moment_theory,moment_estimated\n";
    for (std::size_t i = 0; i < rep.curve2.angles_deg.size(); ++i) {
        const std::string theory =
            i < rep.curve2_theory.size() ? format_g17(rep.curve2_theory[i]) : "";
        m2 += format_g17(rep.curve2.angles_deg[i]) + "," + theory + "," +
              format_g17(rep.curve2.values[i]) + "\n";
    }
    write_file(dir, "moment2.csv", m2);

    std::string m4 = "phi_deg,moment_theory,moment_estimated\n";
    if (rep.curve4) {
        for (std::size_t i = 0; i < rep.curve4->angles_deg.size(); ++i) {
            const std::string theory =
                i < rep.curve4_theory.size() ? format_g17(rep.curve4_theory[i]) : "";
            m4 += format_g17(rep.curve4->angles_deg[i]) + "," + theory + "," +
                  format_g17(rep.curve4->values[i]) + "\n";
        }
    }
    write_file(dir, "moment4.csv", m4);

    // Dense grid: one row per amplitude bin (low to high), one column per
    // phase bin; first column is the amplitude bin center.
    std::string eye_csv = "amp_center";
    if (rep.eye) {
        const EyeDiagram& eye = *rep.eye;
        for (std::size_t p = 0; p < eye.phase_bins; ++p) {
            eye_csv += ",phase_" + std::to_string(p);
        }
        eye_csv += "\n";
        const double step = eye.amplitude_bins > 0
                                ? (eye.amp_max - eye.amp_min) /
                                      static_cast<double>(eye.amplitude_bins)
                                : 0.0;
        for (std::size_t a = 0; a < eye.amplitude_bins; ++a) {
            eye_csv += format_g17(eye.amp_min + step * (static_cast<double>(a) + 0.5));
            for (std::size_t p = 0; p < eye.phase_bins; ++p) {
                eye_csv += "," + std::to_string(eye.at(p, a));
            }
            eye_csv += "\n";
        }
    } else {
        eye_csv += "\n";
    }
    write_file(dir, "eye.csv", eye_csv);

    write_file(dir, "report.json", report_to_json(rep).dump(2) + "\n");
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv =
        "ratio_requested,ratio_achieved,rep_rate_hz,trials,failures,"
        "theta0_err_med_deg,theta0_err_iqr_deg,phi0_err_med_deg,phi0_err_iqr_deg,"
        "corr_soi_med,corr_soi_iqr\n";
    for (const SweepRow& r : rows) {
        csv += format_g17(r.ratio_requested) + "," + format_g17(r.ratio_achieved) + "," +
               format_g17(r.rep_rate_hz) + "," + std::to_string(r.trials) + "," +
               std::to_string(r.failures) + "," + format_g17(r.theta0_err_med_deg) + "," +
               format_g17(r.theta0_err_iqr_deg) + "," + format_g17(r.phi0_err_med_deg) + "," +
               format_g17(r.phi0_err_iqr_deg) + "," + format_g17(r.corr_soi_med) + "," +
               format_g17(r.corr_soi_iqr) + "\n";
    }
    return csv;
}

void emit_sweep(const std::vector<SweepRow>& rows, const std::string& dir) {
    write_file(dir, "sweep.csv", sweep_to_csv(rows));
}

}  // namespace subnyq
