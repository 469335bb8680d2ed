// subnyq command line: run a scenario, sweep sampling ratios, or validate a
// config. Exit codes: 0 success, 1 config/IO error, 2 degenerate statistics
// (unidentifiable ICA or degenerate covariance).

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subnyq/config.hpp"
#include "subnyq/errors.hpp"
#include "subnyq/pipeline.hpp"
#include "subnyq/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegenerate = 2;

subnyq::ScenarioConfig load_config(const std::string& path) {
    subnyq::ScenarioConfig cfg = subnyq::parse_config_file(path);
    if (const char* env = std::getenv("SUBNYQ_SEED")) {
        try {
            std::size_t pos = 0;
            cfg.master_seed = std::stoull(env, &pos);
            if (pos != std::string(env).size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw subnyq::ConfigError("SUBNYQ_SEED: expected an unsigned integer, got '" +
                                      std::string(env) + "'");
        }
    }
    for (const std::string& w : cfg.warnings()) std::cerr << "warning: " << w << "\n";
    return cfg;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
    const subnyq::ScenarioConfig cfg = load_config(config_path);
    const subnyq::RunReport rep = subnyq::run_pipeline(cfg);
    subnyq::emit_report(rep, out_dir);
    std::cout << "status:         " << rep.status << "\n"
              << "gated samples:  " << rep.n_gated << "\n"
              << "sampling ratio: " << rep.sampling_ratio << "\n"
              << "theta0 (deg):   " << rep.fit2.theta0_deg;
    if (rep.theta0_err_deg) std::cout << "  (err " << *rep.theta0_err_deg << ")";
    std::cout << "\n";
    if (rep.fit4) {
        std::cout << "phi0 (deg):     " << rep.fit4->phi0_deg;
        if (rep.phi0_err_deg) std::cout << "  (err " << *rep.phi0_err_deg << ")";
        std::cout << "\n";
    }
    std::cout << "corr_soi:       " << rep.separation.corr_soi << "\n"
              << "sinr gain (dB): " << rep.separation.sinr_gain_db << "\n";
    if (rep.separation.ber) std::cout << "ber:            " << *rep.separation.ber << "\n";
    std::cout << "report:         " << out_dir << "/report.json\n";
    return rep.status == "ok" ? kExitOk : kExitDegenerate;
}

int cmd_sweep(const std::string& config_path, const std::string& ratios_arg, int trials,
              const std::string& out_dir) {
    const subnyq::ScenarioConfig cfg = load_config(config_path);
    std::vector<double> ratios;
    std::string item;
    std::stringstream ss(ratios_arg);
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) ratios.push_back(subnyq::parse_si_number(item));
    }
    const std::vector<subnyq::SweepRow> rows = subnyq::run_sweep(cfg, ratios, trials);
    subnyq::emit_sweep(rows, out_dir);
    std::cout << subnyq::sweep_to_csv(rows);
    std::cout << "table: " << out_dir << "/sweep.csv\n";
    return kExitOk;
}

int cmd_validate(const std::string& config_path) {
    load_config(config_path);
    std::cout << "config ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-Nyquist pulse-gated blind source separation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string ratios = "1e-2,1e-3,1e-4,1e-5";
    int trials = 8;

    CLI::App* run = app.add_subcommand("run", "run one scenario and emit its report");
    run->add_option("--config", config_path, "scenario config file")->required();
    run->add_option("--out", out_dir, "output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "sweep sampling ratios with seeded trials");
    sweep->add_option("--config", config_path, "base scenario config file")->required();
    sweep->add_option("--ratios", ratios, "comma-separated sampling ratios");
    sweep->add_option("--trials", trials, "trials per ratio");
    sweep->add_option("--out", out_dir, "output directory");

    CLI::App* validate = app.add_subcommand("validate", "parse a config and check invariants");
    validate->add_option("--config", config_path, "scenario config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir);
        if (sweep->parsed()) return cmd_sweep(config_path, ratios, trials, out_dir);
        if (validate->parsed()) return cmd_validate(config_path);
    } catch (const subnyq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
