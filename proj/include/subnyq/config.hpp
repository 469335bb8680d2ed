// Scenario configuration: a flat INI-style key/value document with SI number
// suffixes ("200M", "5n"). Parsing is atomic: the first violated invariant
// rejects the whole config with a path-qualified message.

#ifndef SUBNYQ_CONFIG_HPP
#define SUBNYQ_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "subnyq/estimator.hpp"
#include "subnyq/sampler.hpp"
#include "subnyq/separator.hpp"
#include "subnyq/signalgen.hpp"

namespace subnyq {

struct ScenarioConfig {
    double sample_rate_hz = 10e9;
    double duration_s = 0.0;
    std::uint64_t master_seed = 1;

    SourceSpec soi{SourceKind::qam16_real, 200e6, 1.0, 0};
    SourceSpec interference{SourceKind::gaussian, 200e6, 1.0, 0};
    MixingMatrix mixing;
    PulseTrain pulse;
    AngleGrid theta_grid{{0.0, 45.0, 90.0, 135.0}};
    AngleGrid phi_grid{{0.0, 22.5, 45.0, 67.5, 90.0, 112.5, 135.0, 157.5}};

    // Occupied bandwidth of the scenario, set by the SOI spec (symbol rate
    // for symbol sources, declared bandwidth for gaussian).
    double signal_bandwidth_hz() const { return soi.symbol_rate_hz; }

    // Throws ConfigError on the first violated invariant.
    void validate() const;

    // Non-fatal advisories (e.g. the phase-coverage rule: a pulse period
    // sharing a factor with the symbol period hits few symbol phases).
    std::vector<std::string> warnings() const;
};

// "200M" -> 2e8, "5n" -> 5e-9. Suffixes: f p n u m k M G T.
double parse_si_number(std::string_view text);

ScenarioConfig parse_config_text(std::string_view text, const std::string& origin);
ScenarioConfig parse_config_file(const std::string& path);

}  // namespace subnyq

#endif
