#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "pumpshape/spdc.hpp"

namespace pumpshape {

// One end-to-end run: diffuser synthesis (or replay), scattered pump and
// coincidence maps before optimization, pump-feedback optimization, the same
// maps after, and the comparison metrics. Fully determined by the config.
struct ScenarioConfig {
    std::string name = "scenario";

    int grid_n = 512;
    double grid_pitch = 10e-6;  // meters

    double pump_waist = 1.0e-3;  // meters, 1/e amplitude radius
    Vec2 pump_center{0.0, 0.0};
    Vec2 pump_tilt{0.0, 0.0};  // rad/m

    double lambda_p = 404e-9;
    double lambda_s = 808e-9;

    Vec2 q_i{0.0, 0.0};             // stationary detector, rad/m
    std::string scanning = "signal";  // which detector scans: "signal" or "idler"

    double diffuser_corr_length = 100e-6;
    double diffuser_rms_height = 808e-9;  // ~2*pi rms phase at 404 nm with n_index 1.5
    double diffuser_n_index = 1.5;
    std::optional<std::string> diffuser_replay;  // path prefix: <prefix>.csv / <prefix>.json

    int segments = 16;       // per side
    int iterations = 3000;
    int phase_steps = 8;
    Vec2 target_q{0.0, 0.0};

    double focal_length = 0.1;  // meters, detector-plane reporting only
    int window_half = 32;       // pixels: coincidence window half-size around -q_i

    double noise_mean_counts = 0.0;  // 0 disables counting noise on exported maps

    std::optional<SinglesEnvelope> singles;

    std::uint64_t master_seed = 1;
    std::string out_dir = "pumpshape_out";

    static ScenarioConfig from_json_file(const std::filesystem::path& path);
    static ScenarioConfig from_json_text(const std::string& text, const std::string& origin);
    std::string to_json_text() const;

    // Construction-level validation of every referenced parameter; throws
    // config_error with the violated bound.
    void validate() const;
};

struct MetricsReport {
    double pearson_pump_vs_coinc = 0.0;
    double grain_size_pump = 0.0;   // meters, detector plane at lambda_p
    double grain_size_coinc = 0.0;  // meters, detector plane at the scanning wavelength
    double scale_ratio = 0.0;       // grain_size_coinc / grain_size_pump
    double enhancement_pump = 0.0;
    double enhancement_coinc = 0.0;

    // Localization bookkeeping (pixels, centered indices).
    Steps2 coinc_argmax_before{0, 0};
    Steps2 coinc_argmax_after{0, 0};
    Steps2 expected_coinc_peak{0, 0};  // target - q_i in q steps
};

// Runs the scenario and writes all artifacts under cfg.out_dir:
// config.json, manifest.json, trace.json, diffuser CSV+sidecar, pump and
// coincidence maps before/after (CSV + PGM), windowed coincidence maps,
// the final mask, and the singles map when configured.
MetricsReport run_scenario(const ScenarioConfig& cfg);

// Built-in demo configurations:
//   fig2                non-collinear degenerate (808/808, q_i off axis)
//   fig3-degenerate     collinear degenerate (808/808, q_i = 0)
//   fig3-nondegenerate  collinear non-degenerate (850 nm signal, q_i = 0)
ScenarioConfig demo_config(const std::string& name);

}  // namespace pumpshape
