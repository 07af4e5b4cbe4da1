#include "pumpshape/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pumpshape/errors.hpp"
#include "pumpshape/io.hpp"
#include "pumpshape/metrics.hpp"
#include "pumpshape/optics.hpp"
#include "pumpshape/rng.hpp"
#include "pumpshape/shaper.hpp"

namespace pumpshape {

namespace {

using nlohmann::json;

[[noreturn]] void fail_field(const std::string& origin, const std::string& field, const std::string& what) {
    throw config_error(origin + ": field '" + field + "': " + what);
}

void check_keys(const json& j, const std::string& origin, const std::string& scope,
                const std::set<std::string>& allowed) {
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            throw config_error(origin + ": unknown field '" + scope + item.key() + "'");
        }
    }
}

double get_number(const json& j, const std::string& origin, const std::string& field, double fallback,
                  bool* present = nullptr) {
    if (!j.contains(field)) {
        if (present) *present = false;
        return fallback;
    }
    if (present) *present = true;
    if (!j[field].is_number()) fail_field(origin, field, "expected a number");
    return j[field].get<double>();
}

Vec2 get_vec2(const json& j, const std::string& origin, const std::string& field, Vec2 fallback) {
    if (!j.contains(field)) return fallback;
    const json& v = j[field];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail_field(origin, field, "expected [x, y] numbers");
    }
    return Vec2{v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str(), path.string());
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(origin + ": " + e.what());
    }
    if (!j.is_object()) throw config_error(origin + ": config must be a JSON object");

    check_keys(j, origin, "",
               {"name", "grid", "pump", "wavelengths", "q_i", "scanning", "diffuser", "optimizer",
                "focal_length", "window_half", "noise_mean_counts", "singles", "master_seed", "out_dir"});

    ScenarioConfig cfg;
    if (j.contains("name")) {
        if (!j["name"].is_string()) fail_field(origin, "name", "expected a string");
        cfg.name = j["name"].get<std::string>();
    }

    if (j.contains("grid")) {
        const json& g = j["grid"];
        check_keys(g, origin, "grid.", {"n", "pitch"});
        cfg.grid_n = static_cast<int>(get_number(g, origin, "n", cfg.grid_n));
        cfg.grid_pitch = get_number(g, origin, "pitch", cfg.grid_pitch);
    }

    if (j.contains("pump")) {
        const json& p = j["pump"];
        check_keys(p, origin, "pump.", {"waist", "center", "tilt"});
        cfg.pump_waist = get_number(p, origin, "waist", cfg.pump_waist);
        cfg.pump_center = get_vec2(p, origin, "center", cfg.pump_center);
        cfg.pump_tilt = get_vec2(p, origin, "tilt", cfg.pump_tilt);
    }

    if (j.contains("wavelengths")) {
        const json& w = j["wavelengths"];
        check_keys(w, origin, "wavelengths.", {"lambda_p", "lambda_s"});
        cfg.lambda_p = get_number(w, origin, "lambda_p", cfg.lambda_p);
        cfg.lambda_s = get_number(w, origin, "lambda_s", cfg.lambda_s);
    }

    cfg.q_i = get_vec2(j, origin, "q_i", cfg.q_i);

    if (j.contains("scanning")) {
        if (!j["scanning"].is_string()) fail_field(origin, "scanning", "expected a string");
        cfg.scanning = j["scanning"].get<std::string>();
    }

    if (j.contains("diffuser")) {
        const json& d = j["diffuser"];
        check_keys(d, origin, "diffuser.", {"corr_length", "rms_height", "n_index", "replay"});
        if (d.contains("replay")) {
            if (!d["replay"].is_string()) fail_field(origin, "diffuser.replay", "expected a path prefix string");
            cfg.diffuser_replay = d["replay"].get<std::string>();
        }
        cfg.diffuser_corr_length = get_number(d, origin, "corr_length", cfg.diffuser_corr_length);
        cfg.diffuser_rms_height = get_number(d, origin, "rms_height", cfg.diffuser_rms_height);
        cfg.diffuser_n_index = get_number(d, origin, "n_index", cfg.diffuser_n_index);
    }

    if (j.contains("optimizer")) {
        const json& o = j["optimizer"];
        check_keys(o, origin, "optimizer.", {"segments", "iterations", "phase_steps", "target_q"});
        cfg.segments = static_cast<int>(get_number(o, origin, "segments", cfg.segments));
        cfg.iterations = static_cast<int>(get_number(o, origin, "iterations", cfg.iterations));
        cfg.phase_steps = static_cast<int>(get_number(o, origin, "phase_steps", cfg.phase_steps));
        cfg.target_q = get_vec2(o, origin, "target_q", cfg.target_q);
    }

    cfg.focal_length = get_number(j, origin, "focal_length", cfg.focal_length);
    cfg.window_half = static_cast<int>(get_number(j, origin, "window_half", cfg.window_half));
    cfg.noise_mean_counts = get_number(j, origin, "noise_mean_counts", cfg.noise_mean_counts);

    if (j.contains("singles")) {
        const json& s = j["singles"];
        check_keys(s, origin, "singles.", {"ring_radius", "ring_width"});
        SinglesEnvelope env;
        env.ring_radius = get_number(s, origin, "ring_radius", 0.0);
        env.ring_width = get_number(s, origin, "ring_width", 0.0);
        cfg.singles = env;
    }

    if (j.contains("master_seed")) {
        if (!j["master_seed"].is_number_unsigned() && !j["master_seed"].is_number_integer()) {
            fail_field(origin, "master_seed", "expected an integer");
        }
        cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    }
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) fail_field(origin, "out_dir", "expected a string");
        cfg.out_dir = j["out_dir"].get<std::string>();
    }

    return cfg;
}

std::string ScenarioConfig::to_json_text() const {
    json j = {
        {"name", name},
        {"grid", {{"n", grid_n}, {"pitch", grid_pitch}}},
        {"pump",
         {{"waist", pump_waist},
          {"center", {pump_center.x, pump_center.y}},
          {"tilt", {pump_tilt.x, pump_tilt.y}}}},
        {"wavelengths", {{"lambda_p", lambda_p}, {"lambda_s", lambda_s}}},
        {"q_i", {q_i.x, q_i.y}},
        {"scanning", scanning},
        {"optimizer",
         {{"segments", segments},
          {"iterations", iterations},
          {"phase_steps", phase_steps},
          {"target_q", {target_q.x, target_q.y}}}},
        {"focal_length", focal_length},
        {"window_half", window_half},
        {"noise_mean_counts", noise_mean_counts},
        {"master_seed", master_seed},
        {"out_dir", out_dir},
    };
    json d = {{"corr_length", diffuser_corr_length},
              {"rms_height", diffuser_rms_height},
              {"n_index", diffuser_n_index}};
    if (diffuser_replay) d["replay"] = *diffuser_replay;
    j["diffuser"] = d;
    if (singles) {
        j["singles"] = {{"ring_radius", singles->ring_radius}, {"ring_width", singles->ring_width}};
    }
    return j.dump(2) + "\n";
}

void ScenarioConfig::validate() const {
    const Grid grid(grid_n, grid_pitch);  // validates n and pitch
    if (!(pump_waist > 0.0) || !(pump_waist < grid.extent() / 4.0)) {
        std::ostringstream msg;
        msg << "pump waist " << pump_waist << " m must lie in (0, n*pitch/4 = " << grid.extent() / 4.0
            << " m)";
        throw config_error(msg.str());
    }
    WavelengthTriple::from_pump_signal(lambda_p, lambda_s);
    if (scanning != "signal" && scanning != "idler") {
        throw config_error("scanning must be \"signal\" or \"idler\", got \"" + scanning + "\"");
    }
    if (!diffuser_replay) {
        if (!(diffuser_corr_length >= 2.0 * grid_pitch)) {
            std::ostringstream msg;
            msg << "diffuser corr_length " << diffuser_corr_length
                << " m must be >= 2*pitch = " << 2.0 * grid_pitch << " m";
            throw config_error(msg.str());
        }
        if (!(diffuser_rms_height > 0.0)) throw config_error("diffuser rms_height must be positive");
        if (!(diffuser_n_index > 1.0)) throw config_error("diffuser n_index must exceed 1");
    }
    if (segments < 1 || grid_n % segments != 0) {
        std::ostringstream msg;
        msg << "optimizer segments " << segments << " must divide the grid size " << grid_n;
        throw config_error(msg.str());
    }
    if (phase_steps < 3) throw config_error("optimizer phase_steps must be >= 3");
    if (iterations < 0) throw config_error("optimizer iterations must be >= 0");
    if (!(focal_length > 0.0)) throw config_error("focal_length must be positive");
    if (window_half < 1 || window_half > grid_n / 2 - 1) {
        std::ostringstream msg;
        msg << "window_half " << window_half << " must lie in [1, n/2-1 = " << grid_n / 2 - 1 << "]";
        throw config_error(msg.str());
    }
    if (noise_mean_counts < 0.0) throw config_error("noise_mean_counts must be >= 0");
    if (singles && !(singles->ring_width > 0.0)) {
        throw config_error("singles.ring_width must be positive");
    }
    if (singles && singles->ring_radius < 0.0) {
        throw config_error("singles.ring_radius must be >= 0");
    }
}

namespace {

std::vector<std::uint8_t> shift_mask(const std::vector<std::uint8_t>& in, int n, int dy, int dx) {
    std::vector<std::uint8_t> out(in.size());
    const int my = ((dy % n) + n) % n;
    const int mx = ((dx % n) + n) % n;
    for (int iy = 0; iy < n; ++iy) {
        const int sy = (iy - my + n) % n;
        for (int ix = 0; ix < n; ++ix) {
            const int sx = (ix - mx + n) % n;
            out[static_cast<std::size_t>(iy) * n + ix] = in[static_cast<std::size_t>(sy) * n + sx];
        }
    }
    return out;
}

// (2h+1)^2 window around a centered pixel, circular indexing.
std::vector<double> extract_window(const std::vector<double>& values, int n, Steps2 center_steps, int h) {
    const int side = 2 * h + 1;
    std::vector<double> out(static_cast<std::size_t>(side) * side);
    const int cy = center_steps.y + n / 2;
    const int cx = center_steps.x + n / 2;
    for (int wy = 0; wy < side; ++wy) {
        const int iy = ((cy + wy - h) % n + n) % n;
        for (int wx = 0; wx < side; ++wx) {
            const int ix = ((cx + wx - h) % n + n) % n;
            out[static_cast<std::size_t>(wy) * side + wx] = values[static_cast<std::size_t>(iy) * n + ix];
        }
    }
    return out;
}

}  // namespace

MetricsReport run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();

    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    {
        std::ofstream echo(dir / "config.json");
        if (!echo) throw config_error("cannot write " + (dir / "config.json").string());
        echo << cfg.to_json_text();
    }

    const Grid grid(cfg.grid_n, cfg.grid_pitch);
    const int n = grid.n();

    const std::uint64_t seed_diffuser = derive_seed(cfg.master_seed, "diffuser");
    const std::uint64_t seed_optimizer = derive_seed(cfg.master_seed, "optimizer");
    const std::uint64_t seed_noise = derive_seed(cfg.master_seed, "noise");

    DiffuserMap diffuser =
        cfg.diffuser_replay
            ? import_diffuser(*cfg.diffuser_replay + ".csv", *cfg.diffuser_replay + ".json")
            : generate_diffuser(grid, cfg.diffuser_corr_length, cfg.diffuser_rms_height, seed_diffuser,
                                cfg.diffuser_n_index);
    if (!(diffuser.grid == grid)) {
        throw config_error("replayed diffuser grid does not match the scenario grid");
    }
    export_diffuser(diffuser, dir / "diffuser_h.csv", dir / "diffuser.json");

    const ComplexField pump =
        gaussian_beam(grid, cfg.pump_waist, cfg.pump_center, cfg.pump_tilt, cfg.lambda_p);
    const WavelengthTriple triple = WavelengthTriple::from_pump_signal(cfg.lambda_p, cfg.lambda_s);
    const double lambda_scan = cfg.scanning == "signal" ? triple.signal() : triple.idler();

    // Before optimization.
    const IntensityMap pump_before = pump_far_intensity(pump, diffuser, cfg.lambda_p);
    const CoincidenceMap coinc_before = coincidence_map(pump, diffuser, triple, cfg.q_i);

    const std::vector<std::uint8_t> env = envelope_mask(pump_before.values, n);
    const Steps2 qi = coinc_before.q_i_steps;
    const std::vector<std::uint8_t> env_coinc = shift_mask(env, n, -qi.y, -qi.x);

    // Optimization on the raw pump intensity at the target.
    const PumpTargetFeedback feedback(pump, diffuser, cfg.lambda_p, cfg.target_q, cfg.segments);
    const double mean_before_pump =
        mean_over_mask(pump_before.values, env) * pump_before.normalization;
    const OptimizationRecord record = partition_optimize(feedback, cfg.segments, cfg.iterations,
                                                         cfg.phase_steps, seed_optimizer, mean_before_pump);

    // After optimization.
    const ComplexField pump_shaped = apply_phase(pump, render(record.final_mask, grid));
    const IntensityMap pump_after = pump_far_intensity(pump_shaped, diffuser, cfg.lambda_p);
    const CoincidenceMap coinc_after = coincidence_map(pump_shaped, diffuser, triple, cfg.q_i);

    // Metrics.
    MetricsReport report;
    {
        // Align the coincidence map back onto the pump frame for comparison.
        const std::vector<double> aligned = circular_shift(coinc_before.values, n, qi.y, qi.x);
        report.pearson_pump_vs_coinc = pearson(pump_before.values, aligned, env);
    }
    const double mpp_pump = q_to_detector_position(grid.q_step(), cfg.lambda_p, cfg.focal_length);
    const double mpp_coinc = q_to_detector_position(grid.q_step(), lambda_scan, cfg.focal_length);
    report.grain_size_pump = grain_size(pump_before.values, n, mpp_pump);
    report.grain_size_coinc = grain_size(coinc_before.values, n, mpp_coinc);
    report.scale_ratio = report.grain_size_coinc / report.grain_size_pump;

    report.enhancement_pump = record.enhancement;
    const Steps2 target = feedback.target_steps();
    const Steps2 expected{target.x - qi.x, target.y - qi.y};
    report.expected_coinc_peak = expected;
    {
        const double coinc_at_expected =
            coinc_after.at(expected.y + n / 2, expected.x + n / 2) * coinc_after.normalization;
        const double mean_before_coinc =
            mean_over_mask(coinc_before.values, env_coinc) * coinc_before.normalization;
        report.enhancement_coinc = coinc_at_expected / mean_before_coinc;
    }
    {
        const Steps2 a0 = argmax_index(coinc_before.values, n);
        const Steps2 a1 = argmax_index(coinc_after.values, n);
        report.coinc_argmax_before = Steps2{a0.x - n / 2, a0.y - n / 2};
        report.coinc_argmax_after = Steps2{a1.x - n / 2, a1.y - n / 2};
    }

    // Artifacts.
    write_csv_matrix(dir / "pump_before.csv", pump_before.values, n);
    write_csv_matrix(dir / "pump_after.csv", pump_after.values, n);
    write_pgm(dir / "pump_before.pgm", pump_before.values, n);
    write_pgm(dir / "pump_after.pgm", pump_after.values, n);
    export_coincidence(coinc_before, dir / "coinc_before.csv", dir / "coinc_before.json", cfg.master_seed);
    export_coincidence(coinc_after, dir / "coinc_after.csv", dir / "coinc_after.json", cfg.master_seed);
    write_pgm(dir / "coinc_before.pgm", coinc_before.values, n);
    write_pgm(dir / "coinc_after.pgm", coinc_after.values, n);

    const int side = 2 * cfg.window_half + 1;
    write_csv_matrix(dir / "coinc_window_before.csv",
                     extract_window(coinc_before.values, n, expected, cfg.window_half), side);
    write_csv_matrix(dir / "coinc_window_after.csv",
                     extract_window(coinc_after.values, n, expected, cfg.window_half), side);

    export_record(record, dir / "trace.json");
    write_mask_csv(record.final_mask, dir / "mask_final.csv");

    if (cfg.singles) {
        const IntensityMap singles = singles_map(*cfg.singles, diffuser, lambda_scan, grid);
        write_csv_matrix(dir / "singles.csv", singles.values, n);
        write_pgm(dir / "singles.pgm", singles.values, n);
    }

    if (cfg.noise_mean_counts > 0.0) {
        // Noisy previews emulate finite integration time; metrics above stay noiseless.
        const auto noisy = [&](const std::vector<double>& v, const char* label) {
            return add_poisson_noise(v, cfg.noise_mean_counts, derive_seed(seed_noise, label));
        };
        write_csv_matrix(dir / "coinc_before_noisy.csv", noisy(coinc_before.values, "coinc_before"), n);
        write_csv_matrix(dir / "coinc_after_noisy.csv", noisy(coinc_after.values, "coinc_after"), n);
        write_pgm(dir / "coinc_before_noisy.pgm", noisy(coinc_before.values, "coinc_before"), n);
        write_pgm(dir / "coinc_after_noisy.pgm", noisy(coinc_after.values, "coinc_after"), n);
    }

    // Manifest: config echo plus everything measured.
    json manifest = {
        {"config", json::parse(cfg.to_json_text())},
        {"seeds",
         {{"diffuser", seed_diffuser}, {"optimizer", seed_optimizer}, {"noise", seed_noise}}},
        {"wavelengths",
         {{"lambda_p", triple.pump()},
          {"lambda_s", triple.signal()},
          {"lambda_i", triple.idler()},
          {"lambda_scan", lambda_scan}}},
        {"q_i_steps", {qi.x, qi.y}},
        {"q_i_snapped", coinc_before.q_i_snapped},
        {"target_steps", {target.x, target.y}},
        {"metrics",
         {{"pearson_pump_vs_coinc", report.pearson_pump_vs_coinc},
          {"grain_size_pump", report.grain_size_pump},
          {"grain_size_coinc", report.grain_size_coinc},
          {"scale_ratio", report.scale_ratio},
          {"enhancement_pump", report.enhancement_pump},
          {"enhancement_coinc", report.enhancement_coinc},
          {"coinc_argmax_before", {report.coinc_argmax_before.x, report.coinc_argmax_before.y}},
          {"coinc_argmax_after", {report.coinc_argmax_after.x, report.coinc_argmax_after.y}},
          {"expected_coinc_peak", {expected.x, expected.y}}}},
    };
    {
        std::ofstream out(dir / "manifest.json");
        if (!out) throw config_error("cannot write " + (dir / "manifest.json").string());
        out << manifest.dump(2) << "\n";
    }

    return report;
}

ScenarioConfig demo_config(const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;
    const double q_step = 2.0 * std::numbers::pi / (cfg.grid_n * cfg.grid_pitch);
    if (name == "fig2") {
        // Non-collinear degenerate: stationary detector off axis on the
        // emission ring, scanned window around the symmetric point.
        cfg.lambda_s = 808e-9;
        cfg.q_i = Vec2{40.0 * q_step, 0.0};
        cfg.singles = SinglesEnvelope{40.0 * q_step, 8.0 * q_step};
    } else if (name == "fig3-degenerate") {
        cfg.lambda_s = 808e-9;
    } else if (name == "fig3-nondegenerate") {
        cfg.lambda_s = 850e-9;
    } else {
        throw config_error("unknown demo '" + name +
                           "' (expected fig2, fig3-degenerate or fig3-nondegenerate)");
    }
    cfg.out_dir = "pumpshape_out/" + name;
    return cfg;
}

}  // namespace pumpshape
