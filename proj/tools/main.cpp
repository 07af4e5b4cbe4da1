// Command-line front end: validate configs, run scenarios, regenerate the
// built-in demo scenarios, and cross-check the FFT coincidence path against
// direct quadrature. Exit codes: 0 success, 1 configuration error, 2 runtime
// failure.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pumpshape/diffuser.hpp"
#include "pumpshape/errors.hpp"
#include "pumpshape/optics.hpp"
#include "pumpshape/rng.hpp"
#include "pumpshape/scenario.hpp"
#include "pumpshape/spdc.hpp"

namespace {

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    bool quiet = false;
};

void apply_overrides(pumpshape::ScenarioConfig& cfg, const GlobalOptions& opts) {
    if (opts.seed) cfg.master_seed = *opts.seed;
    if (opts.out_dir) {
        cfg.out_dir = *opts.out_dir;
    } else if (const char* env = std::getenv("PUMPSHAPE_OUT_DIR")) {
        // Environment override applies only when --out-dir is absent.
        cfg.out_dir = std::string(env) + "/" + cfg.name;
    }
}

void print_config(const pumpshape::ScenarioConfig& cfg, std::ostream& os) {
    const pumpshape::WavelengthTriple w =
        pumpshape::WavelengthTriple::from_pump_signal(cfg.lambda_p, cfg.lambda_s);
    os << "scenario '" << cfg.name << "'\n"
       << "  grid: " << cfg.grid_n << " x " << cfg.grid_n << ", pitch " << cfg.grid_pitch * 1e6
       << " um (extent " << cfg.grid_n * cfg.grid_pitch * 1e3 << " mm)\n"
       << "  pump: waist " << cfg.pump_waist * 1e3 << " mm at " << cfg.lambda_p * 1e9 << " nm\n"
       << "  wavelengths: signal " << w.signal() * 1e9 << " nm, idler " << w.idler() * 1e9
       << " nm (derived), scanning " << cfg.scanning << "\n"
       << "  q_i: (" << cfg.q_i.x << ", " << cfg.q_i.y << ") rad/m\n"
       << "  diffuser: "
       << (cfg.diffuser_replay
               ? "replay from " + *cfg.diffuser_replay
               : "corr_length " + std::to_string(cfg.diffuser_corr_length * 1e6) + " um, rms_height " +
                     std::to_string(cfg.diffuser_rms_height * 1e9) + " nm, n_index " +
                     std::to_string(cfg.diffuser_n_index))
       << "\n"
       << "  optimizer: " << cfg.segments << "x" << cfg.segments << " segments, " << cfg.iterations
       << " iterations, " << cfg.phase_steps << " phase steps\n"
       << "  master_seed: " << cfg.master_seed << "\n"
       << "  out_dir: " << cfg.out_dir << "\n";
}

void print_metrics(const pumpshape::MetricsReport& m, std::ostream& os) {
    os << "  pearson pump vs coincidence: " << m.pearson_pump_vs_coinc << "\n"
       << "  grain size pump / coincidence: " << m.grain_size_pump * 1e6 << " um / "
       << m.grain_size_coinc * 1e6 << " um (ratio " << m.scale_ratio << ")\n"
       << "  enhancement pump / coincidence: " << m.enhancement_pump << " / " << m.enhancement_coinc << "\n"
       << "  coincidence argmax after optimization: (" << m.coinc_argmax_after.x << ", "
       << m.coinc_argmax_after.y << ") steps, expected (" << m.expected_coinc_peak.x << ", "
       << m.expected_coinc_peak.y << ")\n";
}

int run_oracle(int n, bool quiet) {
    using namespace pumpshape;
    if (n > 64) throw config_error("oracle grid capped at n = 64 (direct scan is O(n^4))");
    const Grid grid(n, 10e-6);
    const DiffuserMap d = generate_diffuser(grid, 4.0 * grid.pitch(), 300e-9, 7, 1.5);
    const ComplexField pump = gaussian_beam(grid, grid.extent() / 8.0, {0, 0}, {0, 0}, 404e-9);
    const WavelengthTriple w = WavelengthTriple::from_pump_signal(404e-9, 850e-9);
    const Vec2 q_i{3.0 * grid.q_step(), -2.0 * grid.q_step()};

    const CoincidenceMap map = coincidence_map(pump, d, w, q_i);

    Rng rng(99);
    std::vector<Vec2> points;
    for (int k = 0; k < 10; ++k) {
        const int ix = static_cast<int>(rng.uniform_below(n));
        const int iy = static_cast<int>(rng.uniform_below(n));
        points.push_back(Vec2{grid.q(ix), grid.q(iy)});
    }
    const std::vector<double> rates = coincidence_quadrature_oracle(pump, d, w, q_i, points);

    double max_rel = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        const int ix = grid.q_to_index(points[k].x);
        const int iy = grid.q_to_index(points[k].y);
        const double fft_value = map.at(iy, ix);
        const double rel = std::abs(rates[k] - fft_value) / (std::abs(fft_value) + 1e-12);
        max_rel = std::max(max_rel, rel);
    }
    if (!quiet) {
        std::cout << "quadrature oracle, n = " << n << ", 10 q_s points: max rel. err = " << max_rel
                  << (max_rel < 1e-8 ? "  (ok)" : "  (FAILED, expected < 1e-8)") << "\n";
    }
    if (!(max_rel < 1e-8)) throw numeric_error("quadrature oracle disagrees with the FFT path");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattered-pump wavefront shaping simulator for entangled-photon coincidences"};
    app.require_subcommand(1);

    GlobalOptions opts;
    std::uint64_t seed_value = 0;
    std::string out_dir_value;
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the master seed");
    auto* out_opt = app.add_option("--out-dir", out_dir_value, "Override the output directory");
    app.add_flag("--quiet", opts.quiet, "Suppress informational output (artifacts are unchanged)");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario from a JSON config");
    run_cmd->add_option("config", config_path, "Path to the scenario config")->required();

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Validate a JSON config and print the resolved parameters");
    validate_cmd->add_option("config", validate_path, "Path to the scenario config")->required();

    std::string demo_name;
    bool config_only = false;
    auto* demo_cmd = app.add_subcommand("demo", "Run a built-in scenario: fig2, fig3-degenerate, fig3-nondegenerate");
    demo_cmd->add_option("name", demo_name, "Demo name")->required();
    demo_cmd->add_flag("--config-only", config_only, "Write the demo's config.json and exit without running");

    int oracle_n = 32;
    auto* oracle_cmd = app.add_subcommand("oracle", "Cross-check the FFT coincidence path against direct quadrature");
    oracle_cmd->add_option("n", oracle_n, "Grid size (<= 64)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // prints usage; nonzero on bad input
    }

    if (*seed_opt) opts.seed = seed_value;
    if (*out_opt) opts.out_dir = out_dir_value;

    try {
        if (*run_cmd) {
            pumpshape::ScenarioConfig cfg = pumpshape::ScenarioConfig::from_json_file(config_path);
            apply_overrides(cfg, opts);
            cfg.validate();
            if (!opts.quiet) print_config(cfg, std::cout);
            const pumpshape::MetricsReport report = pumpshape::run_scenario(cfg);
            if (!opts.quiet) {
                std::cout << "done; artifacts in " << cfg.out_dir << "\n";
                print_metrics(report, std::cout);
            }
        } else if (*validate_cmd) {
            pumpshape::ScenarioConfig cfg = pumpshape::ScenarioConfig::from_json_file(validate_path);
            apply_overrides(cfg, opts);
            cfg.validate();
            print_config(cfg, std::cout);
            std::cout << "config ok\n";
        } else if (*demo_cmd) {
            pumpshape::ScenarioConfig cfg = pumpshape::demo_config(demo_name);
            apply_overrides(cfg, opts);
            cfg.validate();
            if (config_only) {
                std::filesystem::create_directories(cfg.out_dir);
                const auto path = std::filesystem::path(cfg.out_dir) / "config.json";
                std::ofstream out(path);
                out << cfg.to_json_text();
                if (!opts.quiet) std::cout << "wrote " << path.string() << "\n";
            } else {
                if (!opts.quiet) print_config(cfg, std::cout);
                const pumpshape::MetricsReport report = pumpshape::run_scenario(cfg);
                if (!opts.quiet) {
                    std::cout << "done; artifacts in " << cfg.out_dir << "\n";
                    print_metrics(report, std::cout);
                }
            }
        } else if (*oracle_cmd) {
            return run_oracle(oracle_n, opts.quiet);
        }
    } catch (const pumpshape::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
