#include "pumpshape/spdc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pumpshape/errors.hpp"
#include "pumpshape/metrics.hpp"
#include "pumpshape/optics.hpp"
#include "pumpshape/rng.hpp"

namespace pumpshape {

WavelengthTriple WavelengthTriple::from_pump_signal(double lambda_p, double lambda_s) {
    if (!(lambda_p > 0.0)) throw config_error("pump wavelength must be positive");
    if (!(lambda_s > lambda_p)) {
        std::ostringstream msg;
        msg << "signal wavelength " << lambda_s << " m must exceed the pump wavelength " << lambda_p << " m";
        throw config_error(msg.str());
    }
    const double lambda_i = 1.0 / (1.0 / lambda_p - 1.0 / lambda_s);
    // Energy conservation holds by construction; guard against pathologies.
    const double residual = std::abs(1.0 / lambda_s + 1.0 / lambda_i - 1.0 / lambda_p) * lambda_p;
    if (!(residual < 1e-12) || !(lambda_i > lambda_p)) {
        throw numeric_error("wavelength triple violates energy conservation");
    }
    return WavelengthTriple(lambda_p, lambda_s, lambda_i);
}

namespace {

struct SnappedQ {
    Steps2 steps;
    Vec2 q;
    bool snapped;
};

SnappedQ snap_to_grid(const Grid& grid, Vec2 q) {
    const double qs = grid.q_step();
    SnappedQ out;
    out.steps = Steps2{static_cast<int>(std::lround(q.x / qs)), static_cast<int>(std::lround(q.y / qs))};
    out.q = Vec2{out.steps.x * qs, out.steps.y * qs};
    out.snapped =
        std::abs(q.x - out.q.x) > 1e-9 * qs || std::abs(q.y - out.q.y) > 1e-9 * qs;
    return out;
}

// The shared integrand of the coincidence rate: the pump profile times the
// screen phase at the signal and at the idler wavelength. Under energy
// conservation the two phases add up to the pump-wavelength phase.
ComplexField pair_integrand(const ComplexField& pump, const DiffuserMap& d, const WavelengthTriple& w) {
    return apply_phase(apply_phase(pump, transfer_function(d, w.signal())), transfer_function(d, w.idler()));
}

void require_crystal_plane(const ComplexField& pump, const char* op) {
    if (pump.domain != FieldDomain::CrystalPlane) {
        throw std::logic_error(std::string(op) + ": pump must be in the crystal plane");
    }
}

}  // namespace

CoincidenceMap coincidence_map(const ComplexField& pump_at_crystal, const DiffuserMap& d,
                               const WavelengthTriple& w, Vec2 q_i) {
    require_crystal_plane(pump_at_crystal, "coincidence_map");
    if (!(pump_at_crystal.grid == d.grid)) throw std::logic_error("coincidence_map: grid mismatch");

    const Grid& grid = pump_at_crystal.grid;
    const int n = grid.n();
    const SnappedQ qi = snap_to_grid(grid, q_i);

    const IntensityMap joint = far_intensity(pair_integrand(pump_at_crystal, d, w));

    // The rate over q_s reads the joint far-field intensity at q = q_s + q_i;
    // on the grid that is a circular shift by -q_i.
    CoincidenceMap map{grid,
                       circular_shift(joint.values, n, -qi.steps.y, -qi.steps.x),
                       qi.q,
                       qi.steps,
                       w.pump(),
                       w.signal(),
                       w.idler(),
                       joint.normalization,
                       qi.snapped,
                       q_i};
    return map;
}

std::vector<double> coincidence_quadrature_oracle(const ComplexField& pump_at_crystal, const DiffuserMap& d,
                                                  const WavelengthTriple& w, Vec2 q_i,
                                                  const std::vector<Vec2>& q_s_list) {
    require_crystal_plane(pump_at_crystal, "coincidence_quadrature_oracle");
    const Grid& grid = pump_at_crystal.grid;
    const int n = grid.n();
    if (n > 64) {
        std::ostringstream msg;
        msg << "quadrature oracle refused for n = " << n << ": the full direct scan is O(n^4), use n <= 64";
        throw config_error(msg.str());
    }

    const SnappedQ qi = snap_to_grid(grid, q_i);
    const ComplexField integrand = pair_integrand(pump_at_crystal, d, w);
    const double measure = grid.pitch() * grid.pitch();

    auto rate_at = [&](double qx, double qy) {
        std::complex<double> acc{0.0, 0.0};
        for (int iy = 0; iy < n; ++iy) {
            const double ry = grid.rho(iy);
            for (int ix = 0; ix < n; ++ix) {
                const double rx = grid.rho(ix);
                acc += integrand.at(iy, ix) * std::polar(1.0, -(rx * qx + ry * qy));
            }
        }
        return std::norm(acc * measure);
    };

    // Independent normalization: direct scan of the whole q grid at q_s + q_i.
    double peak = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            peak = std::max(peak, rate_at(grid.q(ix) + qi.q.x, grid.q(iy) + qi.q.y));
        }
    }
    if (!(peak > 0.0)) throw numeric_error("quadrature oracle: zero coincidence rate everywhere");

    std::vector<double> rates;
    rates.reserve(q_s_list.size());
    for (const Vec2& qs_req : q_s_list) {
        const SnappedQ qs = snap_to_grid(grid, qs_req);
        rates.push_back(rate_at(qs.q.x + qi.q.x, qs.q.y + qi.q.y) / peak);
    }
    return rates;
}

IntensityMap pump_far_intensity(const ComplexField& pump_at_crystal, const DiffuserMap& d, double lambda_p) {
    require_crystal_plane(pump_at_crystal, "pump_far_intensity");
    return far_intensity(apply_phase(pump_at_crystal, transfer_function(d, lambda_p)));
}

IntensityMap singles_map(const SinglesEnvelope& envelope, const DiffuserMap& d, double lambda_s,
                         const Grid& grid) {
    if (envelope.ring_radius < 0.0 || envelope.ring_width <= 0.0) {
        throw config_error("singles envelope requires ring_radius >= 0 and ring_width > 0");
    }
    const int n = grid.n();
    const std::size_t count = static_cast<std::size_t>(n) * n;

    // Speckle modulation from the screen at lambda_s: scatter a broad window,
    // divide out the halo envelope (local mean) so the modulation is unit-mean
    // everywhere the halo carries light, and blend with a flat component by
    // the ballistic power fraction. A flat screen then gives a smooth ring.
    const std::vector<double> phase_s = transfer_function(d, lambda_s);
    const ComplexField window = gaussian_beam(grid, grid.extent() / 8.0, Vec2{0, 0}, Vec2{0, 0}, lambda_s);
    const IntensityMap halo = far_intensity(apply_phase(window, phase_s));

    std::complex<double> ballistic{0.0, 0.0};
    for (std::size_t i = 0; i < count; ++i) ballistic += std::polar(1.0, phase_s[i]);
    ballistic /= static_cast<double>(count);
    const double kappa = 1.0 - std::norm(ballistic);  // scattered power fraction

    const std::vector<double> local_mean = gaussian_blur(halo.values, n, 8.0);
    double local_peak = 0.0;
    for (double v : local_mean) local_peak = std::max(local_peak, v);
    const double floor = 1e-3 * local_peak;

    std::vector<double> out(count);
    const double inv_w2 = 1.0 / (envelope.ring_width * envelope.ring_width);
    for (int iy = 0; iy < n; ++iy) {
        const double qy = grid.q(iy);
        for (int ix = 0; ix < n; ++ix) {
            const double qx = grid.q(ix);
            const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
            const double radial = std::hypot(qx, qy) - envelope.ring_radius;
            const double env = std::exp(-radial * radial * inv_w2);
            // Outside the halo support the modulation is left neutral.
            const double speckle = local_mean[i] > floor ? halo.values[i] / local_mean[i] : 1.0;
            out[i] = env * ((1.0 - kappa) + kappa * speckle);
        }
    }

    IntensityMap map{grid, std::move(out), 0.0};
    double peak = 0.0;
    for (double v : map.values) peak = std::max(peak, v);
    map.normalization = peak;
    if (peak > 0.0) {
        for (double& v : map.values) v /= peak;
    }
    return map;
}

std::vector<double> add_poisson_noise(const std::vector<double>& values, double mean_counts,
                                      std::uint64_t seed) {
    if (!(mean_counts > 0.0)) throw config_error("poisson noise requires a positive mean count");
    Rng rng(seed);
    std::vector<double> noisy(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        noisy[i] = static_cast<double>(rng.poisson(std::max(0.0, values[i]) * mean_counts)) / mean_counts;
    }
    return noisy;
}

IntensityMap add_poisson_noise(const IntensityMap& map, double mean_counts, std::uint64_t seed) {
    IntensityMap out{map.grid, add_poisson_noise(map.values, mean_counts, seed), map.normalization};
    double peak = 0.0;
    for (double v : out.values) peak = std::max(peak, v);
    if (peak > 0.0) {
        for (double& v : out.values) v /= peak;
        out.normalization = map.normalization * peak;
    }
    return out;
}

}  // namespace pumpshape
