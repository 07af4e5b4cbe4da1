#include "pumpshape/diffuser.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "pumpshape/errors.hpp"
#include "pumpshape/metrics.hpp"
#include "pumpshape/rng.hpp"

namespace pumpshape {

DiffuserMap DiffuserMap::flat(const Grid& grid, double n_index) {
    return DiffuserMap{grid, std::vector<double>(static_cast<std::size_t>(grid.n()) * grid.n(), 0.0),
                       n_index, 0.0, 0.0, 0};
}

DiffuserMap generate_diffuser(const Grid& grid, double corr_length, double rms_height, std::uint64_t seed,
                              double n_index) {
    if (!(corr_length >= 2.0 * grid.pitch())) {
        std::ostringstream msg;
        msg << "diffuser corr_length " << corr_length << " m is not resolvable: requires corr_length >= 2*pitch = "
            << 2.0 * grid.pitch() << " m";
        throw config_error(msg.str());
    }
    if (!(rms_height > 0.0)) {
        throw config_error("diffuser rms_height must be positive (a zero-height screen is flat)");
    }
    if (!(n_index > 1.0)) throw config_error("diffuser refractive index must exceed 1");

    const int n = grid.n();
    const std::size_t count = static_cast<std::size_t>(n) * n;

    Rng rng(seed);
    std::vector<std::complex<double>> buf(count);
    for (auto& v : buf) v = rng.gaussian();

    // Shape white noise in the spectral domain so the height autocorrelation
    // is exp(-d^2/corr_length^2): the sqrt of the target spectrum is
    // exp(-q^2 * corr_length^2 / 8).
    detail::dft2d(buf, n, -1);
    const double qs = grid.q_step();
    const double c = corr_length * corr_length / 8.0;
    for (int iy = 0; iy < n; ++iy) {
        const int fy = iy <= n / 2 ? iy : iy - n;
        const double qy = qs * fy;
        for (int ix = 0; ix < n; ++ix) {
            const int fx = ix <= n / 2 ? ix : ix - n;
            const double qx = qs * fx;
            buf[static_cast<std::size_t>(iy) * n + ix] *= std::exp(-(qx * qx + qy * qy) * c);
        }
    }
    detail::dft2d(buf, n, +1);

    std::vector<double> h(count);
    for (std::size_t i = 0; i < count; ++i) h[i] = buf[i].real();

    double mean = 0.0;
    for (double v : h) mean += v;
    mean /= static_cast<double>(count);
    double var = 0.0;
    for (double& v : h) {
        v -= mean;
        var += v * v;
    }
    var /= static_cast<double>(count);
    if (!(var > 0.0)) throw numeric_error("degenerate diffuser surface (zero variance)");
    const double scale = rms_height / std::sqrt(var);
    for (double& v : h) v *= scale;

    check_finite(h, "generate_diffuser");
    return DiffuserMap{grid, std::move(h), n_index, corr_length, rms_height, seed};
}

std::vector<double> transfer_function(const DiffuserMap& d, double wavelength) {
    if (!(wavelength > 0.0)) throw config_error("wavelength must be positive");
    const double factor = (d.n_index - 1.0) * 2.0 * std::numbers::pi / wavelength;
    std::vector<double> phase(d.h.size());
    for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = d.h[i] * factor;
    return phase;
}

double memory_shift_check(const DiffuserMap& d, const ComplexField& pump, Steps2 tilt_steps) {
    if (pump.domain != FieldDomain::CrystalPlane) {
        throw std::logic_error("memory_shift_check: pump must be in the crystal plane");
    }
    const int n = pump.grid.n();
    const std::vector<double> screen = transfer_function(d, pump.wavelength);

    const IntensityMap base = far_intensity(apply_phase(pump, screen));
    const ComplexField tilted = apply_phase(pump, phase_ramp(pump.grid, tilt_steps));
    const IntensityMap shifted = far_intensity(apply_phase(tilted, screen));

    // A tilt of +s q-steps moves the far field by +s pixels; undo it.
    const std::vector<double> back = circular_shift(shifted.values, n, -tilt_steps.y, -tilt_steps.x);
    const std::vector<std::uint8_t> full(static_cast<std::size_t>(n) * n, 1);
    return pearson(base.values, back, full);
}

double rms_height_for_phase(double rms_phase, double wavelength, double n_index) {
    if (!(n_index > 1.0)) throw config_error("diffuser refractive index must exceed 1");
    return rms_phase * wavelength / (2.0 * std::numbers::pi * (n_index - 1.0));
}

double rms_height_for_divergence(double half_angle_1e, double corr_length, double n_index) {
    if (!(n_index > 1.0)) throw config_error("diffuser refractive index must exceed 1");
    // Strong-screen scattered envelope: 1/e half-angle = sigma*lambda/(pi*corr_length)
    // with sigma the rms phase at lambda; the wavelength cancels in the height.
    return half_angle_1e * corr_length / (2.0 * (n_index - 1.0));
}

}  // namespace pumpshape
