#pragma once

#include <cstdint>
#include <vector>

#include "pumpshape/grid.hpp"
#include "pumpshape/optics.hpp"

namespace pumpshape {

// Thin random phase screen: surface thickness h(rho) with refractive index
// n_index. The screen multiplies any field at wavelength lambda by
// exp(i * h * (n_index - 1) * 2*pi / lambda).
struct DiffuserMap {
    Grid grid;
    std::vector<double> h;  // thickness, meters, zero mean
    double n_index = 1.5;
    double corr_length = 0.0;  // meters, 1/e radius of the height autocorrelation
    double rms_height = 0.0;   // meters
    std::uint64_t seed = 0;

    double& at(int iy, int ix) { return h[static_cast<std::size_t>(iy) * grid.n() + ix]; }
    double at(int iy, int ix) const { return h[static_cast<std::size_t>(iy) * grid.n() + ix]; }

    // h == 0 screen (no scattering); useful as a reference medium.
    static DiffuserMap flat(const Grid& grid, double n_index = 1.5);
};

// Gaussian-correlated random surface: white Gaussian noise shaped in the
// spectral domain so the height autocorrelation is exp(-d^2/corr_length^2),
// then mean-removed and rescaled to rms_height. Deterministic in seed.
DiffuserMap generate_diffuser(const Grid& grid, double corr_length, double rms_height, std::uint64_t seed,
                              double n_index = 1.5);

// Chromatic phase map h * (n_index - 1) * 2*pi / lambda. Linear in 1/lambda,
// so the screen factorizes exactly over an energy-conserving wavelength split.
std::vector<double> transfer_function(const DiffuserMap& d, double wavelength);

// Tilts the pump by a whole number of q steps, scatters both the tilted and
// untilted beams, shifts the tilted far-field intensity back, and returns the
// Pearson correlation against the untilted one. 1 for an ideal thin screen.
double memory_shift_check(const DiffuserMap& d, const ComplexField& pump, Steps2 tilt_steps);

// Calibration bridges from a quoted scatter strength to surface parameters.
// rms phase sigma at lambda  ->  rms height sigma * lambda / (2*pi*(n-1)).
double rms_height_for_phase(double rms_phase, double wavelength, double n_index);
// 1/e half-angle theta of the scattered far-field envelope (valid once the
// screen scatters strongly, rms phase >~ 2):  theta = sigma*lambda/(pi*corr_length),
// giving rms height = theta * corr_length / (2 * (n-1)).
double rms_height_for_divergence(double half_angle_1e, double corr_length, double n_index);

}  // namespace pumpshape
