#pragma once

#include <cstdint>
#include <vector>

#include "pumpshape/grid.hpp"

namespace pumpshape {

// Isotropic Gaussian blur with 1/e radius `radius_px` pixels, computed
// spectrally (circular boundary). Output clamped at 0.
std::vector<double> gaussian_blur(const std::vector<double>& values, int n, double radius_px);

// Speckle-envelope support: blur the map, keep the brightest `top_fraction`
// of pixels, and dilate the region by `dilate_px` (Chebyshev) pixels. The
// result is a flat, well-lit core over which speckle statistics are unbiased
// by the envelope.
std::vector<std::uint8_t> envelope_mask(const std::vector<double>& values, int n, double top_fraction = 0.01,
                                        double blur_radius_px = 8.0, int dilate_px = 4);

// Centered Pearson correlation over masked pixels. Throws numeric_error when
// either map is constant over the mask (undefined correlation).
double pearson(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<std::uint8_t>& mask);

double mean_over_mask(const std::vector<double>& values, const std::vector<std::uint8_t>& mask);

// std/mean over masked pixels; 1 for fully developed speckle.
double speckle_contrast(const std::vector<double>& values, const std::vector<std::uint8_t>& mask);

// Speckle grain size: FWHM of the radially averaged autocorrelation peak of
// the mean-subtracted intensity, scaled by meters_per_pixel (detector-plane
// calibration). Throws when the peak is narrower than 2 pixels (unresolved).
double grain_size(const std::vector<double>& values, int n, double meters_per_pixel);

// argmax as raw array indices: x is the column, y the row.
Steps2 argmax_index(const std::vector<double>& values, int n);

}  // namespace pumpshape
