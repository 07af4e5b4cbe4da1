#pragma once

#include <span>

#include "pumpshape/grid.hpp"

namespace pumpshape {

// Gaussian pump synthesis: exp(-|rho - center|^2 / waist^2) * exp(i tilt.rho).
// waist is the 1/e amplitude radius and must satisfy waist < extent/4 so the
// beam fits the grid. tilt is a transverse wavevector in rad/m.
ComplexField gaussian_beam(const Grid& grid, double waist, Vec2 center, Vec2 tilt, double wavelength);

// values <- values * exp(i * phase); phase must hold grid.n()^2 entries.
ComplexField apply_phase(const ComplexField& field, std::span<const double> phase);

// Linear phase ramp of a whole number of grid steps: exp(i * 2*pi*(sx*jx' + sy*jy')/n)
// with centered pixel indices, i.e. a tilt of (sx, sy) q-steps that shifts the
// far field circularly by exactly (sx, sy) pixels.
std::vector<double> phase_ramp(const Grid& grid, Steps2 steps);

// Unitary centered 2-D DFT between the crystal plane and the far field:
// F(q_k) = (1/n) * sum_j f(rho_j) exp(-i q_k . rho_j). Parseval-exact up to
// FFT rounding.
ComplexField far_field(const ComplexField& field);
ComplexField inverse_far_field(const ComplexField& field);

// Detector-plane coordinate behind a lens of focal length f: x = f*lambda*q/(2*pi).
// Reporting only; the physics lives on the q grid.
double q_to_detector_position(double q, double wavelength, double focal_length);

std::vector<double> intensity(const ComplexField& field);

// Peak-normalized intensity of the far field of `field` (which must be in the
// crystal plane).
IntensityMap far_intensity(const ComplexField& field_at_crystal);

}  // namespace pumpshape
