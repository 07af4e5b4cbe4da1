#pragma once

#include <cstdint>
#include <vector>

#include "pumpshape/diffuser.hpp"
#include "pumpshape/grid.hpp"

namespace pumpshape {

// Energy-conserving wavelength triple: the idler is always derived from the
// pump and signal so that 1/lambda_s + 1/lambda_i = 1/lambda_p holds to
// machine precision. Requires lambda_s > lambda_p.
class WavelengthTriple {
  public:
    static WavelengthTriple from_pump_signal(double lambda_p, double lambda_s);

    double pump() const { return lambda_p_; }
    double signal() const { return lambda_s_; }
    double idler() const { return lambda_i_; }
    bool degenerate() const { return lambda_s_ == lambda_i_; }

  private:
    WavelengthTriple(double p, double s, double i) : lambda_p_(p), lambda_s_(s), lambda_i_(i) {}
    double lambda_p_, lambda_s_, lambda_i_;
};

// Coincidence rate over the scanned wavevector q_s, for a stationary detector
// at q_i. Rates are relative: scaled so the peak is 1, with the raw peak kept
// in `normalization`.
struct CoincidenceMap {
    Grid grid;
    std::vector<double> values;
    Vec2 q_i;        // stationary detector wavevector, snapped onto the grid
    Steps2 q_i_steps;  // same, in whole q steps
    double lambda_p = 0.0, lambda_s = 0.0, lambda_i = 0.0;
    double normalization = 0.0;
    bool q_i_snapped = false;  // true when the requested q_i was off-grid
    Vec2 q_i_requested;

    double at(int iy, int ix) const { return values[static_cast<std::size_t>(iy) * grid.n() + ix]; }
};

// Phenomenological annular envelope for the singles pattern of a non-collinear
// source: peak at |q| = ring_radius, 1/e half-width ring_width. radius 0 means
// a collinear blob.
struct SinglesEnvelope {
    double ring_radius = 0.0;  // rad/m
    double ring_width = 0.0;   // rad/m
};

// Two-photon coincidence pattern of a pump W scattered by a thin screen: the
// signal and idler each pick up the screen phase at their own wavelength, and
// the pattern over q_s is the modulus-squared far field of
// W * exp(i phi_s) * exp(i phi_i) read at q = q_s + q_i. Because the screen
// phases add to the pump-wavelength phase under energy conservation, this
// equals the scattered pump intensity shifted by -q_i.
CoincidenceMap coincidence_map(const ComplexField& pump_at_crystal, const DiffuserMap& d,
                               const WavelengthTriple& w, Vec2 q_i);

// Direct Riemann-sum evaluation of the same rate at chosen q_s points,
// independent of the FFT path (including its normalization, which is taken
// from a full direct scan of the grid). Refuses n > 64: the scan is O(n^4).
std::vector<double> coincidence_quadrature_oracle(const ComplexField& pump_at_crystal, const DiffuserMap& d,
                                                  const WavelengthTriple& w, Vec2 q_i,
                                                  const std::vector<Vec2>& q_s_list);

// Scattered classical pump: peak-normalized |far_field(W * exp(i phi_p))|^2.
IntensityMap pump_far_intensity(const ComplexField& pump_at_crystal, const DiffuserMap& d, double lambda_p);

// Singles-rate stand-in: the annular envelope multiplied by a unit-local-mean
// speckle modulation derived from the screen at lambda_s, blended with a flat
// component by the screen's ballistic power fraction (a flat screen gives a
// smooth ring).
IntensityMap singles_map(const SinglesEnvelope& envelope, const DiffuserMap& d, double lambda_s,
                         const Grid& grid);

// Optional counting noise: values <- Poisson(values * mean_counts)/mean_counts,
// re-scaled to peak 1. Deterministic in seed.
IntensityMap add_poisson_noise(const IntensityMap& map, double mean_counts, std::uint64_t seed);
std::vector<double> add_poisson_noise(const std::vector<double>& values, double mean_counts,
                                      std::uint64_t seed);

}  // namespace pumpshape
