#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace pumpshape {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Steps2 {
    int x = 0;
    int y = 0;
};

// Square sampling lattice shared by the crystal plane and the far field.
// Real-space samples sit at rho_m = (m - n/2) * pitch; the conjugate axis
// carries q_m = 2*pi*(m - n/2) / (n * pitch), so index n/2 is exactly zero
// on both axes and the q axis mirrors itself about it.
class Grid {
  public:
    Grid(int n, double pitch);

    int n() const { return n_; }
    double pitch() const { return pitch_; }
    double extent() const { return n_ * pitch_; }
    double q_step() const;

    double rho(int index) const { return (index - n_ / 2) * pitch_; }
    double q(int index) const { return q_step() * (index - n_ / 2); }
    std::vector<double> q_axis() const;

    // Nearest grid index along the q axis for an arbitrary wavevector
    // component; clamps are not applied (callers validate range).
    int q_to_index(double q) const;

    bool operator==(const Grid&) const = default;

  private:
    int n_;
    double pitch_;
};

enum class FieldDomain { CrystalPlane, FarField };

// Sampled complex amplitude on a Grid. Row-major, values[iy * n + ix];
// iy indexes rho_y / q_y and ix indexes rho_x / q_x.
struct ComplexField {
    Grid grid;
    FieldDomain domain = FieldDomain::CrystalPlane;
    double wavelength = 0.0;  // meters
    std::vector<std::complex<double>> values;

    std::complex<double>& at(int iy, int ix) { return values[static_cast<std::size_t>(iy) * grid.n() + ix]; }
    const std::complex<double>& at(int iy, int ix) const {
        return values[static_cast<std::size_t>(iy) * grid.n() + ix];
    }

    double power() const;  // sum of |values|^2
};

// Nonnegative intensity map, scaled so the peak is 1. `normalization` is the
// raw peak value, so raw intensities are values[i] * normalization.
struct IntensityMap {
    Grid grid;
    std::vector<double> values;
    double normalization = 0.0;

    double& at(int iy, int ix) { return values[static_cast<std::size_t>(iy) * grid.n() + ix]; }
    double at(int iy, int ix) const { return values[static_cast<std::size_t>(iy) * grid.n() + ix]; }
};

// Throws numeric_error if any entry is NaN/Inf.
void check_finite(const std::vector<std::complex<double>>& values, const char* context);
void check_finite(const std::vector<double>& values, const char* context);

// out[iy][ix] = in[(iy - dy) mod n][(ix - dx) mod n]
std::vector<double> circular_shift(const std::vector<double>& in, int n, int dy, int dx);
std::vector<std::complex<double>> circular_shift(const std::vector<std::complex<double>>& in, int n, int dy,
                                                 int dx);

}  // namespace pumpshape
