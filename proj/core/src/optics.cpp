#include "pumpshape/optics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "pumpshape/errors.hpp"

namespace pumpshape {

ComplexField gaussian_beam(const Grid& grid, double waist, Vec2 center, Vec2 tilt, double wavelength) {
    if (!(waist > 0.0)) throw config_error("beam waist must be positive");
    const double bound = grid.extent() / 4.0;
    if (!(waist < bound)) {
        std::ostringstream msg;
        msg << "beam waist " << waist << " m does not fit the grid: requires waist < n*pitch/4 = " << bound
            << " m";
        throw config_error(msg.str());
    }
    if (!(wavelength > 0.0)) throw config_error("wavelength must be positive");

    const int n = grid.n();
    ComplexField field{grid, FieldDomain::CrystalPlane, wavelength,
                       std::vector<std::complex<double>>(static_cast<std::size_t>(n) * n)};
    const double inv_w2 = 1.0 / (waist * waist);
    for (int iy = 0; iy < n; ++iy) {
        const double y = grid.rho(iy) - center.y;
        const double ry = grid.rho(iy);
        for (int ix = 0; ix < n; ++ix) {
            const double x = grid.rho(ix) - center.x;
            const double rx = grid.rho(ix);
            const double amp = std::exp(-(x * x + y * y) * inv_w2);
            const double ph = tilt.x * rx + tilt.y * ry;
            field.at(iy, ix) = std::polar(amp, ph);
        }
    }
    return field;
}

ComplexField apply_phase(const ComplexField& field, std::span<const double> phase) {
    const int n = field.grid.n();
    if (phase.size() != static_cast<std::size_t>(n) * n) {
        std::ostringstream msg;
        msg << "phase array has " << phase.size() << " entries, field needs " << n << "x" << n;
        throw std::logic_error(msg.str());
    }
    ComplexField out = field;
    for (std::size_t i = 0; i < phase.size(); ++i) {
        out.values[i] *= std::polar(1.0, phase[i]);
    }
    return out;
}

std::vector<double> phase_ramp(const Grid& grid, Steps2 steps) {
    const int n = grid.n();
    std::vector<double> ramp(static_cast<std::size_t>(n) * n);
    const double cx = 2.0 * std::numbers::pi * steps.x / n;
    const double cy = 2.0 * std::numbers::pi * steps.y / n;
    for (int iy = 0; iy < n; ++iy) {
        const double py = cy * (iy - n / 2);
        for (int ix = 0; ix < n; ++ix) {
            ramp[static_cast<std::size_t>(iy) * n + ix] = cx * (ix - n / 2) + py;
        }
    }
    return ramp;
}

namespace {

// Centered unitary transform: ifftshift -> DFT -> fftshift, divided by n.
// For even n both shifts are the same half-period roll.
ComplexField centered_transform(const ComplexField& field, int sign, FieldDomain from, FieldDomain to,
                                const char* name) {
    if (field.domain != from) {
        throw std::logic_error(std::string(name) + ": field is in the wrong domain");
    }
    const int n = field.grid.n();
    const int h = n / 2;
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy) {
        const int sy = (iy + h) % n;
        for (int ix = 0; ix < n; ++ix) {
            buf[static_cast<std::size_t>(sy) * n + (ix + h) % n] = field.at(iy, ix);
        }
    }
    detail::dft2d(buf, n, sign);
    ComplexField out{field.grid, to, field.wavelength,
                     std::vector<std::complex<double>>(static_cast<std::size_t>(n) * n)};
    const double norm = 1.0 / n;
    for (int iy = 0; iy < n; ++iy) {
        const int sy = (iy + h) % n;
        for (int ix = 0; ix < n; ++ix) {
            out.at(iy, ix) = buf[static_cast<std::size_t>(sy) * n + (ix + h) % n] * norm;
        }
    }
    check_finite(out.values, name);
    return out;
}

}  // namespace

ComplexField far_field(const ComplexField& field) {
    return centered_transform(field, -1, FieldDomain::CrystalPlane, FieldDomain::FarField, "far_field");
}

ComplexField inverse_far_field(const ComplexField& field) {
    return centered_transform(field, +1, FieldDomain::FarField, FieldDomain::CrystalPlane,
                              "inverse_far_field");
}

double q_to_detector_position(double q, double wavelength, double focal_length) {
    if (!(focal_length > 0.0)) throw config_error("focal length must be positive");
    return focal_length * wavelength * q / (2.0 * std::numbers::pi);
}

std::vector<double> intensity(const ComplexField& field) {
    std::vector<double> out(field.values.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::norm(field.values[i]);
    return out;
}

IntensityMap far_intensity(const ComplexField& field_at_crystal) {
    const ComplexField ff = far_field(field_at_crystal);
    IntensityMap map{ff.grid, intensity(ff), 0.0};
    double peak = 0.0;
    for (double v : map.values) peak = std::max(peak, v);
    map.normalization = peak;
    if (peak > 0.0) {
        for (double& v : map.values) v /= peak;
    }
    return map;
}

}  // namespace pumpshape
