#include "pumpshape/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pumpshape/errors.hpp"

namespace pumpshape {

Grid::Grid(int n, double pitch) : n_(n), pitch_(pitch) {
    if (n < 8 || (n & (n - 1)) != 0) {
        std::ostringstream msg;
        msg << "grid size must be a power of two >= 8, got " << n;
        throw config_error(msg.str());
    }
    if (!(pitch > 0.0) || !std::isfinite(pitch)) {
        std::ostringstream msg;
        msg << "grid pitch must be positive and finite, got " << pitch;
        throw config_error(msg.str());
    }
}

double Grid::q_step() const { return 2.0 * std::numbers::pi / (n_ * pitch_); }

std::vector<double> Grid::q_axis() const {
    std::vector<double> axis(n_);
    for (int m = 0; m < n_; ++m) axis[m] = q(m);
    return axis;
}

int Grid::q_to_index(double q_value) const {
    return static_cast<int>(std::lround(q_value / q_step())) + n_ / 2;
}

double ComplexField::power() const {
    double total = 0.0;
    for (const auto& v : values) total += std::norm(v);
    return total;
}

void check_finite(const std::vector<std::complex<double>>& values, const char* context) {
    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw numeric_error(std::string("non-finite value in ") + context);
        }
    }
}

void check_finite(const std::vector<double>& values, const char* context) {
    for (double v : values) {
        if (!std::isfinite(v)) throw numeric_error(std::string("non-finite value in ") + context);
    }
}

namespace {

template <typename T>
std::vector<T> shift_impl(const std::vector<T>& in, int n, int dy, int dx) {
    std::vector<T> out(in.size());
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

}  // namespace

std::vector<double> circular_shift(const std::vector<double>& in, int n, int dy, int dx) {
    return shift_impl(in, n, dy, dx);
}

std::vector<std::complex<double>> circular_shift(const std::vector<std::complex<double>>& in, int n, int dy,
                                                 int dx) {
    return shift_impl(in, n, dy, dx);
}

}  // namespace pumpshape
