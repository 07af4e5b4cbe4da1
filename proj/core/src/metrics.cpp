#include "pumpshape/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "pumpshape/errors.hpp"

namespace pumpshape {

std::vector<double> gaussian_blur(const std::vector<double>& values, int n, double radius_px) {
    const std::size_t count = static_cast<std::size_t>(n) * n;
    std::vector<std::complex<double>> buf(count);
    for (std::size_t i = 0; i < count; ++i) buf[i] = values[i];
    detail::dft2d(buf, n, -1);
    // Spatial kernel exp(-d^2/r^2) has spectrum exp(-q^2 r^2 / 4) with
    // q = 2*pi*f/n in pixel units; normalized so the DC gain is 1.
    const double c = radius_px * radius_px / 4.0;
    const double two_pi_over_n = 2.0 * std::numbers::pi / n;
    for (int iy = 0; iy < n; ++iy) {
        const int fy = iy <= n / 2 ? iy : iy - n;
        const double qy = two_pi_over_n * fy;
        for (int ix = 0; ix < n; ++ix) {
            const int fx = ix <= n / 2 ? ix : ix - n;
            const double qx = two_pi_over_n * fx;
            buf[static_cast<std::size_t>(iy) * n + ix] *= std::exp(-(qx * qx + qy * qy) * c);
        }
    }
    detail::dft2d(buf, n, +1);
    std::vector<double> out(count);
    const double norm = 1.0 / count;
    for (std::size_t i = 0; i < count; ++i) out[i] = std::max(0.0, buf[i].real() * norm);
    return out;
}

std::vector<std::uint8_t> envelope_mask(const std::vector<double>& values, int n, double top_fraction,
                                        double blur_radius_px, int dilate_px) {
    if (!(top_fraction > 0.0) || top_fraction > 1.0) throw config_error("top_fraction must be in (0, 1]");
    const std::size_t count = static_cast<std::size_t>(n) * n;
    const std::vector<double> smooth = gaussian_blur(values, n, blur_radius_px);

    std::vector<double> sorted = smooth;
    const std::size_t keep = std::max<std::size_t>(1, static_cast<std::size_t>(top_fraction * count));
    std::nth_element(sorted.begin(), sorted.begin() + (keep - 1), sorted.end(), std::greater<double>());
    const double threshold = sorted[keep - 1];

    std::vector<std::uint8_t> mask(count, 0);
    for (std::size_t i = 0; i < count; ++i) mask[i] = smooth[i] >= threshold ? 1 : 0;

    // Chebyshev dilation, one ring per pass.
    std::vector<std::uint8_t> next(count);
    for (int pass = 0; pass < dilate_px; ++pass) {
        for (int iy = 0; iy < n; ++iy) {
            for (int ix = 0; ix < n; ++ix) {
                std::uint8_t hit = 0;
                for (int dy = -1; dy <= 1 && !hit; ++dy) {
                    const int yy = iy + dy;
                    if (yy < 0 || yy >= n) continue;
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int xx = ix + dx;
                        if (xx < 0 || xx >= n) continue;
                        if (mask[static_cast<std::size_t>(yy) * n + xx]) {
                            hit = 1;
                            break;
                        }
                    }
                }
                next[static_cast<std::size_t>(iy) * n + ix] = hit;
            }
        }
        mask.swap(next);
    }
    return mask;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<std::uint8_t>& mask) {
    if (a.size() != b.size() || a.size() != mask.size()) {
        throw std::logic_error("pearson: size mismatch");
    }
    double sum_a = 0.0, sum_b = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!mask[i]) continue;
        sum_a += a[i];
        sum_b += b[i];
        ++count;
    }
    if (count < 2) throw numeric_error("pearson: mask selects fewer than 2 pixels");
    const double mean_a = sum_a / count;
    const double mean_b = sum_b / count;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!mask[i]) continue;
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (!(saa > 0.0) || !(sbb > 0.0)) {
        throw numeric_error("pearson: map is constant over the mask, correlation undefined");
    }
    return sab / std::sqrt(saa * sbb);
}

double mean_over_mask(const std::vector<double>& values, const std::vector<std::uint8_t>& mask) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!mask[i]) continue;
        sum += values[i];
        ++count;
    }
    if (count == 0) throw numeric_error("mean_over_mask: empty mask");
    return sum / count;
}

double speckle_contrast(const std::vector<double>& values, const std::vector<std::uint8_t>& mask) {
    const double mean = mean_over_mask(values, mask);
    if (!(mean != 0.0)) throw numeric_error("speckle_contrast: zero mean");
    double var = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!mask[i]) continue;
        const double d = values[i] - mean;
        var += d * d;
        ++count;
    }
    var /= count;
    return std::sqrt(var) / mean;
}

double grain_size(const std::vector<double>& values, int n, double meters_per_pixel) {
    if (!(meters_per_pixel > 0.0)) throw config_error("grain_size: calibration must be positive");
    const std::size_t count = static_cast<std::size_t>(n) * n;

    // Background-subtracted circular autocorrelation via the power spectrum.
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(count);
    std::vector<std::complex<double>> buf(count);
    for (std::size_t i = 0; i < count; ++i) buf[i] = values[i] - mean;
    detail::dft2d(buf, n, -1);
    for (auto& v : buf) v = std::norm(v);
    detail::dft2d(buf, n, +1);

    const double peak = buf[0].real();
    if (!(peak > 0.0)) throw numeric_error("grain_size: map is constant, no autocorrelation peak");

    // Radially averaged profile; bin k collects integer-rounded radii.
    const int max_r = n / 2;
    std::vector<double> radial(max_r + 1, 0.0);
    std::vector<std::size_t> counts(max_r + 1, 0);
    for (int iy = 0; iy < n; ++iy) {
        const int fy = iy <= n / 2 ? iy : iy - n;
        for (int ix = 0; ix < n; ++ix) {
            const int fx = ix <= n / 2 ? ix : ix - n;
            const int r = static_cast<int>(std::lround(std::hypot(fx, fy)));
            if (r > max_r) continue;
            radial[r] += buf[static_cast<std::size_t>(iy) * n + ix].real();
            counts[r]++;
        }
    }
    for (int r = 0; r <= max_r; ++r) {
        if (counts[r]) radial[r] /= static_cast<double>(counts[r]);
    }

    const double half = radial[0] / 2.0;
    double r_half = -1.0;
    for (int r = 1; r <= max_r; ++r) {
        if (radial[r] < half) {
            // Linear interpolation between bins r-1 and r.
            const double hi = radial[r - 1];
            const double lo = radial[r];
            r_half = (r - 1) + (hi - half) / (hi - lo);
            break;
        }
    }
    if (r_half < 0.0) throw numeric_error("grain_size: autocorrelation peak does not decay to half maximum");
    if (r_half < 1.0) {
        throw numeric_error("grain_size: autocorrelation peak narrower than 2 pixels, grain unresolved");
    }
    return 2.0 * r_half * meters_per_pixel;
}

Steps2 argmax_index(const std::vector<double>& values, int n) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return Steps2{static_cast<int>(best % n), static_cast<int>(best / n)};
}

}  // namespace pumpshape
