#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "pumpshape/errors.hpp"
#include "pumpshape/grid.hpp"
#include "pumpshape/optics.hpp"
#include "pumpshape/rng.hpp"

using namespace pumpshape;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs_diff(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("grid construction enforces power-of-two size and positive pitch") {
    CHECK_THROWS_AS(Grid(7, 1e-5), config_error);
    CHECK_THROWS_AS(Grid(4, 1e-5), config_error);
    CHECK_THROWS_AS(Grid(48, 1e-5), config_error);
    CHECK_THROWS_AS(Grid(64, 0.0), config_error);
    CHECK_THROWS_AS(Grid(64, -1e-6), config_error);
    CHECK_NOTHROW(Grid(8, 1e-5));
}

TEST_CASE("q axis is centered, symmetric and strictly increasing") {
    const Grid grid(64, 10e-6);
    const auto q = grid.q_axis();
    CHECK(q[32] == 0.0);
    for (int k = 1; k < 32; ++k) {
        CHECK(q[32 + k] == doctest::Approx(-q[32 - k]).epsilon(1e-15));
    }
    for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i] > q[i - 1]);
    CHECK(grid.q_step() == doctest::Approx(2 * pi / (64 * 10e-6)));
}

TEST_CASE("untilted centered gaussian beam is symmetric with zero phase") {
    const Grid grid(64, 10e-6);
    const ComplexField beam = gaussian_beam(grid, 5e-5, {0, 0}, {0, 0}, 404e-9);
    const int n = grid.n();
    for (int iy = 1; iy < n; ++iy) {
        for (int ix = 1; ix < n; ++ix) {
            CHECK(beam.at(iy, ix).imag() == 0.0);
            // rho -> -rho maps index m to n - m for m >= 1
            CHECK(beam.at(iy, ix).real() == doctest::Approx(beam.at(n - iy, n - ix).real()).epsilon(1e-14));
        }
    }
    CHECK(beam.at(n / 2, n / 2) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("tilt is a pure phase: power matches the untilted beam") {
    const Grid grid(64, 10e-6);
    const ComplexField flat = gaussian_beam(grid, 5e-5, {1e-5, -2e-5}, {0, 0}, 404e-9);
    const ComplexField tilted = gaussian_beam(grid, 5e-5, {1e-5, -2e-5}, {3.7e4, -1.1e4}, 404e-9);
    CHECK(tilted.power() == doctest::Approx(flat.power()).epsilon(1e-13));
}

TEST_CASE("waist exceeding a quarter of the grid extent is rejected with the bound") {
    const Grid grid(64, 10e-6);  // extent 0.64 mm
    CHECK_THROWS_WITH_AS(gaussian_beam(grid, 1.7e-4, {0, 0}, {0, 0}, 404e-9),
                         doctest::Contains("n*pitch/4"), config_error);
    CHECK_THROWS_AS(gaussian_beam(grid, 0.0, {0, 0}, {0, 0}, 404e-9), config_error);
}

TEST_CASE("far field of a gaussian matches the closed-form pair") {
    // exp(-r^2/w^2) transforms to exp(-q^2 w^2 / 4): 1/e amplitude half-width 2/w.
    const Grid grid(256, 10e-6);
    const double w = 20 * grid.pitch();
    const ComplexField beam = gaussian_beam(grid, w, {0, 0}, {0, 0}, 404e-9);
    const ComplexField ff = far_field(beam);
    const int n = grid.n();
    const std::complex<double> peak = ff.at(n / 2, n / 2);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double q2 = grid.q(ix) * grid.q(ix) + grid.q(iy) * grid.q(iy);
            const double expected = std::exp(-q2 * w * w / 4.0);
            if (expected < 1e-3) continue;  // skip the numerically empty tails
            const std::complex<double> ratio = ff.at(iy, ix) / peak;
            CHECK(std::abs(ratio - expected) / expected < 1e-6);
        }
    }
    // 1/e half-width: amplitude at q = 2/w is 1/e of the peak.
    const int k = static_cast<int>(std::lround((2.0 / w) / grid.q_step()));
    const double measured = std::abs(ff.at(n / 2, n / 2 + k)) / std::abs(peak);
    const double expected = std::exp(-grid.q(n / 2 + k) * grid.q(n / 2 + k) * w * w / 4.0);
    CHECK(measured == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(1.0 / std::numbers::e).epsilon(0.1));
}

TEST_CASE("far field of an impulse is flat") {
    const Grid grid(32, 10e-6);
    ComplexField field{grid, FieldDomain::CrystalPlane, 404e-9,
                       std::vector<std::complex<double>>(32 * 32, {0, 0})};
    field.at(5, 20) = {1.0, 0.0};
    const ComplexField ff = far_field(field);
    const double expected = 1.0 / 32.0;  // unitary normalization
    for (const auto& v : ff.values) CHECK(std::abs(v) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("far field preserves power and inverts exactly") {
    const Grid grid(128, 10e-6);
    Rng rng(11);
    ComplexField field{grid, FieldDomain::CrystalPlane, 404e-9,
                       std::vector<std::complex<double>>(128 * 128)};
    for (auto& v : field.values) v = {rng.gaussian(), rng.gaussian()};
    const ComplexField ff = far_field(field);
    CHECK(ff.domain == FieldDomain::FarField);
    CHECK(ff.power() == doctest::Approx(field.power()).epsilon(1e-12));

    const ComplexField back = inverse_far_field(ff);
    CHECK(back.domain == FieldDomain::CrystalPlane);
    const double scale = std::sqrt(field.power() / field.values.size());
    CHECK(max_abs_diff(back.values, field.values) < 1e-12 * scale);

    // Round trip from the far-field side as well.
    const ComplexField ff2 = far_field(inverse_far_field(ff));
    CHECK(max_abs_diff(ff2.values, ff.values) < 1e-12 * scale);
}

TEST_CASE("far field rejects wrong-domain input") {
    const Grid grid(32, 10e-6);
    const ComplexField beam = gaussian_beam(grid, 5e-5, {0, 0}, {0, 0}, 404e-9);
    const ComplexField ff = far_field(beam);
    CHECK_THROWS_AS(far_field(ff), std::logic_error);
    CHECK_THROWS_AS(inverse_far_field(beam), std::logic_error);
}

TEST_CASE("apply_phase: identity, global phase, power conservation") {
    const Grid grid(64, 10e-6);
    const ComplexField beam = gaussian_beam(grid, 5e-5, {0, 0}, {0, 0}, 404e-9);
    const std::vector<double> zero(64 * 64, 0.0);
    const ComplexField same = apply_phase(beam, zero);
    CHECK(max_abs_diff(same.values, beam.values) == 0.0);

    const std::vector<double> constant(64 * 64, 1.2345);
    const ComplexField rotated = apply_phase(beam, constant);
    CHECK(rotated.power() == doctest::Approx(beam.power()).epsilon(1e-13));
    const auto i0 = intensity(beam);
    const auto i1 = intensity(rotated);
    for (std::size_t i = 0; i < i0.size(); ++i) CHECK(i1[i] == doctest::Approx(i0[i]).epsilon(1e-12));

    std::vector<double> wrong(63, 0.0);
    CHECK_THROWS_AS(apply_phase(beam, wrong), std::logic_error);
}

TEST_CASE("integer phase ramp shifts the far field circularly (shift theorem)") {
    const Grid grid(64, 10e-6);
    Rng rng(3);
    ComplexField field{grid, FieldDomain::CrystalPlane, 404e-9, std::vector<std::complex<double>>(64 * 64)};
    for (auto& v : field.values) v = {rng.gaussian(), rng.gaussian()};

    for (const Steps2 steps : {Steps2{1, 0}, Steps2{0, 1}, Steps2{5, -3}, Steps2{-17, 9}}) {
        const ComplexField base = far_field(field);
        const ComplexField ramped = far_field(apply_phase(field, phase_ramp(grid, steps)));
        const auto shifted = circular_shift(base.values, 64, steps.y, steps.x);
        const double scale = std::sqrt(field.power() / field.values.size());
        CHECK(max_abs_diff(ramped.values, shifted) < 1e-12 * scale);
    }
}

TEST_CASE("far field of a white phase screen is negative-exponential speckle") {
    // Kolmogorov-Smirnov distance between the intensity histogram and
    // 1 - exp(-I/mean) stays small for fully developed speckle.
    const Grid grid(512, 10e-6);
    Rng rng(21);
    ComplexField screen{grid, FieldDomain::CrystalPlane, 404e-9,
                        std::vector<std::complex<double>>(static_cast<std::size_t>(512) * 512)};
    for (auto& v : screen.values) v = std::polar(1.0, 2 * pi * rng.uniform());
    const ComplexField ff = far_field(screen);
    std::vector<double> samples = intensity(ff);
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    std::sort(samples.begin(), samples.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double model = 1.0 - std::exp(-samples[i] / mean);
        const double hi = static_cast<double>(i + 1) / samples.size();
        const double lo = static_cast<double>(i) / samples.size();
        ks = std::max({ks, std::abs(model - hi), std::abs(model - lo)});
    }
    CHECK(ks < 0.05);
}

TEST_CASE("detector-plane mapping is linear and wavelength-proportional") {
    CHECK(q_to_detector_position(0.0, 404e-9, 0.1) == 0.0);
    const double q = 4.2e4;
    CHECK(q_to_detector_position(q, 2 * 404e-9, 0.1) ==
          doctest::Approx(2.0 * q_to_detector_position(q, 404e-9, 0.1)).epsilon(1e-15));
    // 808 nm vs 404 nm on the same q grid: positions differ by exactly 2.
    const Grid grid(64, 10e-6);
    for (int m = 0; m < 64; ++m) {
        const double x404 = q_to_detector_position(grid.q(m), 404e-9, 0.1);
        const double x808 = q_to_detector_position(grid.q(m), 808e-9, 0.1);
        CHECK(x808 == doctest::Approx(2.0 * x404).epsilon(1e-15));
    }
    CHECK(q_to_detector_position(1.0, 404e-9, 0.1) == doctest::Approx(0.1 * 404e-9 / (2 * pi)));
    CHECK_THROWS_AS(q_to_detector_position(1.0, 404e-9, 0.0), config_error);
}
