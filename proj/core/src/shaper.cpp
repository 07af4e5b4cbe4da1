#include "pumpshape/shaper.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pumpshape/errors.hpp"
#include "pumpshape/optics.hpp"
#include "pumpshape/rng.hpp"

namespace pumpshape {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double wrap_phase(double phase) {
    double p = std::fmod(phase, two_pi);
    if (p < 0.0) p += two_pi;
    return p;
}

}  // namespace

PhaseMask PhaseMask::zero(int segments_per_side) {
    if (segments_per_side < 1) throw config_error("segments_per_side must be >= 1");
    return PhaseMask{segments_per_side,
                     std::vector<double>(static_cast<std::size_t>(segments_per_side) * segments_per_side, 0.0)};
}

void PhaseMask::add_offset(int segment_index, double offset) {
    phases[segment_index] = wrap_phase(phases[segment_index] + offset);
}

std::vector<double> render(const PhaseMask& mask, const Grid& grid) {
    const int n = grid.n();
    const int s = mask.segments_per_side;
    if (s < 1 || n % s != 0) {
        std::ostringstream msg;
        msg << "segments_per_side " << s << " must divide the grid size " << n;
        throw config_error(msg.str());
    }
    const int block = n / s;
    std::vector<double> phase(static_cast<std::size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy) {
        const int sy = iy / block;
        for (int ix = 0; ix < n; ++ix) {
            phase[static_cast<std::size_t>(iy) * n + ix] = mask.seg(sy, ix / block);
        }
    }
    return phase;
}

OptimizationRecord partition_optimize(const std::function<double(const PhaseMask&)>& feedback,
                                      int segments_per_side, int n_iterations, int n_phase_steps,
                                      std::uint64_t seed, double reference_intensity) {
    if (segments_per_side < 1) throw config_error("segments_per_side must be >= 1");
    if (n_phase_steps < 3) throw config_error("n_phase_steps must be >= 3");
    if (n_iterations < 0) throw config_error("n_iterations must be >= 0");

    const int n_segments = segments_per_side * segments_per_side;
    const int half = n_segments / 2;

    Rng rng(seed);
    PhaseMask mask = PhaseMask::zero(segments_per_side);

    auto evaluate = [&](const PhaseMask& m, int iteration, double offset) {
        const double f = feedback(m);
        if (!std::isfinite(f)) {
            std::ostringstream msg;
            msg << "non-finite feedback at iteration " << iteration << ", offset " << offset
                << " rad; mask segments_per_side=" << m.segments_per_side << ", first phases [";
            for (int i = 0; i < std::min<int>(4, n_segments); ++i) {
                msg << (i ? ", " : "") << m.phases[i];
            }
            msg << "]";
            throw numeric_error(msg.str());
        }
        return f;
    };

    OptimizationRecord record;
    record.seed = seed;
    record.segments_per_side = segments_per_side;
    record.n_iterations = n_iterations;
    record.n_phase_steps = n_phase_steps;

    int measurement = 0;
    double current = evaluate(mask, -1, 0.0);
    record.initial_feedback = current;
    record.trace.push_back({measurement++, current, false});

    std::vector<int> order(n_segments);
    for (int i = 0; i < n_segments; ++i) order[i] = i;

    for (int it = 0; it < n_iterations; ++it) {
        rng.shuffle(order);

        double best = current;
        double best_offset = 0.0;
        std::size_t best_sample = 0;

        for (int k = 0; k < n_phase_steps; ++k) {
            const double offset = two_pi * k / n_phase_steps;
            PhaseMask trial = mask;
            for (int j = 0; j < half; ++j) trial.add_offset(order[j], offset);
            const double f = evaluate(trial, it, offset);
            record.trace.push_back({measurement++, f, false});
            if (f > best) {
                best = f;
                best_offset = offset;
                best_sample = record.trace.size() - 1;
            }
        }

        // Apply the best sampled offset only on strict improvement; offset 0
        // reproduces the current mask, so stalls cannot oscillate.
        if (best > current) {
            for (int j = 0; j < half; ++j) mask.add_offset(order[j], best_offset);
            current = best;
            record.trace[best_sample].accepted = true;
        }
    }

    record.final_mask = mask;
    record.final_feedback = current;
    const double reference = reference_intensity > 0.0 ? reference_intensity : record.initial_feedback;
    if (!(reference > 0.0)) {
        throw config_error("enhancement undefined: reference intensity and initial feedback are both zero");
    }
    record.enhancement = current / reference;
    return record;
}

PumpTargetFeedback::PumpTargetFeedback(const ComplexField& pump_base, const DiffuserMap& d, double lambda_p,
                                       Vec2 target_q, int segments_per_side)
    : segments_per_side_(segments_per_side) {
    if (pump_base.domain != FieldDomain::CrystalPlane) {
        throw std::logic_error("PumpTargetFeedback: pump must be in the crystal plane");
    }
    const Grid& grid = pump_base.grid;
    const int n = grid.n();
    if (segments_per_side < 1 || n % segments_per_side != 0) {
        std::ostringstream msg;
        msg << "segments_per_side " << segments_per_side << " must divide the grid size " << n;
        throw config_error(msg.str());
    }

    const double qs = grid.q_step();
    target_steps_ = Steps2{static_cast<int>(std::lround(target_q.x / qs)),
                           static_cast<int>(std::lround(target_q.y / qs))};
    target_snapped_ = std::abs(target_q.x - target_steps_.x * qs) > 1e-9 * qs ||
                      std::abs(target_q.y - target_steps_.y * qs) > 1e-9 * qs;

    // Far-field amplitude at the target pixel:
    //   F = (1/n) * sum_j W(rho_j) e^{i phi_p(rho_j)} e^{-2 pi i (kx jx' + ky jy')/n}
    // The mask is constant per segment, so precompute per-segment sums of the
    // bracketed base term; an evaluation is then sum_s B_s e^{i theta_s}.
    const std::vector<double> screen = transfer_function(d, lambda_p);
    const int block = n / segments_per_side;
    segment_sums_.assign(static_cast<std::size_t>(segments_per_side) * segments_per_side, {0.0, 0.0});
    const double cx = two_pi * target_steps_.x / n;
    const double cy = two_pi * target_steps_.y / n;
    for (int iy = 0; iy < n; ++iy) {
        const int sy = iy / block;
        for (int ix = 0; ix < n; ++ix) {
            const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
            const double kernel_phase = screen[i] - cx * (ix - n / 2) - cy * (iy - n / 2);
            segment_sums_[static_cast<std::size_t>(sy) * segments_per_side + ix / block] +=
                pump_base.values[i] * std::polar(1.0 / n, kernel_phase);
        }
    }
}

double PumpTargetFeedback::operator()(const PhaseMask& mask) const {
    if (mask.segments_per_side != segments_per_side_) {
        throw std::logic_error("PumpTargetFeedback: mask segmentation mismatch");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t s = 0; s < segment_sums_.size(); ++s) {
        acc += segment_sums_[s] * std::polar(1.0, mask.phases[s]);
    }
    return std::norm(acc);
}

double feedback_pump_target(const ComplexField& pump_base, const PhaseMask& mask, const DiffuserMap& d,
                            double lambda_p, Vec2 target_q) {
    if (pump_base.domain != FieldDomain::CrystalPlane) {
        throw std::logic_error("feedback_pump_target: pump must be in the crystal plane");
    }
    const Grid& grid = pump_base.grid;
    const double qs = grid.q_step();
    const int kx = static_cast<int>(std::lround(target_q.x / qs));
    const int ky = static_cast<int>(std::lround(target_q.y / qs));

    const ComplexField shaped = apply_phase(pump_base, render(mask, grid));
    const ComplexField scattered = apply_phase(shaped, transfer_function(d, lambda_p));
    const ComplexField ff = far_field(scattered);
    return std::norm(ff.at(ky + grid.n() / 2, kx + grid.n() / 2));
}

}  // namespace pumpshape
