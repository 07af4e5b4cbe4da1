#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pumpshape/diffuser.hpp"
#include "pumpshape/grid.hpp"

namespace pumpshape {

// Segmented phase mask: segments_per_side^2 phases in [0, 2*pi), each segment
// rendered as a contiguous (n/S) x (n/S) pixel block.
struct PhaseMask {
    int segments_per_side = 1;
    std::vector<double> phases;  // row-major S x S, radians in [0, 2*pi)

    static PhaseMask zero(int segments_per_side);

    double& seg(int sy, int sx) { return phases[static_cast<std::size_t>(sy) * segments_per_side + sx]; }
    double seg(int sy, int sx) const { return phases[static_cast<std::size_t>(sy) * segments_per_side + sx]; }

    void add_offset(int segment_index, double offset);  // stores mod 2*pi
};

// Piecewise-constant upsampling of the segment phases to grid pixels.
// segments_per_side must divide grid.n().
std::vector<double> render(const PhaseMask& mask, const Grid& grid);

struct FeedbackSample {
    int measurement_index = 0;
    double feedback = 0.0;
    bool accepted = false;  // true when this sample's offset was applied
};

struct OptimizationRecord {
    std::vector<FeedbackSample> trace;  // baseline + every sweep evaluation
    PhaseMask final_mask;
    double initial_feedback = 0.0;
    double final_feedback = 0.0;
    double enhancement = 0.0;  // final feedback / reference intensity
    std::uint64_t seed = 0;
    int segments_per_side = 0;
    int n_iterations = 0;
    int n_phase_steps = 0;
};

// Partitioning feedback optimization: each iteration draws a uniformly random
// half of the segments, sweeps a common phase offset over n_phase_steps values
// spaced evenly in [0, 2*pi), and applies the best sampled offset to that half
// only if it strictly improves the feedback. The accepted-feedback trace is
// therefore non-decreasing, and the total number of feedback evaluations is
// n_iterations * n_phase_steps plus one baseline.
//
// reference_intensity normalizes the enhancement (typically the mean initial
// speckle intensity over the envelope); when <= 0 the initial feedback is used.
OptimizationRecord partition_optimize(const std::function<double(const PhaseMask&)>& feedback,
                                      int segments_per_side, int n_iterations, int n_phase_steps,
                                      std::uint64_t seed, double reference_intensity = 0.0);

// Raw scattered-pump intensity at target_q with the rendered mask applied to
// pump_base: the optimization feedback signal. Unnormalized so values are
// comparable across masks.
double feedback_pump_target(const ComplexField& pump_base, const PhaseMask& mask, const DiffuserMap& d,
                            double lambda_p, Vec2 target_q);

// Same signal, precomputed for speed: the target far-field amplitude is a
// linear functional of the field, so each segment's contribution collapses
// into one complex number and an evaluation costs O(S^2) instead of an FFT.
// Values agree with feedback_pump_target to FFT rounding.
class PumpTargetFeedback {
  public:
    PumpTargetFeedback(const ComplexField& pump_base, const DiffuserMap& d, double lambda_p, Vec2 target_q,
                       int segments_per_side);

    double operator()(const PhaseMask& mask) const;

    Steps2 target_steps() const { return target_steps_; }
    bool target_snapped() const { return target_snapped_; }

  private:
    std::vector<std::complex<double>> segment_sums_;
    int segments_per_side_;
    Steps2 target_steps_;
    bool target_snapped_ = false;
};

}  // namespace pumpshape
