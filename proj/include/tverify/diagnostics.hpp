#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tverify/integrator.hpp"

namespace tverify {

// Portion of a trajectory classified as chaotic wandering.
struct ChaoticSegment {
    double t_start = 0.0;
    double t_end = 0.0;
    double delta_t() const { return t_end - t_start; }
};

struct LyapunovEstimate {
    double lambda = 0.0;
    double stderr_ = 0.0;
    int n_renorms = 0;
    double renorm_interval = 0.0;
    double d0 = 0.0;
};

struct AttractorExtent {
    double range_x = 0.0, range_y = 0.0, range_z = 0.0;
    double diagonal = 0.0;
};

// t_start = 0 (the transient begins at release), t_end = settle time. With
// allow_unsettled an Undecided trajectory yields t_end = horizon; otherwise
// UnsettledError.
ChaoticSegment chaotic_segment(const Trajectory& traj, const FixedPoints& fps, double eps_settle,
                               double t_hold, bool allow_unsettled = false);

// Time of the last wing transition (last sign change of x over the recorded
// samples); 0 when the trajectory never switches wings. This is the end of
// chaotic wandering: afterwards the trajectory spirals into one fixed-point
// basin without crossing back. Meaningful for the two-wing Lorenz regime.
double wandering_end_time(const Trajectory& traj);

// Benettin step function: advances a state by one dt in P64.
using FlowStep = std::function<State3(const State3&)>;

struct BenettinOptions {
    double dt = 1e-3;
    double d0 = 1e-9;
    double renorm_interval = 0.5;
    double window_start = 0.0; // renormalizations with midpoint inside
    double window_end = 0.0;   // [window_start, window_end] are used
    std::uint64_t seed = 1;    // perturbation direction
};

// Two-trajectory Benettin estimate over an arbitrary flow; reference and
// perturbed states advance together, the separation is rescaled to d0 every
// renorm_interval, and lambda is the mean of ln(d_i/d0)/renorm_interval over
// the window. Throws CollapseError (d0 <= 0 or separation underflow).
LyapunovEstimate benettin_estimate(const FlowStep& step, const State3& ic, const BenettinOptions& opt);

// Largest Lyapunov exponent of the Lorenz flow along the chaotic segment of
// the trajectory started at `ic`. Always computed in P64: the diagnostic must
// not be corrupted by the precision under audit. Renormalizations with
// midpoint inside [t_start, 0.9*t_end] are used. Throws SegmentTooShortError
// when segment.delta_t < 20*renorm_interval.
LyapunovEstimate largest_lyapunov(const LorenzParams& p, const State3& ic, const ChaoticSegment& segment,
                                  double dt, double d0, double renorm_interval, RhsVariant variant,
                                  std::uint64_t seed = 1);

// Bounding-box ranges and their Euclidean norm over samples with
// t in [segment.t_start, segment.t_end]. Throws TooFewSamplesError when fewer
// than min_samples samples fall inside.
AttractorExtent attractor_extent(const Trajectory& traj, const ChaoticSegment& segment,
                                 std::size_t min_samples = 50);

// Largest absolute value encountered in the state and (P64) right-hand side
// over the segment's samples; the round-off scale of the run.
double magnitude_scale(const Trajectory& traj, const ChaoticSegment& segment);

struct IcBox {
    double x_min = -10.0, x_max = 10.0;
    double y_min = -10.0, y_max = 10.0;
    double z_min = 0.0, z_max = 30.0;
};

struct TransientSample {
    State3 ic;
    Classification cls;
    double wandering_end = 0.0;
};

// Seeded rejection sampling of ICs whose P64 run settles with a chaotic
// wandering phase of at least min_wander time units. Deterministic for a
// fixed seed. Throws SimError if the attempt budget is exhausted.
std::vector<TransientSample> sample_transient_ics(const LorenzParams& p, const IntegrationSpec& spec,
                                                  RhsVariant variant, int count, std::uint64_t seed,
                                                  double min_wander, const IcBox& box = {},
                                                  int max_attempts = 0);

struct EnsembleMember {
    TransientSample sample;
    LyapunovEstimate estimate;
};

struct LyapunovEnsemble {
    LyapunovEstimate aggregate; // lambda = member mean, stderr = sd/sqrt(m),
                                // n_renorms = min over members
    std::vector<EnsembleMember> members;
};

// Ensemble estimate over `size` long-wandering ICs: single-transient
// estimates on a chaotic saddle are noisy, so the pipeline averages several.
// Members require wandering >= min_wander (default 56 renorm intervals).
LyapunovEnsemble lyapunov_ensemble(const LorenzParams& p, const IntegrationSpec& spec, RhsVariant variant,
                                   double d0, double renorm_interval, int size, std::uint64_t seed,
                                   double min_wander = 0.0, const IcBox& box = {});

} // namespace tverify
