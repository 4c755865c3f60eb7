#pragma once

#include <string_view>

#include "tverify/diagnostics.hpp"

namespace tverify {

enum class DominantError { Roundoff, Truncation };
enum class Verdict { Pass, Fail };

std::string_view dominant_name(DominantError d);
std::string_view verdict_name(Verdict v);

struct ErrorBudget {
    double delta0_roundoff = 0.0;
    double delta0_truncation = 0.0;
    double delta0 = 0.0;                             // max of the two
    DominantError dominant = DominantError::Roundoff; // ties resolve to Roundoff
    double lambda = 0.0;
    double delta_t = 0.0;
    double delta_final = 0.0;                        // delta0 * exp(lambda*delta_t)
    bool delta_overflowed = false;                   // delta_final clamped to +inf
    double attractor_diagonal = 0.0;
    double margin_eta = 0.0;
    Verdict verdict = Verdict::Fail;                 // Pass iff delta_final <= eta*diagonal
};

// Per-operation round-off at the run's magnitude: unit_roundoff(mode)*scale.
double roundoff_delta0(Precision mode, double magnitude_scale);

// Local truncation error of one step: dt^local_order (5 for RK4).
double truncation_delta0(double dt, int local_order = 5);

// Amplified deviation delta0 * exp(lambda*delta_t), in P64. Overflow yields
// +infinity (a huge delta is a meaningful Fail), never an error.
double final_error(double delta0, double lambda, double delta_t);

// Optional stricter round-off accumulation over the N = delta_t/dt steps of
// the chaotic phase. The baseline follows the per-operation estimate.
enum class Accumulation { None, SqrtSteps, Steps };

ErrorBudget assemble_budget(Precision mode, double dt, double magnitude_scale,
                            const LyapunovEstimate& lyap, const ChaoticSegment& segment,
                            const AttractorExtent& extent, double margin_eta,
                            Accumulation accumulation = Accumulation::None);

} // namespace tverify
