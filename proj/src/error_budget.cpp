#include "tverify/error_budget.hpp"

#include <cmath>

namespace tverify {

std::string_view dominant_name(DominantError d) {
    return d == DominantError::Roundoff ? "Roundoff" : "Truncation";
}

std::string_view verdict_name(Verdict v) { return v == Verdict::Pass ? "Pass" : "Fail"; }

double roundoff_delta0(Precision mode, double magnitude_scale) {
    if (!(magnitude_scale > 0.0)) throw DomainError("roundoff_delta0: magnitude_scale must be > 0");
    return unit_roundoff(mode) * magnitude_scale;
}

double truncation_delta0(double dt, int local_order) {
    if (!(dt > 0.0)) throw DomainError("truncation_delta0: dt must be > 0");
    if (local_order < 1) throw DomainError("truncation_delta0: local_order must be >= 1");
    return std::pow(dt, static_cast<double>(local_order));
}

double final_error(double delta0, double lambda, double delta_t) {
    if (!(delta0 > 0.0)) throw DomainError("final_error: delta0 must be > 0");
    if (delta_t < 0.0) throw DomainError("final_error: delta_t must be >= 0");
    return delta0 * std::exp(lambda * delta_t);
}

ErrorBudget assemble_budget(Precision mode, double dt, double magnitude_scale,
                            const LyapunovEstimate& lyap, const ChaoticSegment& segment,
                            const AttractorExtent& extent, double margin_eta,
                            Accumulation accumulation) {
    if (!(margin_eta > 0.0)) throw DomainError("assemble_budget: margin_eta must be > 0");

    ErrorBudget budget;
    budget.delta0_roundoff = roundoff_delta0(mode, magnitude_scale);
    if (accumulation != Accumulation::None && segment.delta_t() > 0.0) {
        const double n_steps = segment.delta_t() / dt;
        budget.delta0_roundoff *=
            accumulation == Accumulation::SqrtSteps ? std::sqrt(n_steps) : n_steps;
    }
    budget.delta0_truncation = truncation_delta0(dt);
    if (budget.delta0_roundoff >= budget.delta0_truncation) {
        budget.delta0 = budget.delta0_roundoff;
        budget.dominant = DominantError::Roundoff;
    } else {
        budget.delta0 = budget.delta0_truncation;
        budget.dominant = DominantError::Truncation;
    }
    budget.lambda = lyap.lambda;
    budget.delta_t = segment.delta_t();
    budget.delta_final = final_error(budget.delta0, budget.lambda, budget.delta_t);
    budget.delta_overflowed = std::isinf(budget.delta_final);
    budget.attractor_diagonal = extent.diagonal;
    budget.margin_eta = margin_eta;
    budget.verdict =
        budget.delta_final <= margin_eta * extent.diagonal ? Verdict::Pass : Verdict::Fail;
    return budget;
}

} // namespace tverify
