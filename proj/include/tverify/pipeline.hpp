#pragma once

#include <optional>
#include <span>
#include <string>

#include "tverify/error_budget.hpp"

namespace tverify {

struct LyapunovSettings {
    double d0 = 1e-9;
    double renorm_interval = 0.5;
    int ensemble_size = 10;
    std::uint64_t seed = 1234;
    // Members must wander chaotically at least this long; 0 means the default
    // of 56 renormalization intervals.
    double min_wander = 0.0;
};

struct PipelineConfig {
    LorenzParams params;
    State3 ic{2.0, 1.0, 5.42857};
    double dt = 1e-3;
    double t_max = 60.0;
    double eps_settle = 1.0;
    double t_hold = 5.0;
    double margin_eta = 0.01;
    std::vector<Precision> ladder{Precision::P32, Precision::P64, Precision::PDD};
    std::vector<RhsVariant> variants{RhsVariant::YA, RhsVariant::YB};
    LyapunovSettings lyapunov;
    std::int64_t record_stride = 100;
    Accumulation accumulation = Accumulation::None;
    IcBox box;
};

// Throws DomainError unless the ladder is strictly increasing in precision
// and at least two variants are listed.
void validate_config(const PipelineConfig& cfg);

struct VariantOutcome {
    RhsVariant variant;
    Destiny destiny = Destiny::Undecided;
    double settle_time = 0.0;
};

struct RungReport {
    Precision mode;
    std::vector<VariantOutcome> variants;
    ErrorBudget budget;
    bool variants_agree = false;
};

enum class Conclusion { Validated, NecessaryConditionFailed, LadderExhausted };

std::string_view conclusion_name(Conclusion c);

struct ValidityReport {
    std::vector<RungReport> per_rung;
    std::optional<Precision> final_rung;
    Conclusion conclusion = Conclusion::LadderExhausted;
    std::string notes;
};

// True iff all destinies are equal and none is Undecided. Requires >= 2
// entries.
bool variant_agreement(std::span<const Destiny> destinies);

// Runs the escalation loop: for each precision rung integrate every variant
// and classify destinies; assemble the rung's error budget from the cached
// reference diagnostics; stop with Validated at the first rung whose verdict
// is Pass with agreeing settled destinies. A Pass rung with disagreeing
// variants ends the run as NecessaryConditionFailed; exhausting the ladder
// yields LadderExhausted.
//
// Diagnostics (chaotic duration, attractor extent, magnitude scale) are
// measured once from a P64 reference run of the same initial condition and
// reused for every rung, and lambda comes from a P64 ensemble, so no rung's
// own precision can corrupt the quantities used to judge it.
ValidityReport run_validity_test(const PipelineConfig& cfg);

struct SweepRow {
    State3 ic;
    RhsVariant variant;
    Destiny destiny = Destiny::Undecided;
    double settle_time = 0.0;
};

struct SweepResult {
    int n_total = 0;
    int n_disagree = 0;
    double fraction = 0.0;
    std::vector<SweepRow> rows;
};

// Runs every configured variant per IC at the given mode and counts ICs whose
// destinies differ or fail to settle. Per-IC integration errors count as
// Undecided and never abort the sweep. Parallel over ICs; the env var
// TRANSIENT_VERIFY_THREADS caps the worker count.
SweepResult disagreement_sweep(const PipelineConfig& cfg, std::span<const State3> ics, Precision mode);

} // namespace tverify
