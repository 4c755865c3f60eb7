#include "tverify/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

namespace tverify {

void validate_config(const PipelineConfig& cfg) {
    validate_params(cfg.params);
    IntegrationSpec spec{cfg.dt, cfg.t_max, cfg.record_stride, false, cfg.eps_settle, cfg.t_hold};
    validate_spec(spec);
    if (!(cfg.margin_eta > 0.0)) throw DomainError("margin_eta must be > 0");
    if (cfg.ladder.empty()) throw DomainError("ladder must not be empty");
    for (std::size_t i = 1; i < cfg.ladder.size(); ++i) {
        if (!(unit_roundoff(cfg.ladder[i]) < unit_roundoff(cfg.ladder[i - 1])))
            throw DomainError("ladder must be strictly increasing in precision");
    }
    if (cfg.variants.size() < 2) throw DomainError("at least two variants are required for the agreement check");
    if (cfg.lyapunov.ensemble_size < 1) throw DomainError("lyapunov ensemble_size must be >= 1");
    if (!(cfg.lyapunov.d0 > 0.0)) throw DomainError("lyapunov d0 must be > 0");
    if (!(cfg.lyapunov.renorm_interval >= cfg.dt)) throw DomainError("lyapunov renorm_interval must be >= dt");
}

std::string_view conclusion_name(Conclusion c) {
    switch (c) {
        case Conclusion::Validated: return "Validated";
        case Conclusion::NecessaryConditionFailed: return "NecessaryConditionFailed";
        case Conclusion::LadderExhausted: return "LadderExhausted";
    }
    return "?";
}

bool variant_agreement(std::span<const Destiny> destinies) {
    if (destinies.size() < 2) throw DomainError("variant_agreement needs at least two destinies");
    for (Destiny d : destinies) {
        if (d == Destiny::Undecided) return false;
        if (d != destinies.front()) return false;
    }
    return true;
}

namespace {

IntegrationSpec make_spec(const PipelineConfig& cfg, bool stop_on_settle) {
    return {cfg.dt, cfg.t_max, cfg.record_stride, stop_on_settle, cfg.eps_settle, cfg.t_hold};
}

struct ReferenceDiagnostics {
    ChaoticSegment segment;
    AttractorExtent extent;
    double scale = 0.0;
    bool unsettled = false;
    bool extent_floored = false;
};

// All trajectory-derived inputs of the budget come from one trusted P64 run
// of the audited initial condition. When the chaotic segment is degenerate
// (instant settling), the attractor extent falls back to the fixed-point
// separation, the coarsest system-scale bound available without a wandering
// trajectory.
ReferenceDiagnostics reference_diagnostics(const PipelineConfig& cfg, const FixedPoints& fps) {
    ReferenceDiagnostics out;
    const Trajectory ref =
        integrate(cfg.params, cfg.ic, make_spec(cfg, true), cfg.variants.front(), Precision::P64, fps);
    const Classification cls = classify_destiny(ref, fps, cfg.eps_settle, cfg.t_hold);
    out.unsettled = cls.destiny == Destiny::Undecided;
    out.segment = chaotic_segment(ref, fps, cfg.eps_settle, cfg.t_hold, /*allow_unsettled=*/true);
    try {
        out.extent = attractor_extent(ref, out.segment);
    } catch (const TooFewSamplesError&) {
        const double sep = distance(fps.c_plus, fps.c_minus);
        out.extent = {sep, 0.0, 0.0, sep};
        out.extent_floored = true;
    }
    out.scale = magnitude_scale(ref, out.segment);
    return out;
}

int worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("TRANSIENT_VERIFY_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned long>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(std::min<std::size_t>(hw, jobs));
}

} // namespace

ValidityReport run_validity_test(const PipelineConfig& cfg) {
    validate_config(cfg);
    const FixedPoints fps = fixed_points(cfg.params);

    ValidityReport report;
    std::ostringstream notes;
    if (!in_transient_window(cfg.params))
        notes << "r=" << cfg.params.r << " lies outside the transient-chaos window (13.926, 24.06). ";

    const ReferenceDiagnostics diag = reference_diagnostics(cfg, fps);
    if (diag.unsettled)
        notes << "Reference run did not settle within the horizon; chaotic duration uses the full horizon. ";
    if (diag.extent_floored)
        notes << "Chaotic segment too short to measure the attractor; extent falls back to the fixed-point separation. ";

    // Lambda is measured once, from a P64 ensemble of long-wandering
    // transients, and reused on every rung. Skipped when the reference shows
    // no chaotic phase (delta_t = 0 makes the amplification factor 1).
    LyapunovEstimate lambda_est;
    lambda_est.renorm_interval = cfg.lyapunov.renorm_interval;
    lambda_est.d0 = cfg.lyapunov.d0;
    if (diag.segment.delta_t() > 0.0) {
        try {
            const LyapunovEnsemble ens =
                lyapunov_ensemble(cfg.params, make_spec(cfg, true), cfg.variants.front(), cfg.lyapunov.d0,
                                  cfg.lyapunov.renorm_interval, cfg.lyapunov.ensemble_size,
                                  cfg.lyapunov.seed, cfg.lyapunov.min_wander, cfg.box);
            lambda_est = ens.aggregate;
        } catch (const SimError& e) {
            notes << "Lyapunov ensemble unavailable (" << e.what()
                  << "); amplification not estimated, lambda = 0. ";
        }
    }

    for (Precision mode : cfg.ladder) {
        RungReport rung;
        rung.mode = mode;
        std::vector<Destiny> destinies;
        for (RhsVariant variant : cfg.variants) {
            VariantOutcome outcome;
            outcome.variant = variant;
            try {
                const Trajectory traj = integrate(cfg.params, cfg.ic, make_spec(cfg, true), variant, mode, fps);
                const Classification cls = classify_destiny(traj, fps, cfg.eps_settle, cfg.t_hold);
                outcome.destiny = cls.destiny;
                outcome.settle_time = cls.settle_time;
            } catch (const DivergenceError& e) {
                notes << precision_name(mode) << "/" << variant_name(variant)
                      << " diverged at step " << e.step_index() << "; counted as Undecided. ";
                outcome.destiny = Destiny::Undecided;
                outcome.settle_time = std::numeric_limits<double>::infinity();
            }
            destinies.push_back(outcome.destiny);
            rung.variants.push_back(outcome);
        }
        rung.budget = assemble_budget(mode, cfg.dt, diag.scale, lambda_est, diag.segment, diag.extent,
                                      cfg.margin_eta, cfg.accumulation);
        rung.variants_agree = variant_agreement(destinies);
        report.per_rung.push_back(rung);

        if (rung.budget.verdict == Verdict::Pass) {
            if (rung.variants_agree) {
                report.conclusion = Conclusion::Validated;
                report.final_rung = mode;
                notes << "Validated at " << precision_name(mode)
                      << ". Cross-variant agreement is a consistency check only; it cannot by itself "
                         "certify the computed destiny. ";
                break;
            }
            report.conclusion = Conclusion::NecessaryConditionFailed;
            notes << "Budget passed at " << precision_name(mode)
                  << " but the variants did not agree on a settled destiny. ";
            break;
        }
        report.conclusion = Conclusion::LadderExhausted;
    }
    if (report.conclusion == Conclusion::LadderExhausted)
        notes << "No rung passed the validity test with agreeing variants. ";
    report.notes = notes.str();
    return report;
}

SweepResult disagreement_sweep(const PipelineConfig& cfg, std::span<const State3> ics, Precision mode) {
    if (ics.empty()) throw DomainError("disagreement_sweep: empty IC set");
    const FixedPoints fps = fixed_points(cfg.params);
    const IntegrationSpec spec = make_spec(cfg, true);

    SweepResult result;
    result.n_total = static_cast<int>(ics.size());
    result.rows.resize(ics.size() * cfg.variants.size());
    std::vector<char> disagree(ics.size(), 0);

    const int workers = worker_count(ics.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < ics.size(); i = next.fetch_add(1)) {
            std::vector<Destiny> destinies;
            for (std::size_t v = 0; v < cfg.variants.size(); ++v) {
                SweepRow row;
                row.ic = ics[i];
                row.variant = cfg.variants[v];
                try {
                    const Trajectory traj = integrate(cfg.params, ics[i], spec, cfg.variants[v], mode, fps);
                    const Classification cls = classify_destiny(traj, fps, spec.eps_settle, spec.t_hold);
                    row.destiny = cls.destiny;
                    row.settle_time = cls.settle_time;
                } catch (const DivergenceError&) {
                    row.destiny = Destiny::Undecided;
                    row.settle_time = std::numeric_limits<double>::infinity();
                }
                destinies.push_back(row.destiny);
                result.rows[i * cfg.variants.size() + v] = row;
            }
            disagree[i] = variant_agreement(destinies) ? 0 : 1;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (char d : disagree) result.n_disagree += d;
    result.fraction = static_cast<double>(result.n_disagree) / static_cast<double>(result.n_total);
    return result;
}

} // namespace tverify
