#include "tverify/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tverify {

ChaoticSegment chaotic_segment(const Trajectory& traj, const FixedPoints& fps, double eps_settle,
                               double t_hold, bool allow_unsettled) {
    const Classification cls = classify_destiny(traj, fps, eps_settle, t_hold);
    if (cls.destiny == Destiny::Undecided) {
        if (!allow_unsettled)
            throw UnsettledError("chaotic_segment: trajectory did not settle within the horizon");
        return {0.0, traj.duration()};
    }
    return {0.0, cls.settle_time};
}

double wandering_end_time(const Trajectory& traj) {
    if (traj.states.empty()) throw EmptyTrajectoryError("wandering_end_time: empty trajectory");
    double t_end = 0.0;
    int prev = 0;
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const double x = traj.states[i].x;
        const int sgn = (x > 0.0) - (x < 0.0);
        if (sgn == 0) continue; // exactly zero: keep previous wing
        if (prev != 0 && sgn != prev) t_end = traj.times[i];
        prev = sgn;
    }
    return t_end;
}

LyapunovEstimate benettin_estimate(const FlowStep& step, const State3& ic, const BenettinOptions& opt) {
    if (!(opt.d0 > 0.0)) throw CollapseError("benettin: d0 must be > 0");
    if (!(opt.dt > 0.0)) throw DomainError("benettin: dt must be > 0");
    if (!(opt.renorm_interval >= opt.dt)) throw DomainError("benettin: renorm_interval must be >= dt");

    // Random unit direction from the seed (splitmix-style mixing, Box-Muller),
    // independent of any library distribution so runs are reproducible
    // across platforms.
    std::uint64_t s = opt.seed;
    auto next_u01 = [&s]() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return (static_cast<double>(z >> 11) + 0.5) * 0x1p-53;
    };
    double ux, uy, uz, norm2;
    do {
        const double u1 = next_u01(), u2 = next_u01(), u3 = next_u01(), u4 = next_u01();
        const double r1 = std::sqrt(-2.0 * std::log(u1));
        const double r2 = std::sqrt(-2.0 * std::log(u3));
        ux = r1 * std::cos(2.0 * std::numbers::pi * u2);
        uy = r1 * std::sin(2.0 * std::numbers::pi * u2);
        uz = r2 * std::cos(2.0 * std::numbers::pi * u4);
        norm2 = ux * ux + uy * uy + uz * uz;
    } while (!(norm2 > 0.0) || !std::isfinite(norm2));
    const double inv = 1.0 / std::sqrt(norm2);
    ux *= inv;
    uy *= inv;
    uz *= inv;

    State3 ref = ic;
    State3 per{ic.x + opt.d0 * ux, ic.y + opt.d0 * uy, ic.z + opt.d0 * uz};

    const std::int64_t k_ren = std::llround(opt.renorm_interval / opt.dt);
    if (k_ren < 1) throw DomainError("benettin: renorm_interval shorter than dt");
    const std::int64_t n_steps =
        static_cast<std::int64_t>(std::ceil((opt.window_end + opt.renorm_interval) / opt.dt));

    std::vector<double> rates;
    for (std::int64_t k = 0; k < n_steps; ++k) {
        ref = step(ref);
        per = step(per);
        if ((k + 1) % k_ren != 0) continue;
        const double t = static_cast<double>(k + 1) * opt.dt;
        const double d = distance(ref, per);
        if (!(d > 0.0)) throw CollapseError("benettin: separation collapsed to zero");
        const double midpoint = t - opt.renorm_interval / 2.0;
        if (midpoint >= opt.window_start && midpoint <= opt.window_end)
            rates.push_back(std::log(d / opt.d0) / opt.renorm_interval);
        // Rescale back to d0 along the current separation direction.
        const double f = opt.d0 / d;
        per = {ref.x + (per.x - ref.x) * f, ref.y + (per.y - ref.y) * f, ref.z + (per.z - ref.z) * f};
        if (midpoint > opt.window_end) break;
    }

    LyapunovEstimate est;
    est.renorm_interval = opt.renorm_interval;
    est.d0 = opt.d0;
    est.n_renorms = static_cast<int>(rates.size());
    if (rates.empty()) throw SegmentTooShortError("benettin: no renormalizations inside the window");
    double sum = 0.0;
    for (double r : rates) sum += r;
    est.lambda = sum / static_cast<double>(rates.size());
    if (rates.size() > 1) {
        double ss = 0.0;
        for (double r : rates) ss += (r - est.lambda) * (r - est.lambda);
        est.stderr_ = std::sqrt(ss / static_cast<double>(rates.size() - 1)) /
                      std::sqrt(static_cast<double>(rates.size()));
    }
    return est;
}

LyapunovEstimate largest_lyapunov(const LorenzParams& p, const State3& ic, const ChaoticSegment& segment,
                                  double dt, double d0, double renorm_interval, RhsVariant variant,
                                  std::uint64_t seed) {
    if (!(d0 > 0.0)) throw CollapseError("largest_lyapunov: d0 must be > 0");
    if (segment.delta_t() < 20.0 * renorm_interval)
        throw SegmentTooShortError("largest_lyapunov: segment shorter than 20 renormalization intervals");

    const MParams mp = params_in_mode<Precision::P64>(p);
    const auto c = Rk4Constants<Precision::P64>::make(dt);
    const auto step = [&](const State3& q) {
        const MState ms{{q.x, 0}, {q.y, 0}, {q.z, 0}};
        const auto rhs = [&](const MState& v) { return lorenz_rhs_t<Precision::P64>(mp, v, variant); };
        return to_state(rk4_step_kernel<Precision::P64>(rhs, ms, c));
    };

    BenettinOptions opt;
    opt.dt = dt;
    opt.d0 = d0;
    opt.renorm_interval = renorm_interval;
    opt.window_start = segment.t_start;
    opt.window_end = 0.9 * segment.t_end; // keep clear of the settling approach
    opt.seed = seed;
    return benettin_estimate(step, ic, opt);
}

AttractorExtent attractor_extent(const Trajectory& traj, const ChaoticSegment& segment,
                                 std::size_t min_samples) {
    double lo[3], hi[3];
    std::size_t count = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < segment.t_start || t > segment.t_end) continue;
        const State3& st = traj.states[i];
        const double v[3] = {st.x, st.y, st.z};
        if (count == 0) {
            for (int k = 0; k < 3; ++k) lo[k] = hi[k] = v[k];
        } else {
            for (int k = 0; k < 3; ++k) {
                lo[k] = std::min(lo[k], v[k]);
                hi[k] = std::max(hi[k], v[k]);
            }
        }
        ++count;
    }
    if (count < min_samples)
        throw TooFewSamplesError("attractor_extent: fewer than the required samples in the segment");
    AttractorExtent e;
    e.range_x = hi[0] - lo[0];
    e.range_y = hi[1] - lo[1];
    e.range_z = hi[2] - lo[2];
    e.diagonal = std::sqrt(e.range_x * e.range_x + e.range_y * e.range_y + e.range_z * e.range_z);
    return e;
}

double magnitude_scale(const Trajectory& traj, const ChaoticSegment& segment) {
    double m = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        if (t < segment.t_start || t > segment.t_end) continue;
        const State3& st = traj.states[i];
        const State3 rhs = lorenz_rhs(traj.params, st, traj.variant, Precision::P64);
        for (double v : {st.x, st.y, st.z, rhs.x, rhs.y, rhs.z}) m = std::max(m, std::abs(v));
        any = true;
    }
    if (!any) throw TooFewSamplesError("magnitude_scale: no samples in the segment");
    return m;
}

std::vector<TransientSample> sample_transient_ics(const LorenzParams& p, const IntegrationSpec& spec,
                                                  RhsVariant variant, int count, std::uint64_t seed,
                                                  double min_wander, const IcBox& box, int max_attempts) {
    if (count <= 0) throw DomainError("sample_transient_ics: count must be > 0");
    if (max_attempts <= 0) max_attempts = 1000 * count;
    const FixedPoints fps = fixed_points(p);

    std::uint64_t s = seed ^ 0xd1b54a32d192ed03ULL;
    auto next_u01 = [&s]() {
        s += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1p-53;
    };

    IntegrationSpec run_spec = spec;
    run_spec.stop_on_settle = true;

    std::vector<TransientSample> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int attempt = 0; attempt < max_attempts && out.size() < static_cast<std::size_t>(count);
         ++attempt) {
        State3 ic{box.x_min + (box.x_max - box.x_min) * next_u01(),
                  box.y_min + (box.y_max - box.y_min) * next_u01(),
                  box.z_min + (box.z_max - box.z_min) * next_u01()};
        Trajectory traj;
        try {
            traj = integrate(p, ic, run_spec, variant, Precision::P64, fps);
        } catch (const DivergenceError&) {
            continue;
        }
        const Classification cls = classify_destiny(traj, fps, run_spec.eps_settle, run_spec.t_hold);
        if (cls.destiny == Destiny::Undecided) continue;
        const double wander = wandering_end_time(traj);
        if (wander < min_wander) continue;
        out.push_back({ic, cls, wander});
    }
    if (out.size() < static_cast<std::size_t>(count))
        throw SimError("sample_transient_ics: attempt budget exhausted before finding enough transients");
    return out;
}

LyapunovEnsemble lyapunov_ensemble(const LorenzParams& p, const IntegrationSpec& spec, RhsVariant variant,
                                   double d0, double renorm_interval, int size, std::uint64_t seed,
                                   double min_wander, const IcBox& box) {
    if (size < 1) throw DomainError("lyapunov_ensemble: size must be >= 1");
    if (min_wander <= 0.0) min_wander = 56.0 * renorm_interval;

    const auto samples = sample_transient_ics(p, spec, variant, size, seed, min_wander, box);

    LyapunovEnsemble ens;
    ens.members.reserve(samples.size());
    double sum = 0.0;
    int min_renorms = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const ChaoticSegment seg{0.0, samples[i].cls.settle_time};
        const LyapunovEstimate est = largest_lyapunov(p, samples[i].ic, seg, spec.dt, d0, renorm_interval,
                                                      variant, seed ^ (0x5851f42d4c957f2dULL * (i + 1)));
        ens.members.push_back({samples[i], est});
        sum += est.lambda;
        min_renorms = (i == 0) ? est.n_renorms : std::min(min_renorms, est.n_renorms);
    }
    const double m = static_cast<double>(ens.members.size());
    ens.aggregate.lambda = sum / m;
    ens.aggregate.renorm_interval = renorm_interval;
    ens.aggregate.d0 = d0;
    ens.aggregate.n_renorms = min_renorms;
    if (ens.members.size() > 1) {
        double ss = 0.0;
        for (const auto& mem : ens.members)
            ss += (mem.estimate.lambda - ens.aggregate.lambda) * (mem.estimate.lambda - ens.aggregate.lambda);
        ens.aggregate.stderr_ = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
    }
    return ens;
}

} // namespace tverify
