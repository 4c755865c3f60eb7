#include "tverify/integrator.hpp"

#include <cmath>

namespace tverify {

void validate_spec(const IntegrationSpec& spec) {
    if (!(spec.dt > 0.0)) throw DomainError("dt must be > 0");
    if (!(spec.t_max >= spec.dt)) throw DomainError("t_max must be >= dt");
    if (spec.record_stride < 1) throw DomainError("record_stride must be >= 1");
    if (spec.t_max / spec.dt > 1e9) throw DomainError("t_max/dt exceeds the 1e9 step guard");
    if (!(spec.eps_settle > 0.0)) throw DomainError("eps_settle must be > 0");
    if (!(spec.t_hold > 0.0)) throw DomainError("t_hold must be > 0");
}

State3 rk4_step(const LorenzParams& p, const State3& s, double dt, RhsVariant variant, Precision mode) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    const auto run = [&](auto tag) -> State3 {
        constexpr Precision P = decltype(tag)::value;
        const MParams mp = params_in_mode<P>(p);
        const auto c = Rk4Constants<P>::make(dt);
        const MState ms{m_from_double(P, s.x), m_from_double(P, s.y), m_from_double(P, s.z)};
        const auto rhs = [&](const MState& q) { return lorenz_rhs_t<P>(mp, q, variant); };
        return to_state(rk4_step_kernel<P>(rhs, ms, c));
    };
    try {
        switch (mode) {
            case Precision::P32: return run(std::integral_constant<Precision, Precision::P32>{});
            case Precision::P64: return run(std::integral_constant<Precision, Precision::P64>{});
            case Precision::PDD: return run(std::integral_constant<Precision, Precision::PDD>{});
        }
    } catch (const OverflowError& e) {
        throw DivergenceError(std::string("rk4_step diverged: ") + e.what(), 0, Trajectory{});
    } catch (const NanError& e) {
        throw DivergenceError(std::string("rk4_step produced NaN: ") + e.what(), 0, Trajectory{});
    }
    throw DomainError("unknown precision mode");
}

namespace {

template <Precision P>
Trajectory integrate_impl(const LorenzParams& p, const State3& ic, const IntegrationSpec& spec,
                          RhsVariant variant, Precision mode, const FixedPoints& fps) {
    const MParams mp = params_in_mode<P>(p);
    const auto c = Rk4Constants<P>::make(spec.dt);
    const auto rhs = [&](const MState& q) { return lorenz_rhs_t<P>(mp, q, variant); };

    const std::int64_t n_steps = static_cast<std::int64_t>(std::floor(spec.t_max / spec.dt + 1e-9));

    Trajectory traj;
    traj.mode = mode;
    traj.variant = variant;
    traj.params = p;
    traj.spec = spec;
    traj.times.reserve(static_cast<std::size_t>(n_steps / spec.record_stride) + 2);
    traj.states.reserve(traj.times.capacity());

    MState s{m_from_double(P, ic.x), m_from_double(P, ic.y), m_from_double(P, ic.z)};
    traj.times.push_back(0.0);
    traj.states.push_back(to_state(s));

    // Settling tracker: time of entry into the current fixed-point ball, or
    // negative when outside both.
    double ball_entry = -1.0;
    int ball_tag = -1;
    // One extra recording interval after entry+t_hold so classification on the
    // recorded (strided) samples still sees a full hold window.
    const double settle_margin = 2.0 * spec.dt * static_cast<double>(spec.record_stride);

    std::int64_t k = 0;
    try {
        for (k = 0; k < n_steps; ++k) {
            s = rk4_step_kernel<P>(rhs, s, c);
            const double t = static_cast<double>(k + 1) * spec.dt;
            const bool last = (k + 1 == n_steps);
            bool record = last || ((k + 1) % spec.record_stride == 0);
            bool stop = false;

            if (spec.stop_on_settle) {
                const State3 d = to_state(s);
                int tag = -1;
                if (distance(d, fps.c_plus) < spec.eps_settle) tag = 0;
                else if (distance(d, fps.c_minus) < spec.eps_settle) tag = 1;
                if (tag < 0 || tag != ball_tag) {
                    ball_tag = tag;
                    ball_entry = tag < 0 ? -1.0 : t;
                } else if (t - ball_entry >= spec.t_hold + settle_margin) {
                    stop = true;
                    record = true;
                }
            }
            if (record) {
                traj.times.push_back(t);
                traj.states.push_back(to_state(s));
            }
            if (stop) break;
        }
    } catch (const OverflowError& e) {
        throw DivergenceError(std::string("trajectory diverged: ") + e.what(), k, std::move(traj));
    } catch (const NanError& e) {
        throw DivergenceError(std::string("trajectory produced NaN: ") + e.what(), k, std::move(traj));
    }
    return traj;
}

} // namespace

Trajectory integrate(const LorenzParams& p, const State3& ic, const IntegrationSpec& spec,
                     RhsVariant variant, Precision mode, const FixedPoints& fps) {
    validate_params(p);
    validate_spec(spec);
    switch (mode) {
        case Precision::P32: return integrate_impl<Precision::P32>(p, ic, spec, variant, mode, fps);
        case Precision::P64: return integrate_impl<Precision::P64>(p, ic, spec, variant, mode, fps);
        case Precision::PDD: return integrate_impl<Precision::PDD>(p, ic, spec, variant, mode, fps);
    }
    throw DomainError("unknown precision mode");
}

} // namespace tverify
