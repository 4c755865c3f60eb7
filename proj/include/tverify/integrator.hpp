#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tverify/lorenz.hpp"

namespace tverify {

struct IntegrationSpec {
    double dt = 1e-3;
    double t_max = 60.0;
    std::int64_t record_stride = 100; // store every k-th step
    bool stop_on_settle = false;
    // Settling ball used by stop_on_settle (and by downstream classification).
    double eps_settle = 1.0;
    double t_hold = 5.0;
};

// Throws DomainError unless dt > 0, t_max >= dt, stride >= 1, t_max/dt <= 1e9.
void validate_spec(const IntegrationSpec& spec);

struct Trajectory {
    std::vector<double> times;
    std::vector<State3> states;
    Precision mode = Precision::P64;
    RhsVariant variant = RhsVariant::YA;
    LorenzParams params;
    IntegrationSpec spec;

    double duration() const { return times.empty() ? 0.0 : times.back(); }
    const State3& last_state() const { return states.back(); }
};

// Raised when mode arithmetic overflows mid-run; carries the step index and
// whatever was recorded up to that point for post-mortem.
class DivergenceError : public SimError {
public:
    DivergenceError(const std::string& msg, std::int64_t step_index, Trajectory partial)
        : SimError(msg), step_index_(step_index), partial_(std::move(partial)) {}
    std::int64_t step_index() const { return step_index_; }
    const Trajectory& partial() const { return partial_; }

private:
    std::int64_t step_index_;
    Trajectory partial_;
};

// Step constants are rounded into the mode once and reused across steps,
// which pins their bit patterns for the whole run.
template <Precision P>
struct Rk4Constants {
    MValue dt, half_dt, sixth_dt, two;

    static Rk4Constants make(double dt_value) {
        using O = ModeOps<P>;
        Rk4Constants c;
        c.dt = O::from(dt_value);
        c.two = O::from(2.0);
        c.half_dt = O::div(c.dt, c.two);
        c.sixth_dt = O::div(c.dt, O::from(6.0));
        return c;
    }
};

// Classic RK4 with a pinned association order:
//   k1 = f(s); k2 = f(s + (dt/2)*k1); k3 = f(s + (dt/2)*k2); k4 = f(s + dt*k3)
//   s' = s + (dt/6) * (((k1 + 2*k2) + 2*k3) + k4)
// Every scalar operation, including the weighted sum in exactly that order,
// executes in mode P. `Rhs` maps MState -> MState.
template <Precision P, typename Rhs>
MState rk4_step_kernel(const Rhs& rhs, const MState& s, const Rk4Constants<P>& c) {
    using O = ModeOps<P>;
    const auto axpy = [](const MValue& base, const MValue& h, const MValue& k) {
        return O::add(base, O::mul(h, k));
    };
    const MState k1 = rhs(s);
    const MState s2{axpy(s.x, c.half_dt, k1.x), axpy(s.y, c.half_dt, k1.y), axpy(s.z, c.half_dt, k1.z)};
    const MState k2 = rhs(s2);
    const MState s3{axpy(s.x, c.half_dt, k2.x), axpy(s.y, c.half_dt, k2.y), axpy(s.z, c.half_dt, k2.z)};
    const MState k3 = rhs(s3);
    const MState s4{axpy(s.x, c.dt, k3.x), axpy(s.y, c.dt, k3.y), axpy(s.z, c.dt, k3.z)};
    const MState k4 = rhs(s4);
    const auto weighted = [&](const MValue& w1, const MValue& w2, const MValue& w3, const MValue& w4) {
        MValue acc = O::add(w1, O::mul(c.two, w2));
        acc = O::add(acc, O::mul(c.two, w3));
        acc = O::add(acc, w4);
        return acc;
    };
    return {axpy(s.x, c.sixth_dt, weighted(k1.x, k2.x, k3.x, k4.x)),
            axpy(s.y, c.sixth_dt, weighted(k1.y, k2.y, k3.y, k4.y)),
            axpy(s.z, c.sixth_dt, weighted(k1.z, k2.z, k3.z, k4.z))};
}

// One Lorenz RK4 step under a runtime mode. Deterministic; overflow raises
// DivergenceError with step index 0.
State3 rk4_step(const LorenzParams& p, const State3& s, double dt, RhsVariant variant, Precision mode);

// Integrates from `ic`. Records every record_stride-th step plus the first and
// last computed states. With stop_on_settle, halts t_hold (plus one recording
// interval of margin) after the state has stayed inside a fixed-point ball.
Trajectory integrate(const LorenzParams& p, const State3& ic, const IntegrationSpec& spec,
                     RhsVariant variant, Precision mode, const FixedPoints& fps);

inline Classification classify_destiny(const Trajectory& traj, const FixedPoints& fps,
                                       double eps_settle, double t_hold) {
    return classify_destiny(traj.times, traj.states, fps, eps_settle, t_hold);
}

} // namespace tverify
