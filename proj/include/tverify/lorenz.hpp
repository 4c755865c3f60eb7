#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

#include "tverify/fp_modes.hpp"

namespace tverify {

struct LorenzParams {
    double sigma = 10.0;
    double r = 20.0;
    double b = 8.0 / 3.0;
};

// Throws DomainError unless sigma > 0, b > 0, r > 1.
void validate_params(const LorenzParams& p);

// True when r lies in the transient-chaos window (13.926, 24.06). Outside it
// the tool still runs but callers should warn.
bool in_transient_window(const LorenzParams& p);

struct State3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const State3& a, const State3& b) {
    double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// Evaluation order of the y-equation (mathematically equivalent forms):
//   YA:  dy = ((r*x) - (x*z)) - y
//   YB:  dy = ((r*x) - y) - (x*z)
// YC additionally distributes sigma in the x-equation, for sweep experiments:
//   YC:  dx = (sigma*y) - (sigma*x), dy as YA
// The x- and z-equation orders are otherwise fixed:
//   dx = sigma*(y - x);  dz = (x*y) - (b*z)
enum class RhsVariant { YA, YB, YC };

std::string_view variant_name(RhsVariant v);
std::optional<RhsVariant> variant_from_name(std::string_view name);

struct FixedPoints {
    State3 c_plus;
    State3 c_minus;
    State3 origin;
};

// C± = (±q, ±q, r-1) with q = sqrt(b(r-1)). Throws DomainError if r <= 1.
FixedPoints fixed_points(const LorenzParams& p);

enum class Destiny { CPlus, CMinus, Undecided };

std::string_view destiny_name(Destiny d);

struct Classification {
    Destiny destiny = Destiny::Undecided;
    double settle_time = std::numeric_limits<double>::infinity();
};

// Destiny is CPlus/CMinus iff the trajectory permanently enters the
// eps_settle-ball of that fixed point and at least t_hold of in-ball samples
// confirm it; settle_time is the first sample time after the last exit.
// Throws EmptyTrajectoryError.
Classification classify_destiny(std::span<const double> times, std::span<const State3> states,
                                const FixedPoints& fps, double eps_settle, double t_hold);

// Mode-space state and parameters used by the kernels.
struct MState {
    MValue x, y, z;
};

struct MParams {
    MValue sigma, r, b;
};

template <Precision P>
MParams params_in_mode(const LorenzParams& p) {
    return {ModeOps<P>::from(p.sigma), ModeOps<P>::from(p.r), ModeOps<P>::from(p.b)};
}

inline State3 to_state(const MState& s) {
    return {m_to_double(s.x), m_to_double(s.y), m_to_double(s.z)};
}

// Vector field with every elementary operation performed in mode P, in
// exactly the association order selected by `variant`.
template <Precision P>
MState lorenz_rhs_t(const MParams& p, const MState& s, RhsVariant variant) {
    using O = ModeOps<P>;
    MValue xdot;
    if (variant == RhsVariant::YC) {
        xdot = O::sub(O::mul(p.sigma, s.y), O::mul(p.sigma, s.x));
    } else {
        xdot = O::mul(p.sigma, O::sub(s.y, s.x));
    }
    const MValue rx = O::mul(p.r, s.x);
    const MValue xz = O::mul(s.x, s.z);
    MValue ydot;
    if (variant == RhsVariant::YB) {
        ydot = O::sub(O::sub(rx, s.y), xz);
    } else {
        ydot = O::sub(O::sub(rx, xz), s.y);
    }
    const MValue zdot = O::sub(O::mul(s.x, s.y), O::mul(p.b, s.z));
    return {xdot, ydot, zdot};
}

// Runtime-mode wrapper: rounds the state and parameters into the mode, then
// evaluates. Overflow in mode arithmetic propagates as OverflowError.
State3 lorenz_rhs(const LorenzParams& p, const State3& s, RhsVariant variant, Precision mode);

} // namespace tverify
