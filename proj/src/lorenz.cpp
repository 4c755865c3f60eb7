#include "tverify/lorenz.hpp"

#include <limits>

namespace tverify {

void validate_params(const LorenzParams& p) {
    if (!(p.sigma > 0.0)) throw DomainError("sigma must be > 0");
    if (!(p.b > 0.0)) throw DomainError("b must be > 0");
    if (!(p.r > 1.0)) throw DomainError("r must be > 1 (two nontrivial fixed points)");
}

bool in_transient_window(const LorenzParams& p) {
    return p.r > 13.926 && p.r < 24.06;
}

std::string_view variant_name(RhsVariant v) {
    switch (v) {
        case RhsVariant::YA: return "ya";
        case RhsVariant::YB: return "yb";
        case RhsVariant::YC: return "yc";
    }
    return "?";
}

std::optional<RhsVariant> variant_from_name(std::string_view name) {
    if (name == "ya" || name == "YA") return RhsVariant::YA;
    if (name == "yb" || name == "YB") return RhsVariant::YB;
    if (name == "yc" || name == "YC") return RhsVariant::YC;
    return std::nullopt;
}

FixedPoints fixed_points(const LorenzParams& p) {
    if (!(p.r > 1.0)) throw DomainError("fixed_points: r must be > 1");
    if (!(p.b > 0.0)) throw DomainError("fixed_points: b must be > 0");
    const double q = std::sqrt(p.b * (p.r - 1.0));
    const double z = p.r - 1.0;
    return {{q, q, z}, {-q, -q, z}, {0.0, 0.0, 0.0}};
}

std::string_view destiny_name(Destiny d) {
    switch (d) {
        case Destiny::CPlus: return "CPlus";
        case Destiny::CMinus: return "CMinus";
        case Destiny::Undecided: return "Undecided";
    }
    return "?";
}

Classification classify_destiny(std::span<const double> times, std::span<const State3> states,
                                const FixedPoints& fps, double eps_settle, double t_hold) {
    if (times.empty() || states.empty() || times.size() != states.size())
        throw EmptyTrajectoryError("classify_destiny: empty or inconsistent trajectory");
    if (!(eps_settle > 0.0)) throw DomainError("eps_settle must be > 0");
    if (!(t_hold > 0.0)) throw DomainError("t_hold must be > 0");

    const std::size_t n = times.size();
    Classification best;
    const State3* fp_states[2] = {&fps.c_plus, &fps.c_minus};
    const Destiny tags[2] = {Destiny::CPlus, Destiny::CMinus};
    for (int k = 0; k < 2; ++k) {
        // First sample index after the last exit from the ball.
        std::size_t first_in = 0;
        for (std::size_t i = n; i-- > 0;) {
            if (distance(states[i], *fp_states[k]) >= eps_settle) {
                first_in = i + 1;
                break;
            }
        }
        if (first_in >= n) continue;                       // never inside at the end
        if (times[n - 1] - times[first_in] < t_hold) continue;  // not held long enough
        if (times[first_in] < best.settle_time) {
            best.destiny = tags[k];
            best.settle_time = times[first_in];
        }
    }
    return best;
}

State3 lorenz_rhs(const LorenzParams& p, const State3& s, RhsVariant variant, Precision mode) {
    switch (mode) {
        case Precision::P32: {
            MState ms{m_from_double(mode, s.x), m_from_double(mode, s.y), m_from_double(mode, s.z)};
            return to_state(lorenz_rhs_t<Precision::P32>(params_in_mode<Precision::P32>(p), ms, variant));
        }
        case Precision::P64: {
            MState ms{{s.x, 0}, {s.y, 0}, {s.z, 0}};
            return to_state(lorenz_rhs_t<Precision::P64>(params_in_mode<Precision::P64>(p), ms, variant));
        }
        case Precision::PDD: {
            MState ms{{s.x, 0}, {s.y, 0}, {s.z, 0}};
            return to_state(lorenz_rhs_t<Precision::PDD>(params_in_mode<Precision::PDD>(p), ms, variant));
        }
    }
    throw DomainError("unknown precision mode");
}

} // namespace tverify
