#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

#include "tverify/errors.hpp"

namespace tverify {

// Floating-point semantics used for every elementary operation of a run.
//   P32  — IEEE-754 binary32, emulated by rounding after every operation
//   P64  — native IEEE-754 binary64
//   PDD  — double-double (unevaluated sum of two binary64 values)
enum class Precision { P32, P64, PDD };

// Half the spacing of representable numbers near 1: 2^-24, 2^-53, 2^-104.
double unit_roundoff(Precision mode);

// Decimal digits the format can hold: 7, 15, 31.
int decimal_digits(Precision mode);

std::string_view precision_name(Precision mode);
std::optional<Precision> precision_from_name(std::string_view name);

// A value under some precision mode. For P32 `hi` is binary32-representable
// and lo == 0; for P64 lo == 0; for PDD the value is the unevaluated sum
// hi + lo with |lo| <= ulp(hi)/2.
struct MValue {
    double hi = 0.0;
    double lo = 0.0;
};

// Rounds a finite binary64 value to the nearest binary32 value
// (ties-to-even), re-widened to binary64. Implemented on the bit pattern so
// it stays independent of the hardware float path the tests use as oracle.
// Throws OverflowError when |x| exceeds the binary32 maximum finite value,
// NanError on NaN.
double round_p32(double x);

MValue m_from_double(Precision mode, double x);
double m_to_double(const MValue& v);

MValue m_add(Precision mode, const MValue& a, const MValue& b);
MValue m_sub(Precision mode, const MValue& a, const MValue& b);
MValue m_mul(Precision mode, const MValue& a, const MValue& b);
MValue m_div(Precision mode, const MValue& a, const MValue& b);

inline MValue m_neg(const MValue& a) { return {-a.hi, -a.lo}; }

namespace eft {

// Error-free transformations. Each returns the rounded result in .hi and the
// exact rounding error in .lo. Requires -ffp-contract=off (the expressions
// must not be fused).
struct Pair {
    double hi;
    double lo;
};

inline Pair two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// Requires |a| >= |b| or a == 0.
inline Pair fast_two_sum(double a, double b) {
    double s = a + b;
    double err = b - (s - a);
    return {s, err};
}

Pair two_prod_fma(double a, double b);
Pair two_prod_split(double a, double b);

inline Pair two_prod(double a, double b) {
#if defined(FP_FAST_FMA)
    return two_prod_fma(a, b);
#else
    return two_prod_split(a, b);
#endif
}

} // namespace eft

namespace detail {

inline void check_finite_p64(double r, const char* op) {
    if (!std::isfinite(r)) {
        if (std::isnan(r)) throw NanError(std::string("p64 ") + op + " produced NaN");
        throw OverflowError(std::string("p64 ") + op + " overflowed");
    }
}

inline void check_finite_pdd(double r, const char* op) {
    if (!std::isfinite(r)) {
        if (std::isnan(r)) throw NanError(std::string("pdd ") + op + " produced NaN");
        throw OverflowError(std::string("pdd ") + op + " overflowed");
    }
}

MValue pdd_add(const MValue& a, const MValue& b);
MValue pdd_sub(const MValue& a, const MValue& b);
MValue pdd_mul(const MValue& a, const MValue& b);
MValue pdd_div(const MValue& a, const MValue& b);

} // namespace detail

// Compile-time dispatched operations; the integrator instantiates its kernels
// per mode so the per-operation cost is a direct inline call.
template <Precision P>
struct ModeOps;

template <>
struct ModeOps<Precision::P32> {
    static MValue from(double x) { return {round_p32(x), 0.0}; }
    static MValue add(const MValue& a, const MValue& b) { return {round_p32(a.hi + b.hi), 0.0}; }
    static MValue sub(const MValue& a, const MValue& b) { return {round_p32(a.hi - b.hi), 0.0}; }
    static MValue mul(const MValue& a, const MValue& b) { return {round_p32(a.hi * b.hi), 0.0}; }
    static MValue div(const MValue& a, const MValue& b) { return {round_p32(a.hi / b.hi), 0.0}; }
};

template <>
struct ModeOps<Precision::P64> {
    static MValue from(double x) { return {x, 0.0}; }
    static MValue add(const MValue& a, const MValue& b) {
        double r = a.hi + b.hi;
        detail::check_finite_p64(r, "add");
        return {r, 0.0};
    }
    static MValue sub(const MValue& a, const MValue& b) {
        double r = a.hi - b.hi;
        detail::check_finite_p64(r, "sub");
        return {r, 0.0};
    }
    static MValue mul(const MValue& a, const MValue& b) {
        double r = a.hi * b.hi;
        detail::check_finite_p64(r, "mul");
        return {r, 0.0};
    }
    static MValue div(const MValue& a, const MValue& b) {
        double r = a.hi / b.hi;
        detail::check_finite_p64(r, "div");
        return {r, 0.0};
    }
};

template <>
struct ModeOps<Precision::PDD> {
    static MValue from(double x) { return {x, 0.0}; }
    static MValue add(const MValue& a, const MValue& b) { return detail::pdd_add(a, b); }
    static MValue sub(const MValue& a, const MValue& b) { return detail::pdd_sub(a, b); }
    static MValue mul(const MValue& a, const MValue& b) { return detail::pdd_mul(a, b); }
    static MValue div(const MValue& a, const MValue& b) { return detail::pdd_div(a, b); }
};

} // namespace tverify
