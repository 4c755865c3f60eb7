#include "tverify/fp_modes.hpp"

#include <bit>
#include <limits>

namespace tverify {

double unit_roundoff(Precision mode) {
    switch (mode) {
        case Precision::P32: return 0x1p-24;
        case Precision::P64: return 0x1p-53;
        case Precision::PDD: return 0x1p-104;
    }
    throw DomainError("unknown precision mode");
}

int decimal_digits(Precision mode) {
    switch (mode) {
        case Precision::P32: return 7;
        case Precision::P64: return 15;
        case Precision::PDD: return 31;
    }
    throw DomainError("unknown precision mode");
}

std::string_view precision_name(Precision mode) {
    switch (mode) {
        case Precision::P32: return "p32";
        case Precision::P64: return "p64";
        case Precision::PDD: return "pdd";
    }
    return "?";
}

std::optional<Precision> precision_from_name(std::string_view name) {
    if (name == "p32" || name == "P32") return Precision::P32;
    if (name == "p64" || name == "P64") return Precision::P64;
    if (name == "pdd" || name == "PDD") return Precision::PDD;
    return std::nullopt;
}

double round_p32(double x) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    const bool negative = (bits >> 63) != 0;
    const std::int64_t biased = static_cast<std::int64_t>((bits >> 52) & 0x7ff);
    const std::uint64_t frac = bits & 0xfffffffffffffULL;

    if (biased == 0x7ff) {
        if (frac != 0) throw NanError("round_p32: NaN input");
        throw OverflowError("round_p32: infinite input exceeds binary32 range");
    }
    if (biased == 0) {
        // binary64 subnormals are below 2^-1022, far under half the smallest
        // binary32 subnormal (2^-150); they round to signed zero.
        return negative ? -0.0 : 0.0;
    }

    const std::int64_t e = biased - 1023;              // x = 1.frac * 2^e
    if (e >= 128) throw OverflowError("round_p32: overflow to binary32 infinity");

    const std::uint64_t sig = (1ULL << 52) | frac;     // value = sig * 2^(e-52)

    // Number of low bits to drop: 29 keeps a 24-bit significand; subnormal
    // binary32 targets (e < -126) keep fewer.
    std::int64_t drop = 29;
    if (e < -126) drop += -126 - e;
    if (drop >= 54) return negative ? -0.0 : 0.0;

    std::uint64_t keep, rem, half;
    if (drop == 53) {
        keep = 0;
        rem = sig;
        half = 1ULL << 52;
    } else {
        keep = sig >> drop;
        rem = sig & ((1ULL << drop) - 1);
        half = 1ULL << (drop - 1);
    }
    if (rem > half || (rem == half && (keep & 1))) keep += 1;

    // keep * 2^(e - 52 + drop), both factors exact in binary64.
    const std::int64_t e2 = e - 52 + drop;
    const double pow2 = std::bit_cast<double>(static_cast<std::uint64_t>(e2 + 1023) << 52);
    const double mag = static_cast<double>(keep) * pow2;
    if (mag > static_cast<double>(std::numeric_limits<float>::max()))
        throw OverflowError("round_p32: overflow to binary32 infinity");
    return negative ? -mag : mag;
}

MValue m_from_double(Precision mode, double x) {
    if (std::isnan(x)) throw NanError("m_from_double: NaN input");
    if (std::isinf(x)) throw OverflowError("m_from_double: infinite input");
    switch (mode) {
        case Precision::P32: return ModeOps<Precision::P32>::from(x);
        case Precision::P64: return ModeOps<Precision::P64>::from(x);
        case Precision::PDD: return ModeOps<Precision::PDD>::from(x);
    }
    throw DomainError("unknown precision mode");
}

double m_to_double(const MValue& v) { return v.hi + v.lo; }

namespace eft {

Pair two_prod_fma(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

Pair two_prod_split(double a, double b) {
    // Dekker's exact splitting; valid while |a|,|b| < 2^996.
    constexpr double splitter = 134217729.0; // 2^27 + 1
    double p = a * b;
    double ta = splitter * a;
    double ahi = ta - (ta - a);
    double alo = a - ahi;
    double tb = splitter * b;
    double bhi = tb - (tb - b);
    double blo = b - bhi;
    double err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    return {p, err};
}

} // namespace eft

namespace detail {

MValue pdd_add(const MValue& a, const MValue& b) {
    eft::Pair s = eft::two_sum(a.hi, b.hi);
    check_finite_pdd(s.hi, "add");
    eft::Pair t = eft::two_sum(a.lo, b.lo);
    double c = s.lo + t.hi;
    eft::Pair v = eft::fast_two_sum(s.hi, c);
    double w = t.lo + v.lo;
    eft::Pair z = eft::fast_two_sum(v.hi, w);
    check_finite_pdd(z.hi, "add");
    return {z.hi, z.lo};
}

MValue pdd_sub(const MValue& a, const MValue& b) { return pdd_add(a, m_neg(b)); }

MValue pdd_mul(const MValue& a, const MValue& b) {
    eft::Pair p = eft::two_prod(a.hi, b.hi);
    check_finite_pdd(p.hi, "mul");
    double t = a.hi * b.lo + a.lo * b.hi;
    eft::Pair z = eft::fast_two_sum(p.hi, p.lo + t);
    check_finite_pdd(z.hi, "mul");
    return {z.hi, z.lo};
}

namespace {

// dd * double, exact product then renormalize; used by division.
MValue pdd_mul_d(const MValue& a, double d) {
    eft::Pair p = eft::two_prod(a.hi, d);
    eft::Pair z = eft::fast_two_sum(p.hi, p.lo + a.lo * d);
    return {z.hi, z.lo};
}

} // namespace

MValue pdd_div(const MValue& a, const MValue& b) {
    // Long division with two correction terms (QD-style accurate division).
    double q1 = a.hi / b.hi;
    check_finite_pdd(q1, "div");
    MValue r = pdd_add(a, m_neg(pdd_mul_d(b, q1)));
    double q2 = r.hi / b.hi;
    r = pdd_add(r, m_neg(pdd_mul_d(b, q2)));
    double q3 = r.hi / b.hi;
    eft::Pair q = eft::fast_two_sum(q1, q2);
    eft::Pair z = eft::fast_two_sum(q.hi, q.lo + q3);
    check_finite_pdd(z.hi, "div");
    return {z.hi, z.lo};
}

} // namespace detail

namespace {

template <typename F>
MValue dispatch(Precision mode, F&& f) {
    switch (mode) {
        case Precision::P32: return f(ModeOps<Precision::P32>{});
        case Precision::P64: return f(ModeOps<Precision::P64>{});
        case Precision::PDD: return f(ModeOps<Precision::PDD>{});
    }
    throw DomainError("unknown precision mode");
}

} // namespace

MValue m_add(Precision mode, const MValue& a, const MValue& b) {
    return dispatch(mode, [&](auto ops) { return decltype(ops)::add(a, b); });
}

MValue m_sub(Precision mode, const MValue& a, const MValue& b) {
    return dispatch(mode, [&](auto ops) { return decltype(ops)::sub(a, b); });
}

MValue m_mul(Precision mode, const MValue& a, const MValue& b) {
    return dispatch(mode, [&](auto ops) { return decltype(ops)::mul(a, b); });
}

MValue m_div(Precision mode, const MValue& a, const MValue& b) {
    return dispatch(mode, [&](auto ops) { return decltype(ops)::div(a, b); });
}

} // namespace tverify
