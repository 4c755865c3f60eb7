#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "tverify/fp_modes.hpp"

using namespace tverify;

namespace {

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

double random_double_bits(std::mt19937_64& rng) {
    return std::bit_cast<double>(rng());
}

// Hardware binary32 oracle: binary64 -> binary32 -> binary64.
double native_roundtrip(double x) { return static_cast<double>(static_cast<float>(x)); }

} // namespace

TEST_CASE("unit roundoff ladder") {
    CHECK(unit_roundoff(Precision::P32) == 5.960464477539063e-8);
    CHECK(unit_roundoff(Precision::P64) == 1.1102230246251565e-16);
    CHECK(unit_roundoff(Precision::PDD) == 0x1p-104);
    CHECK(unit_roundoff(Precision::PDD) == doctest::Approx(4.93e-32).epsilon(0.01));
    // strictly decreasing along the ladder
    CHECK(unit_roundoff(Precision::P64) < unit_roundoff(Precision::P32));
    CHECK(unit_roundoff(Precision::PDD) < unit_roundoff(Precision::P64));
    // decimal digits consistent with the roundoff within one order of magnitude
    for (Precision m : {Precision::P32, Precision::P64, Precision::PDD}) {
        const double ratio = std::pow(10.0, -decimal_digits(m)) / unit_roundoff(m);
        CHECK(ratio >= 0.1);
        CHECK(ratio <= 10.0);
    }
    CHECK(decimal_digits(Precision::P32) == 7);
    CHECK(decimal_digits(Precision::P64) == 15);
    CHECK(decimal_digits(Precision::PDD) == 31);
}

TEST_CASE("round_p32 worked examples") {
    CHECK(round_p32(0.0) == 0.0);
    CHECK(same_bits(round_p32(-0.0), -0.0));
    const double r = round_p32(2.4000000000000004);
    CHECK(r == doctest::Approx(2.4000000953674316).epsilon(1e-15));
    CHECK(std::bit_cast<std::uint32_t>(static_cast<float>(r)) == 0x4019999Au);
    CHECK_THROWS_AS(round_p32(1e39), OverflowError);
    CHECK_THROWS_AS(round_p32(-1e39), OverflowError);
    CHECK_THROWS_AS(round_p32(std::numeric_limits<double>::quiet_NaN()), NanError);
    CHECK_THROWS_AS(round_p32(std::numeric_limits<double>::infinity()), OverflowError);
}

TEST_CASE("round_p32 edge bits") {
    // largest double that still rounds down to the binary32 max
    const double fmax = std::numeric_limits<float>::max();
    const double half_ulp = 0x1p103; // ulp(fmax)/2 = 2^104/2
    CHECK(round_p32(fmax) == fmax);
    CHECK(round_p32(std::nextafter(fmax + half_ulp, 0.0)) == fmax);
    CHECK_THROWS_AS(round_p32(fmax + half_ulp), OverflowError); // ties away... ties-to-even -> overflow
    // subnormal binary32 territory
    CHECK(round_p32(0x1p-149) == 0x1p-149);
    CHECK(round_p32(0x1p-150) == 0.0);                    // tie to even (zero)
    CHECK(round_p32(std::nextafter(0x1p-150, 1.0)) == 0x1p-149);
    CHECK(round_p32(0x1p-126) == 0x1p-126);
    // binary64 subnormals collapse to signed zero
    CHECK(same_bits(round_p32(-std::numeric_limits<double>::denorm_min()), -0.0));
}

TEST_CASE("round_p32 bit-exact against the native conversion on 1e6 samples") {
    std::mt19937_64 rng(0x5eedf00dULL);
    int checked = 0, overflows = 0;
    while (checked < 1000000) {
        double x;
        if (checked % 3 == 0) {
            x = random_double_bits(rng);
            if (!std::isfinite(x)) continue;
        } else if (checked % 3 == 1) {
            // magnitudes around the interesting binary32 range
            const double mant = 2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0;
            const int exp = static_cast<int>(rng() % 320) - 170;
            x = std::ldexp(mant, exp);
        } else {
            x = 2000.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1000.0;
        }
        const float native = static_cast<float>(x);
        if (std::isinf(native)) {
            CHECK_THROWS_AS(round_p32(x), OverflowError);
            ++overflows;
        } else {
            const double ours = round_p32(x);
            if (!same_bits(ours, static_cast<double>(native))) {
                CAPTURE(x);
                CHECK(same_bits(ours, static_cast<double>(native)));
                break;
            }
        }
        ++checked;
    }
    CHECK(checked == 1000000);
    CHECK(overflows > 0); // the uniform-bits stream must have exercised overflow
}

TEST_CASE("m_add paper example and identities") {
    const MValue a = m_from_double(Precision::P64, 1.1);
    const MValue b = m_from_double(Precision::P64, 1.3);
    CHECK(m_to_double(m_add(Precision::P64, a, b)) == 2.4000000000000004);

    const MValue one = m_from_double(Precision::P32, 1.0);
    const MValue zero = m_from_double(Precision::P32, 0.0);
    CHECK(m_to_double(m_add(Precision::P32, one, zero)) == 1.0);
}

TEST_CASE("binary32 addition is not associative") {
    // (2^24 + 1) + (-2^24) = 0 but 2^24 + (1 + (-2^24)) = 1
    const MValue big = m_from_double(Precision::P32, 16777216.0);
    const MValue one = m_from_double(Precision::P32, 1.0);
    const MValue neg = m_from_double(Precision::P32, -16777216.0);
    const double left = m_to_double(m_add(Precision::P32, m_add(Precision::P32, big, one), neg));
    const double right = m_to_double(m_add(Precision::P32, big, m_add(Precision::P32, one, neg)));
    CHECK(left == 0.0);
    CHECK(right == 1.0);
    CHECK(left != right);
    // and the hardware oracle agrees with both orders
    CHECK(static_cast<double>((16777216.0f + 1.0f) + -16777216.0f) == left);
    CHECK(static_cast<double>(16777216.0f + (1.0f + -16777216.0f)) == right);
}

TEST_CASE("overflow and NaN are hard errors in every mode") {
    for (Precision mode : {Precision::P32, Precision::P64, Precision::PDD}) {
        CAPTURE(precision_name(mode));
        const double big = mode == Precision::P32 ? 3e38 : 1e308;
        const MValue a = m_from_double(mode, big);
        CHECK_THROWS_AS(m_mul(mode, a, a), OverflowError);
        const MValue z = m_from_double(mode, 0.0);
        CHECK_THROWS_AS(m_div(mode, z, z), NanError);
    }
    CHECK_THROWS_AS(m_from_double(Precision::P32, 1e39), OverflowError);
}

TEST_CASE("commutativity and negation symmetry, all modes") {
    std::mt19937_64 rng(424242);
    auto rand_val = [&rng](Precision mode) {
        const double mant = 2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0;
        const int exp = static_cast<int>(rng() % 40) - 20;
        MValue v = m_from_double(mode, std::ldexp(mant, exp));
        if (mode == Precision::PDD) {
            // stir in a nonzero lo via an exact product
            v = m_mul(mode, v, m_from_double(mode, 1.0 + 0x1p-40));
        }
        return v;
    };
    for (Precision mode : {Precision::P32, Precision::P64, Precision::PDD}) {
        CAPTURE(precision_name(mode));
        for (int i = 0; i < 20000; ++i) {
            const MValue a = rand_val(mode), b = rand_val(mode);
            const MValue ab = m_add(mode, a, b), ba = m_add(mode, b, a);
            CHECK(same_bits(ab.hi, ba.hi));
            CHECK(same_bits(ab.lo, ba.lo));
            const MValue mab = m_mul(mode, a, b), mba = m_mul(mode, b, a);
            CHECK(same_bits(mab.hi, mba.hi));
            CHECK(same_bits(mab.lo, mba.lo));
            const MValue neg_sum = m_add(mode, m_neg(a), m_neg(b));
            CHECK(same_bits(neg_sum.hi, -ab.hi));
            CHECK(same_bits(neg_sum.lo, -ab.lo));
            const MValue neg_prod = m_mul(mode, m_neg(a), b);
            CHECK(same_bits(neg_prod.hi, -mab.hi));
            CHECK(same_bits(neg_prod.lo, -mab.lo));
        }
    }
}

TEST_CASE("two_prod via fma and via Dekker splitting agree") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 100000; ++i) {
        const double a = std::ldexp(2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0,
                                    static_cast<int>(rng() % 80) - 40);
        const double b = std::ldexp(2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0,
                                    static_cast<int>(rng() % 80) - 40);
        const auto f = eft::two_prod_fma(a, b);
        const auto s = eft::two_prod_split(a, b);
        CHECK(same_bits(f.hi, s.hi));
        CHECK(same_bits(f.lo, s.lo));
    }
}

TEST_CASE("PDD arithmetic against a binary128 oracle") {
    std::mt19937_64 rng(123456789);
    const __float128 tol = 0x1p-100;
    auto rand_dd = [&rng]() {
        const double hi = std::ldexp(2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0,
                                     static_cast<int>(rng() % 24) - 12);
        const double lo = hi * 0x1p-55 * (2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0);
        const auto n = eft::fast_two_sum(hi, lo);
        return MValue{n.hi, n.lo};
    };
    auto q = [](const MValue& v) { return static_cast<__float128>(v.hi) + static_cast<__float128>(v.lo); };
    auto qabs = [](__float128 v) { return v < 0 ? -v : v; };

    int div_checked = 0;
    for (int i = 0; i < 20000; ++i) {
        const MValue a = rand_dd(), b = rand_dd();
        const __float128 qa = q(a), qb = q(b);

        const MValue sum = m_add(Precision::PDD, a, b);
        const __float128 exact_sum = qa + qb;
        if (qabs(exact_sum) > 1e-30) CHECK(double(qabs(q(sum) - exact_sum) / qabs(exact_sum)) <= double(tol));

        const MValue dif = m_sub(Precision::PDD, a, b);
        const __float128 exact_dif = qa - qb;
        if (qabs(exact_dif) > 1e-30) CHECK(double(qabs(q(dif) - exact_dif) / qabs(exact_dif)) <= double(tol));

        const MValue prod = m_mul(Precision::PDD, a, b);
        const __float128 exact_prod = qa * qb;
        if (qabs(exact_prod) > 1e-300)
            CHECK(double(qabs(q(prod) - exact_prod) / qabs(exact_prod)) <= double(tol));

        if (std::abs(b.hi) > 1e-6) {
            const MValue quot = m_div(Precision::PDD, a, b);
            const __float128 exact_quot = qa / qb;
            if (qabs(exact_quot) > 1e-300) {
                CHECK(double(qabs(q(quot) - exact_quot) / qabs(exact_quot)) <= double(tol));
                ++div_checked;
            }
        }
    }
    CHECK(div_checked > 10000);
}

TEST_CASE("PDD values stay normalized") {
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 10000; ++i) {
        const double x = std::ldexp(2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0, 3);
        const double y = std::ldexp(2.0 * static_cast<double>(rng()) / 1.8446744073709552e19 - 1.0, 3);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        const MValue p = m_mul(Precision::PDD, m_from_double(Precision::PDD, x),
                               m_from_double(Precision::PDD, y));
        if (p.hi != 0.0) {
            const double ulp_hi = std::ldexp(1.0, std::ilogb(p.hi) - 52);
            CHECK(std::abs(p.lo) <= 0.5 * ulp_hi * 1.0000000001);
        }
    }
}

TEST_CASE("determinism across repeated calls") {
    const MValue a = m_from_double(Precision::PDD, 1.1);
    const MValue b = m_from_double(Precision::PDD, 1.3);
    const MValue first = m_mul(Precision::PDD, a, b);
    for (int i = 0; i < 100; ++i) {
        const MValue again = m_mul(Precision::PDD, a, b);
        CHECK(same_bits(first.hi, again.hi));
        CHECK(same_bits(first.lo, again.lo));
    }
    CHECK(same_bits(round_p32(3.14159), round_p32(3.14159)));
}
