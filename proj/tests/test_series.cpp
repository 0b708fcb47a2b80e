#include "equideform/rng.hpp"
#include "equideform/series.hpp"

#include "gtest/gtest.h"

using namespace equideform;

namespace {

Series random_series(Rng& rng, uint32_t p, long val, long prec)
{
    std::vector<uint32_t> cs(prec - val);
    for (auto& c : cs)
        c = rng.fp_element(p);
    cs[0] = rng.fp_nonzero(p);
    return Series::from_coeffs(p, val, std::move(cs), prec);
}

// sigma^k(t) = t/(1+kt), the standard order-p substitution
Series sigma_k(uint32_t p, long k, long prec)
{
    Series denom = Series::from_coeffs(p, 0, {1, static_cast<uint32_t>(((k % p) + p) % p)});
    return Series::t(p) * denom.inverted(prec);
}

} // namespace

TEST(Series, MulSpecExample)
{
    // (1+t)(1-t) = 1 + 2t^2 over F_3
    Series a = Series::from_coeffs(3, 0, {1, 1});
    Series b = Series::from_coeffs(3, 0, {1, 2});
    Series prod = a * b;
    EXPECT_EQ(prod, Series::from_coeffs(3, 0, {1, 0, 2}));
    EXPECT_EQ(prod.to_string(), "1 + 2*t^2");
}

TEST(Series, InvertGeometric)
{
    // 1/(1+t) = 1 + 2t + t^2 + 2t^3 + ... over F_3
    Series s = Series::from_coeffs(3, 0, {1, 1});
    Series inv = s.inverted(6);
    EXPECT_EQ(inv, Series::from_coeffs(3, 0, {1, 2, 1, 2, 1, 2}, 6));
    EXPECT_TRUE(eq_mod(s * inv, Series::one(3), 6));
}

TEST(Series, InvertLaurent)
{
    Series tinv = Series::t(5).inverted(4);
    EXPECT_EQ(tinv.ord(), -1);
    EXPECT_TRUE(eq_mod(tinv * Series::t(5), Series::one(5), 3));
    EXPECT_THROW(Series::zero(5, 10).inverted(), precision_error);
}

TEST(Series, DerivativeCharP)
{
    EXPECT_FALSE(Series::monomial(3, 1, 3).derivative().has_terms()); // d/dt t^3 = 0 mod 3
    Series s = Series::from_coeffs(3, 2, {1, 0, 1});                  // t^2 + t^4
    EXPECT_EQ(s.derivative(), Series::from_coeffs(3, 1, {2, 0, 1}));  // 2t + t^3
}

TEST(Series, DerivativeOfStandardOrbitProduct)
{
    // y = t * sigma(t) * sigma^2(t) = t^3/(1+2t^2) over F_3; ord(dy/dt) = 4
    long P = 24;
    std::vector<Series> factors{sigma_k(3, 0, P), sigma_k(3, 1, P), sigma_k(3, 2, P)};
    Series y = orbit_product(factors);
    Series expect = Series::monomial(3, 1, 3) *
                    Series::from_coeffs(3, 0, {1, 0, 2}).inverted(P);
    EXPECT_TRUE(eq_mod(y, expect, P));
    EXPECT_EQ(y.ord(), 3);
    EXPECT_EQ(y.derivative().ord(), 4); // 2(p-1) for the weakly ramified action
}

TEST(Series, ComposeIdentity)
{
    Series f = Series::from_coeffs(7, 0, {3, 1, 4, 1}, 9);
    EXPECT_EQ(compose(f, Series::t(7)), f);
}

TEST(Series, ComposeSpecExample)
{
    // (t+t^2) o (t+t^3) = t + t^2 + t^3 + 2t^4 + t^6 over F_3
    Series f = Series::from_coeffs(3, 1, {1, 1});
    Series g = Series::from_coeffs(3, 1, {1, 0, 1});
    EXPECT_EQ(compose(f, g), Series::from_coeffs(3, 1, {1, 1, 1, 2, 0, 1}));
}

TEST(Series, ComposeSigmaOracle)
{
    // sigma^j o sigma^k = sigma^{j+k} where sigma^k(t) = t/(1+kt)
    long P = 20;
    for (long j = 0; j < 3; ++j)
        for (long k = 0; k < 3; ++k)
            EXPECT_TRUE(eq_mod(compose(sigma_k(3, j, P), sigma_k(3, k, P)),
                               sigma_k(3, j + k, P), P - 2));
}

TEST(Series, ComposeRejectsBadValuation)
{
    Series f = Series::from_coeffs(3, 1, {1, 1});
    EXPECT_THROW(compose(f, Series::one(3)), math_error);
}

TEST(Series, CompInverse)
{
    EXPECT_EQ(comp_inverse(Series::t(5), 8), Series::t(5).truncated(8));

    // comp_inverse(t/(1+t)) = t/(1-t)
    long P = 14;
    Series f = sigma_k(5, 1, P);
    Series g = comp_inverse(f);
    EXPECT_TRUE(eq_mod(g, sigma_k(5, -1, P), P - 2));

    // t + t^2 over F_5: starts t + 4t^2 + 2t^3
    Series h = comp_inverse(Series::from_coeffs(5, 1, {1, 1}), 10);
    EXPECT_EQ(h.coeff(1), 1u);
    EXPECT_EQ(h.coeff(2), 4u);
    EXPECT_EQ(h.coeff(3), 2u);
}

TEST(Series, CompInverseRandomRoundTrip)
{
    Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        uint32_t p = (trial % 2) ? 5 : 3;
        long P = 12 + rng.below(8);
        Series f = random_series(rng, p, 1, P);
        Series g = comp_inverse(f);
        EXPECT_FALSE((compose(g, f) - Series::t(p)).has_terms());
        EXPECT_FALSE((compose(f, g) - Series::t(p)).has_terms());
    }
}

TEST(Series, ExpressInBasics)
{
    long P = 30;
    std::vector<Series> factors{sigma_k(3, 0, P), sigma_k(3, 1, P), sigma_k(3, 2, P)};
    Series y = orbit_product(factors);

    // express_in(y, y) = the degree-1 monomial in the new variable
    Series w = express_in(y, y);
    EXPECT_EQ(w.ord(), 1);
    EXPECT_EQ(w.leading(), 1u);
    EXPECT_TRUE(!w.has_terms() || w.coeff(1) == 1u);

    // y^2 + y^3 -> w^2 + w^3
    Series u = y.pow(2) + y.pow(3);
    Series h = express_in(u, y);
    EXPECT_EQ(h.coeff(2), 1u);
    EXPECT_EQ(h.coeff(3), 1u);

    // non-invariant t over y of valuation 3: not expressible
    EXPECT_THROW(express_in(Series::t(3).truncated(P), y), not_expressible_error);
}

TEST(Series, ExpressInRoundTrip)
{
    Rng rng(4242);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t p = 3;
        long P = 36;
        Series y = random_series(rng, p, 3, P);
        // u = random polynomial in y
        Series u = Series::zero(p);
        for (long j = 1; j <= 4; ++j)
            u = u + y.pow(j).scaled(rng.fp_element(p));
        if (!u.has_terms())
            continue;
        Series h = express_in(u, y);
        Series back = compose(h, y);
        EXPECT_FALSE((back - u).has_terms());
    }
}

TEST(Series, PrecisionSoundness)
{
    // every emitted coefficient must match the same computation at double precision
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        uint32_t p = 5;
        long P = 10, P2 = 20;
        Series a1 = random_series(rng, p, 1, P), a2 = a1.truncated(P);
        Rng rng2(1000 + trial);
        (void)rng2;
        Series b1 = random_series(rng, p, 1, P);

        // rebuild the same series at higher precision by extending coefficients
        auto extend = [&](const Series& s) {
            std::vector<uint32_t> cs;
            for (long e = s.ord(); e < s.prec(); ++e)
                cs.push_back(s.coeff(e));
            while (static_cast<long>(cs.size()) < P2 - s.ord())
                cs.push_back(rng.fp_element(p));
            return Series::from_coeffs(p, s.ord(), cs, P2);
        };
        Series A = extend(a1), B = extend(b1);

        auto agree = [](const Series& lo, const Series& hi) {
            Series d = lo - hi; // window of d is the window of lo
            return !d.has_terms();
        };
        EXPECT_TRUE(agree(a1 * b1, A * B));
        EXPECT_TRUE(agree(a1 + b1, A + B));
        EXPECT_TRUE(agree(compose(a1, b1), compose(A, B)));
        EXPECT_TRUE(agree(a1.inverted(), A.inverted()));
        EXPECT_TRUE(agree(comp_inverse(a1), comp_inverse(A)));
    }
}

TEST(Series, TextFormRoundTrip)
{
    Series s = Series::from_coeffs(5, -1, {2, 1, 0, 1}, 5);
    EXPECT_EQ(s.to_string(), "2*t^-1 + 1 + t^2 + O(t^5)");
    EXPECT_EQ(Series::parse(s.to_string(), 5), s);
    EXPECT_EQ(Series::parse("0", 7), Series::zero(7));
    EXPECT_EQ(Series::parse("t", 7), Series::t(7));
    EXPECT_EQ(Series::parse("1 - t + O(t^4)", 3), Series::from_coeffs(3, 0, {1, 2}, 4));

    Rng rng(31337);
    for (int trial = 0; trial < 30; ++trial) {
        Series r = random_series(rng, 7, -2 + static_cast<long>(rng.below(5)), 9);
        EXPECT_EQ(Series::parse(r.to_string(), 7), r);
    }
}

TEST(Series, DerivationProperty)
{
    // d(fg) = f dg + g df on the common window
    Rng rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        Series f = random_series(rng, 7, 0, 12);
        Series g = random_series(rng, 7, 1, 12);
        Series lhs = (f * g).derivative();
        Series rhs = f * g.derivative() + g * f.derivative();
        EXPECT_FALSE((lhs - rhs).has_terms());
    }
}

TEST(Series, EmptyWindowRaises)
{
    Series a = Series::from_coeffs(5, 0, {1, 2}, 2);
    Series b = a.inverted(); // fine: window length 2
    EXPECT_EQ(b.prec(), 2);
    Series z = Series::zero(5, 3);
    EXPECT_THROW(z.ord(), precision_error);
    EXPECT_THROW(z.coeff(5), precision_error);
}
