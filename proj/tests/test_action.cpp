#include "equideform/action.hpp"

#include "gtest/gtest.h"

using namespace equideform;

TEST(LocalAction, ValidateStandardCyclic)
{
    auto b = standard_cyclic_p(3, 30);
    auto rep = b.action.validate();
    EXPECT_TRUE(rep.ok) << (rep.problems.empty() ? "" : rep.problems.front());
    // sigma^3(t) = t/(1+3t) = t
    EXPECT_TRUE(eq_mod(b.action.f(0), Series::t(3), 30));
}

TEST(LocalAction, WrongOrderDeclared)
{
    // the same series t/(1+t) declared on Z/2 fails: sigma^2 != e
    auto G = std::make_shared<FiniteGroup>(cyclic_group(2));
    long prec = 20;
    Series fs = (Series::t(3) * Series::from_coeffs(3, 0, {1, 1}).inverted(prec));
    LocalAction bad(*G, 3, prec, {Series::t(3).truncated(prec), fs});
    EXPECT_FALSE(bad.validate().ok);
}

TEST(LocalAction, NonHomomorphismSeries)
{
    // f_sigma = t + t^2 with sigma of order 3 over F_3: composing three
    // times does not return t
    auto G = std::make_shared<FiniteGroup>(cyclic_group(3));
    long prec = 20;
    Series fs = Series::from_coeffs(3, 1, {1, 1}).truncated(prec);
    Series fs2 = compose(fs, fs).truncated(prec);
    LocalAction bad(*G, 3, prec, {Series::t(3).truncated(prec), fs, fs2});
    EXPECT_FALSE(bad.validate().ok);
}

TEST(Ramification, TameAction)
{
    auto b = tame_cyclic(5, 4, 2, 20);
    ASSERT_TRUE(b.action.validate().ok);
    auto rd = ramification(b.action);
    EXPECT_EQ(rd.filtration.size(), 2u); // G_0 = G, G_1 = 1
    EXPECT_EQ(rd.filtration[1].size(), 1u);
    EXPECT_EQ(rd.conductor, 0);
    EXPECT_EQ(rd.different_hilbert, 3); // m - 1
    EXPECT_EQ(rd.different_ord, 3);
}

TEST(Ramification, StandardCyclic3)
{
    auto b = standard_cyclic_p(3, 30);
    auto rd = ramification(b.action);
    // G_0 = G_1 = G, G_2 = 1; conductor 1; different order 4
    ASSERT_EQ(rd.filtration.size(), 3u);
    EXPECT_EQ(rd.filtration[0].size(), 3u);
    EXPECT_EQ(rd.filtration[1].size(), 3u);
    EXPECT_EQ(rd.filtration[2].size(), 1u);
    EXPECT_EQ(rd.conductor, 1);
    EXPECT_EQ(rd.different_hilbert, 4);
    EXPECT_EQ(rd.different_ord, 4);
    EXPECT_TRUE(rd.weakly_ramified);
}

TEST(Ramification, StandardCyclic5Different8)
{
    auto b = standard_cyclic_p(5, 40);
    EXPECT_EQ(ramification(b.action).different_ord, 8); // 2(p-1)
}

TEST(Ramification, DihedralWeaklyRamified)
{
    auto b = dihedral_p(5, 60);
    auto rd = ramification(b.action);
    EXPECT_TRUE(rd.weakly_ramified);
    EXPECT_EQ(rd.filtration[0].size(), 10u);
    EXPECT_EQ(rd.filtration[1].size(), 5u); // wild inertia Z/5
    EXPECT_EQ(rd.different_hilbert, 9 + 4);
    for (bool n : rd.normal_in_g)
        EXPECT_TRUE(n);
}

TEST(InvariantGenerator, Examples)
{
    auto b = standard_cyclic_p(3, 30);
    // N = {e}: y = t
    Series ytriv = invariant_generator(b.action, Subgroup::trivial(*b.group));
    EXPECT_TRUE(eq_mod(ytriv, Series::t(3), 25));
    // N = G: y = t^3/(1+2t^2)
    Series y = invariant_generator(b.action, Subgroup::whole(*b.group));
    Series expect = Series::monomial(3, 1, 3) * Series::from_coeffs(3, 0, {1, 0, 2}).inverted(25);
    EXPECT_TRUE(eq_mod(y, expect, 25));
    EXPECT_EQ(y.ord(), 3);

    // tame: y = zeta^{m(m-1)/2} t^m
    auto tb = tame_cyclic(5, 4, 2, 20);
    Series yt = invariant_generator(tb.action, Subgroup::whole(*tb.group));
    // zeta^{4*3/2} = 2^6 = 64 = 4 mod 5
    EXPECT_EQ(yt.ord(), 4);
    EXPECT_EQ(yt.leading(), 4u);
}

TEST(QuotientAction, DegenerateCases)
{
    auto b = standard_cyclic_p(3, 40);
    // N = G: trivial group acting on k[[y]]
    auto q1 = quotient_action(b.action, Subgroup::whole(*b.group));
    EXPECT_EQ(q1.action.group().order(), 1);
    // N = {e}: the same action back
    auto q2 = quotient_action(b.action, Subgroup::trivial(*b.group));
    EXPECT_EQ(q2.action.group().order(), 3);
    for (int g = 0; g < 3; ++g) {
        Series diff = q2.action.f(g) - b.action.f(g);
        EXPECT_TRUE(!diff.has_terms());
    }
}

TEST(QuotientAction, DihedralFive)
{
    auto b = dihedral_p(5, 80);
    Subgroup N = Subgroup::generated(*b.group, {b.named["sigma"]});
    auto q = quotient_action(b.action, N);
    EXPECT_EQ(q.action.group().order(), 2);
    // tau acts on y as -y * unit
    const Series& ftau = q.action.f(1);
    EXPECT_EQ(ftau.ord(), 1);
    EXPECT_EQ(ftau.leading(), 4u); // -1 mod 5
    // involution: f o f = y
    Series sq = compose(ftau, ftau) - Series::t(5).truncated(q.action.prec());
    EXPECT_TRUE(!sq.has_terms());
}

TEST(QuotientAction, TowerCollapses)
{
    // quotient by N' = G of a quotient by N <= N' agrees with quotienting
    // by G directly: both land on the trivial group with y_G as generator
    auto b = dihedral_p(3, 70);
    Subgroup N = Subgroup::generated(*b.group, {b.named["sigma"]});
    auto q = quotient_action(b.action, N);
    auto qq = quotient_action(q.action, Subgroup::whole(q.action.group()));
    // y_G expressed through the tower equals the direct orbit product up to
    // the variable change express_in performs: compare valuations and a
    // re-expression round trip
    Series yG = invariant_generator(b.action, Subgroup::whole(*b.group));
    Series yN = q.yN;
    Series ytop = qq.yN; // series in the y_N variable
    Series composed = compose(ytop, yN);
    Series h = express_in(composed, yG);
    EXPECT_EQ(h.ord(), 1); // composed = unit * y_G
}

TEST(DerivationModule, TameDiagonal)
{
    auto b = tame_cyclic(5, 4, 2, 30);
    auto dm = derivation_module_full(b.action, 8);
    // sigma acts on t^i d/dt with eigenvalue zeta^{i-1}
    PrimeField F(5);
    const Matrix& A = dm.mod->act(1);
    for (size_t i = 0; i < 8; ++i)
        for (size_t j = 0; j < 8; ++j) {
            uint32_t expect = 0;
            if (i == j) {
                long e = static_cast<long>(i) - 1;
                expect = (e >= 0) ? F.pow(2, e) : F.pow(F.inv(2), -e);
            }
            EXPECT_EQ(A(i, j), expect);
        }
}

TEST(DerivationModule, RepresentationProperty)
{
    // the GModule constructor checks act(g)act(h) = act(gh); build at a
    // nontrivial truncation to exercise it
    auto b = standard_cyclic_p(3, 30);
    EXPECT_NO_THROW(derivation_module_full(b.action, 12));
    auto d5 = dihedral_p(5, 40);
    EXPECT_NO_THROW(derivation_module_full(d5.action, 16));
}

TEST(DerivationModule, IdentityActsTrivially)
{
    auto b = standard_cyclic_p(5, 30);
    auto dm = derivation_module_full(b.action, 10);
    EXPECT_EQ(dm.mod->act(0), Matrix::identity(5, 10));
}

TEST(DerivationModule, InvariantVector)
{
    // t^2 d/dt is invariant under t -> t/(1+t)
    auto b = standard_cyclic_p(3, 30);
    auto dm = derivation_module_full(b.action, 9);
    Vec v(9, 0);
    v[2] = 1;
    EXPECT_EQ(dm.mod->apply(1, v), v);
}

TEST(IdealModule, SubstitutionAction)
{
    auto b = standard_cyclic_p(3, 40);
    auto dm = ideal_module(b.action, 4, 10);
    EXPECT_NO_THROW(dm.mod->validate());
    // t^4 maps to f^4 which has leading coefficient 1 at t^4
    Vec v(10, 0);
    v[0] = 1;
    Vec w = dm.mod->apply(1, v);
    EXPECT_EQ(w[0], 1u);
}

TEST(Builders, MetacyclicRelation)
{
    auto b = metacyclic_p(5, 4, 2, 60);
    EXPECT_TRUE(b.action.validate().ok);
    const FiniteGroup& G = *b.group;
    int sigma = b.named["sigma"], tau = b.named["tau"];
    EXPECT_EQ(G.order(), 20);
    EXPECT_EQ(G.order_of(tau), 4);
    // tau sigma tau^-1 = sigma^zeta with zeta = 2
    int lhs = G.conj(tau, sigma);
    int s2 = G.mul(sigma, sigma);
    EXPECT_EQ(lhs, s2);
}

TEST(Builders, DihedralRelationOnSeries)
{
    auto b = dihedral_p(5, 50);
    const FiniteGroup& G = *b.group;
    int sigma = b.named["sigma"], tau = b.named["tau"];
    // -(-t/(1-t)) = t/(1-t) = sigma^{-1}(t)
    Series lhs = compose(compose(b.action.f(tau), b.action.f(sigma)), b.action.f(tau));
    Series rhs = b.action.f(G.inv(sigma));
    EXPECT_TRUE(!(lhs - rhs).has_terms());
}

TEST(Builders, ParameterValidation)
{
    EXPECT_THROW(tame_cyclic(5, 3, 2, 20), math_error);  // 3 does not divide 4
    EXPECT_THROW(tame_cyclic(5, 2, 2, 20), math_error);  // 2 has order 4, not 2
    EXPECT_THROW(metacyclic_p(5, 4, 4, 20), math_error); // 4 has order 2, not 4
    EXPECT_THROW(dihedral_p(2, 20), math_error);
}
