#include "equideform/matrix.hpp"
#include "equideform/rng.hpp"

#include "gtest/gtest.h"

using namespace equideform;

TEST(PrimeField, Construction)
{
    EXPECT_NO_THROW(PrimeField(2));
    EXPECT_NO_THROW(PrimeField(2147483647)); // 2^31 - 1
    EXPECT_THROW(PrimeField(1), math_error);
    EXPECT_THROW(PrimeField(9), math_error);
    EXPECT_THROW(PrimeField(91), math_error);
}

TEST(PrimeField, Arithmetic)
{
    PrimeField F(7);
    EXPECT_EQ(F.add(5, 4), 2u);
    EXPECT_EQ(F.sub(2, 5), 4u);
    EXPECT_EQ(F.mul(3, 5), 1u);
    EXPECT_EQ(F.inv(3), 5u);
    EXPECT_EQ(F.reduce(-1), 6u);
    EXPECT_THROW(F.inv(0), math_error);
}

TEST(Rank, SpecExamples)
{
    EXPECT_EQ(rank(Matrix::identity(5, 3)), 3u);
    EXPECT_EQ(rank(Matrix(5, 2, 4)), 0u);
    // over F_3, rows {(1,2),(2,1)}: det = 1-4 = -3 = 0, rank 1
    Matrix m(3, 2, 2, {1, 2, 2, 1});
    EXPECT_EQ(rank(m), 1u);
}

TEST(Rank, EqualsTransposeRank)
{
    Rng rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        uint32_t p = (trial % 2) ? 3 : 7;
        size_t r = 1 + rng.below(6), c = 1 + rng.below(6);
        Matrix m(p, r, c);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j)
                m(i, j) = rng.fp_element(p);
        EXPECT_EQ(rank(m), rank(m.transpose()));
    }
}

TEST(Solve, SpecExamples)
{
    // identity: x = b, nullspace trivial
    auto res = solve(Matrix::identity(7, 3), {1, 2, 3});
    ASSERT_TRUE(res.has_value());
    EXPECT_EQ(res->particular, Vec({1, 2, 3}));
    EXPECT_EQ(res->nullspace.dim(), 0u);

    // zero 1x2 matrix, b = (1): inconsistent
    EXPECT_FALSE(solve(Matrix(5, 1, 2), {1}).has_value());

    // over F_2, m = (1 1), b = (0): particular (0,0), nullspace span{(1,1)}
    Matrix m(2, 1, 2, {1, 1});
    auto r2 = solve(m, {0});
    ASSERT_TRUE(r2.has_value());
    EXPECT_EQ(r2->particular, Vec({0, 0}));
    EXPECT_EQ(r2->nullspace.dim(), 1u);
    EXPECT_TRUE(r2->nullspace.contains(Vec{1, 1}));
}

TEST(Solve, ExactOnRandomSystems)
{
    Rng rng(777);
    for (int trial = 0; trial < 60; ++trial) {
        uint32_t p = 5;
        PrimeField F(p);
        size_t r = 1 + rng.below(5), c = 1 + rng.below(5);
        Matrix m(p, r, c);
        for (size_t i = 0; i < r; ++i)
            for (size_t j = 0; j < c; ++j)
                m(i, j) = rng.fp_element(p);
        Vec x0(c);
        for (auto& x : x0)
            x = rng.fp_element(p);
        Vec b = m.apply(x0);
        auto res = solve(m, b);
        ASSERT_TRUE(res.has_value());
        EXPECT_EQ(m.apply(res->particular), b);
        for (size_t i = 0; i < res->nullspace.dim(); ++i)
            EXPECT_EQ(m.apply(res->nullspace.basis_vector(i)), Vec(r, 0));
    }
}

TEST(Subspace, CanonicalRepresentation)
{
    // two different spanning sets for the same plane in F_5^3
    Matrix a(5, 2, 3, {1, 2, 3, 0, 1, 4});
    Matrix b(5, 3, 3, {1, 3, 2, 0, 2, 3, 2, 4, 1});
    auto va = Subspace::from_spanning_rows(a);
    auto vb = Subspace::from_spanning_rows(b);
    ASSERT_EQ(va.dim(), 2u);
    if (va == vb)
        EXPECT_EQ(va.basis(), vb.basis());
}

TEST(QuotientBasis, SpecExamples)
{
    // v = F_3^2, w = F_3^2: empty basis
    auto v = Subspace::full(3, 2);
    EXPECT_TRUE(quotient_basis(v, v).empty());

    // v = F_2^2, w = 0: two representatives
    auto z = Subspace(2, 2);
    EXPECT_EQ(quotient_basis(Subspace::full(2, 2), z).size(), 2u);

    // v = span{(1,0),(0,1)}, w = span{(1,1)} over F_2: one rep not in w
    auto w = Subspace::from_spanning_rows(Matrix(2, 1, 2, {1, 1}));
    auto reps = quotient_basis(Subspace::full(2, 2), w);
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_FALSE(w.contains(reps[0]));

    // w not contained in v: error
    auto line = Subspace::from_spanning_rows(Matrix(2, 1, 2, {1, 0}));
    auto other = Subspace::from_spanning_rows(Matrix(2, 1, 2, {0, 1}));
    EXPECT_THROW(quotient_basis(line, other), math_error);
}

TEST(QuotientBasis, RepsAndWSpanV)
{
    Rng rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        uint32_t p = 3;
        size_t n = 2 + rng.below(5);
        Matrix mv(p, n, n), mw(p, 2, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                mv(i, j) = rng.fp_element(p);
        auto v = Subspace::from_spanning_rows(mv);
        // w = span of two random combinations of v's basis
        PrimeField F(p);
        for (size_t r = 0; r < 2; ++r) {
            Vec acc(n, 0);
            for (size_t i = 0; i < v.dim(); ++i) {
                uint32_t cscale = rng.fp_element(p);
                for (size_t j = 0; j < n; ++j)
                    acc[j] = F.add(acc[j], F.mul(cscale, v.basis_vector(i)[j]));
            }
            mw.set_row(r, acc);
        }
        auto w = Subspace::from_spanning_rows(mw);
        auto reps = quotient_basis(v, w);
        Matrix all(p, w.dim() + reps.size(), n);
        for (size_t i = 0; i < w.dim(); ++i)
            all.set_row(i, w.basis_vector(i));
        for (size_t i = 0; i < reps.size(); ++i)
            all.set_row(w.dim() + i, reps[i]);
        EXPECT_EQ(Subspace::from_spanning_rows(all), v);
    }
}

TEST(Kernel, MatchesSolve)
{
    Matrix m(3, 2, 4, {1, 2, 0, 1, 2, 1, 0, 2});
    auto k = kernel(m);
    for (size_t i = 0; i < k.dim(); ++i)
        EXPECT_EQ(m.apply(k.basis_vector(i)), Vec(2, 0));
    EXPECT_EQ(k.dim() + rank(m), m.cols());
}

TEST(Intersection, Basic)
{
    // two planes in F_5^3 meet in a line
    auto a = Subspace::from_spanning_rows(Matrix(5, 2, 3, {1, 0, 0, 0, 1, 0}));
    auto b = Subspace::from_spanning_rows(Matrix(5, 2, 3, {0, 1, 0, 0, 0, 1}));
    auto c = intersection(a, b);
    EXPECT_EQ(c.dim(), 1u);
    EXPECT_TRUE(c.contains(Vec{0, 1, 0}));
}
