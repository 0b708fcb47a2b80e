#ifndef EQUIDEFORM_MATRIX_HPP
#define EQUIDEFORM_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "equideform/fp.hpp"

namespace equideform {

using Vec = std::vector<uint32_t>;

// Dense matrix over F_p, row major.  Vectors are columns: a map is
// y = M * x with M of shape (out_dim x in_dim).
class Matrix {
public:
    Matrix() : p_(2), rows_(0), cols_(0) {}
    Matrix(uint32_t p, size_t rows, size_t cols)
        : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0)
    {
    }
    Matrix(uint32_t p, size_t rows, size_t cols, Vec entries)
        : p_(p), rows_(rows), cols_(cols), a_(std::move(entries))
    {
        if (a_.size() != rows_ * cols_)
            throw math_error("Matrix: entry count does not match shape");
        for (auto& x : a_)
            x %= p_;
    }

    static Matrix identity(uint32_t p, size_t n)
    {
        Matrix m(p, n, n);
        for (size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    uint32_t p() const { return p_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    uint32_t& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
    uint32_t operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }
    const Vec& data() const { return a_; }

    Vec row(size_t i) const { return Vec(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_); }
    void set_row(size_t i, const Vec& v)
    {
        for (size_t j = 0; j < cols_; ++j)
            a_[i * cols_ + j] = v[j] % p_;
    }

    Matrix transpose() const
    {
        Matrix t(p_, cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const
    {
        if (cols_ != o.rows_)
            throw math_error("Matrix: shape mismatch in product");
        PrimeField F(p_);
        Matrix r(p_, rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) {
                uint64_t aik = (*this)(i, k);
                if (!aik)
                    continue;
                for (size_t j = 0; j < o.cols_; ++j)
                    r(i, j) = static_cast<uint32_t>((r(i, j) + aik * o(k, j)) % p_);
            }
        return r;
    }

    Vec apply(const Vec& x) const
    {
        if (x.size() != cols_)
            throw math_error("Matrix: vector length mismatch");
        Vec y(rows_, 0);
        for (size_t i = 0; i < rows_; ++i) {
            uint64_t acc = 0;
            for (size_t j = 0; j < cols_; ++j)
                acc += static_cast<uint64_t>((*this)(i, j)) * x[j] % p_;
            y[i] = static_cast<uint32_t>(acc % p_);
        }
        return y;
    }

    Matrix operator+(const Matrix& o) const
    {
        PrimeField F(p_);
        Matrix r(p_, rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i)
            r.a_[i] = F.add(a_[i], o.a_[i]);
        return r;
    }
    Matrix operator-(const Matrix& o) const
    {
        PrimeField F(p_);
        Matrix r(p_, rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i)
            r.a_[i] = F.sub(a_[i], o.a_[i]);
        return r;
    }

    bool operator==(const Matrix& o) const
    {
        return p_ == o.p_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }

    // In-place reduction to row echelon form.  Returns pivot columns.
    std::vector<size_t> rref()
    {
        PrimeField F(p_);
        std::vector<size_t> pivots;
        size_t r = 0;
        for (size_t c = 0; c < cols_ && r < rows_; ++c) {
            size_t sel = r;
            while (sel < rows_ && (*this)(sel, c) == 0)
                ++sel;
            if (sel == rows_)
                continue;
            if (sel != r)
                for (size_t j = 0; j < cols_; ++j)
                    std::swap(a_[sel * cols_ + j], a_[r * cols_ + j]);
            uint32_t piv_inv = F.inv((*this)(r, c));
            for (size_t j = c; j < cols_; ++j)
                (*this)(r, j) = F.mul((*this)(r, j), piv_inv);
            for (size_t i = 0; i < rows_; ++i) {
                if (i == r)
                    continue;
                uint32_t f = (*this)(i, c);
                if (!f)
                    continue;
                for (size_t j = c; j < cols_; ++j)
                    (*this)(i, j) = F.sub((*this)(i, j), F.mul(f, (*this)(r, j)));
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

private:
    uint32_t p_;
    size_t rows_, cols_;
    Vec a_;
};

inline size_t rank(Matrix m)
{
    return m.rref().size();
}

// Subspace of F_p^n, canonically represented by an RREF basis (rows).
// Two equal subspaces compare equal as representations.
class Subspace {
public:
    Subspace() : p_(2), ambient_(0) {}
    Subspace(uint32_t p, size_t ambient) : p_(p), ambient_(ambient), basis_(p, 0, ambient) {}

    static Subspace from_spanning_rows(const Matrix& rows)
    {
        Subspace s(rows.p(), rows.cols());
        Matrix m = rows;
        auto piv = m.rref();
        Matrix b(rows.p(), piv.size(), rows.cols());
        for (size_t i = 0; i < piv.size(); ++i)
            b.set_row(i, m.row(i));
        s.basis_ = b;
        s.pivots_ = piv;
        return s;
    }
    static Subspace full(uint32_t p, size_t n)
    {
        return from_spanning_rows(Matrix::identity(p, n));
    }

    uint32_t p() const { return p_; }
    size_t ambient_dim() const { return ambient_; }
    size_t dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }
    const std::vector<size_t>& pivots() const { return pivots_; }
    Vec basis_vector(size_t i) const { return basis_.row(i); }

    // Reduce v modulo the subspace; returns the normal-form remainder.
    Vec reduce(Vec v) const
    {
        PrimeField F(p_);
        for (size_t i = 0; i < basis_.rows(); ++i) {
            uint32_t f = v[pivots_[i]];
            if (!f)
                continue;
            for (size_t j = 0; j < ambient_; ++j)
                v[j] = F.sub(v[j], F.mul(f, basis_(i, j)));
        }
        return v;
    }

    bool contains(const Vec& v) const
    {
        Vec r = reduce(v);
        for (uint32_t x : r)
            if (x)
                return false;
        return true;
    }

    bool contains(const Subspace& o) const
    {
        for (size_t i = 0; i < o.dim(); ++i)
            if (!contains(o.basis_vector(i)))
                return false;
        return true;
    }

    // Coordinates of v in the RREF basis; throws if v is outside.
    Vec coords_of(const Vec& v) const
    {
        Vec c(dim());
        for (size_t i = 0; i < dim(); ++i)
            c[i] = v[pivots_[i]];
        // pivot columns of an RREF basis are unit columns, so reading them
        // off gives the unique candidate; verify membership
        PrimeField F(p_);
        Vec check(ambient_, 0);
        for (size_t i = 0; i < dim(); ++i)
            for (size_t j = 0; j < ambient_; ++j)
                check[j] = F.add(check[j], F.mul(c[i], basis_(i, j)));
        if (check != v)
            throw math_error("Subspace::coords_of: vector not in subspace");
        return c;
    }

    Vec from_coords(const Vec& c) const
    {
        PrimeField F(p_);
        Vec v(ambient_, 0);
        for (size_t i = 0; i < dim(); ++i)
            for (size_t j = 0; j < ambient_; ++j)
                v[j] = F.add(v[j], F.mul(c[i], basis_(i, j)));
        return v;
    }

    bool operator==(const Subspace& o) const
    {
        return p_ == o.p_ && ambient_ == o.ambient_ && basis_ == o.basis_;
    }

private:
    uint32_t p_;
    size_t ambient_;
    Matrix basis_;
    std::vector<size_t> pivots_;
};

// Kernel of m (as a space of column vectors x with m x = 0).
inline Subspace kernel(const Matrix& m)
{
    Matrix w = m;
    auto piv = w.rref();
    std::vector<char> is_pivot(m.cols(), 0);
    for (size_t c : piv)
        is_pivot[c] = 1;
    PrimeField F(m.p());
    size_t nfree = m.cols() - piv.size();
    Matrix rows(m.p(), nfree, m.cols());
    size_t r = 0;
    for (size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c])
            continue;
        Vec v(m.cols(), 0);
        v[c] = 1;
        for (size_t i = 0; i < piv.size(); ++i)
            v[piv[i]] = F.neg(w(i, c));
        rows.set_row(r++, v);
    }
    return Subspace::from_spanning_rows(rows);
}

inline Subspace row_space(const Matrix& m)
{
    return Subspace::from_spanning_rows(m);
}

// Column space of m, i.e. the image of x -> m x.
inline Subspace image(const Matrix& m)
{
    return Subspace::from_spanning_rows(m.transpose());
}

struct SolveResult {
    Vec particular;
    Subspace nullspace;
};

// Solve m x = b exactly; absent when inconsistent.
inline std::optional<SolveResult> solve(const Matrix& m, const Vec& b)
{
    if (b.size() != m.rows())
        throw math_error("solve: rhs length mismatch");
    Matrix aug(m.p(), m.rows(), m.cols() + 1);
    for (size_t i = 0; i < m.rows(); ++i) {
        for (size_t j = 0; j < m.cols(); ++j)
            aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i] % m.p();
    }
    auto piv = aug.rref();
    if (!piv.empty() && piv.back() == m.cols())
        return std::nullopt; // a pivot in the rhs column: inconsistent
    Vec x(m.cols(), 0);
    for (size_t i = 0; i < piv.size(); ++i)
        x[piv[i]] = aug(i, m.cols());
    return SolveResult{std::move(x), kernel(m)};
}

// Representatives whose classes form a basis of v / w.  Requires w <= v.
inline std::vector<Vec> quotient_basis(const Subspace& v, const Subspace& w)
{
    if (!v.contains(w))
        throw math_error("quotient_basis: w is not contained in v");
    std::vector<Vec> reps;
    Subspace acc = w;
    for (size_t i = 0; i < v.dim(); ++i) {
        Vec cand = v.basis_vector(i);
        if (acc.contains(cand))
            continue;
        reps.push_back(cand);
        Matrix rows(v.p(), acc.dim() + 1, v.ambient_dim());
        for (size_t r = 0; r < acc.dim(); ++r)
            rows.set_row(r, acc.basis_vector(r));
        rows.set_row(acc.dim(), cand);
        acc = Subspace::from_spanning_rows(rows);
    }
    if (reps.size() != v.dim() - w.dim())
        throw math_error("quotient_basis: internal dimension mismatch");
    return reps;
}

inline Subspace sum(const Subspace& a, const Subspace& b)
{
    Matrix rows(a.p(), a.dim() + b.dim(), a.ambient_dim());
    for (size_t i = 0; i < a.dim(); ++i)
        rows.set_row(i, a.basis_vector(i));
    for (size_t i = 0; i < b.dim(); ++i)
        rows.set_row(a.dim() + i, b.basis_vector(i));
    return Subspace::from_spanning_rows(rows);
}

// Intersection via the kernel of the stacked coefficient matrix.
inline Subspace intersection(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim() != b.ambient_dim())
        throw math_error("intersection: ambient mismatch");
    size_t da = a.dim(), db = b.dim();
    Matrix m(a.p(), a.ambient_dim(), da + db);
    for (size_t j = 0; j < da; ++j) {
        Vec col = a.basis_vector(j);
        for (size_t i = 0; i < a.ambient_dim(); ++i)
            m(i, j) = col[i];
    }
    PrimeField F(a.p());
    for (size_t j = 0; j < db; ++j) {
        Vec col = b.basis_vector(j);
        for (size_t i = 0; i < b.ambient_dim(); ++i)
            m(i, da + j) = F.neg(col[i]);
    }
    Subspace k = kernel(m);
    Matrix rows(a.p(), k.dim(), a.ambient_dim());
    for (size_t r = 0; r < k.dim(); ++r) {
        Vec lam = k.basis_vector(r);
        Vec v(a.ambient_dim(), 0);
        for (size_t j = 0; j < da; ++j)
            for (size_t i = 0; i < a.ambient_dim(); ++i)
                v[i] = F.add(v[i], F.mul(lam[j], a.basis_vector(j)[i]));
        rows.set_row(r, v);
    }
    return Subspace::from_spanning_rows(rows);
}

} // namespace equideform

#endif
