#ifndef EQUIDEFORM_GMODULE_HPP
#define EQUIDEFORM_GMODULE_HPP

#include <memory>
#include <optional>
#include <vector>

#include "equideform/group.hpp"
#include "equideform/matrix.hpp"
#include "equideform/rng.hpp"

namespace equideform {

// Finite-dimensional F_p[G]-module: one invertible matrix per element,
// act(g) act(h) = act(gh) as a left action on column vectors.
class GModule {
public:
    GModule() : G_(nullptr), p_(2), dim_(0) {}
    GModule(const FiniteGroup& G, uint32_t p, std::vector<Matrix> act, bool check = true)
        : G_(&G), p_(p), act_(std::move(act))
    {
        if (static_cast<int>(act_.size()) != G.order())
            throw math_error("GModule: need one matrix per group element");
        dim_ = act_.empty() ? 0 : act_[0].rows();
        for (auto& m : act_)
            if (m.rows() != dim_ || m.cols() != dim_ || m.p() != p_)
                throw math_error("GModule: matrix shape mismatch");
        if (check)
            validate();
    }

    static GModule trivial(const FiniteGroup& G, uint32_t p, size_t dim)
    {
        std::vector<Matrix> act(G.order(), Matrix::identity(p, dim));
        return GModule(G, p, std::move(act), false);
    }

    const FiniteGroup& group() const { return *G_; }
    uint32_t p() const { return p_; }
    size_t dim() const { return dim_; }
    const Matrix& act(int g) const { return act_[g]; }
    Vec apply(int g, const Vec& v) const { return act_[g].apply(v); }

    void validate() const
    {
        if (!(act_[0] == Matrix::identity(p_, dim_)))
            throw math_error("GModule: identity does not act as identity");
        for (int g = 0; g < G_->order(); ++g)
            for (int h = 0; h < G_->order(); ++h)
                if (!(act_[g] * act_[h] == act_[G_->mul(g, h)]))
                    throw math_error("GModule: action is not a homomorphism");
    }

    // Fixed space of the whole group.
    Subspace invariants() const
    {
        size_t n = G_->order();
        Matrix stacked(p_, n * dim_, dim_);
        for (size_t g = 0; g < n; ++g) {
            PrimeField F(p_);
            for (size_t i = 0; i < dim_; ++i)
                for (size_t j = 0; j < dim_; ++j) {
                    uint32_t v = act_[g](i, j);
                    if (i == j)
                        v = F.sub(v, 1);
                    stacked(g * dim_ + i, j) = v;
                }
        }
        return kernel(stacked);
    }

    // Fixed space of a subgroup.
    Subspace invariants_of(const std::vector<int>& elems) const
    {
        PrimeField F(p_);
        Matrix stacked(p_, elems.size() * dim_, dim_);
        for (size_t k = 0; k < elems.size(); ++k)
            for (size_t i = 0; i < dim_; ++i)
                for (size_t j = 0; j < dim_; ++j) {
                    uint32_t v = act_[elems[k]](i, j);
                    if (i == j)
                        v = F.sub(v, 1);
                    stacked(k * dim_ + i, j) = v;
                }
        return kernel(stacked);
    }

    GModule restricted(const SubgroupView& view) const
    {
        std::vector<Matrix> act;
        act.reserve(view.to_parent.size());
        for (int g : view.to_parent)
            act.push_back(act_[g]);
        return GModule(view.grp, p_, std::move(act), false);
    }

private:
    const FiniteGroup* G_;
    uint32_t p_;
    size_t dim_;
    std::vector<Matrix> act_;
};

// Inhomogeneous n-cochain, a total map G^n -> M stored flat.
class Cochain {
public:
    Cochain() : M_(nullptr), deg_(0) {}
    Cochain(const GModule& M, int deg) : M_(&M), deg_(deg)
    {
        size_t cells = 1;
        for (int i = 0; i < deg; ++i)
            cells *= M.group().order();
        v_.assign(cells * M.dim(), 0);
    }

    const GModule& module() const { return *M_; }
    int degree() const { return deg_; }
    const std::vector<uint32_t>& flat() const { return v_; }
    std::vector<uint32_t>& flat() { return v_; }

    size_t cell(std::initializer_list<int> tuple) const
    {
        size_t idx = 0;
        for (int g : tuple)
            idx = idx * M_->group().order() + static_cast<size_t>(g);
        return idx;
    }
    Vec value(std::initializer_list<int> tuple) const
    {
        size_t c = cell(tuple), m = M_->dim();
        return Vec(v_.begin() + c * m, v_.begin() + (c + 1) * m);
    }
    void set_value(std::initializer_list<int> tuple, const Vec& val)
    {
        size_t c = cell(tuple), m = M_->dim();
        for (size_t i = 0; i < m; ++i)
            v_[c * m + i] = val[i] % M_->p();
    }

    Cochain operator+(const Cochain& o) const
    {
        PrimeField F(M_->p());
        Cochain r = *this;
        for (size_t i = 0; i < v_.size(); ++i)
            r.v_[i] = F.add(v_[i], o.v_[i]);
        return r;
    }
    Cochain operator-(const Cochain& o) const
    {
        PrimeField F(M_->p());
        Cochain r = *this;
        for (size_t i = 0; i < v_.size(); ++i)
            r.v_[i] = F.sub(v_[i], o.v_[i]);
        return r;
    }
    Cochain scaled(uint32_t k) const
    {
        PrimeField F(M_->p());
        Cochain r = *this;
        for (auto& x : r.v_)
            x = F.mul(x, k);
        return r;
    }
    bool is_zero() const
    {
        for (uint32_t x : v_)
            if (x)
                return false;
        return true;
    }
    bool operator==(const Cochain& o) const { return deg_ == o.deg_ && v_ == o.v_; }

private:
    const GModule* M_;
    int deg_;
    std::vector<uint32_t> v_;
};

// Standard inhomogeneous coboundary, degrees 0..2.
inline Cochain coboundary(const Cochain& c)
{
    const GModule& M = c.module();
    const FiniteGroup& G = M.group();
    PrimeField F(M.p());
    int n = G.order();
    auto sub3 = [&](Vec a, const Vec& b) {
        for (size_t i = 0; i < a.size(); ++i)
            a[i] = F.sub(a[i], b[i]);
        return a;
    };
    auto add3 = [&](Vec a, const Vec& b) {
        for (size_t i = 0; i < a.size(); ++i)
            a[i] = F.add(a[i], b[i]);
        return a;
    };
    switch (c.degree()) {
    case 0: {
        Cochain d(M, 1);
        Vec v = c.value({});
        for (int g = 0; g < n; ++g)
            d.set_value({g}, sub3(M.apply(g, v), v));
        return d;
    }
    case 1: {
        Cochain d(M, 2);
        for (int g = 0; g < n; ++g)
            for (int h = 0; h < n; ++h) {
                Vec t = M.apply(g, c.value({h}));
                t = sub3(std::move(t), c.value({G.mul(g, h)}));
                t = add3(std::move(t), c.value({g}));
                d.set_value({g, h}, t);
            }
        return d;
    }
    case 2: {
        Cochain d(M, 3);
        for (int g = 0; g < n; ++g)
            for (int h = 0; h < n; ++h)
                for (int k = 0; k < n; ++k) {
                    Vec t = M.apply(g, c.value({h, k}));
                    t = sub3(std::move(t), c.value({G.mul(g, h), k}));
                    t = add3(std::move(t), c.value({g, G.mul(h, k)}));
                    t = sub3(std::move(t), c.value({g, h}));
                    d.set_value({g, h, k}, t);
                }
        return d;
    }
    default:
        throw math_error("coboundary: degree out of range");
    }
}

inline bool is_cocycle(const Cochain& c)
{
    return coboundary(c).is_zero();
}

// Normalize a 2-cocycle so eta(e,.) = eta(.,e) = 0, by subtracting the
// coboundary of b(g) = eta(g, e).
inline Cochain normalized_2cocycle(const Cochain& eta)
{
    const GModule& M = eta.module();
    Cochain b(M, 1);
    for (int g = 0; g < M.group().order(); ++g)
        b.set_value({g}, eta.value({g, 0}));
    return eta - coboundary(b);
}

// --- generator-based machinery ----------------------------------------------

// Greedy minimal generating set (smallest indices first).
inline std::vector<int> minimal_generators(const FiniteGroup& G)
{
    std::vector<int> gens;
    Subgroup span = Subgroup::trivial(G);
    for (int g = 1; g < G.order(); ++g) {
        if (span.contains(g))
            continue;
        gens.push_back(g);
        span = Subgroup::generated(G, gens);
        if (span.size() == G.order())
            break;
    }
    if (G.order() > 1 && span.size() != G.order())
        throw math_error("minimal_generators: failed to generate");
    return gens;
}

// Affine propagation of 1-cochain values from generator values along the
// Cayley graph: a 1-cocycle satisfies x(g s) = g x(s) + x(g), so x is
// determined by its generator values; the map g -> P_g is the linear part.
struct GenData {
    const GModule* M;
    std::vector<int> gens;
    std::vector<Matrix> P; // per element: dim x (dim*|gens|)

    size_t ucols() const { return M->dim() * gens.size(); }

    Vec table_from_u(const Vec& u, int g) const { return P[g].apply(u); }

    Cochain cochain_from_u(const Vec& u) const
    {
        Cochain c(*M, 1);
        for (int g = 0; g < M->group().order(); ++g)
            c.set_value({g}, P[g].apply(u));
        return c;
    }

    Vec u_of(const Cochain& c) const
    {
        Vec u;
        u.reserve(ucols());
        for (int s : gens) {
            Vec v = c.value({s});
            u.insert(u.end(), v.begin(), v.end());
        }
        return u;
    }
};

inline GenData build_gen_data(const GModule& M)
{
    const FiniteGroup& G = M.group();
    GenData gd;
    gd.M = &M;
    gd.gens = minimal_generators(G);
    size_t m = M.dim(), S = gd.gens.size(), cols = m * std::max<size_t>(S, 1);
    gd.P.assign(G.order(), Matrix(M.p(), m, cols));
    std::vector<char> seen(G.order(), 0);
    seen[0] = 1;
    std::vector<int> queue{0};
    PrimeField F(M.p());
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int g = queue[qi];
        for (size_t si = 0; si < gd.gens.size(); ++si) {
            int gs = G.mul(g, gd.gens[si]);
            if (seen[gs])
                continue;
            seen[gs] = 1;
            // P[gs] = P[g] + act(g) placed in block si
            Matrix Pnew = gd.P[g];
            const Matrix& A = M.act(g);
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < m; ++j)
                    Pnew(i, si * m + j) = F.add(Pnew(i, si * m + j), A(i, j));
            gd.P[gs] = std::move(Pnew);
            queue.push_back(gs);
        }
    }
    if (static_cast<int>(queue.size()) != G.order())
        throw math_error("build_gen_data: generators do not generate");
    return gd;
}

// --- cohomology space descriptors -------------------------------------------

// Representatives spanning a complement of `denom` inside `total`, with
// coordinate extraction for the quotient total/denom.
struct QuotientCoords {
    Subspace total;
    Subspace denom;
    std::vector<Vec> reps;

    size_t dim() const { return reps.size(); }

    Vec coords_of(const Vec& v) const
    {
        // solve v = sum x_i reps_i + w, w in denom
        size_t amb = denom.ambient_dim();
        Matrix mat(denom.p(), amb, reps.size() + denom.dim());
        for (size_t j = 0; j < reps.size(); ++j)
            for (size_t i = 0; i < amb; ++i)
                mat(i, j) = reps[j][i];
        for (size_t j = 0; j < denom.dim(); ++j) {
            Vec b = denom.basis_vector(j);
            for (size_t i = 0; i < amb; ++i)
                mat(i, reps.size() + j) = b[i];
        }
        auto sol = solve(mat, v);
        if (!sol)
            throw math_error("QuotientCoords: vector not in the total space");
        return Vec(sol->particular.begin(), sol->particular.begin() + reps.size());
    }

    Vec lift(const Vec& coords) const
    {
        PrimeField F(denom.p());
        Vec v(denom.ambient_dim(), 0);
        for (size_t j = 0; j < reps.size(); ++j)
            for (size_t i = 0; i < v.size(); ++i)
                v[i] = F.add(v[i], F.mul(coords[j], reps[j][i]));
        return v;
    }
};

inline QuotientCoords make_quotient_coords(const Subspace& total, const Subspace& denom)
{
    QuotientCoords qc;
    qc.total = total;
    qc.denom = denom;
    qc.reps = quotient_basis(total, denom);
    return qc;
}

// Abstract cohomology space: dimension, representative cocycles, class
// coordinates of arbitrary cocycles.
class CohomologySpace {
public:
    virtual ~CohomologySpace() = default;
    virtual int degree() const = 0;
    virtual const GModule& module() const = 0;
    virtual size_t dim() const = 0;
    virtual const std::vector<Cochain>& reps() const = 0;
    virtual Vec class_coords(const Cochain& cocycle) const = 0;
    virtual size_t cocycle_dim() const = 0;
    virtual size_t coboundary_dim() const = 0;

    bool class_is_zero(const Cochain& c) const
    {
        for (uint32_t x : class_coords(c))
            if (x)
                return false;
        return true;
    }
    Cochain from_coords(const Vec& coords) const
    {
        Cochain acc(module(), degree());
        for (size_t i = 0; i < dim(); ++i)
            acc = acc + reps()[i].scaled(coords[i]);
        return acc;
    }
    Cochain random_cocycle(Rng& rng) const
    {
        Cochain acc = random_coboundary(rng);
        for (size_t i = 0; i < dim(); ++i)
            acc = acc + reps()[i].scaled(rng.fp_element(module().p()));
        return acc;
    }
    virtual Cochain random_coboundary(Rng& rng) const
    {
        Cochain lower(module(), degree() - 1);
        auto& v = lower.flat();
        for (auto& x : v)
            x = rng.fp_element(module().p());
        return coboundary(lower);
    }
};

using CohomPtr = std::shared_ptr<const CohomologySpace>;

class H0Space final : public CohomologySpace {
public:
    explicit H0Space(const GModule& M) : M_(&M), inv_(M.invariants())
    {
        for (size_t i = 0; i < inv_.dim(); ++i) {
            Cochain c(M, 0);
            c.set_value({}, inv_.basis_vector(i));
            reps_.push_back(c);
        }
    }
    int degree() const override { return 0; }
    const GModule& module() const override { return *M_; }
    size_t dim() const override { return inv_.dim(); }
    const std::vector<Cochain>& reps() const override { return reps_; }
    Vec class_coords(const Cochain& c) const override { return inv_.coords_of(c.value({})); }
    size_t cocycle_dim() const override { return inv_.dim(); }
    size_t coboundary_dim() const override { return 0; }
    Cochain random_coboundary(Rng&) const override { return Cochain(*M_, 0); }
    const Subspace& invariants() const { return inv_; }

private:
    const GModule* M_;
    Subspace inv_;
    std::vector<Cochain> reps_;
};

// Degree 1, computed on generator coordinates: cheap for any group the
// artifact meets.
//
// For modules that are valuation windows (coordinate i = filtration level
// i), a support_cutoff c may be supplied: classes of cocycles supported in
// levels >= c are treated as zero.  With c = d - |G| + 1 this is exactly
// the effective Hilbert 90 vanishing range, which also disposes of the
// spurious cocycles the finite window manufactures near its top.
class H1Space final : public CohomologySpace {
public:
    explicit H1Space(const GModule& M, long support_cutoff = -1)
        : M_(&M), cutoff_(support_cutoff), gd_(build_gen_data(M))
    {
        const FiniteGroup& G = M.group();
        PrimeField F(M.p());
        size_t m = M.dim(), S = gd_.gens.size(), cols = gd_.ucols();
        if (G.order() == 1 || m == 0 || S == 0) {
            z1_ = Subspace(M.p(), cols);
            b1_ = Subspace(M.p(), cols);
            denom_ = b1_;
            qc_ = make_quotient_coords(z1_, b1_);
            return;
        }
        // constraint rows: for every (g, s): P_g + act(g) E_s - P_{gs} = 0
        Matrix C(M.p(), G.order() * S * m, cols);
        size_t r = 0;
        for (int g = 0; g < G.order(); ++g)
            for (size_t si = 0; si < S; ++si) {
                int gs = G.mul(g, gd_.gens[si]);
                const Matrix& A = M.act(g);
                for (size_t i = 0; i < m; ++i, ++r)
                    for (size_t j = 0; j < cols; ++j) {
                        uint32_t v = F.sub(gd_.P[g](i, j), gd_.P[gs](i, j));
                        size_t blk = j / m;
                        if (blk == si)
                            v = F.add(v, A(i, j % m));
                        C(r, j) = v;
                    }
            }
        z1_ = kernel(C);
        // coboundaries in generator coordinates
        Matrix B(M.p(), m, cols);
        for (size_t i = 0; i < m; ++i) {
            Vec e(m, 0);
            e[i] = 1;
            for (size_t si = 0; si < S; ++si) {
                Vec w = M.apply(gd_.gens[si], e);
                for (size_t j = 0; j < m; ++j)
                    B(i, si * m + j) = F.sub(w[j], e[j]);
            }
        }
        b1_ = Subspace::from_spanning_rows(B);
        if (!z1_.contains(b1_))
            throw math_error("H1Space: coboundaries are not cocycles (module defect)");
        denom_ = b1_;
        if (cutoff_ >= 0 && cutoff_ < static_cast<long>(m)) {
            // cocycles supported only in levels >= cutoff
            size_t low = static_cast<size_t>(cutoff_);
            Matrix lowrows(M.p(), G.order() * low, cols);
            for (int g = 0; g < G.order(); ++g)
                for (size_t i = 0; i < low; ++i)
                    for (size_t j = 0; j < cols; ++j)
                        lowrows(g * low + i, j) = gd_.P[g](i, j);
            Subspace high = intersection(kernel(lowrows), z1_);
            denom_ = sum(b1_, high);
            if (!z1_.contains(denom_))
                throw math_error("H1Space: cutoff denominator escaped the cocycles");
        }
        qc_ = make_quotient_coords(z1_, denom_);
        for (const Vec& u : qc_.reps)
            reps_.push_back(gd_.cochain_from_u(u));
    }

    int degree() const override { return 1; }
    const GModule& module() const override { return *M_; }
    size_t dim() const override { return qc_.dim(); }
    const std::vector<Cochain>& reps() const override { return reps_; }
    size_t cocycle_dim() const override { return z1_.dim(); }
    size_t coboundary_dim() const override { return b1_.dim(); }
    long support_cutoff() const { return cutoff_; }

    Vec class_coords(const Cochain& c) const override
    {
        if (!is_cocycle(c))
            throw math_error("H1Space::class_coords: not a cocycle");
        return qc_.coords_of(gd_.u_of(c));
    }

    Cochain cocycle_from_u(const Vec& u) const { return gd_.cochain_from_u(u); }
    const GenData& gen_data() const { return gd_; }
    const Subspace& z1_u() const { return z1_; }
    const Subspace& b1_u() const { return b1_; }

    Cochain random_z1(Rng& rng) const
    {
        PrimeField F(M_->p());
        Vec u(gd_.ucols(), 0);
        for (size_t i = 0; i < z1_.dim(); ++i) {
            uint32_t k = rng.fp_element(M_->p());
            Vec b = z1_.basis_vector(i);
            for (size_t j = 0; j < u.size(); ++j)
                u[j] = F.add(u[j], F.mul(k, b[j]));
        }
        return gd_.cochain_from_u(u);
    }

private:
    const GModule* M_;
    long cutoff_;
    GenData gd_;
    Subspace z1_, b1_, denom_;
    QuotientCoords qc_;
    std::vector<Cochain> reps_;
};

// Degree 2 by dense kernel/image; only for small |G|^2 * dim.
class H2BruteSpace final : public CohomologySpace {
public:
    explicit H2BruteSpace(const GModule& M) : M_(&M)
    {
        const FiniteGroup& G = M.group();
        size_t n = G.order(), m = M.dim();
        size_t c2 = n * n * m, c1 = n * m;
        PrimeField F(M.p());
        // d2 : C^2 -> C^3
        Matrix d2(M.p(), n * n * n * m, c2);
        for (size_t g = 0; g < n; ++g)
            for (size_t h = 0; h < n; ++h)
                for (size_t k = 0; k < n; ++k) {
                    size_t row0 = ((g * n + h) * n + k) * m;
                    auto addblk = [&](size_t cell, const Matrix* A, bool negate) {
                        for (size_t i = 0; i < m; ++i)
                            for (size_t j = 0; j < m; ++j) {
                                uint32_t v = A ? (*A)(i, j) : (i == j ? 1u : 0u);
                                if (!v)
                                    continue;
                                if (negate)
                                    v = F.neg(v);
                                d2(row0 + i, cell * m + j) = F.add(d2(row0 + i, cell * m + j), v);
                            }
                    };
                    addblk(h * n + k, &M.act(static_cast<int>(g)), false);
                    addblk(G.mul(g, h) * n + k, nullptr, true);
                    addblk(g * n + G.mul(h, k), nullptr, false);
                    addblk(g * n + h, nullptr, true);
                }
        z2_ = kernel(d2);
        // d1 : C^1 -> C^2
        Matrix d1(M.p(), c2, c1);
        for (size_t g = 0; g < n; ++g)
            for (size_t h = 0; h < n; ++h) {
                size_t row0 = (g * n + h) * m;
                auto addblk = [&](size_t cell, const Matrix* A, bool negate) {
                    for (size_t i = 0; i < m; ++i)
                        for (size_t j = 0; j < m; ++j) {
                            uint32_t v = A ? (*A)(i, j) : (i == j ? 1u : 0u);
                            if (!v)
                                continue;
                            if (negate)
                                v = F.neg(v);
                            d1(row0 + i, cell * m + j) = F.add(d1(row0 + i, cell * m + j), v);
                        }
                };
                addblk(h, &M.act(static_cast<int>(g)), false);
                addblk(G.mul(g, h), nullptr, true);
                addblk(g, nullptr, false);
            }
        b2_ = image(d1);
        if (!z2_.contains(b2_))
            throw math_error("H2BruteSpace: coboundaries are not cocycles");
        qc_ = make_quotient_coords(z2_, b2_);
        for (const Vec& v : qc_.reps) {
            Cochain c(M, 2);
            c.flat() = v;
            reps_.push_back(std::move(c));
        }
    }

    int degree() const override { return 2; }
    const GModule& module() const override { return *M_; }
    size_t dim() const override { return qc_.dim(); }
    const std::vector<Cochain>& reps() const override { return reps_; }
    size_t cocycle_dim() const override { return z2_.dim(); }
    size_t coboundary_dim() const override { return b2_.dim(); }

    Vec class_coords(const Cochain& c) const override
    {
        if (!is_cocycle(c))
            throw math_error("H2BruteSpace::class_coords: not a cocycle");
        return qc_.coords_of(c.flat());
    }

    const Subspace& z2() const { return z2_; }
    const Subspace& b2() const { return b2_; }

private:
    const GModule* M_;
    Subspace z2_, b2_;
    QuotientCoords qc_;
    std::vector<Cochain> reps_;
};

// Witness solver: is the 1-cochain c a coboundary?  Returns the degree-0
// witness when it is.
inline std::optional<Vec> solve_coboundary_deg1(const GModule& M, const Cochain& c)
{
    const FiniteGroup& G = M.group();
    size_t n = G.order(), m = M.dim();
    PrimeField F(M.p());
    Matrix A(M.p(), n * m, m);
    Vec rhs(n * m);
    for (size_t g = 0; g < n; ++g) {
        const Matrix& Ag = M.act(static_cast<int>(g));
        Vec cg = c.value({static_cast<int>(g)});
        for (size_t i = 0; i < m; ++i) {
            for (size_t j = 0; j < m; ++j)
                A(g * m + i, j) = (i == j) ? F.sub(Ag(i, j), 1) : Ag(i, j);
            rhs[g * m + i] = cg[i];
        }
    }
    auto sol = solve(A, rhs);
    if (!sol)
        return std::nullopt;
    return sol->particular;
}

// Witness solver for 2-cocycles: find u with du = eta, via the recursion
// u(gs) = g u(s) + u(g) - eta(g, s) on the Cayley graph.  eta must be an
// exact 2-cocycle; the recursion then certifies the full identity.
inline std::optional<Cochain> solve_coboundary_deg2(const GModule& M, const Cochain& eta,
                                                    Rng* randomize = nullptr)
{
    if (!is_cocycle(eta))
        throw math_error("solve_coboundary_deg2: input is not a 2-cocycle");
    const FiniteGroup& G = M.group();
    GenData gd = build_gen_data(M);
    size_t n = G.order(), m = M.dim(), S = gd.gens.size(), cols = gd.ucols();
    PrimeField F(M.p());
    if (n == 1) {
        Cochain u(M, 1);
        return u;
    }
    // affine offsets q_g: X(g) = P_g u + q_g; a solution has
    // x(e) = eta(e,e), so the propagation starts there
    std::vector<Vec> q(n, Vec(m, 0));
    q[0] = eta.value({0, 0});
    {
        std::vector<char> seen(n, 0);
        seen[0] = 1;
        std::vector<int> queue{0};
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int g = queue[qi];
            for (int s : gd.gens) {
                int gs = G.mul(g, s);
                if (seen[gs])
                    continue;
                seen[gs] = 1;
                Vec e = eta.value({g, s});
                Vec val = q[g];
                for (size_t i = 0; i < m; ++i)
                    val[i] = F.sub(val[i], e[i]);
                q[gs] = std::move(val);
                queue.push_back(gs);
            }
        }
    }
    Matrix A(M.p(), n * S * m, cols);
    Vec rhs(n * S * m);
    size_t r = 0;
    for (size_t g = 0; g < n; ++g)
        for (size_t si = 0; si < S; ++si) {
            int s = gd.gens[si];
            int gs = G.mul(static_cast<int>(g), s);
            const Matrix& Ag = M.act(static_cast<int>(g));
            Vec e = eta.value({static_cast<int>(g), s});
            Vec gqs = Ag.apply(q[s]);
            for (size_t i = 0; i < m; ++i, ++r) {
                for (size_t j = 0; j < cols; ++j) {
                    uint32_t v = F.sub(gd.P[g](i, j), gd.P[gs](i, j));
                    if (j / m == si)
                        v = F.add(v, Ag(i, j % m));
                    A(r, j) = v;
                }
                rhs[r] = F.sub(F.add(e[i], F.sub(q[gs][i], q[g][i])), gqs[i]);
            }
        }
    auto sol = solve(A, rhs);
    if (!sol)
        return std::nullopt;
    Vec u = sol->particular;
    if (randomize) {
        for (size_t i = 0; i < sol->nullspace.dim(); ++i) {
            uint32_t k = randomize->fp_element(M.p());
            Vec b = sol->nullspace.basis_vector(i);
            for (size_t j = 0; j < cols; ++j)
                u[j] = F.add(u[j], F.mul(k, b[j]));
        }
    }
    Cochain out(M, 1);
    for (size_t g = 0; g < n; ++g) {
        Vec val = gd.P[g].apply(u);
        for (size_t i = 0; i < m; ++i)
            val[i] = F.add(val[i], q[g][i]);
        out.set_value({static_cast<int>(g)}, val);
    }
    if (!(coboundary(out) == eta))
        throw math_error("solve_coboundary_deg2: verification failed");
    return out;
}

} // namespace equideform

#endif
