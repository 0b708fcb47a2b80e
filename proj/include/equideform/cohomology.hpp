#ifndef EQUIDEFORM_COHOMOLOGY_HPP
#define EQUIDEFORM_COHOMOLOGY_HPP

#include <memory>
#include <optional>

#include "equideform/gmodule.hpp"

namespace equideform {

// Degree 2 through a normal cyclic Sylow p-subgroup P: restriction is an
// isomorphism onto H^2(P,M)^{G/P}, and for cyclic P the target is
// M^P / Nm(M) with the class of eta read off as S(eta) = sum_j eta(c^j, c).
// Representatives are P-level cochains (no corestriction is attempted).
class H2SylowSpace final : public CohomologySpace {
public:
    // For valuation-windowed modules, Mext may supply the same module on a
    // longer window (coordinate truncation is equivariant); norms are then
    // computed there, so window-top invariants that are norms of elements
    // just beyond the window are correctly recognized as trivial classes.
    explicit H2SylowSpace(const GModule& M, const GModule* Mext = nullptr) : M_(&M)
    {
        const FiniteGroup& G = M.group();
        uint32_t p = M.p();
        // the p-part of |G| and the candidate normal Sylow subgroup
        std::vector<int> pelems;
        for (int g = 0; g < G.order(); ++g) {
            int o = G.order_of(g);
            while (o % p == 0)
                o /= p;
            if (o == 1)
                pelems.push_back(g);
        }
        int ppart = 1, n = G.order();
        while (n % static_cast<int>(p) == 0) {
            n /= p;
            ppart *= p;
        }
        if (static_cast<int>(pelems.size()) != ppart)
            throw math_error("H2SylowSpace: Sylow p-subgroup is not normal");
        Subgroup P(G, pelems);
        if (!P.is_normal())
            throw math_error("H2SylowSpace: Sylow p-subgroup is not normal");
        view_ = std::make_shared<SubgroupView>(make_view(P));
        q_ = P.size();
        gen_ = -1;
        for (int a = 0; a < q_; ++a)
            if (view_->grp.order_of(a) == q_) {
                gen_ = a;
                break;
            }
        if (gen_ < 0)
            throw math_error("H2SylowSpace: Sylow p-subgroup is not cyclic");
        MP_ = std::make_shared<GModule>(M.restricted(*view_));
        // powers and discrete log of the generator
        clog_.assign(q_, -1);
        int x = 0;
        for (int j = 0; j < q_; ++j) {
            cpow_.push_back(x);
            clog_[x] = j;
            x = view_->grp.mul(x, gen_);
        }
        PrimeField F(p);
        size_t m = M.dim();
        if (Mext) {
            // both the invariants and the norms come from the longer
            // window, truncated back: window-top artifacts on either side
            // of M^P / Nm(M) drop out
            if (Mext->dim() < m)
                throw math_error("H2SylowSpace: extension module is smaller than the module");
            GModule MPx = Mext->restricted(*view_);
            size_t mx = MPx.dim();
            Subspace invx = MPx.invariants();
            Matrix invrows(p, invx.dim(), m);
            for (size_t i = 0; i < invx.dim(); ++i) {
                Vec v = invx.basis_vector(i);
                invrows.set_row(i, Vec(v.begin(), v.begin() + m));
            }
            invariants_ = Subspace::from_spanning_rows(invrows);
            Matrix normx(p, mx, mx);
            for (int j = 0; j < q_; ++j)
                normx = normx + MPx.act(cpow_[j]);
            Matrix truncated(p, m, mx);
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < mx; ++j)
                    truncated(i, j) = normx(i, j);
            norm_image_ = image(truncated);
        } else {
            invariants_ = MP_->invariants();
            Matrix norm(p, m, m);
            for (int j = 0; j < q_; ++j)
                norm = norm + MP_->act(cpow_[j]);
            norm_image_ = image(norm);
        }
        if (!invariants_.contains(norm_image_))
            throw math_error("H2SylowSpace: norm image escapes the invariants");
        qcW_ = make_quotient_coords(invariants_, norm_image_);

        // G/P acts on W = M^P/Nm; H^2(G,M) = fixed vectors
        QuotientGroup QP(G, P);
        size_t w = qcW_.dim();
        Matrix stacked(p, std::max<size_t>(1, (QP.order()) * w), w);
        size_t r = 0;
        for (int cq = 0; cq < QP.order(); ++cq) {
            int rep = QP.section(cq);
            for (size_t i = 0; i < w; ++i) {
                Cochain eta = rep_cocycle(qcW_.reps[i]);
                Cochain tw = twist(eta, rep);
                Vec col = qcW_.coords_of(smap(tw));
                for (size_t out = 0; out < w; ++out)
                    stacked(r + out, i) = (out < col.size()) ? col[out] : 0;
            }
            // rows r..r+w hold T_rep; subtract identity for the kernel stack
            for (size_t i = 0; i < w; ++i)
                stacked(r + i, i) = PrimeField(p).sub(stacked(r + i, i), 1);
            r += w;
        }
        fixed_ = (w == 0) ? Subspace(p, 0) : kernel(stacked);
        for (size_t i = 0; i < fixed_.dim(); ++i)
            reps_.push_back(rep_cocycle(qcW_.lift(fixed_.basis_vector(i))));
    }

    int degree() const override { return 2; }
    const GModule& module() const override { return *M_; }
    size_t dim() const override { return fixed_.dim(); }
    // P-level representative cocycles (over the Sylow view group)
    const std::vector<Cochain>& reps() const override { return reps_; }
    size_t cocycle_dim() const override
    {
        throw math_error("H2SylowSpace: full cocycle space not materialized");
    }
    size_t coboundary_dim() const override
    {
        throw math_error("H2SylowSpace: full coboundary space not materialized");
    }

    Vec class_coords(const Cochain& c) const override
    {
        if (!is_cocycle(c))
            throw math_error("H2SylowSpace::class_coords: not a cocycle");
        Cochain cp = restrict_to_view(c);
        Vec wc = qcW_.coords_of(smap(cp));
        return fixed_.coords_of(wc);
    }

    bool reps_on_sylow() const { return true; }
    const SubgroupView& sylow_view() const { return *view_; }

private:
    const GModule* M_;
    std::shared_ptr<SubgroupView> view_;
    std::shared_ptr<GModule> MP_;
    int q_, gen_;
    std::vector<int> cpow_, clog_;
    Subspace invariants_, norm_image_, fixed_;
    QuotientCoords qcW_;
    std::vector<Cochain> reps_;

    Cochain restrict_to_view(const Cochain& c) const
    {
        Cochain r(*MP_, 2);
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b)
                r.set_value({a, b}, c.value({view_->to_parent[a], view_->to_parent[b]}));
        return r;
    }

    // the cocycle eta_x(c^i, c^j) = [i + j >= q] x for invariant x
    Cochain rep_cocycle(const Vec& x) const
    {
        Cochain eta(*MP_, 2);
        for (int i = 0; i < q_; ++i)
            for (int j = 0; j < q_; ++j)
                if (i + j >= q_)
                    eta.set_value({cpow_[i], cpow_[j]}, x);
        return eta;
    }

    // g_* eta (s,t) = g . eta(g^-1 s g, g^-1 t g), with g a parent element
    Cochain twist(const Cochain& eta, int g) const
    {
        const FiniteGroup& G = M_->group();
        Cochain r(*MP_, 2);
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b) {
                int ca = view_->from_parent[G.conj_by_inv(g, view_->to_parent[a])];
                int cb = view_->from_parent[G.conj_by_inv(g, view_->to_parent[b])];
                r.set_value({a, b}, M_->apply(g, eta.value({ca, cb})));
            }
        return r;
    }

    Vec smap(const Cochain& eta) const
    {
        PrimeField F(M_->p());
        Vec s(M_->dim(), 0);
        for (int j = 0; j < q_; ++j) {
            Vec v = eta.value({cpow_[j], gen_});
            for (size_t i = 0; i < s.size(); ++i)
                s[i] = F.add(s[i], v[i]);
        }
        if (!invariants_.contains(s))
            throw math_error("H2SylowSpace: comparison map left the invariants");
        return s;
    }
};

// Dispatch: degree 0 and 1 are always exact and cheap; degree 2 is dense
// brute force when small enough, otherwise goes through the normal cyclic
// Sylow subgroup.
inline CohomPtr cohomology(const GModule& M, int degree)
{
    size_t n = M.group().order(), m = M.dim();
    switch (degree) {
    case 0:
        return std::make_shared<H0Space>(M);
    case 1:
        return std::make_shared<H1Space>(M);
    case 2:
        if (n * n * m <= 1800 && n * n * n * m <= 40000)
            return std::make_shared<H2BruteSpace>(M);
        return std::make_shared<H2SylowSpace>(M);
    default:
        throw math_error("cohomology: only degrees 0..2 are implemented");
    }
}

// Restriction of a cochain to a subgroup (module restricted alongside).
inline Cochain restrict_cochain(const Cochain& c, const GModule& MN, const SubgroupView& view)
{
    int m = view.grp.order();
    Cochain r(MN, c.degree());
    if (c.degree() == 1) {
        for (int a = 0; a < m; ++a)
            r.set_value({a}, c.value({view.to_parent[a]}));
    } else if (c.degree() == 2) {
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                r.set_value({a, b}, c.value({view.to_parent[a], view.to_parent[b]}));
    } else {
        throw math_error("restrict_cochain: degree out of range");
    }
    return r;
}

// Inflation along G -> Q = G/N composed with a coefficient embedding
// iota : W -> M (target dim x source dim), W carrying the Q-action.
inline Cochain inflate_cochain(const Cochain& cq, const QuotientGroup& Q, const Matrix& iota,
                               const GModule& M)
{
    const FiniteGroup& G = Q.parent();
    Cochain r(M, cq.degree());
    if (cq.degree() == 1) {
        for (int g = 0; g < G.order(); ++g)
            r.set_value({g}, iota.apply(cq.value({Q.proj(g)})));
    } else if (cq.degree() == 2) {
        for (int g = 0; g < G.order(); ++g)
            for (int h = 0; h < G.order(); ++h)
                r.set_value({g, h}, iota.apply(cq.value({Q.proj(g), Q.proj(h)})));
    } else {
        throw math_error("inflate_cochain: degree out of range");
    }
    return r;
}

// The standard G/N-action on 1-cochains of a normal subgroup:
// (g_* c)(n) = g . c(g^-1 n g).
inline Cochain gmodn_cochain(const GModule& M, const GModule& MN, const SubgroupView& view, int g,
                             const Cochain& c)
{
    const FiniteGroup& G = M.group();
    Cochain r(MN, 1);
    for (int a = 0; a < view.grp.order(); ++a) {
        int conj = view.from_parent[G.conj_by_inv(g, view.to_parent[a])];
        if (conj < 0)
            throw math_error("gmodn_cochain: subgroup is not normal");
        r.set_value({a}, M.apply(g, c.value({conj})));
    }
    return r;
}

// H^1(N, M) as an explicit G/N-module, plus its invariant subspace.
struct SubH1 {
    std::shared_ptr<SubgroupView> view;
    std::shared_ptr<GModule> mod; // M restricted to N
    std::shared_ptr<H1Space> h1;
    std::vector<Matrix> action;      // per Q element, on H^1 coordinates
    Subspace invariant_classes;      // subspace of H^1 coordinates
    std::shared_ptr<GModule> h1_mod; // H^1(N,M) as a Q-module

    Vec act_on_coords(int qelt, const Vec& coords) const { return action[qelt].apply(coords); }
};

inline SubH1 sub_h1_with_action(const GModule& M, const Subgroup& N, const QuotientGroup& Q,
                                long support_cutoff = -1)
{
    SubH1 out;
    out.view = std::make_shared<SubgroupView>(make_view(N));
    out.mod = std::make_shared<GModule>(M.restricted(*out.view));
    out.h1 = std::make_shared<H1Space>(*out.mod, support_cutoff);
    size_t d = out.h1->dim();
    uint32_t p = M.p();
    for (int cq = 0; cq < Q.order(); ++cq) {
        int rep = Q.section(cq);
        Matrix T(p, d, d);
        for (size_t i = 0; i < d; ++i) {
            Cochain tw = gmodn_cochain(M, *out.mod, *out.view, rep, out.h1->reps()[i]);
            Vec col = out.h1->class_coords(tw);
            for (size_t r = 0; r < d; ++r)
                T(r, i) = col[r];
        }
        out.action.push_back(std::move(T));
    }
    out.h1_mod = std::make_shared<GModule>(Q.group(), p, out.action);
    // simultaneous fixed space of the non-identity actions
    PrimeField F(p);
    Matrix stacked(p, std::max<size_t>(1, Q.order() * d), d);
    for (int cq = 0; cq < Q.order(); ++cq)
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j)
                stacked(cq * d + i, j) =
                    (i == j) ? F.sub(out.action[cq](i, j), 1) : out.action[cq](i, j);
    out.invariant_classes = (d == 0) ? Subspace(p, 0) : kernel(stacked);
    return out;
}

// A stable subspace repackaged as a module over another group, acting
// through chosen matrices on subspace coordinates.
inline GModule module_on_subspace(const FiniteGroup& H, uint32_t p, const Subspace& W,
                                  const std::vector<Matrix>& ambient_act)
{
    size_t d = W.dim();
    std::vector<Matrix> act;
    for (int h = 0; h < H.order(); ++h) {
        Matrix T(p, d, d);
        for (size_t i = 0; i < d; ++i) {
            Vec img = ambient_act[h].apply(W.basis_vector(i));
            Vec c = W.coords_of(img); // throws when the subspace is not stable
            for (size_t r = 0; r < d; ++r)
                T(r, i) = c[r];
        }
        act.push_back(std::move(T));
    }
    return GModule(H, p, std::move(act));
}

// Transgression tg : H^1(N,M)^{G/N} -> H^2(G/N, M^N).  The compatible
// 1-cochain b on G with b|_N = d, b_{sg} = s b_g + b_s and
// b_{gs} = g b_s + b_g is found one coset representative at a time; the
// output 2-cocycle is (g,h) -> g b_h - b_{gh} + b_g read on representatives.
struct TransgressionResult {
    Subspace invariants; // M^N in module coordinates
    std::shared_ptr<GModule> coeff_mod; // M^N as a Q-module
    Cochain eta;                        // 2-cocycle over Q valued in coeff_mod
    Cochain b;                          // the compatible cochain on G (degree 1)
};

inline TransgressionResult transgression(const GModule& M, const Subgroup& N,
                                         const QuotientGroup& Q, const Cochain& d_on_view,
                                         const SubgroupView& view, Rng* randomize = nullptr)
{
    const FiniteGroup& G = M.group();
    PrimeField F(M.p());
    size_t m = M.dim();
    int nn = view.grp.order();
    auto dval = [&](int parent_elt) { return d_on_view.value({view.from_parent[parent_elt]}); };

    Cochain b(M, 1);
    for (int cq = 0; cq < Q.order(); ++cq) {
        int g = Q.section(cq);
        Vec bg(m, 0);
        if (cq != 0) {
            // (act(gsg^-1) - 1) b_g = g d_s - d_{gsg^-1} for all s in N
            Matrix A(M.p(), nn * m, m);
            Vec rhs(nn * m);
            for (int si = 0; si < nn; ++si) {
                int s = view.to_parent[si];
                int s2 = G.conj(g, s);
                const Matrix& As2 = M.act(s2);
                Vec r = M.apply(g, dval(s));
                Vec d2 = dval(s2);
                for (size_t i = 0; i < m; ++i) {
                    for (size_t j = 0; j < m; ++j)
                        A(si * m + i, j) = (i == j) ? F.sub(As2(i, j), 1) : As2(i, j);
                    rhs[si * m + i] = F.sub(r[i], d2[i]);
                }
            }
            auto sol = solve(A, rhs);
            if (!sol)
                throw math_error("transgression: no compatible cochain (class not invariant?)");
            bg = sol->particular;
            if (randomize)
                for (size_t i = 0; i < sol->nullspace.dim(); ++i) {
                    uint32_t k = randomize->fp_element(M.p());
                    Vec nb = sol->nullspace.basis_vector(i);
                    for (size_t j = 0; j < m; ++j)
                        bg[j] = F.add(bg[j], F.mul(k, nb[j]));
                }
        }
        // extend over the coset: b_{sg} = s b_g + d_s
        for (int si = 0; si < nn; ++si) {
            int s = view.to_parent[si];
            int x = G.mul(s, g);
            Vec v = M.apply(s, bg);
            Vec ds = dval(s);
            for (size_t i = 0; i < m; ++i)
                v[i] = F.add(v[i], ds[i]);
            b.set_value({x}, v);
        }
    }

    TransgressionResult out;
    out.invariants = M.invariants_of(N.elements());
    std::vector<Matrix> amb;
    for (int cq = 0; cq < Q.order(); ++cq)
        amb.push_back(M.act(Q.section(cq)));
    out.coeff_mod = std::make_shared<GModule>(
        module_on_subspace(Q.group(), M.p(), out.invariants, amb));
    out.b = b;
    Cochain eta(*out.coeff_mod, 2);
    for (int cq = 0; cq < Q.order(); ++cq)
        for (int ch = 0; ch < Q.order(); ++ch) {
            int g = Q.section(cq), h = Q.section(ch);
            Vec v = M.apply(g, b.value({h}));
            Vec vgh = b.value({G.mul(g, h)});
            Vec vg = b.value({g});
            for (size_t i = 0; i < m; ++i)
                v[i] = F.add(F.sub(v[i], vgh[i]), vg[i]);
            eta.set_value({cq, ch}, out.invariants.coords_of(v));
        }
    if (!is_cocycle(eta))
        throw math_error("transgression: output failed the cocycle check");
    out.eta = std::move(eta);
    return out;
}

// Explicit Hochschild-Serre map on ker(res): for a 2-cocycle eta on G whose
// restriction to N bounds f, the class of
//   xi_g(s) = eta(s,g) - eta(g, g^-1 s g) + g f(g^-1 s g) - f(s)
// in H^1(G/N, H^1(N,M)).
struct HsMapResult {
    SubH1 sub;                         // H^1(N,M) with its Q-action
    std::vector<Cochain> xi;           // per coset: a 1-cocycle on N
    Cochain xi_classes;                // over Q valued in sub.h1_mod
    CohomPtr outer;                    // H^1(Q, H^1(N,M))
    Vec class_coords;
    bool class_is_zero;
    Cochain f;                         // the bounding cochain used
};

inline std::optional<Cochain> hs_find_f(const GModule& MN, const SubgroupView& view,
                                        const Cochain& eta_G)
{
    Cochain etaN = restrict_cochain(eta_G, MN, view);
    if (!is_cocycle(etaN))
        throw math_error("hs_map: restricted cochain is not a cocycle");
    return solve_coboundary_deg2(MN, etaN);
}

inline HsMapResult hs_map(const GModule& M, const Subgroup& N, const QuotientGroup& Q,
                          const Cochain& eta, std::optional<Cochain> f_given = std::nullopt)
{
    if (!is_cocycle(eta))
        throw math_error("hs_map: eta is not a 2-cocycle");
    const FiniteGroup& G = M.group();
    PrimeField F(M.p());
    HsMapResult out;
    out.sub = sub_h1_with_action(M, N, Q);
    const SubgroupView& view = *out.sub.view;
    const GModule& MN = *out.sub.mod;
    std::optional<Cochain> f = f_given;
    if (!f) {
        f = hs_find_f(MN, view, eta);
        if (!f)
            throw math_error("hs_map: eta|_N is not a coboundary");
    } else {
        Cochain check = coboundary(*f) - restrict_cochain(eta, MN, view);
        if (!check.is_zero())
            throw math_error("hs_map: supplied f does not bound eta|_N");
    }
    out.f = *f;
    size_t m = M.dim();
    Cochain xi_classes(*out.sub.h1_mod, 1);
    for (int cq = 0; cq < Q.order(); ++cq) {
        int g = Q.section(cq);
        Cochain xi(MN, 1);
        for (int si = 0; si < view.grp.order(); ++si) {
            int s = view.to_parent[si];
            int cs = G.conj_by_inv(g, s); // g^-1 s g
            Vec v = eta.value({s, g});
            Vec t2 = eta.value({g, cs});
            Vec t3 = M.apply(g, f->value({view.from_parent[cs]}));
            Vec t4 = f->value({si});
            for (size_t i = 0; i < m; ++i)
                v[i] = F.sub(F.add(F.sub(v[i], t2[i]), t3[i]), t4[i]);
            xi.set_value({si}, v);
        }
        if (!is_cocycle(xi))
            throw math_error("hs_map: xi_g is not a 1-cocycle on N");
        xi_classes.set_value({cq}, out.sub.h1->class_coords(xi));
        out.xi.push_back(std::move(xi));
    }
    if (!is_cocycle(xi_classes))
        throw math_error("hs_map: class map is not a 1-cocycle on G/N");
    out.outer = cohomology(*out.sub.h1_mod, 1);
    out.class_coords = out.outer->class_coords(xi_classes);
    out.class_is_zero = true;
    for (uint32_t x : out.class_coords)
        if (x)
            out.class_is_zero = false;
    out.xi_classes = std::move(xi_classes);
    return out;
}

} // namespace equideform

#endif
