#ifndef EQUIDEFORM_ACTION_HPP
#define EQUIDEFORM_ACTION_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "equideform/cohomology.hpp"
#include "equideform/series.hpp"

namespace equideform {

// A local G-action at finite precision: g -> f_g = rho(g)(t), where rho(g)
// acts on series by substitution u -> u(f_g).  rho(gh) = rho(g) rho(h)
// forces f_{gh} = f_h o f_g, which is what validation checks.
class LocalAction {
public:
    LocalAction() : G_(nullptr), p_(2), prec_(0) {}
    LocalAction(const FiniteGroup& G, uint32_t p, long prec, std::vector<Series> f)
        : G_(&G), p_(p), prec_(prec), f_(std::move(f))
    {
        if (static_cast<int>(f_.size()) != G.order())
            throw math_error("LocalAction: need one series per group element");
        for (auto& s : f_)
            s = s.truncated(prec_);
    }

    const FiniteGroup& group() const { return *G_; }
    uint32_t p() const { return p_; }
    long prec() const { return prec_; }
    const Series& f(int g) const { return f_[g]; }

    // rho(g) applied to a series
    Series act(int g, const Series& u) const { return compose(u, f_[g]); }

    struct Report {
        bool ok = true;
        std::vector<std::string> problems;
        void fail(std::string s)
        {
            ok = false;
            problems.push_back(std::move(s));
        }
    };

    Report validate() const
    {
        Report r;
        const FiniteGroup& G = *G_;
        Series t = Series::t(p_);
        if (!eq_mod(f_[0], t, prec_))
            r.fail("f_e != t");
        for (int g = 0; g < G.order(); ++g) {
            if (!f_[g].has_terms() || f_[g].ord() != 1) {
                r.fail("f_" + std::to_string(g) + " does not have valuation 1");
                return r;
            }
        }
        for (int g = 0; g < G.order() && r.ok; ++g)
            for (int h = 0; h < G.order(); ++h) {
                Series lhs = compose(f_[h], f_[g]);
                Series diff = lhs - f_[G.mul(g, h)];
                if (diff.has_terms()) {
                    r.fail("homomorphism fails at (" + std::to_string(g) + "," +
                           std::to_string(h) + "): rho(g)rho(h) != rho(gh)");
                    break;
                }
            }
        for (int g = 1; g < G.order() && r.ok; ++g) {
            Series diff = f_[g] - Series::t(p_);
            if (!diff.has_terms())
                r.fail("not faithful: f_" + std::to_string(g) + " = t to precision");
        }
        return r;
    }

    // shift order i(g) = ord(f_g - t)
    long shift_order(int g) const
    {
        Series d = f_[g] - Series::t(p_);
        if (!d.has_terms())
            throw precision_error("shift_order: element acts trivially to precision");
        return d.ord();
    }

private:
    const FiniteGroup* G_;
    uint32_t p_;
    long prec_;
    std::vector<Series> f_;
};

// Complete a partial assignment on generators to the whole group along the
// Cayley graph: f_{gs} = f_s o f_g.
inline LocalAction complete_action(const FiniteGroup& G, uint32_t p, long prec,
                                   const std::vector<std::pair<int, Series>>& gens)
{
    std::vector<Series> f(G.order());
    std::vector<char> seen(G.order(), 0);
    f[0] = Series::t(p).truncated(prec);
    seen[0] = 1;
    std::vector<int> queue{0};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int g = queue[qi];
        for (auto& [s, fs] : gens) {
            int gs = G.mul(g, s);
            if (seen[gs])
                continue;
            seen[gs] = 1;
            f[gs] = compose(fs, f[g]).truncated(prec);
            queue.push_back(gs);
        }
    }
    for (int g = 0; g < G.order(); ++g)
        if (!seen[g])
            throw math_error("complete_action: generators do not generate the group");
    return LocalAction(G, p, prec, std::move(f));
}

struct RamificationData {
    std::vector<std::vector<int>> filtration; // G_0 >= G_1 >= ..., last one trivial
    std::vector<bool> normal_in_g;
    int conductor = 0;
    long different_hilbert = 0; // sum over i of (|G_i| - 1)
    long different_ord = 0;     // ord(dy_G / dt)
    bool weakly_ramified = false;
};

inline Series invariant_generator(const LocalAction& a, const Subgroup& N)
{
    std::vector<Series> factors;
    for (int s : N.elements())
        factors.push_back(a.f(s));
    return orbit_product(factors);
}

inline RamificationData ramification(const LocalAction& a)
{
    const FiniteGroup& G = a.group();
    RamificationData rd;
    std::vector<long> shift(G.order(), 0);
    long maxshift = 1;
    for (int g = 1; g < G.order(); ++g) {
        shift[g] = a.shift_order(g);
        maxshift = std::max(maxshift, shift[g]);
    }
    for (long i = 0;; ++i) {
        std::vector<int> elems{0};
        for (int g = 1; g < G.order(); ++g)
            if (shift[g] > i)
                elems.push_back(g);
        Subgroup Gi(G, elems); // throws if the level set is not a subgroup
        rd.filtration.push_back(Gi.elements());
        rd.normal_in_g.push_back(Gi.is_normal());
        rd.different_hilbert += Gi.size() - 1;
        if (Gi.size() == 1)
            break;
    }
    rd.conductor = static_cast<int>(rd.filtration.size()) - 2; // largest i with G_i != 1
    if (rd.conductor < 0)
        rd.conductor = 0; // trivial group
    rd.weakly_ramified = rd.filtration.size() <= 3; // G_2 = 1
    Series yg = invariant_generator(a, Subgroup::whole(G));
    Series dy = yg.derivative();
    if (!dy.has_terms())
        throw precision_error("ramification: dy/dt vanishes to precision");
    rd.different_ord = dy.ord();
    if (rd.different_ord != rd.different_hilbert)
        throw math_error("ramification: Hilbert sum and ord(dy/dt) disagree (" +
                         std::to_string(rd.different_hilbert) + " vs " +
                         std::to_string(rd.different_ord) + ")");
    return rd;
}

inline LocalAction restrict_action(const LocalAction& a, const SubgroupView& view, long prec = -1)
{
    std::vector<Series> f;
    for (int g : view.to_parent)
        f.push_back(a.f(g));
    return LocalAction(view.grp, a.p(), prec < 0 ? a.prec() : prec, std::move(f));
}

// The induced action of G/N on k[[y_N]]: f^sharp(gbar) = act(g)(y_N)
// re-expressed as a series in y_N.
struct QuotientActionData {
    std::shared_ptr<QuotientGroup> Q;
    Series yN;
    LocalAction action; // over Q->group()
};

inline QuotientActionData quotient_action(const LocalAction& a, const Subgroup& N)
{
    QuotientActionData out;
    out.Q = std::make_shared<QuotientGroup>(a.group(), N);
    out.yN = invariant_generator(a, N);
    long qprec = Series::kExactPrec;
    std::vector<Series> f;
    for (int cq = 0; cq < out.Q->order(); ++cq) {
        int g = out.Q->section(cq);
        Series yg = a.act(g, out.yN);
        Series fs = express_in(yg, out.yN);
        if (!fs.has_terms() || fs.ord() != 1)
            throw precision_error("quotient_action: induced series lost its leading term");
        qprec = std::min(qprec, fs.prec());
        f.push_back(fs);
    }
    if (qprec < 2)
        throw precision_error("quotient_action: precision shortfall");
    out.action = LocalAction(out.Q->group(), a.p(), qprec, std::move(f));
    auto rep = out.action.validate();
    if (!rep.ok)
        throw math_error("quotient_action: induced action failed validation: " +
                         rep.problems.front());
    return out;
}

// --- derivation modules ------------------------------------------------------

enum class DerivForm {
    Derivation,  // basis t^i d/dt acting on k[[t]]
    QuotientDer, // basis y^j d/dy acting on k[[y_N]]
    Ideal,       // basis t^{v+i} inside k((t)), substitution action
};

struct DerivationModule {
    DerivForm form;
    long offset; // Ideal: valuation of the first basis vector; else 0
    std::shared_ptr<GModule> mod;

    size_t dim() const { return mod->dim(); }
};

// Action of g on a d/dt is (a o f_g) / f_g' . d/dt.
inline DerivationModule derivation_module_full(const LocalAction& a, size_t M)
{
    const FiniteGroup& G = a.group();
    if (a.prec() < static_cast<long>(M) + 2)
        throw precision_error("derivation_module_full: need series precision >= M + 2");
    std::vector<Matrix> act;
    for (int g = 0; g < G.order(); ++g) {
        Series fg = a.f(g);
        Series dinv = fg.derivative().inverted();
        Matrix A(a.p(), M, M);
        Series pw = Series::one(a.p());
        for (size_t i = 0; i < M; ++i) {
            Series w = (pw * dinv).truncated(M);
            if (w.has_terms() && w.ord() < static_cast<long>(i))
                throw math_error("derivation_module_full: action lowered the filtration");
            for (long e = static_cast<long>(i); e < static_cast<long>(M); ++e)
                A(e, i) = w.coeff(e);
            pw = (pw * fg).truncated(M + 1);
        }
        act.push_back(std::move(A));
    }
    DerivationModule dm;
    dm.form = DerivForm::Derivation;
    dm.offset = 0;
    dm.mod = std::make_shared<GModule>(G, a.p(), std::move(act));
    return dm;
}

// Fractional-ideal form: basis t^{v+i}, substitution action u -> u o f_g.
inline DerivationModule ideal_module(const LocalAction& a, long v, size_t M)
{
    const FiniteGroup& G = a.group();
    if (a.prec() < v + static_cast<long>(M) + 1)
        throw precision_error("ideal_module: need series precision >= v + M + 1");
    std::vector<Matrix> act;
    for (int g = 0; g < G.order(); ++g) {
        Series fg = a.f(g);
        Matrix A(a.p(), M, M);
        Series pw = fg.pow(v >= 0 ? v : 0);
        if (v < 0)
            pw = fg.inverted().pow(-v);
        for (size_t i = 0; i < M; ++i) {
            Series w = pw.truncated(v + static_cast<long>(M));
            if (w.prec() < v + static_cast<long>(M))
                throw precision_error("ideal_module: window does not cover the truncation");
            for (long e = 0; e < static_cast<long>(M); ++e)
                A(e, i) = w.coeff(v + e);
            pw = (pw * fg).truncated(v + static_cast<long>(M) + 1);
        }
        act.push_back(std::move(A));
    }
    DerivationModule dm;
    dm.form = DerivForm::Ideal;
    dm.offset = v;
    dm.mod = std::make_shared<GModule>(G, a.p(), std::move(act));
    return dm;
}

// coefficient series <-> coordinate vectors
inline Vec series_to_coords(const Series& s, long offset, size_t M)
{
    Vec v(M, 0);
    for (long e = offset; e < offset + static_cast<long>(M); ++e) {
        if (e >= s.prec())
            throw precision_error("series_to_coords: window does not cover the module");
        v[e - offset] = s.coeff(e);
    }
    if (s.has_terms() && s.ord() < offset)
        throw math_error("series_to_coords: series sticks out below the module window");
    return v;
}

inline Series coords_to_series(uint32_t p, const Vec& v, long offset)
{
    std::vector<uint32_t> cs(v.begin(), v.end());
    return Series::from_coeffs(p, offset, std::move(cs), offset + static_cast<long>(v.size()));
}

// --- builders ----------------------------------------------------------------

struct BuiltAction {
    std::shared_ptr<FiniteGroup> group;
    LocalAction action;
    std::map<std::string, int> named; // generator names -> element index
};

// sigma : t -> t/(1+t); sigma^k(t) = t/(1+kt); weakly ramified of order p
inline BuiltAction standard_cyclic_p(uint32_t p, long prec)
{
    BuiltAction b;
    b.group = std::make_shared<FiniteGroup>(cyclic_group(p, "Z/" + std::to_string(p)));
    std::vector<Series> f;
    for (uint32_t k = 0; k < p; ++k) {
        Series denom = Series::from_coeffs(p, 0, {1, k % p});
        f.push_back((Series::t(p) * denom.inverted(prec)).truncated(prec));
    }
    b.action = LocalAction(*b.group, p, prec, std::move(f));
    b.named["sigma"] = 1;
    return b;
}

// sigma : t -> zeta t with zeta of exact order m | p-1 (tame)
inline BuiltAction tame_cyclic(uint32_t p, int m, uint32_t zeta, long prec)
{
    PrimeField F(p);
    if (m < 1 || (static_cast<long>(p) - 1) % m != 0)
        throw math_error("tame_cyclic: m must divide p-1");
    uint32_t z = zeta % p;
    uint32_t x = z;
    for (int k = 1; k < m; ++k) {
        if (x == 1)
            throw math_error("tame_cyclic: zeta has order smaller than m");
        x = F.mul(x, z);
    }
    if (x != 1)
        throw math_error("tame_cyclic: zeta^m != 1");
    BuiltAction b;
    b.group = std::make_shared<FiniteGroup>(cyclic_group(m, "Z/" + std::to_string(m) + " tame"));
    std::vector<Series> f;
    uint32_t zk = 1;
    for (int k = 0; k < m; ++k) {
        f.push_back(Series::monomial(p, zk, 1).truncated(prec));
        zk = F.mul(zk, z);
    }
    b.action = LocalAction(*b.group, p, prec, std::move(f));
    b.named["sigma"] = (m > 1) ? 1 : 0;
    return b;
}

// <sigma : t/(1+t), tau : zeta t> with tau sigma tau^-1 = sigma^zeta;
// zeta of exact order m in F_p^*.  dihedral_p is the case m = 2.
inline BuiltAction metacyclic_p(uint32_t p, int m, uint32_t zeta, long prec)
{
    PrimeField F(p);
    uint32_t z = zeta % p;
    {
        uint32_t x = z;
        for (int k = 1; k < m; ++k) {
            if (x == 1)
                throw math_error("metacyclic_p: zeta has order smaller than m");
            x = F.mul(x, z);
        }
        if (x != 1)
            throw math_error("metacyclic_p: zeta^m != 1");
    }
    MetacyclicGroup mg = metacyclic_group(p, m, static_cast<int>(z),
                                          "Z/" + std::to_string(p) + "x|Z/" + std::to_string(m));
    BuiltAction b;
    b.group = std::make_shared<FiniteGroup>(std::move(mg.grp));
    Series fsigma = (Series::t(p) * Series::from_coeffs(p, 0, {1, 1}).inverted(prec)).truncated(prec);
    Series ftau = Series::monomial(p, z, 1).truncated(prec);
    b.action = complete_action(*b.group, p, prec,
                               {{mg.sigma, fsigma}, {mg.tau, ftau}});
    b.named["sigma"] = mg.sigma;
    b.named["tau"] = mg.tau;
    auto rep = b.action.validate();
    if (!rep.ok)
        throw math_error("metacyclic_p: built action failed validation: " + rep.problems.front());
    return b;
}

inline BuiltAction dihedral_p(uint32_t p, long prec)
{
    if (p == 2)
        throw math_error("dihedral_p: p must be odd");
    BuiltAction b = metacyclic_p(p, 2, p - 1, prec);
    b.group->set_name("D" + std::to_string(p));
    return b;
}

} // namespace equideform

#endif
