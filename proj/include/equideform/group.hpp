#ifndef EQUIDEFORM_GROUP_HPP
#define EQUIDEFORM_GROUP_HPP

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "equideform/fp.hpp"

namespace equideform {

// Finite group given by its full multiplication table; element 0 is the
// identity.  Associativity, identity and inverses are checked at
// construction.
class FiniteGroup {
public:
    FiniteGroup() : n_(1), table_{0}, inv_{0} {}
    FiniteGroup(std::vector<std::vector<int>> table, std::string name = "")
        : name_(std::move(name))
    {
        n_ = static_cast<int>(table.size());
        if (n_ == 0)
            throw math_error("FiniteGroup: empty table");
        table_.assign(n_ * n_, 0);
        for (int i = 0; i < n_; ++i) {
            if (static_cast<int>(table[i].size()) != n_)
                throw math_error("FiniteGroup: table is not square");
            for (int j = 0; j < n_; ++j) {
                int v = table[i][j];
                if (v < 0 || v >= n_)
                    throw math_error("FiniteGroup: entry out of range");
                table_[i * n_ + j] = v;
            }
        }
        validate();
    }

    int order() const { return n_; }
    int mul(int a, int b) const { return table_[a * n_ + b]; }
    int inv(int a) const { return inv_[a]; }
    int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }        // g x g^-1
    int conj_by_inv(int g, int x) const { return mul(mul(inv(g), x), g); } // g^-1 x g
    const std::string& name() const { return name_; }
    void set_name(std::string s) { name_ = std::move(s); }

    int order_of(int g) const
    {
        int x = g, k = 1;
        while (x != 0) {
            x = mul(x, g);
            ++k;
        }
        return k;
    }

    std::vector<std::vector<int>> table() const
    {
        std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                t[i][j] = mul(i, j);
        return t;
    }

private:
    int n_;
    std::vector<int> table_;
    std::vector<int> inv_;
    std::string name_;

    void validate()
    {
        for (int i = 0; i < n_; ++i)
            if (mul(0, i) != i || mul(i, 0) != i)
                throw math_error("FiniteGroup: element 0 is not an identity");
        inv_.assign(n_, -1);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j)
                if (mul(i, j) == 0 && mul(j, i) == 0) {
                    inv_[i] = j;
                    break;
                }
            if (inv_[i] < 0)
                throw math_error("FiniteGroup: missing inverse");
        }
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                for (int c = 0; c < n_; ++c)
                    if (mul(mul(a, b), c) != mul(a, mul(b, c)))
                        throw math_error("FiniteGroup: associativity fails");
    }
};

// A subgroup as a sorted index set, closed under product and inverse.
class Subgroup {
public:
    Subgroup() : G_(nullptr) {}
    Subgroup(const FiniteGroup& G, std::vector<int> elems) : G_(&G), elems_(std::move(elems))
    {
        std::sort(elems_.begin(), elems_.end());
        elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
        pos_.assign(G.order(), -1);
        for (size_t i = 0; i < elems_.size(); ++i)
            pos_[elems_[i]] = static_cast<int>(i);
        if (elems_.empty() || elems_[0] != 0)
            throw math_error("Subgroup: must contain the identity");
        for (int a : elems_)
            for (int b : elems_)
                if (pos_[G.mul(a, b)] < 0)
                    throw math_error("Subgroup: not closed under multiplication");
        for (int a : elems_)
            if (pos_[G.inv(a)] < 0)
                throw math_error("Subgroup: not closed under inverse");
    }

    static Subgroup generated(const FiniteGroup& G, const std::vector<int>& gens)
    {
        std::vector<char> in(G.order(), 0);
        in[0] = 1;
        std::vector<int> stack{0};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int s : gens) {
                for (int y : {G.mul(x, s), G.mul(x, G.inv(s))})
                    if (!in[y]) {
                        in[y] = 1;
                        stack.push_back(y);
                    }
            }
        }
        std::vector<int> elems;
        for (int i = 0; i < G.order(); ++i)
            if (in[i])
                elems.push_back(i);
        return Subgroup(G, std::move(elems));
    }

    static Subgroup trivial(const FiniteGroup& G) { return Subgroup(G, {0}); }
    static Subgroup whole(const FiniteGroup& G)
    {
        std::vector<int> all(G.order());
        std::iota(all.begin(), all.end(), 0);
        return Subgroup(G, std::move(all));
    }

    const FiniteGroup& parent() const { return *G_; }
    const std::vector<int>& elements() const { return elems_; }
    int size() const { return static_cast<int>(elems_.size()); }
    bool contains(int g) const { return pos_[g] >= 0; }
    int index_of(int g) const
    {
        if (pos_[g] < 0)
            throw math_error("Subgroup: element not in subgroup");
        return pos_[g];
    }

    bool is_normal() const
    {
        for (int g = 0; g < G_->order(); ++g)
            for (int s : elems_)
                if (!contains(G_->conj(g, s)))
                    return false;
        return true;
    }

private:
    const FiniteGroup* G_;
    std::vector<int> elems_;
    std::vector<int> pos_;
};

// A subgroup repackaged as a standalone group, with index translation.
struct SubgroupView {
    FiniteGroup grp;
    std::vector<int> to_parent;   // view index -> parent index
    std::vector<int> from_parent; // parent index -> view index or -1
};

inline SubgroupView make_view(const Subgroup& S)
{
    const auto& G = S.parent();
    const auto& elems = S.elements();
    int m = S.size();
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            table[i][j] = S.index_of(G.mul(elems[i], elems[j]));
    SubgroupView v;
    v.grp = FiniteGroup(std::move(table), "sub");
    v.to_parent = elems;
    v.from_parent.assign(G.order(), -1);
    for (int i = 0; i < m; ++i)
        v.from_parent[elems[i]] = i;
    return v;
}

// Quotient G/N for normal N: coset group plus the section picking the
// minimal representative, normalized so the identity coset maps to the
// identity.
class QuotientGroup {
public:
    QuotientGroup(const FiniteGroup& G, const Subgroup& N) : G_(&G)
    {
        if (!N.is_normal())
            throw math_error("QuotientGroup: subgroup is not normal");
        int n = G.order();
        proj_.assign(n, -1);
        // cosets Ng; the coset of the identity gets index 0 because element
        // 0 is scanned first
        for (int g = 0; g < n; ++g) {
            if (proj_[g] >= 0)
                continue;
            int id = static_cast<int>(sect_.size());
            sect_.push_back(g); // minimal element: first unseen in scan order
            for (int s : N.elements())
                proj_[G.mul(s, g)] = id;
        }
        int q = static_cast<int>(sect_.size());
        std::vector<std::vector<int>> table(q, std::vector<int>(q));
        for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j)
                table[i][j] = proj_[G.mul(sect_[i], sect_[j])];
        Q_ = FiniteGroup(std::move(table), "quot");
        if (sect_[0] != 0)
            throw math_error("QuotientGroup: section normalization failed");
    }

    const FiniteGroup& group() const { return Q_; }
    const FiniteGroup& parent() const { return *G_; }
    int order() const { return Q_.order(); }
    int proj(int g) const { return proj_[g]; }
    int section(int coset) const { return sect_[coset]; }

private:
    const FiniteGroup* G_;
    FiniteGroup Q_;
    std::vector<int> proj_;
    std::vector<int> sect_;
};

// --- standard tables -------------------------------------------------------

inline FiniteGroup cyclic_group(int n, const std::string& name = "")
{
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t[i][j] = (i + j) % n;
    return FiniteGroup(std::move(t), name.empty() ? "Z/" + std::to_string(n) : name);
}

inline FiniteGroup direct_product(const FiniteGroup& A, const FiniteGroup& B,
                                  const std::string& name = "")
{
    int na = A.order(), nb = B.order(), n = na * nb;
    auto idx = [&](int a, int b) { return a * nb + b; };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a1 = 0; a1 < na; ++a1)
        for (int b1 = 0; b1 < nb; ++b1)
            for (int a2 = 0; a2 < na; ++a2)
                for (int b2 = 0; b2 < nb; ++b2)
                    t[idx(a1, b1)][idx(a2, b2)] = idx(A.mul(a1, a2), B.mul(b1, b2));
    return FiniteGroup(std::move(t), name);
}

inline FiniteGroup klein_four() { return direct_product(cyclic_group(2), cyclic_group(2), "Z/2xZ/2"); }

// Z/q x| Z/m with tau sigma tau^-1 = sigma^r; element sigma^a tau^b has
// index a + q*b.  Multiplication: (sigma^a tau^b)(sigma^c tau^d) =
// sigma^{a + c r^b} tau^{b+d}.
struct MetacyclicGroup {
    FiniteGroup grp;
    int sigma; // index of sigma
    int tau;   // index of tau
};

inline MetacyclicGroup metacyclic_group(int q, int m, int r, const std::string& name = "")
{
    long rm = 1;
    for (int i = 0; i < m; ++i)
        rm = (rm * r) % q;
    if (rm % q != 1 % q)
        throw math_error("metacyclic_group: r^m != 1 mod q");
    int n = q * m;
    auto idx = [&](int a, int b) { return ((a % q + q) % q) + q * ((b % m + m) % m); };
    std::vector<long> rpow(m, 1);
    for (int b = 1; b < m; ++b)
        rpow[b] = (rpow[b - 1] * r) % q;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < q; ++c)
                for (int d = 0; d < m; ++d)
                    t[idx(a, b)][idx(c, d)] =
                        idx(static_cast<int>((a + c * rpow[b]) % q), b + d);
    MetacyclicGroup mg;
    mg.grp = FiniteGroup(std::move(t), name);
    mg.sigma = idx(1, 0);
    mg.tau = idx(0, 1);
    return mg;
}

inline MetacyclicGroup dihedral_group(int q)
{
    return metacyclic_group(q, 2, q - 1, "D" + std::to_string(q));
}

} // namespace equideform

#endif
