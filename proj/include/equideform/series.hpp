#ifndef EQUIDEFORM_SERIES_HPP
#define EQUIDEFORM_SERIES_HPP

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "equideform/fp.hpp"

namespace equideform {

class not_expressible_error : public math_error {
public:
    explicit not_expressible_error(const std::string& msg) : math_error(msg) {}
};

// Truncated Laurent series over F_p in one variable.  Coefficients are known
// for exponents e with e < prec(); an exact series (finitely many terms, all
// known) carries prec() == kExactPrec.  The stored window starts at val():
// leading stored coefficient is nonzero.  A series with no stored terms is
// zero modulo t^prec().
class Series {
public:
    static constexpr long kExactPrec = 1L << 60;

    Series() : p_(2), val_(kExactPrec), prec_(kExactPrec) {}

    static Series zero(uint32_t p, long prec = kExactPrec)
    {
        Series s;
        s.p_ = p;
        s.val_ = prec;
        s.prec_ = prec;
        return s;
    }
    static Series monomial(uint32_t p, uint32_t coeff, long exp)
    {
        Series s;
        s.p_ = p;
        s.val_ = exp;
        s.prec_ = kExactPrec;
        s.c_.assign(1, coeff % p);
        s.normalize();
        return s;
    }
    static Series t(uint32_t p) { return monomial(p, 1, 1); }
    static Series one(uint32_t p) { return monomial(p, 1, 0); }
    static Series from_coeffs(uint32_t p, long val, std::vector<uint32_t> coeffs,
                              long prec = kExactPrec)
    {
        Series s;
        s.p_ = p;
        s.val_ = val;
        s.prec_ = prec;
        s.c_ = std::move(coeffs);
        for (auto& x : s.c_)
            x %= p;
        if (!s.is_exact() && s.val_ + static_cast<long>(s.c_.size()) > s.prec_)
            throw math_error("Series: coefficients extend past the stated precision");
        s.normalize();
        return s;
    }

    uint32_t p() const { return p_; }
    long prec() const { return prec_; }
    bool is_exact() const { return prec_ == kExactPrec; }
    bool has_terms() const { return !c_.empty(); }
    bool is_zero() const { return c_.empty(); } // zero to known precision

    long ord() const
    {
        if (c_.empty())
            throw precision_error("ord: series is zero to known precision");
        return val_;
    }
    // Valuation lower bound, usable also for windowless series.
    long ord_lb() const { return c_.empty() ? prec_ : val_; }

    uint32_t leading() const
    {
        if (c_.empty())
            throw precision_error("leading: series is zero to known precision");
        return c_.front();
    }

    uint32_t coeff(long e) const
    {
        if (e >= prec_)
            throw precision_error("coeff: exponent beyond known precision");
        if (c_.empty() || e < val_ || e >= val_ + static_cast<long>(c_.size()))
            return 0;
        return c_[e - val_];
    }

    // Highest exponent carrying a stored coefficient (the trailing nonzero
    // term; for non-exact series everything in [this, prec) is zero).
    long top_exponent() const
    {
        if (c_.empty())
            throw precision_error("top_exponent: series is zero to known precision");
        return val_ + static_cast<long>(c_.size()) - 1;
    }

    Series truncated(long new_prec) const
    {
        Series s = *this;
        if (new_prec >= s.prec_)
            return s;
        s.prec_ = new_prec;
        if (!s.c_.empty()) {
            long keep = new_prec - s.val_;
            if (keep <= 0)
                s.c_.clear();
            else if (keep < static_cast<long>(s.c_.size()))
                s.c_.resize(keep);
        }
        s.normalize();
        return s;
    }

    Series shifted(long k) const
    {
        Series s = *this;
        if (!s.is_exact())
            s.prec_ += k;
        if (!s.c_.empty())
            s.val_ += k;
        else
            s.val_ = s.prec_;
        return s;
    }

    Series operator-() const
    {
        PrimeField F(p_);
        Series s = *this;
        for (auto& x : s.c_)
            x = F.neg(x);
        return s;
    }

    Series scaled(uint32_t k) const
    {
        PrimeField F(p_);
        Series s = *this;
        for (auto& x : s.c_)
            x = F.mul(x, k % p_);
        s.normalize();
        return s;
    }

    friend Series operator+(const Series& a, const Series& b)
    {
        a.check_same_field(b);
        PrimeField F(a.p_);
        long prec = std::min(a.prec_, b.prec_);
        long lo = std::min(a.ord_lb(), b.ord_lb());
        lo = std::min(lo, prec);
        Series s;
        s.p_ = a.p_;
        s.prec_ = prec;
        s.val_ = lo;
        if (lo < prec && !(a.c_.empty() && b.c_.empty())) {
            long hi = prec;
            if (prec == kExactPrec) {
                hi = lo;
                if (!a.c_.empty())
                    hi = std::max(hi, a.stored_end());
                if (!b.c_.empty())
                    hi = std::max(hi, b.stored_end());
            }
            s.c_.assign(hi - lo, 0);
            a.add_into(s.c_, lo, F, 1);
            b.add_into(s.c_, lo, F, 1);
        }
        s.normalize();
        return s;
    }
    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

    friend Series operator*(const Series& a, const Series& b)
    {
        a.check_same_field(b);
        PrimeField F(a.p_);
        long prec = std::min(clamp_add(a.prec_, b.ord_lb()), clamp_add(b.prec_, a.ord_lb()));
        Series s;
        s.p_ = a.p_;
        s.prec_ = prec;
        if (a.c_.empty() || b.c_.empty()) {
            s.val_ = prec;
            return s;
        }
        long val = a.val_ + b.val_;
        long len = (prec == kExactPrec)
                       ? static_cast<long>(a.c_.size() + b.c_.size()) - 1
                       : prec - val;
        if (len <= 0) {
            s.val_ = prec;
            return s;
        }
        s.val_ = val;
        s.c_.assign(len, 0);
        for (size_t i = 0; i < a.c_.size() && static_cast<long>(i) < len; ++i) {
            if (!a.c_[i])
                continue;
            uint64_t ai = a.c_[i];
            size_t jmax = std::min(b.c_.size(), static_cast<size_t>(len) - i);
            for (size_t j = 0; j < jmax; ++j)
                s.c_[i + j] =
                    static_cast<uint32_t>((s.c_[i + j] + ai * b.c_[j]) % a.p_);
        }
        s.normalize();
        return s;
    }

    // Multiplicative inverse on the known window.  For an exact series a
    // target precision for the result window must be supplied.
    Series inverted(long target_prec = -1) const
    {
        if (c_.empty())
            throw precision_error("invert: series is zero to known precision");
        long L; // window length
        if (is_exact()) {
            if (target_prec < 0)
                throw math_error("invert: exact series needs a target precision");
            L = target_prec + val_; // result window [-val, target_prec)
        } else {
            L = prec_ - val_;
            if (target_prec >= 0)
                L = std::min(L, target_prec + val_);
        }
        if (L <= 0)
            throw precision_error("invert: empty result window");
        PrimeField F(p_);
        std::vector<uint32_t> u(L, 0);
        for (size_t i = 0; i < c_.size() && i < static_cast<size_t>(L); ++i)
            u[i] = c_[i];
        std::vector<uint32_t> w(L, 0);
        uint32_t lead_inv = F.inv(u[0]);
        w[0] = lead_inv;
        for (long k = 1; k < L; ++k) {
            uint64_t acc = 0;
            for (long j = 1; j <= k; ++j)
                acc = (acc + static_cast<uint64_t>(u[j]) * w[k - j]) % p_;
            w[k] = F.mul(lead_inv, F.neg(static_cast<uint32_t>(acc)));
        }
        Series s;
        s.p_ = p_;
        s.val_ = -val_;
        s.prec_ = -val_ + L;
        s.c_ = std::move(w);
        s.normalize();
        return s;
    }

    // Term-wise derivative d/dt.
    Series derivative() const
    {
        PrimeField F(p_);
        Series s;
        s.p_ = p_;
        s.prec_ = is_exact() ? kExactPrec : prec_ - 1;
        s.val_ = c_.empty() ? s.prec_ : val_ - 1;
        s.c_.resize(c_.size());
        for (size_t i = 0; i < c_.size(); ++i)
            s.c_[i] = F.mul(c_[i], F.reduce(val_ + static_cast<long>(i)));
        s.normalize();
        return s;
    }

    Series pow(long k) const
    {
        if (k < 0)
            throw math_error("pow: negative exponent, invert first");
        Series r = one(p_);
        Series b = *this;
        while (k) {
            if (k & 1)
                r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    bool operator==(const Series& o) const
    {
        return p_ == o.p_ && val_ == o.val_ && prec_ == o.prec_ && c_ == o.c_;
    }

    std::string to_string(const std::string& var = "t") const
    {
        std::vector<std::string> parts;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (!c_[i])
                continue;
            long e = val_ + static_cast<long>(i);
            std::ostringstream term;
            if (e == 0)
                term << c_[i];
            else {
                if (c_[i] != 1)
                    term << c_[i] << "*";
                term << var;
                if (e != 1)
                    term << "^" << e;
            }
            parts.push_back(term.str());
        }
        if (!is_exact()) {
            std::ostringstream term;
            term << "O(" << var << "^" << prec_ << ")";
            parts.push_back(term.str());
        }
        if (parts.empty())
            return "0";
        std::string out = parts[0];
        for (size_t i = 1; i < parts.size(); ++i)
            out += " + " + parts[i];
        return out;
    }

    static Series parse(const std::string& text, uint32_t p, const std::string& var = "t");

private:
    uint32_t p_;
    long val_;
    long prec_;
    std::vector<uint32_t> c_;

    long stored_end() const { return c_.empty() ? val_ : val_ + static_cast<long>(c_.size()); }

    static long clamp_add(long a, long b)
    {
        if (a >= kExactPrec || b >= kExactPrec)
            return kExactPrec;
        return a + b;
    }

    void check_same_field(const Series& o) const
    {
        if (p_ != o.p_)
            throw math_error("Series: mixed characteristics");
    }

    void add_into(std::vector<uint32_t>& dst, long dst_lo, const PrimeField& F, uint32_t scale) const
    {
        for (size_t i = 0; i < c_.size(); ++i) {
            long e = val_ + static_cast<long>(i);
            long k = e - dst_lo;
            if (k < 0 || k >= static_cast<long>(dst.size()))
                continue;
            dst[k] = F.add(dst[k], F.mul(c_[i], scale));
        }
    }

    void normalize()
    {
        size_t lead = 0;
        while (lead < c_.size() && c_[lead] == 0)
            ++lead;
        if (lead) {
            c_.erase(c_.begin(), c_.begin() + lead);
            val_ += static_cast<long>(lead);
        }
        while (!c_.empty() && c_.back() == 0)
            c_.pop_back();
        if (c_.empty())
            val_ = prec_;
    }
};

// f(g(t)) by Horner.  Requires ord(g) >= 1 and f a power series (ord >= 0).
inline Series compose(const Series& f, const Series& g)
{
    if (g.ord_lb() < 1)
        throw math_error("compose: inner series must have valuation >= 1");
    if (f.has_terms() && f.ord() < 0)
        throw math_error("compose: outer series must be a power series");
    long og = std::max(g.ord_lb(), 1L);
    long fv = f.has_terms() ? f.ord() : 0;
    long prec = Series::kExactPrec;
    if (!f.is_exact())
        prec = std::min(prec, (f.prec() >= Series::kExactPrec / og) ? Series::kExactPrec
                                                                    : f.prec() * og);
    if (!g.is_exact())
        prec = std::min(prec, g.prec() + std::max(fv - 1, 0L) * og);
    if (!f.has_terms())
        return Series::zero(f.p(), prec);
    Series r = Series::zero(f.p());
    for (long e = f.top_exponent(); e >= 0; --e) {
        r = r * g;
        uint32_t ce = (e >= f.ord()) ? f.coeff(e) : 0;
        if (ce)
            r = r + Series::monomial(f.p(), ce, 0);
        if (prec < Series::kExactPrec)
            r = r.truncated(prec);
    }
    return r.truncated(prec);
}

// Compositional inverse: g with f(g) = g(f) = t, for f of valuation 1.
inline Series comp_inverse(const Series& f, long target_prec = -1)
{
    if (!f.has_terms() || f.ord() != 1)
        throw math_error("comp_inverse: series must have valuation exactly 1");
    long L = f.is_exact() ? target_prec : (target_prec < 0 ? f.prec() : std::min(target_prec, f.prec()));
    if (L < 2)
        throw math_error("comp_inverse: need a usable precision window (>= 2)");
    PrimeField F(f.p());
    Series ft = f.truncated(L);
    Series fp = ft.derivative();
    Series g = Series::monomial(f.p(), F.inv(f.leading()), 1).truncated(L);
    // Newton iteration, quadratic convergence; iteration count covers L
    int iters = 2;
    for (long k = 1; k < L; k *= 2)
        ++iters;
    for (int it = 0; it < iters; ++it) {
        Series err = compose(ft, g) - Series::t(f.p());
        if (!err.has_terms())
            break;
        Series corr = err * compose(fp, g).inverted();
        g = (g - corr).truncated(L);
    }
    Series check = compose(ft, g) - Series::t(f.p());
    if (check.has_terms())
        throw precision_error("comp_inverse: Newton iteration failed to close the window");
    return g;
}

// Rewrite u as a series in y (valuation n >= 1): returns h with h(y) = u,
// by greedy leading-term elimination.  Exponents of the result are
// y-exponents.  Throws not_expressible_error when a remainder valuation is
// not a multiple of n.
inline Series express_in(const Series& u, const Series& y)
{
    if (!y.has_terms() || y.ord() < 1)
        throw math_error("express_in: y must have valuation >= 1");
    long n = y.ord();
    PrimeField F(u.p());
    uint32_t ylead = y.leading();
    Series rem = u;
    std::vector<std::pair<long, uint32_t>> terms;
    long wprec;
    while (true) {
        if (!rem.has_terms()) {
            // remainder zero to its precision; the unresolved tail starts at
            // rem.prec(), contributing y-exponents >= ceil(prec / n)
            if (rem.is_exact())
                wprec = Series::kExactPrec;
            else {
                long q = rem.prec() >= 0 ? (rem.prec() + n - 1) / n : -((-rem.prec()) / n);
                wprec = q;
            }
            break;
        }
        long v = rem.ord();
        if (v % n != 0)
            throw not_expressible_error("express_in: remainder valuation " + std::to_string(v) +
                                        " is not a multiple of " + std::to_string(n));
        long j = v / n;
        uint32_t denom_inv = (j >= 0) ? F.inv(F.pow(ylead, static_cast<uint64_t>(j)))
                                      : F.pow(ylead, static_cast<uint64_t>(-j));
        uint32_t cj = F.mul(rem.leading(), denom_inv);
        terms.emplace_back(j, cj);
        Series yj;
        if (j >= 0)
            yj = y.pow(j);
        else
            yj = y.inverted().pow(-j);
        rem = rem - yj.scaled(cj);
        if (rem.has_terms() && rem.ord() <= v)
            throw math_error("express_in: elimination failed to raise the valuation");
    }
    // assemble the y-variable series
    if (terms.empty())
        return Series::zero(u.p(), wprec);
    long lo = terms.front().first;
    std::vector<uint32_t> cs;
    for (auto& [j, c] : terms) {
        while (static_cast<long>(cs.size()) <= j - lo)
            cs.push_back(0);
        cs[j - lo] = c;
    }
    return Series::from_coeffs(u.p(), lo, std::move(cs),
                               wprec == Series::kExactPrec ? Series::kExactPrec : wprec);
}

// Product of series, each of valuation 1; the orbit product y_N.
inline Series orbit_product(const std::vector<Series>& factors)
{
    if (factors.empty())
        throw math_error("orbit_product: empty factor list");
    Series r = Series::one(factors.front().p());
    for (const auto& f : factors) {
        if (!f.has_terms() || f.ord() != 1)
            throw math_error("orbit_product: factors must have valuation 1");
        r = r * f;
    }
    return r;
}

inline Series Series::parse(const std::string& text, uint32_t p, const std::string& var)
{
    PrimeField F(p);
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch)))
            s += ch;
    long prec = kExactPrec;
    std::vector<std::pair<long, uint32_t>> terms;
    size_t i = 0;
    bool neg = false;
    if (s.empty())
        throw math_error("Series::parse: empty input");
    while (i < s.size()) {
        if (s[i] == '+') {
            neg = false;
            ++i;
            continue;
        }
        if (s[i] == '-') {
            neg = true;
            ++i;
            continue;
        }
        if (s.compare(i, 2, "O(") == 0) {
            size_t close = s.find(')', i);
            if (close == std::string::npos)
                throw math_error("Series::parse: unterminated O-term");
            std::string inner = s.substr(i + 2, close - i - 2);
            size_t caret = inner.find('^');
            if (inner == var)
                prec = 1;
            else if (caret != std::string::npos && inner.substr(0, caret) == var)
                prec = std::strtol(inner.c_str() + caret + 1, nullptr, 10);
            else
                throw math_error("Series::parse: malformed O-term");
            i = close + 1;
            continue;
        }
        // term: [coeff][*][var[^exp]]
        uint32_t coeff = 1;
        bool saw_num = false;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            char* end = nullptr;
            coeff = F.reduce(std::strtol(s.c_str() + i, &end, 10));
            i = end - s.c_str();
            saw_num = true;
        }
        if (i < s.size() && s[i] == '*')
            ++i;
        long exp = 0;
        if (s.compare(i, var.size(), var) == 0) {
            i += var.size();
            exp = 1;
            if (i < s.size() && s[i] == '^') {
                char* end = nullptr;
                exp = std::strtol(s.c_str() + i + 1, &end, 10);
                i = end - s.c_str();
            }
        } else if (!saw_num) {
            throw math_error("Series::parse: unexpected character at position " + std::to_string(i));
        }
        terms.emplace_back(exp, neg ? F.neg(coeff) : coeff);
        neg = false;
    }
    if (terms.empty())
        return Series::zero(p, prec);
    long lo = terms.front().first;
    for (auto& [e, c] : terms)
        lo = std::min(lo, e);
    long hi = lo;
    for (auto& [e, c] : terms)
        hi = std::max(hi, e);
    std::vector<uint32_t> cs(hi - lo + 1, 0);
    for (auto& [e, c] : terms)
        cs[e - lo] = F.add(cs[e - lo], c);
    return Series::from_coeffs(p, lo, std::move(cs), prec);
}

// Coefficient-wise equality below the stated bound; both series must know
// their coefficients that far.
inline bool eq_mod(const Series& a, const Series& b, long upto)
{
    Series d = a - b;
    if (d.prec() < upto)
        throw precision_error("eq_mod: insufficient precision for comparison");
    return !d.has_terms() || d.ord() >= upto;
}

// Equality on the largest window both sides know.
inline bool eq_common(const Series& a, const Series& b)
{
    Series d = a - b;
    return !d.has_terms();
}

} // namespace equideform

#endif
