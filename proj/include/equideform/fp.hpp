#ifndef EQUIDEFORM_FP_HPP
#define EQUIDEFORM_FP_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace equideform {

// Errors that signal a precision window became empty or too short.
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& msg) : std::runtime_error(msg) {}
};

class math_error : public std::runtime_error {
public:
    explicit math_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline bool is_prime_u64(uint64_t n)
{
    if (n < 2)
        return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

// Arithmetic in the prime field F_p, elements stored as canonical residues
// 0..p-1 in uint32_t.  2 <= p < 2^31 so products fit in uint64_t.
struct PrimeField {
    uint32_t p;

    explicit PrimeField(uint32_t p_) : p(p_)
    {
        if (p_ < 2 || p_ >= (1u << 31) || !is_prime_u64(p_))
            throw math_error("PrimeField: " + std::to_string(p_) + " is not a prime in [2, 2^31)");
    }

    uint32_t reduce(int64_t x) const
    {
        int64_t r = x % static_cast<int64_t>(p);
        if (r < 0)
            r += p;
        return static_cast<uint32_t>(r);
    }
    uint32_t add(uint32_t a, uint32_t b) const
    {
        uint32_t s = a + b;
        return s >= p ? s - p : s;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p - b; }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p - a; }
    uint32_t mul(uint32_t a, uint32_t b) const
    {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
    }
    uint32_t pow(uint32_t a, uint64_t e) const
    {
        uint32_t r = 1 % p;
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    uint32_t inv(uint32_t a) const
    {
        if (a == 0)
            throw math_error("F_p: division by zero");
        return pow(a, p - 2);
    }

    bool operator==(const PrimeField& o) const { return p == o.p; }
};

} // namespace equideform

#endif
