#ifndef EQUIDEFORM_RNG_HPP
#define EQUIDEFORM_RNG_HPP

#include <cstdint>
#include <random>

namespace equideform {

// Seeded deterministic RNG.  mt19937_64 output is fully specified by the
// standard, so seeded runs reproduce across platforms; we avoid
// std::uniform_int_distribution for the same reason.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }
    uint64_t below(uint64_t n) { return n ? eng_() % n : 0; }
    uint32_t fp_element(uint32_t p) { return static_cast<uint32_t>(below(p)); }
    uint32_t fp_nonzero(uint32_t p) { return 1 + static_cast<uint32_t>(below(p - 1)); }

private:
    std::mt19937_64 eng_;
};

} // namespace equideform

#endif
