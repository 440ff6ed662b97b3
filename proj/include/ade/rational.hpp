/* Exact arithmetic aliases and small helpers shared across the library. */
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ade {

using Int = mpz_class;
using Rat = mpq_class;
using RatVec = std::vector<Rat>;

/// Parse "a/b" or "a" into a canonical rational.
inline Rat rat_parse(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("rat_parse: bad rational literal '" + s + "'");
    r.canonicalize();
    return r;
}

/// Render as "a/b" when the denominator is nontrivial, else "a".
inline std::string rat_str(const Rat& r) {
    return r.get_str();
}

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

/// True when the denominator divides `d` (lattice-integrality predicates).
inline bool denominator_divides(const Rat& r, long d) {
    return mpz_divisible_p(Int(d).get_mpz_t(), r.get_den().get_mpz_t()) != 0;
}

inline RatVec rat_vec(const std::vector<long>& v) {
    RatVec out;
    out.reserve(v.size());
    for (long x : v) out.emplace_back(x);
    return out;
}

inline RatVec rat_vec(const std::vector<std::string>& v) {
    RatVec out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(rat_parse(s));
    return out;
}

/// Exact match for brace lists of literals: rat_vec({"1/2", "-3"}).
inline RatVec rat_vec(std::initializer_list<const char*> v) {
    RatVec out;
    for (const char* s : v) out.push_back(rat_parse(s));
    return out;
}

}  // namespace ade
