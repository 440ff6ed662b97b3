/* Monic integer polynomials and the band-matrix family attached to the
   A-series: discriminants, mod-p^2 divisibility classification, shift
   normalization, companion constructions, and the Q-invariant. */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ade/linalg.hpp"
#include "ade/rational.hpp"

namespace ade {

/// x^d + b1 x^(d-1) + ... + bd, stored as b1..bd.
struct MonicPoly {
    std::vector<Int> b;

    int degree() const { return static_cast<int>(b.size()); }
    /// Parse comma-separated coefficients; when degree exceeds the number of
    /// values given, the list is left-padded with zeros.
    static MonicPoly parse(const std::string& csv, int degree = 0);
    /// f(x + l), exact Taylor shift.
    MonicPoly shifted(const Int& l) const;
    Int eval(const Int& x) const;
    std::string str() const;  ///< human-readable polynomial
};

/// Discriminant of f: closed forms for degree <= 3, Sylvester resultant with
/// fraction-free elimination above.  Requires degree >= 2.
Int discriminant(const MonicPoly& f);

/// Same convention for a monic polynomial with rational coefficients b1..bd.
Rat discriminant_rat(const RatVec& b);

/// How p^2 divides the discriminant across small perturbations of f:
/// NONE:   p^2 does not divide disc(f);
/// WEAK:   p^2 | disc(f) but some single-coefficient shift b -> b + p e_i
///         breaks the divisibility;
/// STRONG: p^2 | disc(f + p c) for every integer perturbation c.
enum class DivisibilityType { NONE, WEAK, STRONG };
std::string to_string(DivisibilityType t);

/// FAST uses the gradient of the discriminant mod p^2 (degree-many
/// evaluations); BRUTE enumerates all p^degree perturbations; BOTH runs FAST
/// and cross-checks against BRUTE whenever the budget allows.
enum class ClassifyEngine { FAST, BRUTE, BOTH };

struct ClassifyOutcome {
    DivisibilityType type;
    bool fastPathOnly = false;  ///< BOTH requested but brute was over budget
};

/// Throws std::runtime_error("budget exceeded...") when engine is BRUTE and
/// p^degree exceeds the budget.
ClassifyOutcome classify(const MonicPoly& f, long p,
                         ClassifyEngine engine = ClassifyEngine::BOTH,
                         long long budget = 10'000'000);

DivisibilityType divisibility_type(const MonicPoly& f, long p,
                                   ClassifyEngine engine = ClassifyEngine::BOTH,
                                   long long budget = 10'000'000);

/// Coefficients of f(x+l) for the least l in [0, m) making m divide the
/// next-to-last and m^2 the last coefficient; empty when no such l exists.
struct ShiftNormalization {
    long shift = 0;
    std::vector<Int> shifted;     ///< coefficients of f(x + shift)
    std::vector<Int> normalized;  ///< trailing two divided by m and m^2
};
std::optional<ShiftNormalization> shift_normalize(const MonicPoly& f, long m);

/// Exact rational matrix vanishing above the superdiagonal.
struct W0Matrix {
    RatMat entries;

    int size() const { return static_cast<int>(entries.size()); }
    bool w0_shape() const;   ///< zero above the superdiagonal
    bool trace_zero() const; ///< predicate only; nothing enforces it
    RatVec superdiagonal() const;
    int leastCommonDenominator() const;  ///< over all entries
    std::string csv() const;             ///< exact-rational CSV rows
    std::string to_json() const;         ///< numerator/denominator pairs
    static W0Matrix parse_csv(const std::string& text);
};

/// Raw band pattern with superdiagonal ones whose characteristic polynomial
/// is x^N + b1 x^(N-1) + ... + bN; verified before returning.
W0Matrix band_matrix(const std::vector<Int>& b);

/// Band companion for even N (the odd-rank A family).
W0Matrix build_companion(const std::vector<Int>& b);
/// Band companion for odd N (the even-rank A family).
W0Matrix build_companion_even(const std::vector<Int>& b);
/// Parity dispatch over the two builders.
W0Matrix companion(const std::vector<Int>& b);

/// |product of the superdiagonal entries|.
Rat q_invariant(const W0Matrix& v);
/// Orbit-paired value: slots i and N-i multiply under a square root, the
/// middle slot enters with absolute value; equals sqrt(q_invariant) on
/// matrices whose paired slots agree.
double q_invariant_orbit(const W0Matrix& v);

/// The m-multiplication representative: shift-normalize f at m, take the
/// band companion of the shifted polynomial, add the shift back on the
/// diagonal, and conjugate by diag(m, 1, ..., 1, 1/m).  Postconditions
/// (checked): characteristic polynomial f, superdiagonal (m, 1, ..., 1, m)
/// for N >= 3 (m^2 for N = 2), and every denominator divides 4.
struct SigmaResult {
    W0Matrix matrix;
    long shift = 0;
    RatVec superdiagonal;
    bool strictlyIntegral = false;  ///< all entries integral
    int maxDenominator = 1;
    Rat qLiteral;  ///< q_invariant of the matrix (m^2 for N >= 3)
    Rat qOrbit;    ///< orbit-paired value (m for N >= 3)
};
SigmaResult sigma_m(const MonicPoly& f, long m);

}  // namespace ade
