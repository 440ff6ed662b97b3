/* Squarefree-discriminant statistics over coefficient boxes: exact and
   Monte-Carlo local densities, empirical sieves, tail classification
   counts, and the prediction-versus-count comparison report. */
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ade/rational.hpp"
#include "ade/rootsystem.hpp"

namespace ade {

/// A coefficient family: the box exponent of each coefficient and the
/// discriminant as an explicit integer polynomial in the coefficients.
struct FamilySpec {
    std::string name;
    DynkinType dynkin;
    std::vector<int> degrees;  ///< box |c_i| < X^degrees[i]
    bool traceZero = true;
    Int discNormalizer = 1;
    /// term list: exponent vector over the coefficients -> integer coefficient
    std::vector<std::pair<std::vector<int>, Int>> discTerms;
    std::string polynomialNote;

    int arity() const { return static_cast<int>(degrees.size()); }
    Int disc(const std::vector<Int>& coeffs) const;
};

FamilySpec family_A2();      ///< x^3 + a x + b
FamilySpec family_A4();      ///< x^5 + a x^3 + b x^2 + c x + d
FamilySpec family_const1();  ///< synthetic control: discriminant identically 1
FamilySpec family_by_name(const std::string& name);

/// Closed coefficient ranges for the height-X box: |c_i| <= X^degrees[i] - 1.
struct Box {
    std::vector<long long> lo, hi;
    Int point_count() const;
};
Box family_box(const FamilySpec& fam, long X);

enum class DensityMethod { EXACT, EXACT2, MC };

struct LocalDensity {
    long p = 0;
    Rat rho;             ///< exact value (EXACT engines), or the MC estimate
    double estimate = 0; ///< rho as double
    double se = 0;       ///< binomial standard error; 0 for exact methods
    DensityMethod method = DensityMethod::EXACT;
    long long samples = 0;
    std::uint64_t seed = 0;
    bool fromCache = false;
};

/// Density of coefficient fibres mod p^2 whose discriminant is NOT divisible
/// by p^2.  EXACT and EXACT2 enumerate all p^(2*arity) fibres in two
/// different loop orders and refuse (std::runtime_error mentioning the
/// budget) when that count exceeds fibreBudget; MC samples fibres with the
/// recorded seed.  Results are cached in ADE_CACHE_DIR when set.
LocalDensity local_density(const FamilySpec& fam, long p,
                           DensityMethod method = DensityMethod::EXACT,
                           long long fibreBudget = 100'000'000,
                           long long samples = 100'000, std::uint64_t seed = 0);

enum class SquarefreeStatus { SQUAREFREE, NOT_SQUAREFREE, UNCERTAIN };

/// Squarefreeness of |n| by trial division (with cube-root early exit) and
/// Pollard-rho factorization of the cofactor under an iteration budget.
/// n = 0 counts as not squarefree.
SquarefreeStatus squarefree_status(const Int& n, long trialBound = 1'000'000,
                                   long long pollardBudget = 1'000'000);

struct SieveCounts {
    Int total = 0;
    Int squarefree = 0;
    Int zeroDisc = 0;
    Int uncertain = 0;
    bool inconclusive = false;  ///< uncertain exceeds 0.1% of total
    double ratio() const;
};

/// Count box points with squarefree discriminant.  The planar cubic family
/// uses an exact per-row mark sieve over all primes up to sqrt(max |disc|);
/// other families walk points and factor.  Identical counts either way.
SieveCounts empirical_density(const FamilySpec& fam, long X, int threads = 1,
                              long trialBound = 1'000'000);
SieveCounts empirical_density_rowsieve(const FamilySpec& fam, long X, int threads = 1);
SieveCounts empirical_density_perpoint(const FamilySpec& fam, long X, int threads = 1,
                                       long trialBound = 1'000'000,
                                       long long pointBudget = 100'000'000);

struct TailCounts {
    long M = 0;
    Int strongCount = 0;  ///< points with a STRONG prime above M
    Int weakCount = 0;    ///< points with a WEAK prime above M
    Int total = 0;
};

/// Classify, for every box point with p^2 | disc for some prime p > M,
/// whether the divisibility survives single-coefficient perturbations.
TailCounts tail_counts(const FamilySpec& fam, long X, long M, int threads = 1);
std::vector<TailCounts> tail_counts_grid(const FamilySpec& fam, long X,
                                         const std::vector<long>& Ms, int threads = 1);

struct PerPrimeDensity {
    long p;
    std::string method;  ///< "exact", "exact2", "mc"
    std::string rho;     ///< exact fraction as a string
    double estimate;
    double se;
    long long samples;
    std::uint64_t seed;
};

struct DensityReport {
    int schemaVersion = 1;
    std::string family;
    long X = 0;
    long pMax = 0;
    std::vector<PerPrimeDensity> perPrime;
    double truncatedProduct = 0;  ///< prod of the per-prime densities
    double productSe = 0;
    std::string maxDisc;          ///< bound on |disc| over the box
    long primeLimit = 0;          ///< sqrt(maxDisc)
    double tailCorrection = 0;    ///< estimated mass lost to primes above pMax
    std::string totalPoints;
    std::string squarefreeCount;
    std::string zeroDiscCount;
    std::string uncertainCount;
    double empiricalRatio = 0;
    double empiricalSe = 0;
    double predictedRatio = 0;  ///< truncatedProduct * (1 - tailCorrection)
    double zScore = 0;
    std::string verdict;  ///< AGREE / DISAGREE / UNDERPOWERED / INCONCLUSIVE
    std::uint64_t seed = 0;
    long long mcSamples = 0;
    std::string modelNote;

    std::string to_json() const;  ///< deterministic, atomic-write friendly
    std::string to_csv() const;   ///< per-prime density table
    std::string summary() const;  ///< one-paragraph human-readable digest
};

/// Exact densities for p <= exactMaxP (falling back to MC when the fibre
/// budget refuses), MC densities with derived per-prime seeds above, the
/// empirical box count, the tail-corrected prediction, and the z-score.
DensityReport compare(const FamilySpec& fam, long pMax, long X, std::uint64_t seed,
                      long long mcSamples = 100'000, int threads = 1, long exactMaxP = 13);

/// Primes up to n, ascending.
std::vector<long> primes_up_to(long n);

}  // namespace ade
