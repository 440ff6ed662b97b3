/* Graded data of the split pair attached to an ADE diagram involution:
   restricted roots with case tags, dimension bookkeeping, invariant degrees,
   case bases, exponent vectors, and the lambda / zeta constants. */
#pragma once

#include <string>
#include <vector>

#include "ade/rational.hpp"
#include "ade/rootsystem.hpp"

namespace ade {

/// Which summand a restricted root's weight space contributes to.
enum class CaseTag { G_ONLY, V_ONLY, SPLIT };

std::string to_string(CaseTag t);

struct RestrictedRoot {
    std::vector<Root> orbit;  ///< one or two roots, ascending
    RatVec image;             ///< orbit average in simple-root coordinates
    CaseTag tag;
    int sign;           ///< (-1)^height
    int signEffective;  ///< sign corrected by the pinned sign cocycle (singletons)
    int height;         ///< common height of the orbit members
};

struct GradedData {
    RootSystem rs;
    std::vector<int> theta;  ///< the diagram involution as an index permutation
    std::vector<RestrictedRoot> restricted;
    int dimV0 = 0;            ///< Cartan part of the odd summand
    int dimV = 0;             ///< total odd summand
    int dimG = 0;             ///< total even summand
    int dimW0 = 0;            ///< dimV0 plus height <= 1 odd weight spaces
    int heightOneCount = 0;   ///< k: number of height-one odd restricted roots
    int markedPoints = 0;     ///< marked points on the associated curve
    std::vector<int> degrees; ///< invariant degrees of the restricted Weyl action
    std::string degreesNote;  ///< flags known reference-table inconsistencies
};

/// Full grading of the pair attached to the diagram involution of rs.
/// Throws std::logic_error if any internal consistency check fails.
GradedData grade(const RootSystem& rs);

/// Invariant degrees by type (A_r: 2..r+1; D_r: {2,4,...,2r-2} u {r}, sorted;
/// E6/E7/E8 the classical exceptional lists).
std::vector<int> weyl_degrees(DynkinType t);

/// Marked points on the associated pointed curve.
int marked_points(DynkinType t);

/// Closed-form dimension of the odd summand; must equal both the sum of
/// degrees and the dimension computed from the grading.
int table1_dim(DynkinType t);

/// A multiplicative character recorded as exponents over a named basis,
/// with an explicit power of X (and optionally 1/M) carried in front.
struct ExponentVector {
    std::vector<std::string> basisNames;
    RatVec exponents;
    Rat xPrefactor = 0;  ///< character evaluated on X^(this) times the basis part
    int mPower = 0;      ///< power of 1/M carried in front

    /// Entrywise sum; basis names must agree.
    ExponentVector plus(const ExponentVector& other) const;
    std::string str() const;
};

struct CaseBasis {
    std::vector<std::string> names;    ///< e.g. alpha1..alphan,beta1..betan or beta1..betak
    std::vector<RatVec> vectors;       ///< in simple-root-average coordinates
};

/// The per-family basis used by the shipped case analyses (D_r for r >= 4,
/// E6, E7, E8).  Throws std::invalid_argument for other types.
CaseBasis case_basis(const GradedData& gd);

/// Images (restricted weights) of the height-one odd restricted roots,
/// in the deterministic restricted-root order.
std::vector<RatVec> sv_images(const GradedData& gd);

/// Weights of the height <= 1 odd part: dimV0 zero weights plus one image per
/// height <= 1 odd restricted root, expressed over the case basis.
std::vector<ExponentVector> w0_weights(const GradedData& gd, const CaseBasis& basis);

/// Sum of height <= 1 odd images over the case basis; xPrefactor = dimW0.
ExponentVector volume_exponents(const GradedData& gd, const CaseBasis& basis);

/// Sum of positive even images over the case basis (inverse modular factor).
ExponentVector modular_function(const GradedData& gd, const CaseBasis& basis);

/// Sum of the height-one odd images over the case basis; xPrefactor = k.
ExponentVector q_condition(const GradedData& gd, const CaseBasis& basis);

/// Coordinates of each case-basis vector over the height-one odd images;
/// all entries nonnegative.  Entry j bounds basis variable j from below
/// by X^(-a_j) on the sieve box.
RatVec domain_exponents(const GradedData& gd, const CaseBasis& basis);

/// Exponents r_a over the height-one odd images solving
/// sum_a r_a * image_a = -(volume + modular character); exact, and verified
/// by re-substitution before returning.
RatVec lambda_exponents(const GradedData& gd);

/// Riemann zeta for s > 1 via Euler-Maclaurin; relative error <= 1e-12.
double zeta(double s);

/// prod_a zeta(r_a + 1); throws std::domain_error unless every r_a > 0.
double zeta_product(const RatVec& r);

}  // namespace ade
