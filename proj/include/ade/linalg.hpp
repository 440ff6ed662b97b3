/* Exact dense linear algebra over the rationals and the integers. */
#pragma once

#include <vector>

#include "ade/rational.hpp"

namespace ade {

using RatMat = std::vector<RatVec>;  // row-major, rectangular
using IntMat = std::vector<std::vector<Int>>;

/// n-by-n identity.
RatMat rat_identity(std::size_t n);

/// Matrix product (throws on shape mismatch).
RatMat mat_mul(const RatMat& a, const RatMat& b);

/// Matrix-vector product.
RatVec mat_vec(const RatMat& a, const RatVec& v);

/// Solve sum_j x_j * cols[j] = target exactly.
/// Requires the columns to be linearly independent and the system consistent;
/// throws std::runtime_error otherwise.  Returns the unique coefficient vector.
RatVec solve_columns(const std::vector<RatVec>& cols, const RatVec& target);

/// Characteristic polynomial of a square rational matrix via the
/// Faddeev-LeVerrier recurrence.  Returns coefficients from the leading
/// term down: {1, c1, ..., cn} with det(xI - A) = x^n + c1 x^(n-1) + ... + cn.
RatVec charpoly(const RatMat& a);

/// Determinant of an integer matrix (fraction-free Bareiss elimination).
Int det_int(IntMat a);

/// Determinant of a rational matrix (exact Gaussian elimination).
Rat det_rat(RatMat a);

}  // namespace ade
