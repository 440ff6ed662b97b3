/* Exact dense linear algebra over the rationals and the integers. */
#include "ade/linalg.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

namespace ade {

RatMat rat_identity(std::size_t n) {
    RatMat m(n, RatVec(n, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

RatMat mat_mul(const RatMat& a, const RatMat& b) {
    if (a.empty() || b.empty() || a[0].size() != b.size())
        throw std::invalid_argument("mat_mul: shape mismatch");
    std::size_t n = a.size(), k = b.size(), m = b[0].size();
    RatMat out(n, RatVec(m, Rat(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
        }
    return out;
}

RatVec mat_vec(const RatMat& a, const RatVec& v) {
    if (a.empty() || a[0].size() != v.size())
        throw std::invalid_argument("mat_vec: shape mismatch");
    RatVec out(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            if (a[i][j] != 0) out[i] += a[i][j] * v[j];
    return out;
}

RatVec solve_columns(const std::vector<RatVec>& cols, const RatVec& target) {
    std::size_t k = cols.size();
    std::size_t n = target.size();
    for (const auto& c : cols)
        if (c.size() != n) throw std::invalid_argument("solve_columns: column length mismatch");

    // Augmented matrix [cols | target], n rows, k+1 columns.
    RatMat m(n, RatVec(k + 1, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) m[i][j] = cols[j][i];
        m[i][k] = target[i];
    }

    std::vector<std::size_t> pivot_row(k);
    std::size_t row = 0;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t p = row;
        while (p < n && m[p][col] == 0) ++p;
        if (p == n) throw std::runtime_error("solve_columns: columns are linearly dependent");
        std::swap(m[p], m[row]);
        Rat inv = 1 / m[row][col];
        for (std::size_t j = col; j <= k; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Rat f = m[i][col];
            for (std::size_t j = col; j <= k; ++j) m[i][j] -= f * m[row][j];
        }
        pivot_row[col] = row;
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (m[i][k] != 0) throw std::runtime_error("solve_columns: inconsistent system");

    RatVec x(k, Rat(0));
    for (std::size_t col = 0; col < k; ++col) x[col] = m[pivot_row[col]][k];
    return x;
}

RatVec charpoly(const RatMat& a) {
    std::size_t n = a.size();
    for (const auto& r : a)
        if (r.size() != n) throw std::invalid_argument("charpoly: matrix not square");
    RatVec coeffs{Rat(1)};
    RatMat m = rat_identity(n);  // M_0
    Rat c(0);                    // c_0: M_1 = A * (M_0 + 0) = A
    for (std::size_t step = 1; step <= n; ++step) {
        // M_k = A * (M_{k-1} + c_{k-1} I);  c_k = -tr(M_k)/k
        RatMat shifted = m;
        for (std::size_t i = 0; i < n; ++i) shifted[i][i] += c;
        m = mat_mul(a, shifted);
        Rat tr(0);
        for (std::size_t i = 0; i < n; ++i) tr += m[i][i];
        c = -tr / Rat(static_cast<long>(step));
        coeffs.push_back(c);
    }
    return coeffs;
}

Int det_int(IntMat a) {
    std::size_t n = a.size();
    for (const auto& r : a)
        if (r.size() != n) throw std::invalid_argument("det_int: matrix not square");
    if (n == 0) return 1;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t col = 0; col + 1 < n; ++col) {
        std::size_t p = col;
        while (p < n && a[p][col] == 0) ++p;
        if (p == n) return 0;
        if (p != col) {
            std::swap(a[p], a[col]);
            sign = -sign;
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            for (std::size_t j = col + 1; j < n; ++j) {
                Int num = a[i][j] * a[col][col] - a[i][col] * a[col][j];
                mpz_divexact(a[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            a[i][col] = 0;
        }
        prev = a[col][col];
    }
    return sign * a[n - 1][n - 1];
}

Rat det_rat(RatMat a) {
    std::size_t n = a.size();
    for (const auto& r : a)
        if (r.size() != n) throw std::invalid_argument("det_rat: matrix not square");
    Rat det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        while (p < n && a[p][col] == 0) ++p;
        if (p == n) return Rat(0);
        if (p != col) {
            std::swap(a[p], a[col]);
            det = -det;
        }
        det *= a[col][col];
        Rat inv = 1 / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a[i][col] == 0) continue;
            Rat f = a[i][col];
            for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    return det;
}

}  // namespace ade
