/* Discriminants, divisibility classification, shift normalization, band
   companions, and the sigma_m construction. */
#include "ade/anfamily.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ade/linalg.hpp"
#include "json.hpp"

namespace ade {

namespace {

Int int_pow(long base, int e) {
    Int out = 1;
    for (int i = 0; i < e; ++i) out *= base;
    return out;
}

/// Nonnegative remainder of x mod m.
Int true_mod(const Int& x, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Sylvester resultant of f and f' over a generic ring.
template <class T, class DetFn>
T resultant_with_derivative(const std::vector<T>& b, DetFn det) {
    const int d = static_cast<int>(b.size());
    const int n = 2 * d - 1;
    std::vector<std::vector<T>> s(n, std::vector<T>(n, T(0)));
    for (int i = 0; i < d - 1; ++i) {
        s[i][i] = T(1);
        for (int j = 0; j < d; ++j) s[i][i + 1 + j] = b[j];
    }
    for (int i = 0; i < d; ++i) {
        s[d - 1 + i][i] = T(d);
        for (int j = 0; j + 1 < d; ++j) s[d - 1 + i][i + 1 + j] = T(d - 1 - j) * b[j];
    }
    return det(s);
}

template <class T>
T disc_closed_form(const std::vector<T>& b) {
    if (b.size() == 2) return b[0] * b[0] - 4 * b[1];
    const T &b1 = b[0], &b2 = b[1], &b3 = b[2];
    return 18 * b1 * b2 * b3 - 4 * b1 * b1 * b1 * b3 + b1 * b1 * b2 * b2 - 4 * b2 * b2 * b2 -
           27 * b3 * b3;
}

int disc_sign(int d) { return (d * (d - 1) / 2) % 2 ? -1 : 1; }

/// Discriminant of x^3 + b1 x^2 + b2 x + b3 mod m, with 0 <= b_i < m < 2^31.
long long disc3_mod(long long b1, long long b2, long long b3, long long m) {
    auto mul = [m](long long x, long long y) { return (x * y) % m; };
    long long t = mul(mul(mul(18, b1), b2), b3);
    t = (t + m - mul(mul(mul(4, b1), b1), mul(b1, b3)) % m) % m;
    t = (t + mul(mul(b1, b1), mul(b2, b2))) % m;
    t = (t + m - mul(mul(4, b2), mul(b2, b2))) % m;
    t = (t + m - mul(mul(27, b3), b3)) % m;
    return t % m;
}

long long disc2_mod(long long b1, long long b2, long long m) {
    return ((b1 * b1) % m + m - (4 * b2) % m) % m;
}

}  // namespace

MonicPoly MonicPoly::parse(const std::string& csv, int degree) {
    MonicPoly f;
    std::istringstream is(csv);
    std::string item;
    while (std::getline(is, item, ',')) {
        // trim surrounding whitespace
        const auto a = item.find_first_not_of(" \t");
        const auto z = item.find_last_not_of(" \t");
        if (a == std::string::npos) throw std::invalid_argument("empty coefficient in: " + csv);
        f.b.emplace_back(item.substr(a, z - a + 1));
    }
    if (degree > 0) {
        if (f.degree() > degree)
            throw std::invalid_argument("more coefficients than the requested degree");
        f.b.insert(f.b.begin(), degree - f.degree(), Int(0));
    }
    if (f.b.empty()) throw std::invalid_argument("no coefficients given");
    return f;
}

MonicPoly MonicPoly::shifted(const Int& l) const {
    const int d = degree();
    std::vector<Int> p(d + 1);  // ascending coefficients, p[d] = 1
    p[d] = 1;
    for (int i = 0; i < d; ++i) p[d - 1 - i] = b[i];
    for (int i = 0; i < d; ++i)
        for (int j = d - 1; j >= i; --j) p[j] += l * p[j + 1];
    MonicPoly out;
    out.b.resize(d);
    for (int i = 0; i < d; ++i) out.b[i] = p[d - 1 - i];
    return out;
}

Int MonicPoly::eval(const Int& x) const {
    Int v = 1;
    for (const Int& c : b) v = v * x + c;
    return v;
}

std::string MonicPoly::str() const {
    std::ostringstream os;
    const int d = degree();
    os << "x^" << d;
    for (int i = 0; i < d; ++i) {
        if (b[i] == 0) continue;
        os << (b[i] > 0 ? " + " : " - ");
        const Int a = abs(b[i]);
        const int e = d - 1 - i;
        if (a != 1 || e == 0) os << a.get_str();
        if (e > 1)
            os << (a != 1 ? "*" : "") << "x^" << e;
        else if (e == 1)
            os << (a != 1 ? "*" : "") << "x";
    }
    return os.str();
}

Int discriminant(const MonicPoly& f) {
    const int d = f.degree();
    if (d < 2) throw std::invalid_argument("discriminant needs degree >= 2");
    if (d <= 3) return disc_closed_form(f.b);
    const Int res = resultant_with_derivative(f.b, [](std::vector<std::vector<Int>>& s) {
        IntMat m = s;
        return det_int(m);
    });
    return disc_sign(d) * res;
}

Rat discriminant_rat(const RatVec& b) {
    const int d = static_cast<int>(b.size());
    if (d < 2) throw std::invalid_argument("discriminant needs degree >= 2");
    if (d <= 3) return disc_closed_form(b);
    const Rat res = resultant_with_derivative(b, [](std::vector<std::vector<Rat>>& s) {
        RatMat m = s;
        return det_rat(m);
    });
    return disc_sign(d) * res;
}

std::string to_string(DivisibilityType t) {
    switch (t) {
        case DivisibilityType::NONE: return "NONE";
        case DivisibilityType::WEAK: return "WEAK";
        case DivisibilityType::STRONG: return "STRONG";
    }
    return "?";
}

namespace {

/// disc(f) mod m for reduced coefficients, via the closed forms when the
/// degree allows and int64 arithmetic is safe.
Int disc_mod(const std::vector<Int>& b, const Int& m) {
    const int d = static_cast<int>(b.size());
    if (d <= 3 && m.fits_slong_p() && m.get_si() < (1LL << 31)) {
        const long long mm = m.get_si();
        std::vector<long long> r(d);
        for (int i = 0; i < d; ++i) r[i] = true_mod(b[i], m).get_si();
        return d == 2 ? Int(static_cast<long>(disc2_mod(r[0], r[1], mm)))
                      : Int(static_cast<long>(disc3_mod(r[0], r[1], r[2], mm)));
    }
    MonicPoly g;
    g.b = b;
    return true_mod(discriminant(g), m);
}

}  // namespace

ClassifyOutcome classify(const MonicPoly& f, long p, ClassifyEngine engine, long long budget) {
    if (p < 2) throw std::invalid_argument("classification needs p >= 2");
    const int d = f.degree();
    if (d < 2) throw std::invalid_argument("classification needs degree >= 2");
    const Int p2 = Int(p) * p;
    if (disc_mod(f.b, p2) != 0) return {DivisibilityType::NONE, false};

    const auto fast = [&] {
        for (int i = 0; i < d; ++i) {
            std::vector<Int> g = f.b;
            g[i] += p;
            if (disc_mod(g, p2) != 0) return DivisibilityType::WEAK;
        }
        return DivisibilityType::STRONG;
    };

    // p^d against the budget, without overflow
    bool bruteFits = true;
    {
        Int need = 1;
        for (int i = 0; i < d && bruteFits; ++i) {
            need *= p;
            if (need > Int(static_cast<long>(budget))) bruteFits = false;
        }
    }
    const auto brute = [&] {
        std::vector<long> c(d, 0);
        std::vector<Int> g = f.b;
        for (;;) {
            if (disc_mod(g, p2) != 0) return DivisibilityType::WEAK;
            int i = d - 1;
            while (i >= 0) {
                ++c[i];
                g[i] += p;
                if (c[i] < p) break;
                g[i] -= Int(p) * c[i];
                c[i] = 0;
                --i;
            }
            if (i < 0) return DivisibilityType::STRONG;
        }
    };

    if (engine == ClassifyEngine::FAST) return {fast(), false};
    if (engine == ClassifyEngine::BRUTE) {
        if (!bruteFits)
            throw std::runtime_error("budget exceeded: p^degree passes " +
                                     std::to_string(budget));
        return {brute(), false};
    }
    const DivisibilityType ft = fast();
    if (!bruteFits) return {ft, true};
    const DivisibilityType bt = brute();
    if (ft != bt)
        throw std::logic_error("classification engines disagree on " + f.str() + " at p = " +
                               std::to_string(p) + ": fast " + to_string(ft) + ", brute " +
                               to_string(bt));
    return {ft, false};
}

DivisibilityType divisibility_type(const MonicPoly& f, long p, ClassifyEngine engine,
                                   long long budget) {
    return classify(f, p, engine, budget).type;
}

std::optional<ShiftNormalization> shift_normalize(const MonicPoly& f, long m) {
    if (m < 2) throw std::invalid_argument("shift normalization needs m >= 2");
    const int d = f.degree();
    if (d < 2) throw std::invalid_argument("shift normalization needs degree >= 2");
    const Int mm = m, m2 = Int(m) * m;
    for (long l = 0; l < m; ++l) {
        const MonicPoly s = f.shifted(l);
        if (!mpz_divisible_p(s.b[d - 2].get_mpz_t(), mm.get_mpz_t())) continue;
        if (!mpz_divisible_p(s.b[d - 1].get_mpz_t(), m2.get_mpz_t())) continue;
        ShiftNormalization out;
        out.shift = l;
        out.shifted = s.b;
        out.normalized = s.b;
        out.normalized[d - 2] /= mm;
        out.normalized[d - 1] /= m2;
        return out;
    }
    return std::nullopt;
}

bool W0Matrix::w0_shape() const {
    const int n = size();
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j)
            if (entries[i][j] != 0) return false;
    return true;
}

bool W0Matrix::trace_zero() const {
    Rat t(0);
    for (int i = 0; i < size(); ++i) t += entries[i][i];
    return t == 0;
}

RatVec W0Matrix::superdiagonal() const {
    RatVec v;
    for (int i = 0; i + 1 < size(); ++i) v.push_back(entries[i][i + 1]);
    return v;
}

int W0Matrix::leastCommonDenominator() const {
    Int l = 1;
    for (const auto& row : entries)
        for (const Rat& x : row) {
            Int g;
            mpz_lcm(g.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
            l = g;
        }
    return static_cast<int>(l.get_si());
}

std::string W0Matrix::csv() const {
    std::ostringstream os;
    for (const auto& row : entries) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) os << ',';
            os << rat_str(row[j]);
        }
        os << '\n';
    }
    return os.str();
}

std::string W0Matrix::to_json() const {
    nlohmann::json j;
    j["size"] = size();
    j["rows"] = nlohmann::json::array();
    for (const auto& row : entries) {
        nlohmann::json r = nlohmann::json::array();
        for (const Rat& x : row)
            r.push_back({{"num", x.get_num().get_str()}, {"den", x.get_den().get_str()}});
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

W0Matrix W0Matrix::parse_csv(const std::string& text) {
    W0Matrix m;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        RatVec row;
        std::istringstream ls(line);
        std::string item;
        while (std::getline(ls, item, ',')) row.push_back(rat_parse(item));
        m.entries.push_back(std::move(row));
    }
    for (const auto& row : m.entries)
        if (row.size() != m.entries.size())
            throw std::invalid_argument("matrix CSV is not square");
    return m;
}

W0Matrix band_matrix(const std::vector<Int>& b) {
    const int n = static_cast<int>(b.size());
    if (n < 1) throw std::invalid_argument("band matrix needs at least one coefficient");
    W0Matrix m;
    m.entries.assign(n, RatVec(n, Rat(0)));
    for (int i = 0; i + 1 < n; ++i) m.entries[i][i + 1] = 1;
    for (int k = 1; k <= n; ++k) {
        const Rat bk(b[k - 1]);
        if ((n - k) % 2 == 0) {
            const int t = (n - k) / 2;
            m.entries[k + t - 1][t] = -bk;
        } else if (k == 1) {
            m.entries[n / 2][n / 2] = -bk;
        } else {
            const int t0 = (n - k - 1) / 2;
            m.entries[k + t0 - 1][t0] = -bk / 2;
            m.entries[k + t0][t0 + 1] = -bk / 2;
        }
    }
    const RatVec cp = charpoly(m.entries);
    for (int i = 0; i < n; ++i)
        if (cp[i + 1] != Rat(b[i]))
            throw std::logic_error("band companion characteristic polynomial mismatch");
    return m;
}

W0Matrix build_companion(const std::vector<Int>& b) {
    if (b.size() % 2 != 0)
        throw std::invalid_argument("build_companion expects an even-degree polynomial");
    return band_matrix(b);
}

W0Matrix build_companion_even(const std::vector<Int>& b) {
    if (b.size() % 2 != 1)
        throw std::invalid_argument("build_companion_even expects an odd-degree polynomial");
    return band_matrix(b);
}

W0Matrix companion(const std::vector<Int>& b) {
    return b.size() % 2 == 0 ? build_companion(b) : build_companion_even(b);
}

Rat q_invariant(const W0Matrix& v) {
    Rat q(1);
    for (const Rat& x : v.superdiagonal()) q *= x;
    return abs(q);
}

namespace {

/// Exact square root of a nonnegative rational, when it is a perfect square.
std::optional<Rat> rat_sqrt(const Rat& x) {
    if (x < 0) return std::nullopt;
    const Int num = x.get_num(), den = x.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    Int rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return Rat(rn) / Rat(rd);
}

}  // namespace

double q_invariant_orbit(const W0Matrix& v) {
    const RatVec s = v.superdiagonal();
    const int n = v.size();
    double q = 1;
    for (int i = 1; i < n - i; ++i) q *= std::sqrt(std::abs(Rat(s[i - 1] * s[n - i - 1]).get_d()));
    if (n % 2 == 0 && n >= 2) q *= std::abs(s[n / 2 - 1].get_d());
    return q;
}

SigmaResult sigma_m(const MonicPoly& f, long m) {
    const auto sn = shift_normalize(f, m);
    if (!sn)
        throw std::runtime_error("sigma: no shift in [0, " + std::to_string(m) +
                                 ") normalizes the trailing coefficients of " + f.str());
    const int n = f.degree();
    W0Matrix w = companion(sn->shifted);
    for (int i = 0; i < n; ++i) w.entries[i][i] += sn->shift;

    // conjugate by diag(m, 1, ..., 1, 1/m)
    RatVec d(n, Rat(1));
    d[0] = m;
    d[n - 1] = Rat(1, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w.entries[i][j] *= d[i] / d[j];

    SigmaResult out;
    out.shift = sn->shift;

    // postcondition: characteristic polynomial is f itself
    const RatVec cp = charpoly(w.entries);
    for (int i = 0; i < n; ++i)
        if (cp[i + 1] != Rat(f.b[i]))
            throw std::logic_error("sigma: characteristic polynomial mismatch");

    // postcondition: superdiagonal (m, 1, ..., 1, m), degenerate (m^2) for n = 2
    out.superdiagonal = w.superdiagonal();
    {
        RatVec expected(n - 1, Rat(1));
        if (n >= 3) {
            expected.front() = m;
            expected.back() = m;
        } else {
            expected.front() = Int(m) * m;
        }
        if (out.superdiagonal != expected)
            throw std::logic_error("sigma: unexpected superdiagonal");
    }

    // postcondition: every denominator divides 4
    for (const auto& row : w.entries)
        for (const Rat& x : row)
            if (!denominator_divides(x, 4))
                throw std::logic_error("sigma: entry denominator does not divide 4");
    out.maxDenominator = w.leastCommonDenominator();
    out.strictlyIntegral = out.maxDenominator == 1;

    out.qLiteral = q_invariant(w);
    // orbit-paired value, exactly
    Rat orbit(1);
    for (int i = 1; i < n - i; ++i) {
        const auto root = rat_sqrt(abs(out.superdiagonal[i - 1] * out.superdiagonal[n - i - 1]));
        if (!root) throw std::logic_error("sigma: paired slots do not multiply to a square");
        orbit *= *root;
    }
    if (n % 2 == 0 && n >= 2) orbit *= abs(out.superdiagonal[n / 2 - 1]);
    out.qOrbit = orbit;
    out.matrix = std::move(w);
    return out;
}

}  // namespace ade
