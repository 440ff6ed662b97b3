/* Local densities (exact and Monte-Carlo), empirical squarefree sieves,
   tail classification counts, and the comparison report. */
#include "ade/sieve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ade/anfamily.hpp"
#include "ade/jsonutil.hpp"
#include "ade/linalg.hpp"
#include "ade/rng.hpp"
#include "json.hpp"

namespace ade {

namespace {

using i64 = long long;
using u64 = std::uint64_t;
using i128 = __int128;

/// long long -> Int (gmpxx only constructs from long; lossless on LP64)
Int int_ll(long long x) { return Int(static_cast<long>(x)); }

i64 mulmod(i64 a, i64 b, i64 m) { return static_cast<i64>(static_cast<i128>(a) * b % m); }

i64 powmod(i64 a, i64 e, i64 m) {
    i64 r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 inv_mod(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
    while (a1 != 0) {
        const i64 q = g / a1;
        g -= q * a1;
        std::swap(g, a1);
        x -= q * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw std::invalid_argument("inverse does not exist");
    return ((x % m) + m) % m;
}

/// Square root of n mod odd prime p; n must be a quadratic residue.
i64 tonelli(i64 n, i64 p) {
    n %= p;
    if (n < 0) n += p;
    if (n == 0) return 0;
    if (p % 4 == 3) return powmod(n, (p + 1) / 4, p);
    i64 q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    i64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    i64 m = s, c = powmod(z, q, p), t = powmod(n, q, p), r = powmod(n, (q + 1) / 2, p);
    while (t != 1) {
        i64 t2 = t;
        int i = 0;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, p);
            ++i;
        }
        i64 b = c;
        for (int j = 0; j < m - i - 1; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

/// Lift r with r^2 = t (mod p) to the root mod p^2 (p odd, p does not divide t).
i64 hensel_lift(i64 r, i64 t, i64 p, i64 p2) {
    const i64 diff = ((t - mulmod(r, r, p2)) % p2 + p2) % p2;
    const i64 k = mulmod((diff / p) % p, inv_mod((2 * r) % p, p), p);
    return (r + k * p) % p2;
}

Int true_mod(const Int& x, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

void run_partitioned(long count, int threads, const std::function<void(long, int)>& body) {
    if (threads <= 1) {
        for (long i = 0; i < count; ++i) body(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (long i = t; i < count; i += threads) body(i, t);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

Int FamilySpec::disc(const std::vector<Int>& coeffs) const {
    if (static_cast<int>(coeffs.size()) != arity())
        throw std::invalid_argument("wrong number of coefficients for family " + name);
    Int total = 0;
    for (const auto& [e, c] : discTerms) {
        Int term = c;
        for (int i = 0; i < arity(); ++i)
            for (int k = 0; k < e[i]; ++k) term *= coeffs[i];
        total += term;
    }
    return total;
}

FamilySpec family_A2() {
    FamilySpec f;
    f.name = "A2";
    f.dynkin = DynkinType::parse("A2");
    f.degrees = {2, 3};
    f.traceZero = true;
    f.discNormalizer = 1;
    f.discTerms = {{{3, 0}, Int(-4)}, {{0, 2}, Int(-27)}};
    f.polynomialNote = "x^3 + a*x + b";
    return f;
}

FamilySpec family_A4() {
    FamilySpec f;
    f.name = "A4";
    f.dynkin = DynkinType::parse("A4");
    f.degrees = {2, 3, 4, 5};
    f.traceZero = true;
    f.discNormalizer = 1;
    f.discTerms = {
        {{5, 0, 0, 2}, Int(108)},  {{4, 1, 1, 1}, Int(-72)},   {{4, 0, 3, 0}, Int(16)},
        {{3, 3, 0, 1}, Int(16)},   {{3, 2, 2, 0}, Int(-4)},    {{3, 0, 1, 2}, Int(-900)},
        {{2, 2, 0, 2}, Int(825)},  {{2, 1, 2, 1}, Int(560)},   {{2, 0, 4, 0}, Int(-128)},
        {{1, 3, 1, 1}, Int(-630)}, {{1, 2, 3, 0}, Int(144)},   {{1, 1, 0, 3}, Int(-3750)},
        {{1, 0, 2, 2}, Int(2000)}, {{0, 5, 0, 1}, Int(108)},   {{0, 4, 2, 0}, Int(-27)},
        {{0, 2, 1, 2}, Int(2250)}, {{0, 1, 3, 1}, Int(-1600)}, {{0, 0, 5, 0}, Int(256)},
        {{0, 0, 0, 4}, Int(3125)},
    };
    f.polynomialNote = "x^5 + a*x^3 + b*x^2 + c*x + d";
    return f;
}

FamilySpec family_const1() {
    FamilySpec f;
    f.name = "const1";
    f.dynkin = DynkinType::parse("A2");
    f.degrees = {2, 3};
    f.traceZero = true;
    f.discNormalizer = 1;
    f.discTerms = {{{0, 0}, Int(1)}};
    f.polynomialNote = "synthetic control with discriminant 1";
    return f;
}

FamilySpec family_by_name(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::toupper(c); });
    if (n == "A2") return family_A2();
    if (n == "A4") return family_A4();
    if (n == "CONST1") return family_const1();
    throw std::invalid_argument("unknown family: " + name +
                                " (available: A2, A4, const1)");
}

Int Box::point_count() const {
    Int n = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) n *= int_ll(hi[i] - lo[i] + 1);
    return n;
}

Box family_box(const FamilySpec& fam, long X) {
    if (X < 1) throw std::invalid_argument("box height must be >= 1");
    Box box;
    for (int d : fam.degrees) {
        Int h = 1;
        for (int i = 0; i < d; ++i) h *= X;
        h -= 1;
        if (!h.fits_slong_p()) throw std::invalid_argument("box height overflows");
        box.hi.push_back(h.get_si());
        box.lo.push_back(-h.get_si());
    }
    return box;
}

// ---------------------------------------------------------------------------
// local densities

namespace {

std::string method_name(DensityMethod m) {
    switch (m) {
        case DensityMethod::EXACT: return "exact";
        case DensityMethod::EXACT2: return "exact2";
        case DensityMethod::MC: return "mc";
    }
    return "?";
}

std::string cache_key_path(const std::string& dir, const FamilySpec& fam, long p,
                           DensityMethod method, long long samples, u64 seed) {
    std::ostringstream os;
    os << dir << "/density_" << fam.name << "_p" << p << "_" << method_name(method);
    if (method == DensityMethod::MC) os << "_n" << samples << "_s" << seed;
    os << ".json";
    return os.str();
}

std::optional<LocalDensity> cache_load(const FamilySpec& fam, long p, DensityMethod method,
                                       long long samples, u64 seed) {
    const auto dir = cache_dir();
    if (!dir) return std::nullopt;
    try {
        const auto text = read_file(cache_key_path(*dir, fam, p, method, samples, seed));
        const auto j = nlohmann::json::parse(text);
        if (j.at("family") != fam.name || j.at("p") != p ||
            j.at("method") != method_name(method))
            return std::nullopt;
        LocalDensity d;
        d.p = p;
        d.rho = rat_parse(j.at("rho").get<std::string>());
        d.estimate = d.rho.get_d();
        d.se = j.at("se").get<double>();
        d.method = method;
        d.samples = j.at("samples").get<long long>();
        d.seed = j.at("seed").get<u64>();
        d.fromCache = true;
        return d;
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable cache entries are recomputed
    }
}

void cache_store(const FamilySpec& fam, const LocalDensity& d) {
    const auto dir = cache_dir();
    if (!dir) return;
    try {
        nlohmann::json j;
        j["family"] = fam.name;
        j["p"] = d.p;
        j["method"] = method_name(d.method);
        j["rho"] = rat_str(d.rho);
        j["se"] = d.se;
        j["samples"] = d.samples;
        j["seed"] = d.seed;
        write_file_atomic(cache_key_path(*dir, fam, d.p, d.method, d.samples, d.seed),
                          j.dump(2) + "\n");
    } catch (const std::exception&) {
        // caching is best-effort
    }
}

/// Reduced term list for arithmetic mod m.
struct ModTerms {
    std::vector<std::vector<int>> exps;
    std::vector<i64> coeffs;
    int arity = 0;
    int maxExp = 0;
};

ModTerms reduce_terms(const FamilySpec& fam, i64 m) {
    ModTerms t;
    t.arity = fam.arity();
    for (const auto& [e, c] : fam.discTerms) {
        t.exps.push_back(e);
        t.coeffs.push_back(true_mod(c, int_ll(m)).get_si());
        for (int x : e) t.maxExp = std::max(t.maxExp, x);
    }
    return t;
}

i64 eval_terms(const ModTerms& t, const std::vector<i64>& v, i64 m) {
    i64 total = 0;
    for (std::size_t k = 0; k < t.coeffs.size(); ++k) {
        i64 term = t.coeffs[k];
        for (int i = 0; i < t.arity; ++i)
            for (int e = 0; e < t.exps[k][i]; ++e) term = mulmod(term, v[i], m);
        total = (total + term) % m;
    }
    return total;
}

/// Count fibres in (Z/p^2)^arity with p^2 | disc by full enumeration.
/// The scan coordinate is collapsed to a univariate Horner evaluation; the
/// two engines scan different coordinates in different directions.
long long exact_divisible_count(const FamilySpec& fam, i64 p2, bool secondEngine) {
    const int r = fam.arity();
    const int scan = secondEngine ? 0 : r - 1;
    const ModTerms terms = reduce_terms(fam, p2);

    int maxScanExp = 0;
    for (const auto& e : terms.exps) maxScanExp = std::max(maxScanExp, e[scan]);

    // power table pw[v][e] = v^e mod p2
    std::vector<std::vector<i64>> pw(p2, std::vector<i64>(terms.maxExp + 1, 1));
    for (i64 v = 0; v < p2; ++v)
        for (int e = 1; e <= terms.maxExp; ++e) pw[v][e] = mulmod(pw[v][e - 1], v, p2);

    std::vector<int> others;
    for (int i = 0; i < r; ++i)
        if (i != scan) others.push_back(i);

    std::vector<i64> val(r, 0);
    std::vector<i64> horner(maxScanExp + 1);
    long long divisible = 0;
    for (;;) {
        std::fill(horner.begin(), horner.end(), 0);
        for (std::size_t k = 0; k < terms.coeffs.size(); ++k) {
            i64 term = terms.coeffs[k];
            for (int i : others) term = mulmod(term, pw[val[i]][terms.exps[k][i]], p2);
            const int e = terms.exps[k][scan];
            horner[e] = (horner[e] + term) % p2;
        }
        if (!secondEngine) {
            for (i64 v = 0; v < p2; ++v) {
                i64 acc = horner[maxScanExp];
                for (int e = maxScanExp - 1; e >= 0; --e) acc = (mulmod(acc, v, p2) + horner[e]) % p2;
                if (acc == 0) ++divisible;
            }
        } else {
            for (i64 v = p2 - 1; v >= 0; --v) {
                i64 acc = horner[maxScanExp];
                for (int e = maxScanExp - 1; e >= 0; --e) acc = (mulmod(acc, v, p2) + horner[e]) % p2;
                if (acc == 0) ++divisible;
            }
        }
        // odometer over the non-scan coordinates
        std::size_t i = 0;
        for (; i < others.size(); ++i) {
            if (++val[others[i]] < p2) break;
            val[others[i]] = 0;
        }
        if (i == others.size()) break;
    }
    return divisible;
}

}  // namespace

LocalDensity local_density(const FamilySpec& fam, long p, DensityMethod method,
                           long long fibreBudget, long long samples, u64 seed) {
    if (p < 2) throw std::invalid_argument("local density needs a prime p >= 2");
    if (auto hit = cache_load(fam, p, method, samples, seed)) return *hit;

    const i64 p2 = static_cast<i64>(p) * p;
    LocalDensity d;
    d.p = p;
    d.method = method;
    if (method == DensityMethod::MC) {
        const ModTerms terms = reduce_terms(fam, p2);
        CounterRng rng(seed);
        std::vector<i64> v(fam.arity());
        long long nondiv = 0;
        for (long long s = 0; s < samples; ++s) {
            for (auto& x : v) x = static_cast<i64>(rng.next_below(static_cast<u64>(p2)));
            if (eval_terms(terms, v, p2) != 0) ++nondiv;
        }
        d.rho = Rat(int_ll(nondiv)) / Rat(int_ll(samples));
        d.estimate = static_cast<double>(nondiv) / static_cast<double>(samples);
        d.se = std::sqrt(std::max(0.0, d.estimate * (1 - d.estimate) / samples));
        d.samples = samples;
        d.seed = seed;
    } else {
        Int fibres = 1;
        bool fits = true;
        for (int i = 0; i < fam.arity(); ++i) {
            fibres *= int_ll(p2);
            if (fibres > int_ll(fibreBudget)) fits = false;
        }
        if (!fits)
            throw std::runtime_error("budget exceeded: p^(2*arity) = " + fibres.get_str() +
                                     " fibres passes " + std::to_string(fibreBudget));
        const long long divisible =
            exact_divisible_count(fam, p2, method == DensityMethod::EXACT2);
        d.rho = Rat(fibres - int_ll(divisible)) / Rat(fibres);
        d.estimate = d.rho.get_d();
        d.se = 0;
        d.samples = 0;
        d.seed = 0;
    }
    cache_store(fam, d);
    return d;
}

// ---------------------------------------------------------------------------
// squarefree status

std::vector<long> primes_up_to(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    for (long i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long j = i * i; j >= 0 && j <= n; j += i) comp[j] = true;
    }
    return out;
}

namespace {

const std::vector<long>& trial_primes() {
    static const std::vector<long> pr = primes_up_to(1'000'000);
    return pr;
}

bool is_probable_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

/// One Pollard-rho factor of composite n, within an iteration budget.
std::optional<Int> pollard_factor(const Int& n, long long& budget, u64 salt) {
    if (n % 2 == 0) return Int(2);
    CounterRng rng(0x9e3779b97f4a7c15ULL ^ salt);
    while (budget > 0) {
        Int x = Int(static_cast<unsigned long>(rng.next_u64() % 1000000007ULL)) % n;
        const Int c = Int(static_cast<unsigned long>(rng.next_u64() % 1000000007ULL)) % n + 1;
        Int y = x, d = 1;
        while (d == 1 && budget > 0) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Int diff = x - y;
            if (diff < 0) diff = -diff;
            if (diff == 0) break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            --budget;
        }
        if (d != 1 && d != n) return d;
    }
    return std::nullopt;
}

/// Squarefreeness of c, which has no prime factor <= knownBound.
SquarefreeStatus cofactor_status(Int c, long knownBound, long long budget) {
    if (c == 1) return SquarefreeStatus::SQUAREFREE;
    if (mpz_perfect_square_p(c.get_mpz_t())) return SquarefreeStatus::NOT_SQUAREFREE;
    if (is_probable_prime(c)) return SquarefreeStatus::SQUAREFREE;
    if (c < Int(knownBound) * knownBound * knownBound)
        return SquarefreeStatus::SQUAREFREE;  // product of two distinct primes
    // full factorization
    std::vector<Int> todo{c};
    std::vector<Int> primes;
    u64 salt = 0;
    while (!todo.empty()) {
        Int x = todo.back();
        todo.pop_back();
        if (x == 1) continue;
        if (mpz_perfect_square_p(x.get_mpz_t())) return SquarefreeStatus::NOT_SQUAREFREE;
        if (is_probable_prime(x)) {
            for (const Int& q : primes)
                if (q == x) return SquarefreeStatus::NOT_SQUAREFREE;
            primes.push_back(x);
            continue;
        }
        const auto f = pollard_factor(x, budget, ++salt);
        if (!f) return SquarefreeStatus::UNCERTAIN;
        todo.push_back(*f);
        todo.push_back(x / *f);
    }
    return SquarefreeStatus::SQUAREFREE;
}

}  // namespace

SquarefreeStatus squarefree_status(const Int& n0, long trialBound, long long pollardBudget) {
    Int n = abs(n0);
    if (n == 0) return SquarefreeStatus::NOT_SQUAREFREE;
    if (n == 1) return SquarefreeStatus::SQUAREFREE;
    long bound = 1;
    for (long p : trial_primes()) {
        if (p > trialBound) break;
        bound = p;
        if (Int(p) * p * p > n) break;  // cofactor now decidable directly
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            n /= p;
            if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return SquarefreeStatus::NOT_SQUAREFREE;
        }
    }
    return cofactor_status(n, bound, pollardBudget);
}

// ---------------------------------------------------------------------------
// empirical sieves

double SieveCounts::ratio() const {
    if (total == 0) return 0;
    return Rat(squarefree).get_d() / Rat(total).get_d();
}

namespace {

bool is_planar_cubic(const FamilySpec& fam) {
    return fam.discTerms.size() == 2 && fam.arity() == 2 &&
           fam.discTerms[0].first == std::vector<int>{3, 0} && fam.discTerms[0].second == -4 &&
           fam.discTerms[1].first == std::vector<int>{0, 2} && fam.discTerms[1].second == -27 &&
           fam.degrees == std::vector<int>{2, 3};
}

struct PrimeData {
    i64 p, p2, inv27;
};

std::vector<PrimeData> row_sieve_primes(i64 maxDisc) {
    const Int lim = isqrt(int_ll(maxDisc));
    std::vector<PrimeData> out;
    for (long p : primes_up_to(lim.get_si())) {
        if (p < 5) continue;
        const i64 p2 = static_cast<i64>(p) * p;
        out.push_back({p, p2, inv_mod(27 % p2, p2)});
    }
    return out;
}

/// Report every mark pattern (first index, stride) for row a at prime data
/// pd over b in [-bmax, bmax]; strong hits (p | a and p | b) and weak hits
/// (everything else) are reported separately.
template <class Mark>
void solve_row(i64 a, const PrimeData& pd, i64 bmax, Mark&& mark /* (idx0, stride, strong) */) {
    const i64 p = pd.p, p2 = pd.p2;
    i64 am = a % p2;
    if (am < 0) am += p2;
    // t = -4 a^3 / 27 mod p^2; b is a hit iff b^2 = t (mod p^2)
    i64 t = mulmod(mulmod(am, am, p2), am, p2);
    t = mulmod(t, p2 - 4 % p2, p2);
    t = mulmod(t, pd.inv27, p2);
    if (t == 0) {
        // p | a, hits are exactly p | b: strong divisibility
        mark(bmax % p, p, true);
        return;
    }
    if (t % p == 0) return;  // p || t: no square roots
    const i64 tp = t % p;
    if (powmod(tp, (p - 1) / 2, p) != 1) return;  // non-residue
    const i64 r = tonelli(tp, p);
    const i64 r2 = hensel_lift(r, t, p, p2);
    mark((r2 + bmax) % p2, p2, false);
    mark((p2 - r2 + bmax) % p2, p2, false);
}

long count_zero_disc(long amax, i64 bmax) {
    long count = 1;  // the origin
    for (long t = 1;; ++t) {
        const i64 a = 3LL * t * t;
        const i64 b = 2LL * t * t * t;
        if (a > amax || b > bmax) break;
        count += 2;  // (-3t^2, 2t^3) and (-3t^2, -2t^3)
    }
    return count;
}

}  // namespace

SieveCounts empirical_density_rowsieve(const FamilySpec& fam, long X, int threads) {
    if (!is_planar_cubic(fam))
        throw std::invalid_argument("the row sieve is specific to the planar cubic family");
    const Box box = family_box(fam, X);
    const long amax = static_cast<long>(box.hi[0]);
    const i64 bmax = box.hi[1];
    const i64 width = 2 * bmax + 1;
    if (box.point_count() > Int(100'000'000))
        throw std::runtime_error("budget exceeded: box has " + box.point_count().get_str() +
                                 " points (limit 100000000)");
    const i64 maxDisc = 4 * static_cast<i64>(amax) * amax * amax + 27 * bmax * bmax;
    const std::vector<PrimeData> primes = row_sieve_primes(maxDisc);

    const int nThreads = std::max(1, threads);
    std::vector<Int> counts(nThreads, Int(0));
    std::vector<std::vector<std::uint8_t>> marks(nThreads);

    run_partitioned(2 * static_cast<long>(amax) + 1, nThreads, [&](long row, int tid) {
        const i64 a = -static_cast<i64>(amax) + row;
        if (a % 3 == 0) return;  // 9 divides every discriminant in the row
        auto& mark = marks[tid];
        mark.assign(static_cast<std::size_t>(width), 0);
        // p = 2: 4 | disc exactly when b is even
        for (i64 i = bmax % 2; i < width; i += 2) mark[i] = 1;
        for (const PrimeData& pd : primes)
            solve_row(a, pd, bmax, [&](i64 idx0, i64 stride, bool) {
                for (i64 i = idx0; i < width; i += stride) mark[i] = 1;
            });
        long long free = 0;
        for (i64 i = 0; i < width; ++i)
            if (!mark[i]) ++free;
        counts[tid] += int_ll(free);
    });

    SieveCounts out;
    out.total = box.point_count();
    for (const Int& c : counts) out.squarefree += c;
    out.zeroDisc = count_zero_disc(amax, bmax);
    out.uncertain = 0;
    out.inconclusive = false;
    return out;
}

SieveCounts empirical_density_perpoint(const FamilySpec& fam, long X, int threads,
                                       long trialBound, long long pointBudget) {
    const Box box = family_box(fam, X);
    if (box.point_count() > int_ll(pointBudget))
        throw std::runtime_error("budget exceeded: box has " + box.point_count().get_str() +
                                 " points (limit " + std::to_string(pointBudget) + ")");
    const int r = fam.arity();
    const long firstRange = static_cast<long>(box.hi[0] - box.lo[0] + 1);
    const int nThreads = std::max(1, threads);
    std::vector<SieveCounts> parts(nThreads);

    run_partitioned(firstRange, nThreads, [&](long row, int tid) {
        std::vector<Int> v(r);
        v[0] = int_ll(box.lo[0] + row);
        std::vector<long long> c(r, 0);
        for (int i = 1; i < r; ++i) {
            c[i] = box.lo[i];
            v[i] = int_ll(c[i]);
        }
        auto& part = parts[tid];
        for (;;) {
            const Int d = fam.disc(v);
            if (d == 0) {
                part.zeroDisc += 1;
            } else {
                switch (squarefree_status(d, trialBound)) {
                    case SquarefreeStatus::SQUAREFREE: part.squarefree += 1; break;
                    case SquarefreeStatus::NOT_SQUAREFREE: break;
                    case SquarefreeStatus::UNCERTAIN: part.uncertain += 1; break;
                }
            }
            int i = r - 1;
            for (; i >= 1; --i) {
                if (++c[i] <= box.hi[i]) {
                    v[i] = int_ll(c[i]);
                    break;
                }
                c[i] = box.lo[i];
                v[i] = int_ll(c[i]);
            }
            if (i == 0) break;
        }
    });

    SieveCounts out;
    out.total = box.point_count();
    for (const auto& p : parts) {
        out.squarefree += p.squarefree;
        out.zeroDisc += p.zeroDisc;
        out.uncertain += p.uncertain;
    }
    out.inconclusive = out.uncertain * 1000 > out.total;
    return out;
}

SieveCounts empirical_density(const FamilySpec& fam, long X, int threads, long trialBound) {
    if (is_planar_cubic(fam)) return empirical_density_rowsieve(fam, X, threads);
    return empirical_density_perpoint(fam, X, threads, trialBound);
}

// ---------------------------------------------------------------------------
// tail counts

namespace {

/// Exact partial derivative of the discriminant with respect to ambient
/// coefficient i at f, via interpolation of disc(f + s e_i) in s.
Int ambient_disc_partial(const MonicPoly& f, int i) {
    const int deg = 2 * f.degree() - 2 + 1;  // generous degree bound in s
    std::vector<RatVec> cols(deg + 1, RatVec(deg + 1));
    RatVec target(deg + 1);
    for (int s = 0; s <= deg; ++s) {
        Rat power(1);
        for (int k = 0; k <= deg; ++k) {
            cols[k][s] = power;
            power *= s;
        }
        MonicPoly g = f;
        g.b[i] += s;
        target[s] = Rat(discriminant(g));
    }
    const RatVec c = solve_columns(cols, target);
    if (!is_integer(c[1])) throw std::logic_error("discriminant partial is not integral");
    return c[1].get_num();
}

/// The family point embedded as a monic polynomial (zero trace coefficient).
MonicPoly embed_point(const FamilySpec& fam, const std::vector<Int>& coeffs) {
    if (!fam.traceZero)
        throw std::invalid_argument("tail classification needs a trace-zero family");
    MonicPoly f;
    f.b.push_back(0);
    for (const Int& c : coeffs) f.b.push_back(c);
    return f;
}

std::vector<TailCounts> tail_grid_planar_cubic(const FamilySpec& fam, long X,
                                               std::vector<long> Ms, int threads) {
    std::sort(Ms.begin(), Ms.end());
    const std::size_t nM = Ms.size();
    if (nM > 16) throw std::invalid_argument("at most 16 thresholds per grid");
    const Box box = family_box(fam, X);
    const long amax = static_cast<long>(box.hi[0]);
    const i64 bmax = box.hi[1];
    const i64 width = 2 * bmax + 1;
    if (box.point_count() > Int(100'000'000))
        throw std::runtime_error("budget exceeded: box has " + box.point_count().get_str() +
                                 " points (limit 100000000)");
    const i64 maxDisc = 4 * static_cast<i64>(amax) * amax * amax + 27 * bmax * bmax;
    const std::vector<PrimeData> primes = row_sieve_primes(maxDisc);

    // bits 0..cnt-1 set, where cnt thresholds lie strictly below p
    const auto mask_below = [&Ms](i64 p) -> std::uint16_t {
        std::size_t cnt = 0;
        while (cnt < Ms.size() && Ms[cnt] < p) ++cnt;
        return static_cast<std::uint16_t>((1u << cnt) - 1);
    };

    const int nThreads = std::max(1, threads);
    std::vector<std::vector<long long>> strongParts(nThreads, std::vector<long long>(nM, 0));
    std::vector<std::vector<long long>> weakParts(nThreads, std::vector<long long>(nM, 0));
    std::vector<std::vector<std::uint16_t>> strongRows(nThreads), weakRows(nThreads);

    run_partitioned(2 * static_cast<long>(amax) + 1, nThreads, [&](long row, int tid) {
        const i64 a = -static_cast<i64>(amax) + row;
        auto& strongRow = strongRows[tid];
        auto& weakRow = weakRows[tid];
        strongRow.assign(static_cast<std::size_t>(width), 0);
        weakRow.assign(static_cast<std::size_t>(width), 0);
        // p = 2: every even b is a hit and the divisibility is strong
        if (const std::uint16_t m2 = mask_below(2)) {
            for (i64 i = bmax % 2; i < width; i += 2) strongRow[i] |= m2;
        }
        // p = 3: 9 | disc exactly when 3 | a, for every b; always strong
        if (a % 3 == 0) {
            if (const std::uint16_t m3 = mask_below(3)) {
                for (i64 i = 0; i < width; ++i) strongRow[i] |= m3;
            }
        }
        for (const PrimeData& pd : primes) {
            const std::uint16_t mp = mask_below(pd.p);
            if (!mp) continue;
            solve_row(a, pd, bmax, [&](i64 idx0, i64 stride, bool strong) {
                auto& target = strong ? strongRow : weakRow;
                for (i64 i = idx0; i < width; i += stride) target[i] |= mp;
            });
        }
        // tally, excluding zero-discriminant points (handled by the gcd rule)
        const i64 fourA3 = 4 * a * a * a;
        for (i64 i = 0; i < width; ++i) {
            const i64 b = i - bmax;
            if (fourA3 + 27 * b * b == 0) continue;
            std::uint16_t s = strongRow[i], w = weakRow[i];
            for (std::size_t j = 0; j < nM; ++j) {
                if (s & (1u << j)) ++strongParts[tid][j];
                if (w & (1u << j)) ++weakParts[tid][j];
            }
        }
    });

    std::vector<TailCounts> out(nM);
    for (std::size_t j = 0; j < nM; ++j) {
        out[j].M = Ms[j];
        out[j].total = box.point_count();
        for (int t = 0; t < nThreads; ++t) {
            out[j].strongCount += int_ll(strongParts[t][j]);
            out[j].weakCount += int_ll(weakParts[t][j]);
        }
    }

    // zero-discriminant points: gradient gcd rule on (a, b) = (-3t^2, +-2t^3)
    // where the partial derivatives are (18ab, -12a^2, -54b), with gcd 108|t|^3;
    // the origin has a vanishing gradient and is strong at every threshold.
    for (std::size_t j = 0; j < nM; ++j) out[j].strongCount += 1;  // the origin
    for (long t = 1;; ++t) {
        const i64 a = 3LL * t * t, b = 2LL * t * t * t;
        if (a > amax || b > bmax) break;
        long largest = 3;  // gcd = 108 t^3 = 2^2 3^3 t^3
        long rem = t;
        for (long q = 2; q * q <= rem; ++q)
            while (rem % q == 0) {
                largest = std::max(largest, q);
                rem /= q;
            }
        if (rem > 1) largest = std::max(largest, rem);
        for (std::size_t j = 0; j < nM; ++j) {
            // every prime divides 0, and any prime outside the gradient gcd
            // gives a weak divisibility; infinitely many exceed any threshold
            out[j].weakCount += 2;
            if (largest > Ms[j]) out[j].strongCount += 2;
        }
    }
    return out;
}

std::vector<TailCounts> tail_grid_perpoint(const FamilySpec& fam, long X, std::vector<long> Ms,
                                           long long pointBudget) {
    std::sort(Ms.begin(), Ms.end());
    const Box box = family_box(fam, X);
    if (box.point_count() > int_ll(pointBudget))
        throw std::runtime_error("budget exceeded: box has " + box.point_count().get_str() +
                                 " points (limit " + std::to_string(pointBudget) + ")");
    const int r = fam.arity();
    std::vector<TailCounts> out(Ms.size());
    for (std::size_t j = 0; j < Ms.size(); ++j) {
        out[j].M = Ms[j];
        out[j].total = box.point_count();
    }

    std::vector<long long> c(r);
    for (int i = 0; i < r; ++i) c[i] = box.lo[i];
    for (;;) {
        std::vector<Int> v(r);
        for (int i = 0; i < r; ++i) v[i] = int_ll(c[i]);
        const Int d = fam.disc(v);
        const MonicPoly f = embed_point(fam, v);
        if (d == 0) {
            Int g = 0;
            for (int i = 0; i < f.degree(); ++i)
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Int(abs(ambient_disc_partial(f, i))).get_mpz_t());
            if (g == 0) {
                for (auto& tc : out) tc.strongCount += 1;
            } else {
                Int rem = g;
                long largest = 1;
                for (long q : trial_primes()) {
                    if (Int(q) * q > rem) break;
                    if (mpz_divisible_ui_p(rem.get_mpz_t(), q)) {
                        largest = q;
                        while (mpz_divisible_ui_p(rem.get_mpz_t(), q)) rem /= q;
                    }
                }
                if (rem > 1) {
                    if (!is_probable_prime(rem) || !rem.fits_slong_p())
                        throw std::runtime_error("tail gcd factorization out of reach");
                    largest = std::max(largest, rem.get_si());
                }
                for (auto& tc : out) {
                    tc.weakCount += 1;
                    if (largest > tc.M) tc.strongCount += 1;
                }
            }
        } else {
            // primes with p^2 | d, via full factorization
            Int n = abs(d);
            bool sawStrong = false, sawWeak = false;
            long strongMax = 0, weakMax = 0;
            for (long q : trial_primes()) {
                if (Int(q) * q > n) break;
                if (!mpz_divisible_ui_p(n.get_mpz_t(), q)) continue;
                int e = 0;
                while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
                    n /= q;
                    ++e;
                }
                if (e < 2) continue;
                if (divisibility_type(f, q, ClassifyEngine::FAST) == DivisibilityType::STRONG) {
                    sawStrong = true;
                    strongMax = std::max(strongMax, q);
                } else {
                    sawWeak = true;
                    weakMax = std::max(weakMax, q);
                }
            }
            if (n > 1 && !is_probable_prime(n)) {
                // n is composite with no prime factor among the trial primes
                if (mpz_perfect_square_p(n.get_mpz_t())) {
                    const Int s = isqrt(n);
                    if (!is_probable_prime(s) || !s.fits_slong_p())
                        throw std::runtime_error("tail factorization out of reach for |disc| = " +
                                                 Int(abs(d)).get_str());
                    const long q = s.get_si();
                    if (divisibility_type(f, q, ClassifyEngine::FAST) ==
                        DivisibilityType::STRONG) {
                        sawStrong = true;
                        strongMax = std::max(strongMax, q);
                    } else {
                        sawWeak = true;
                        weakMax = std::max(weakMax, q);
                    }
                } else if (n >= Int(1'000'000) * 1'000'000 * 1'000'000) {
                    throw std::runtime_error("tail factorization out of reach for |disc| = " +
                                             Int(abs(d)).get_str());
                }
                // otherwise: a product of two distinct primes, each to the
                // first power, which contributes nothing
            }
            for (auto& tc : out) {
                if (sawStrong && strongMax > tc.M) tc.strongCount += 1;
                if (sawWeak && weakMax > tc.M) tc.weakCount += 1;
            }
        }
        int i = r - 1;
        for (; i >= 0; --i) {
            if (++c[i] <= box.hi[i]) break;
            c[i] = box.lo[i];
        }
        if (i < 0) break;
    }
    return out;
}

}  // namespace

std::vector<TailCounts> tail_counts_grid(const FamilySpec& fam, long X,
                                         const std::vector<long>& Ms, int threads) {
    if (Ms.empty()) throw std::invalid_argument("no thresholds given");
    if (is_planar_cubic(fam)) return tail_grid_planar_cubic(fam, X, Ms, threads);
    return tail_grid_perpoint(fam, X, Ms, 1'000'000);
}

TailCounts tail_counts(const FamilySpec& fam, long X, long M, int threads) {
    return tail_counts_grid(fam, X, {M}, threads).front();
}

// ---------------------------------------------------------------------------
// compare

namespace {

Int max_disc_bound(const FamilySpec& fam, const Box& box) {
    Int bound = 0;
    for (const auto& [e, c] : fam.discTerms) {
        Int term = abs(c);
        for (int i = 0; i < fam.arity(); ++i)
            for (int k = 0; k < e[i]; ++k) term *= int_ll(box.hi[i]);
        bound += term;
    }
    return bound;
}

}  // namespace

DensityReport compare(const FamilySpec& fam, long pMax, long X, u64 seed, long long mcSamples,
                      int threads, long exactMaxP) {
    DensityReport rep;
    rep.family = fam.name;
    rep.X = X;
    rep.pMax = pMax;
    rep.seed = seed;
    rep.mcSamples = mcSamples;

    double product = 1, varTerm = 0;
    for (long p : primes_up_to(pMax)) {
        LocalDensity d;
        if (p <= exactMaxP) {
            try {
                d = local_density(fam, p, DensityMethod::EXACT);
            } catch (const std::runtime_error&) {
                // exact enumeration over budget: fall back to sampling
                d = local_density(fam, p, DensityMethod::MC, 100'000'000, mcSamples,
                                  seed ^ (static_cast<u64>(p) * 0x9e3779b97f4a7c15ULL));
            }
        } else {
            d = local_density(fam, p, DensityMethod::MC, 100'000'000, mcSamples,
                              seed ^ (static_cast<u64>(p) * 0x9e3779b97f4a7c15ULL));
        }
        product *= d.estimate;
        if (d.method == DensityMethod::MC && d.estimate > 0)
            varTerm += (d.se / d.estimate) * (d.se / d.estimate);
        rep.perPrime.push_back({d.p, method_name(d.method), rat_str(d.rho), d.estimate, d.se,
                                d.samples, d.seed});
    }
    rep.truncatedProduct = product;
    rep.productSe = product * std::sqrt(varTerm);

    const SieveCounts counts = empirical_density(fam, X, threads);
    rep.totalPoints = counts.total.get_str();
    rep.squarefreeCount = counts.squarefree.get_str();
    rep.zeroDiscCount = counts.zeroDisc.get_str();
    rep.uncertainCount = counts.uncertain.get_str();
    rep.empiricalRatio = counts.ratio();
    const double n = Rat(counts.total).get_d();
    rep.empiricalSe = std::sqrt(std::max(0.0, rep.empiricalRatio * (1 - rep.empiricalRatio) / n));

    const Box box = family_box(fam, X);
    const Int maxDisc = max_disc_bound(fam, box);
    rep.maxDisc = maxDisc.get_str();
    const Int lim = isqrt(maxDisc);
    if (lim > 50'000'000) throw std::runtime_error("tail prime limit out of range");
    rep.primeLimit = static_cast<long>(lim.get_si());
    double survive = 1;
    for (long p : primes_up_to(rep.primeLimit)) {
        if (p <= pMax) continue;
        const double pd = static_cast<double>(p);
        survive *= 1.0 - 2.0 / (pd * pd) + 1.0 / (pd * pd * pd);
    }
    rep.tailCorrection = 1.0 - survive;
    rep.predictedRatio = rep.truncatedProduct * (1.0 - rep.tailCorrection);

    const double num = rep.empiricalRatio - rep.predictedRatio;
    const double den =
        std::sqrt(rep.empiricalSe * rep.empiricalSe + rep.productSe * rep.productSe);
    rep.zScore = den > 0 ? num / den : (num == 0 ? 0 : std::numeric_limits<double>::infinity());

    if (counts.inconclusive)
        rep.verdict = "INCONCLUSIVE";
    else if (counts.total < 10000 || pMax < 5)
        rep.verdict = "UNDERPOWERED";
    else
        rep.verdict = std::abs(rep.zScore) <= 3.0 ? "AGREE" : "DISAGREE";

    rep.modelNote =
        "z-score model: squarefree indicators treated as i.i.d. Bernoulli across box points, "
        "which box geometry only approximates; the tail correction applies the generic "
        "quadratic-coefficient deficit 2/p^2 - 1/p^3 to every prime above pMax up to "
        "sqrt(max |disc|). Diagnostic, not a hypothesis test.";
    return rep;
}

std::string DensityReport::to_json() const {
    nlohmann::json j;
    j["schemaVersion"] = schemaVersion;
    j["family"] = family;
    j["X"] = X;
    j["pMax"] = pMax;
    j["perPrime"] = nlohmann::json::array();
    for (const auto& d : perPrime)
        j["perPrime"].push_back({{"p", d.p},
                                 {"method", d.method},
                                 {"rho", d.rho},
                                 {"estimate", d.estimate},
                                 {"se", d.se},
                                 {"samples", d.samples},
                                 {"seed", d.seed}});
    j["truncatedProduct"] = truncatedProduct;
    j["productSe"] = productSe;
    j["maxDisc"] = maxDisc;
    j["primeLimit"] = primeLimit;
    j["tailCorrection"] = tailCorrection;
    j["totalPoints"] = totalPoints;
    j["squarefreeCount"] = squarefreeCount;
    j["zeroDiscCount"] = zeroDiscCount;
    j["uncertainCount"] = uncertainCount;
    j["empiricalRatio"] = empiricalRatio;
    j["empiricalSe"] = empiricalSe;
    j["predictedRatio"] = predictedRatio;
    j["zScore"] = zScore;
    j["verdict"] = verdict;
    j["seed"] = seed;
    j["mcSamples"] = mcSamples;
    j["modelNote"] = modelNote;
    return j.dump(2) + "\n";
}

std::string DensityReport::to_csv() const {
    std::ostringstream os;
    os << "p,method,rho,estimate,se,samples,seed\n";
    for (const auto& d : perPrime)
        os << d.p << ',' << d.method << ',' << d.rho << ',' << d.estimate << ',' << d.se << ','
           << d.samples << ',' << d.seed << '\n';
    return os.str();
}

std::string DensityReport::summary() const {
    std::ostringstream os;
    os << family << " X=" << X << ": empirical " << squarefreeCount << "/" << totalPoints << " = "
       << empiricalRatio << ", predicted " << predictedRatio << " (product over p<=" << pMax
       << " of local densities, tail-corrected by " << tailCorrection << "), z = " << zScore
       << " -> " << verdict;
    return os.str();
}

}  // namespace ade
