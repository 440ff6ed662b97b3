/* Grading attached to the -w0 involution: restricted roots, sign cocycle,
   dimension bookkeeping, case bases, and the exponent-vector operations. */
#include "ade/vinberg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ade/linalg.hpp"

namespace ade {

namespace {

void check(bool ok, const std::string& msg) {
    if (!ok) throw std::logic_error("grading consistency failure: " + msg);
}

/// Mod-2 cocycle attached to an orientation of the diagram: the bilinear form
/// sum_i a_i b_i + sum_{i<j} a_i b_j C_ij determines a sign c(a,b).
int cocycle_sign(const std::vector<std::vector<int>>& cartan, const Root& a, const Root& b) {
    long s = 0;
    const int r = static_cast<int>(a.size());
    for (int i = 0; i < r; ++i) s += static_cast<long>(a[i]) * b[i];
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j) s += static_cast<long>(a[i]) * b[j] * cartan[i][j];
    return (s % 2 != 0) ? -1 : 1;
}

/// Pinned signs on the roots: +1 on the simple roots, extended over height by
/// the cocycle, and invariant under negation.  Every decomposition of a root
/// as simple + root must give the same sign; checked.
std::map<Root, int> pinned_signs(const RootSystem& rs, const std::vector<int>& theta) {
    const int r = rs.rank();
    std::vector<Root> pos = rs.positive_roots();
    std::stable_sort(pos.begin(), pos.end(),
                     [](const Root& x, const Root& y) { return height(x) < height(y); });
    std::map<Root, int> eps;
    for (const Root& rt : pos) {
        if (height(rt) == 1) {
            eps[rt] = 1;
            continue;
        }
        int value = 0;
        for (int i = 0; i < r; ++i) {
            if (rt[i] == 0) continue;
            Root b = rt;
            b[i] -= 1;
            if (!rs.contains(b)) continue;
            auto it = eps.find(b);
            check(it != eps.end(), "height-ordered sign recursion out of order");
            Root a(r, 0);
            a[i] = 1;
            const int v = it->second * cocycle_sign(rs.cartan, a, b) *
                          cocycle_sign(rs.cartan, permute(theta, a), permute(theta, b));
            if (value == 0)
                value = v;
            else
                check(value == v, "pinned sign depends on the decomposition");
        }
        check(value != 0, "positive root of height >= 2 with no simple decomposition");
        eps[rt] = value;
    }
    std::map<Root, int> full = eps;
    for (const auto& [rt, s] : eps) {
        Root neg = rt;
        for (auto& x : neg) x = -x;
        full[neg] = s;
    }
    return full;
}

RatVec to_rat(const Root& r) {
    RatVec v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = r[i];
    return v;
}

RatVec average(const std::vector<Root>& orbit) {
    RatVec v(orbit[0].size(), Rat(0));
    for (const Root& rt : orbit)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += rt[i];
    for (auto& x : v) x /= static_cast<int>(orbit.size());
    return v;
}

RatVec unit(int r, int i) {
    RatVec v(r, Rat(0));
    v[i] = 1;
    return v;
}

RatVec add(const RatVec& a, const RatVec& b) {
    RatVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

RatVec scale(const RatVec& a, const Rat& c) {
    RatVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * c;
    return out;
}

RatVec theta_average(const std::vector<int>& theta, const RatVec& v) {
    return scale(add(v, permute(theta, v)), Rat(1, 2));
}

/// Character target expressed over the case basis.
ExponentVector over_basis(const CaseBasis& basis, const RatVec& target, const Rat& xPrefactor) {
    ExponentVector ev;
    ev.basisNames = basis.names;
    ev.exponents = solve_columns(basis.vectors, target);
    ev.xPrefactor = xPrefactor;
    return ev;
}

}  // namespace

std::string to_string(CaseTag t) {
    switch (t) {
        case CaseTag::G_ONLY: return "G_ONLY";
        case CaseTag::V_ONLY: return "V_ONLY";
        case CaseTag::SPLIT: return "SPLIT";
    }
    return "?";
}

GradedData grade(const RootSystem& rs) {
    const int r = rs.rank();
    GradedData gd;
    gd.rs = rs;
    gd.theta = pinned_automorphism(rs);
    const auto eps = pinned_signs(rs, gd.theta);

    int moved = 0;
    for (int i = 0; i < r; ++i)
        if (gd.theta[i] != i) ++moved;
    gd.dimV0 = moved / 2;

    std::set<Root> seen;
    for (const Root& root : rs.roots) {
        if (seen.count(root)) continue;
        const Root img = permute(gd.theta, root);
        RestrictedRoot rr;
        rr.height = height(root);
        if (img == root) {
            rr.orbit = {root};
            rr.sign = (rr.height % 2 != 0) ? -1 : 1;
            rr.signEffective = rr.sign * eps.at(root);
            rr.tag = rr.signEffective == -1 ? CaseTag::V_ONLY : CaseTag::G_ONLY;
        } else {
            check(height(img) == rr.height, "orbit members differ in height");
            rr.orbit = {root, img};
            std::sort(rr.orbit.begin(), rr.orbit.end());
            rr.sign = (rr.height % 2 != 0) ? -1 : 1;
            rr.signEffective = rr.sign;
            rr.tag = CaseTag::SPLIT;
        }
        for (const Root& m : rr.orbit) seen.insert(m);
        rr.image = average(rr.orbit);
        gd.restricted.push_back(std::move(rr));
    }

    // Every restricted root has a distinct image.
    {
        std::set<RatVec> images;
        for (const auto& rr : gd.restricted)
            check(images.insert(rr.image).second, "two orbits share an image");
    }

    int nV = 0, nG = 0, k = 0, w0v = 0;
    for (const auto& rr : gd.restricted) {
        if (rr.tag != CaseTag::G_ONLY) {
            ++nV;
            if (rr.height == 1) ++k;
            if (rr.height <= 1) ++w0v;
        }
        if (rr.tag != CaseTag::V_ONLY) ++nG;
    }
    gd.dimV = gd.dimV0 + nV;
    gd.dimG = (r - gd.dimV0) + nG;
    gd.heightOneCount = k;
    gd.dimW0 = gd.dimV0 + w0v;
    check(gd.dimV + gd.dimG == r + static_cast<int>(rs.roots.size()),
          "dimV + dimG must equal rank + #roots");
    check(k == r - gd.dimV0, "height-one count must equal the simple-root orbit count");

    gd.degrees = weyl_degrees(rs.type);
    check(std::accumulate(gd.degrees.begin(), gd.degrees.end(), 0) == gd.dimV,
          "sum of invariant degrees must equal dimV");
    check(table1_dim(rs.type) == gd.dimV, "closed-form dimension must equal dimV");
    gd.markedPoints = marked_points(rs.type);
    if (rs.type.family == Family::A && rs.type.rank % 2 == 1 && rs.type.rank >= 3)
        gd.degreesNote =
            "curve-equation reference for this family carries a trailing coefficient subscript "
            "inconsistent with rank+1; the classical degree list is used";
    return gd;
}

std::vector<int> weyl_degrees(DynkinType t) {
    t.validate();
    std::vector<int> d;
    if (t.family == Family::A) {
        for (int i = 2; i <= t.rank + 1; ++i) d.push_back(i);
    } else if (t.family == Family::D) {
        for (int i = 2; i <= 2 * t.rank - 2; i += 2) d.push_back(i);
        d.push_back(t.rank);
        std::sort(d.begin(), d.end());
    } else if (t.rank == 6) {
        d = {2, 5, 6, 8, 9, 12};
    } else if (t.rank == 7) {
        d = {2, 6, 8, 10, 12, 14, 18};
    } else {
        d = {2, 8, 12, 14, 18, 20, 24, 30};
    }
    return d;
}

int marked_points(DynkinType t) {
    t.validate();
    switch (t.family) {
        case Family::A: return t.rank % 2 == 0 ? 1 : 2;
        case Family::D: return t.rank % 2 == 0 ? 3 : 2;
        case Family::E: return t.rank == 7 ? 2 : 1;
    }
    return 0;
}

int table1_dim(DynkinType t) {
    t.validate();
    if (t.family == Family::A) {
        const int n = t.rank / 2;
        return t.rank % 2 == 0 ? 2 * n * n + 3 * n : 2 * n * n + 5 * n + 2;
    }
    if (t.family == Family::D) return t.rank * t.rank;
    return t.rank == 6 ? 42 : t.rank == 7 ? 70 : 128;
}

ExponentVector ExponentVector::plus(const ExponentVector& other) const {
    if (basisNames != other.basisNames)
        throw std::invalid_argument("exponent vectors over different bases");
    ExponentVector out = *this;
    for (std::size_t i = 0; i < exponents.size(); ++i) out.exponents[i] += other.exponents[i];
    out.xPrefactor += other.xPrefactor;
    out.mPower += other.mPower;
    return out;
}

std::string ExponentVector::str() const {
    std::ostringstream os;
    if (mPower != 0) os << "(1/M)^" << mPower << " ";
    os << "X^" << rat_str(xPrefactor);
    for (std::size_t i = 0; i < basisNames.size(); ++i)
        os << " " << basisNames[i] << "^" << rat_str(exponents[i]);
    return os.str();
}

CaseBasis case_basis(const GradedData& gd) {
    const DynkinType t = gd.rs.type;
    const int r = t.rank;
    CaseBasis cb;
    if (t.family == Family::D) {
        const int n = r / 2;
        if (r % 2 == 1) {
            for (int i = 1; i < n; ++i)
                cb.vectors.push_back(add(unit(r, 2 * i - 2), unit(r, 2 * i - 1)));
            cb.vectors.push_back(
                add(unit(r, 2 * n - 2), scale(add(unit(r, r - 2), unit(r, r - 1)), Rat(1, 2))));
            for (int i = 1; i < n; ++i)
                cb.vectors.push_back(add(unit(r, 2 * i - 1), unit(r, 2 * i)));
            cb.vectors.push_back(scale(add(unit(r, r - 2), unit(r, r - 1)), Rat(1, 2)));
        } else {
            for (int i = 1; i < n; ++i)
                cb.vectors.push_back(add(unit(r, 2 * i - 2), unit(r, 2 * i - 1)));
            cb.vectors.push_back(add(add(unit(r, r - 4), unit(r, r - 3)),
                                     add(unit(r, r - 2), unit(r, r - 1))));
            for (int i = 1; i < n; ++i)
                cb.vectors.push_back(add(unit(r, 2 * i - 1), unit(r, 2 * i)));
            cb.vectors.push_back(add(unit(r, r - 3), unit(r, r - 1)));
        }
        for (int i = 1; i <= n; ++i) cb.names.push_back("alpha" + std::to_string(i));
        for (int i = 1; i <= n; ++i) cb.names.push_back("beta" + std::to_string(i));
        return cb;
    }
    if (t.family == Family::E && r == 6) {
        cb.vectors.push_back(theta_average(gd.theta, add(unit(r, 2), unit(r, 3))));
        cb.vectors.push_back(theta_average(gd.theta, unit(r, 0)));
        cb.vectors.push_back(theta_average(gd.theta, unit(r, 2)));
        cb.vectors.push_back(add(unit(r, 1), unit(r, 3)));
    } else if (t.family == Family::E && r == 7) {
        cb.vectors.push_back(add(unit(r, 2), unit(r, 3)));
        cb.vectors.push_back(add(unit(r, 4), unit(r, 5)));
        cb.vectors.push_back(add(unit(r, 1), unit(r, 3)));
        cb.vectors.push_back(add(unit(r, 0), unit(r, 2)));
        cb.vectors.push_back(add(unit(r, 3), unit(r, 4)));
        cb.vectors.push_back(add(unit(r, 5), unit(r, 6)));
        cb.vectors.push_back(add(add(unit(r, 1), unit(r, 2)), add(unit(r, 3), unit(r, 4))));
    } else if (t.family == Family::E && r == 8) {
        cb.vectors.push_back(add(add(unit(r, 1), unit(r, 2)), add(unit(r, 3), unit(r, 4))));
        cb.vectors.push_back(add(unit(r, 5), unit(r, 6)));
        cb.vectors.push_back(add(unit(r, 3), unit(r, 4)));
        cb.vectors.push_back(add(unit(r, 0), unit(r, 2)));
        cb.vectors.push_back(add(unit(r, 1), unit(r, 3)));
        cb.vectors.push_back(add(unit(r, 4), unit(r, 5)));
        cb.vectors.push_back(add(unit(r, 6), unit(r, 7)));
        cb.vectors.push_back(add(unit(r, 2), unit(r, 3)));
    } else {
        throw std::invalid_argument("no case basis shipped for type " + t.label());
    }
    for (std::size_t i = 1; i <= cb.vectors.size(); ++i)
        cb.names.push_back("beta" + std::to_string(i));
    return cb;
}

std::vector<RatVec> sv_images(const GradedData& gd) {
    std::vector<RatVec> out;
    for (const auto& rr : gd.restricted)
        if (rr.tag != CaseTag::G_ONLY && rr.height == 1) out.push_back(rr.image);
    return out;
}

std::vector<ExponentVector> w0_weights(const GradedData& gd, const CaseBasis& basis) {
    std::vector<ExponentVector> out;
    for (int i = 0; i < gd.dimV0; ++i) {
        ExponentVector ev;
        ev.basisNames = basis.names;
        ev.exponents.assign(basis.names.size(), Rat(0));
        out.push_back(std::move(ev));
    }
    for (const auto& rr : gd.restricted)
        if (rr.tag != CaseTag::G_ONLY && rr.height <= 1)
            out.push_back(over_basis(basis, rr.image, Rat(0)));
    return out;
}

ExponentVector volume_exponents(const GradedData& gd, const CaseBasis& basis) {
    RatVec total(gd.rs.rank(), Rat(0));
    for (const auto& rr : gd.restricted)
        if (rr.tag != CaseTag::G_ONLY && rr.height <= 1) total = add(total, rr.image);
    return over_basis(basis, total, Rat(gd.dimW0));
}

ExponentVector modular_function(const GradedData& gd, const CaseBasis& basis) {
    RatVec total(gd.rs.rank(), Rat(0));
    for (const auto& rr : gd.restricted)
        if (rr.tag != CaseTag::V_ONLY && rr.height >= 1) total = add(total, rr.image);
    return over_basis(basis, total, Rat(0));
}

ExponentVector q_condition(const GradedData& gd, const CaseBasis& basis) {
    RatVec total(gd.rs.rank(), Rat(0));
    for (const RatVec& img : sv_images(gd)) total = add(total, img);
    return over_basis(basis, total, Rat(gd.heightOneCount));
}

RatVec domain_exponents(const GradedData& gd, const CaseBasis& basis) {
    const auto sv = sv_images(gd);
    RatVec out;
    for (const RatVec& u : basis.vectors) {
        const RatVec coeffs = solve_columns(sv, u);
        Rat total(0);
        for (const Rat& c : coeffs) {
            if (c < 0)
                throw std::logic_error(
                    "case-basis vector with a negative height-one coordinate");
            total += c;
        }
        out.push_back(total);
    }
    return out;
}

RatVec lambda_exponents(const GradedData& gd) {
    CaseBasis raw;
    raw.vectors = sv_images(gd);
    RatVec target(gd.rs.rank(), Rat(0));
    for (const auto& rr : gd.restricted) {
        if (rr.tag != CaseTag::G_ONLY && rr.height <= 1) target = add(target, rr.image);
        if (rr.tag != CaseTag::V_ONLY && rr.height >= 1) target = add(target, rr.image);
    }
    for (auto& x : target) x = -x;
    const RatVec r = solve_columns(raw.vectors, target);
    // Re-substitute before returning: sum_a r_a * image_a must hit the target.
    RatVec back(target.size(), Rat(0));
    for (std::size_t a = 0; a < r.size(); ++a) back = add(back, scale(raw.vectors[a], r[a]));
    if (back != target) throw std::logic_error("lambda re-substitution failed");
    return r;
}

double zeta(double s) {
    if (!(s > 1.0)) throw std::domain_error("zeta requires s > 1");
    static const double bernoulli[] = {1.0 / 6,      -1.0 / 30,       1.0 / 42,    -1.0 / 30,
                                       5.0 / 66,     -691.0 / 2730,   7.0 / 6,     -3617.0 / 510,
                                       43867.0 / 798, -174611.0 / 330};
    const int cutoff = 20;
    double sum = 0;
    for (int n = 1; n < cutoff; ++n) sum += std::pow(n, -s);
    sum += std::pow(cutoff, 1 - s) / (s - 1);
    sum += 0.5 * std::pow(cutoff, -s);
    double rising = s;                       // s(s+1)...(s+2j-2)
    double factorial = 2;                    // (2j)!
    double npow = std::pow(cutoff, -s - 1);  // cutoff^(-s-2j+1)
    for (int j = 0; j < 10; ++j) {
        sum += bernoulli[j] / factorial * rising * npow;
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
        factorial *= (2 * j + 3) * (2 * j + 4);
        npow /= static_cast<double>(cutoff) * cutoff;
    }
    return sum;
}

double zeta_product(const RatVec& r) {
    double prod = 1;
    for (const Rat& x : r) {
        if (x <= 0) throw std::domain_error("zeta product needs every exponent positive");
        prod *= zeta(x.get_d() + 1.0);
    }
    return prod;
}

}  // namespace ade
