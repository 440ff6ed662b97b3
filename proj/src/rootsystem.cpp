/* Root-system construction and the -w0 diagram involution. */
#include "ade/rootsystem.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ade {

DynkinType DynkinType::parse(const std::string& label) {
    if (label.size() < 2) throw std::invalid_argument("bad type label: " + label);
    DynkinType t;
    switch (std::toupper(static_cast<unsigned char>(label[0]))) {
        case 'A': t.family = Family::A; break;
        case 'D': t.family = Family::D; break;
        case 'E': t.family = Family::E; break;
        default: throw std::invalid_argument("bad family letter in: " + label);
    }
    std::size_t pos = 0;
    int r = 0;
    try {
        r = std::stoi(label.substr(1), &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rank in type label: " + label);
    }
    if (pos + 1 != label.size()) throw std::invalid_argument("trailing junk in type label: " + label);
    t.rank = r;
    t.validate();
    return t;
}

std::string DynkinType::label() const {
    const char* f = family == Family::A ? "A" : family == Family::D ? "D" : "E";
    return f + std::to_string(rank);
}

void DynkinType::validate() const {
    bool ok = false;
    switch (family) {
        case Family::A: ok = rank >= 1; break;
        case Family::D: ok = rank >= 4; break;
        case Family::E: ok = rank >= 6 && rank <= 8; break;
    }
    if (!ok) throw std::invalid_argument("rank out of range for family: " + label());
}

int height(const Root& r) {
    return std::accumulate(r.begin(), r.end(), 0);
}

std::vector<std::vector<int>> cartan_matrix(DynkinType t) {
    t.validate();
    const int r = t.rank;
    std::vector<std::pair<int, int>> edges;  // 0-based node pairs
    if (t.family == Family::A) {
        for (int i = 0; i + 1 < r; ++i) edges.push_back({i, i + 1});
    } else if (t.family == Family::D) {
        for (int i = 0; i + 1 < r - 2; ++i) edges.push_back({i, i + 1});
        edges.push_back({r - 3, r - 2});
        edges.push_back({r - 3, r - 1});
    } else {
        static const int chain[] = {1, 3, 4, 5, 6, 7, 8};  // 1-based labels
        for (int i = 0; i + 1 < r - 1; ++i) edges.push_back({chain[i] - 1, chain[i + 1] - 1});
        edges.push_back({2 - 1, 4 - 1});
    }
    std::vector<std::vector<int>> c(r, std::vector<int>(r, 0));
    for (int i = 0; i < r; ++i) c[i][i] = 2;
    for (auto [a, b] : edges) c[a][b] = c[b][a] = -1;
    return c;
}

Root simple_reflection(const std::vector<std::vector<int>>& cartan, int i, const Root& r) {
    int pairing = 0;
    for (std::size_t m = 0; m < r.size(); ++m) pairing += cartan[i][m] * r[m];
    Root out = r;
    out[i] -= pairing;
    return out;
}

RootSystem build_root_system(DynkinType t) {
    t.validate();
    RootSystem rs;
    rs.type = t;
    rs.cartan = cartan_matrix(t);
    const int r = t.rank;

    std::set<Root> seen;
    std::vector<Root> frontier;
    for (int i = 0; i < r; ++i) {
        Root e(r, 0);
        e[i] = 1;
        seen.insert(e);
        frontier.push_back(e);
        for (auto& x : e) x = -x;
        seen.insert(e);
        frontier.push_back(e);
    }
    while (!frontier.empty()) {
        std::vector<Root> next;
        for (const Root& b : frontier) {
            for (int i = 0; i < r; ++i) {
                Root img = simple_reflection(rs.cartan, i, b);
                if (seen.insert(img).second) next.push_back(std::move(img));
            }
        }
        frontier = std::move(next);
    }
    rs.roots.assign(seen.begin(), seen.end());  // std::set iterates in lexicographic order
    return rs;
}

bool RootSystem::contains(const Root& r) const {
    return std::binary_search(roots.begin(), roots.end(), r);
}

std::vector<Root> RootSystem::positive_roots() const {
    std::vector<Root> out;
    for (const Root& r : roots)
        if (height(r) > 0) out.push_back(r);
    return out;
}

std::string RootSystem::dump() const {
    std::ostringstream os;
    for (const Root& r : roots) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            os << r[i];
        }
        os << '\n';
    }
    return os.str();
}

std::vector<int> pinned_automorphism(const RootSystem& rs) {
    const int r = rs.rank();
    // Track the simple roots through the longest element, chosen by repeated
    // smallest-index descents on a strictly dominant weight vector.
    std::vector<int> v(r, 1);  // coefficients of a dominant weight in the
                               // fundamental-weight pairing: <v, alpha_i^> = v[i]
    std::vector<Root> images(r);
    for (int i = 0; i < r; ++i) {
        images[i] = Root(r, 0);
        images[i][i] = 1;
    }
    std::size_t length = 0;
    for (;;) {
        int i = -1;
        for (int j = 0; j < r; ++j)
            if (v[j] > 0) {
                i = j;
                break;
            }
        if (i < 0) break;
        const int vi = v[i];
        for (int j = 0; j < r; ++j) v[j] -= vi * rs.cartan[i][j];
        for (int j = 0; j < r; ++j) images[j] = simple_reflection(rs.cartan, i, images[j]);
        ++length;
    }
    if (length * 2 != rs.roots.size())
        throw std::logic_error("longest-element word length mismatch");
    std::vector<int> perm(r, -1);
    for (int i = 0; i < r; ++i) {
        int target = -1;
        for (int j = 0; j < r; ++j) {
            Root neg(r, 0);
            neg[j] = -1;
            if (images[i] == neg) {
                target = j;
                break;
            }
        }
        if (target < 0) throw std::logic_error("longest element does not negate the simple roots");
        perm[i] = target;
    }
    for (int i = 0; i < r; ++i)
        if (perm[perm[i]] != i) throw std::logic_error("diagram involution is not an involution");
    return perm;
}

}  // namespace ade
