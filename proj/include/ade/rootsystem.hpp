/* ADE root systems in simple-root integer coordinates: reflection-closure
   construction, heights, and the diagram involution induced by -w0. */
#pragma once

#include <string>
#include <vector>

namespace ade {

enum class Family { A, D, E };

struct DynkinType {
    Family family = Family::A;
    int rank = 1;

    /// Parse a label such as "A2", "D5", "E8" (case-insensitive family letter).
    static DynkinType parse(const std::string& label);
    std::string label() const;
    /// Throws std::invalid_argument unless rank fits the family
    /// (A: rank >= 1, D: rank >= 4, E: rank in {6,7,8}).
    void validate() const;
};

/// A root as integer coefficients over the simple roots.
using Root = std::vector<int>;

/// Coordinate sum; positive exactly for positive roots.
int height(const Root& r);

/// Cartan matrix for the given type (symmetric, simply laced).
/// Node numbering: A and D are linear chains with the D-fork nodes rank-1 and
/// rank both attached to rank-2; the E chain is 1,3,4,5,6,7,8 with node 2
/// attached to node 4.
std::vector<std::vector<int>> cartan_matrix(DynkinType t);

struct RootSystem {
    DynkinType type;
    std::vector<std::vector<int>> cartan;
    std::vector<Root> roots;  ///< all roots, sorted lexicographically

    int rank() const { return type.rank; }
    bool contains(const Root& r) const;
    std::vector<Root> positive_roots() const;
    /// Deterministic text listing: one root per line, coords comma-separated.
    std::string dump() const;
};

/// Full root system by reflection closure from the simple roots.
RootSystem build_root_system(DynkinType t);

/// Image of a root under the simple reflection s_i (0-based index).
Root simple_reflection(const std::vector<std::vector<int>>& cartan, int i, const Root& r);

/// The diagram involution induced by -w0, as a permutation of simple-root
/// indices (identity exactly when -1 lies in the Weyl group).  Computed by
/// the smallest-index-descent longest-element algorithm; deterministic.
std::vector<int> pinned_automorphism(const RootSystem& rs);

/// Apply a simple-root index permutation to a coordinate vector.
template <class Vec>
Vec permute(const std::vector<int>& perm, const Vec& v) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[perm[i]] = v[i];
    return out;
}

}  // namespace ade
