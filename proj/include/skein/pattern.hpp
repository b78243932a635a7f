#pragma once

#include <string>
#include <vector>

#include "skein/frobenius.hpp"

namespace skein {

/// Bicolored graph over opaque incompressible-surface symbols. Black
/// vertices carry surface-component symbols; white vertices are capped-off
/// components; edges record neck-cut history with a stored (but
/// inessential) orientation. Each connected graph component carries one
/// color anchored at one of its vertices.
struct Pattern {
    struct Vertex {
        std::string name;   // surface symbol for black vertices, label for white
        bool black = true;
    };
    std::vector<Vertex> vertices;
    std::vector<std::pair<int, int>> edges;            // tail -> head vertex indices
    std::vector<std::pair<int, AlgElem>> colors;       // (anchor vertex, color)

    std::vector<int> black_indices() const;
    /// Checks references and the one-color-per-component invariant, and
    /// assigns default color 1 (anchored at the smallest vertex) to
    /// components without an explicit color. Throws errc::pattern.
    void finalize(const SystemData& d);
};

/// Sum over basis-color assignments to the black vertices (in black-vertex
/// order) with exact coefficients.
struct StateSumResult {
    std::vector<std::string> black_symbols;
    std::map<BasisTuple, RingElem> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const StateSumResult& other) const = default;
};

/// The section-9 state sum: states assign a structure-pair index to each
/// edge; tails collect u_i, heads collect v_i, anchors collect the
/// component color; white vertices contribute ε of their accumulated
/// value, black vertices expand in the basis. At most 12 edges.
StateSumResult state_sum(const FrobeniusSystem& s, const Pattern& p);

/// K(p1) - K(p2) for patterns over the same black-vertex symbols; a
/// generator of the tubing submodule. Throws errc::pairing on mismatched
/// symbol multisets.
StateSumResult tubing_difference(const FrobeniusSystem& s, const Pattern& p1,
                                 const Pattern& p2);

/// The projection forgetting everything but the underlying surface
/// symbols of the black vertices.
std::vector<std::string> forget_projection(const Pattern& p);

}   // namespace skein
