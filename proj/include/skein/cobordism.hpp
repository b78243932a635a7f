#pragma once

#include "skein/cobordism_types.hpp"
#include "skein/word.hpp"

namespace skein {

/// Canonical tensor normal form: each component with k boundary circles,
/// genus g and color a contributes Δ^{(k-1)}(H^g · a) distributed to its
/// disk slots (k = 0 contributes the scalar ε(H^g · a)).
SkeinElement normal_form(const FrobeniusSystem& s, const ColoredCobordism& c);
SkeinElement normal_form(const FrobeniusSystem& s, const SurfaceCombination& c);

/// Theorem-5.1 equality test: normal forms are complete invariants.
bool skein_equal(const FrobeniusSystem& s, const SurfaceCombination& a,
                 const SurfaceCombination& b);

/// Corollary-5.2 composition pairing: g ∘ f for f: (r,m), g: (m,t).
SkeinElement compose(const FrobeniusSystem& s, const SkeinElement& g, const SkeinElement& f);

/// Disjoint union; input slots of f then g, output slots of f then g.
SkeinElement monoidal_product(const SkeinElement& f, const SkeinElement& g);

SkeinElement identity_skein(const FrobeniusSystem& s, std::size_t width);

/// Linear map induced by a normal form (the Theorem-5.1 evaluation
/// a' ↦ Π ε(a_i a'_i) · b-part).
LinearMap skein_to_map(const FrobeniusSystem& s, const SkeinElement& x);

/// Reconstructs the normal form of a linear map through the expansion
/// identity (2); inverse of skein_to_map.
SkeinElement map_to_skein(const FrobeniusSystem& s, const LinearMap& m);

/// -χ(S) + Σ deg(color) under the system's declared grading; throws
/// errc::grading without a grading or on inhomogeneous colors.
long degree(const FrobeniusSystem& s, const ColoredCobordism& c);

// Rewriting steps of the section-4 relations, exposed one step at a time
// so soundness is testable against the closed-formula normal form.

/// Removes closed genus-0 component `comp` and multiplies by ε(color).
SurfaceCombination cut_sphere(const FrobeniusSystem& s, const ColoredCobordism& c,
                              std::size_t comp);

/// Removes one handle from component `comp` (genus >= 1), multiplying its
/// color by the handle element.
SurfaceCombination cut_nonseparating(const FrobeniusSystem& s, const ColoredCobordism& c,
                                     std::size_t comp);

/// Splits component `comp` along a separating curve into two pieces with
/// genus g1 + g2 = g and the given boundary split; the result is
/// Σ_i (piece1 colored a·u_i) ⊔ (piece2 colored v_i).
SurfaceCombination cut_separating(const FrobeniusSystem& s, const ColoredCobordism& c,
                                  std::size_t comp, unsigned genus1,
                                  const std::vector<int>& inputs1,
                                  const std::vector<int>& outputs1);

}   // namespace skein
