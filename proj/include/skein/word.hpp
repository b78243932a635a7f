#pragma once

#include "skein/cobordism_types.hpp"
#include "skein/frobenius.hpp"

namespace skein {

enum class GenKind { identity, unit, counit_gen, mult, comult, swap_gen, color };

/// One elementary cobordism generator inside a level.
struct Generator {
    GenKind kind = GenKind::identity;
    AlgElem color_elem;   // only meaningful for GenKind::color

    static Generator identity() { return {GenKind::identity, {}}; }
    static Generator unit() { return {GenKind::unit, {}}; }
    static Generator counit() { return {GenKind::counit_gen, {}}; }
    static Generator mult() { return {GenKind::mult, {}}; }
    static Generator comult() { return {GenKind::comult, {}}; }
    static Generator swap() { return {GenKind::swap_gen, {}}; }
    static Generator color(AlgElem a) { return {GenKind::color, std::move(a)}; }

    std::size_t in_arity() const;
    std::size_t out_arity() const;
};

/// A Morse decomposition of a colored cobordism: levels read from the
/// input boundary toward the output boundary, each a horizontal row of
/// generators applied monoidally.
struct CobordismWord {
    std::size_t input_width = 0;
    std::vector<std::vector<Generator>> levels;
};

/// Checks width chaining and returns the output width; throws
/// errc::word_shape naming the offending level (1-based).
std::size_t validate_word(const CobordismWord& w);
std::size_t word_output_width(const CobordismWord& w);

/// Evaluates the word on an input tensor of arity input_width.
TensorElem apply_word(const FrobeniusSystem& s, const CobordismWord& w, const TensorElem& x);

/// Exact linear map A^{⊗r} → A^{⊗s}: a column per domain basis tuple.
struct LinearMap {
    std::size_t domain_arity = 0;
    std::size_t codomain_arity = 0;
    std::map<BasisTuple, TensorElem> columns;

    TensorElem apply(const TensorElem& x) const;
    bool operator==(const LinearMap& other) const = default;
};

LinearMap word_to_map(const FrobeniusSystem& s, const CobordismWord& w);

/// Composition g ∘ f of linear maps (f first).
LinearMap compose(const FrobeniusSystem& s, const LinearMap& g, const LinearMap& f);

LinearMap identity_map(const FrobeniusSystem& s, std::size_t arity);

/// Compiles a word to the abstract colored surface it presents, tracking
/// circle components with a union-find and recovering per-component genus
/// from the Euler characteristic. Optional input_colors pre-color the
/// input circles (defaults to 1).
ColoredCobordism word_to_surface(const FrobeniusSystem& s, const CobordismWord& w,
                                 const std::vector<AlgElem>& input_colors = {});

}   // namespace skein
