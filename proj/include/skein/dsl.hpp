#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skein/builtins.hpp"
#include "skein/cobordism_types.hpp"
#include "skein/pattern.hpp"
#include "skein/word.hpp"

namespace skein {

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string message;
    int line = 1;
    int column = 1;

    std::string text() const;   // "line:col: error: message"
};

/// The quotient presentation A = R[X]/(X^n - p(X)).
struct QuotientForm {
    std::string var;
    unsigned degree = 0;
    std::vector<RingElem> p_coeffs;   // dense, indices 0..degree-1
};

struct GroupForm {
    std::vector<unsigned> orders;
};

/// An algebra definition: raw structure data plus the syntactic form it
/// was written in. Axiom verification happens at elaboration; a failed
/// system keeps its data (for rendering) and records the failure.
struct AlgebraItem {
    std::string name;
    std::optional<QuotientForm> quotient;
    std::optional<GroupForm> group;
    SystemData data;
    std::optional<FrobeniusSystem> system;
    std::string failure;   // construction error, empty when system is set
};

struct ElementItem {
    std::string name;
    std::string algebra;
    AlgElem value;
};

struct WordItem {
    std::string name;
    std::string algebra;
    CobordismWord word;
};

struct SurfaceItem {
    std::string name;
    std::string algebra;
    ColoredCobordism surface;
};

struct CombinationItem {
    std::string name;
    std::string algebra;
    std::vector<std::pair<RingElem, std::string>> parts;   // source order
    SurfaceCombination combo;
};

struct PatternItem {
    std::string name;
    std::string algebra;
    std::vector<std::string> vertex_names;   // declaration order
    Pattern pattern;
};

using ItemNode =
    std::variant<AlgebraItem, ElementItem, WordItem, SurfaceItem, CombinationItem, PatternItem>;

struct Item {
    int line = 1;
    int column = 1;
    ItemNode node;

    const std::string& name() const;
};

struct Document {
    std::vector<Item> items;

    const Item* find(std::string_view name) const;
    const AlgebraItem* find_algebra(std::string_view name) const;
};

struct ParseResult {
    std::optional<Document> document;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return document.has_value() && diagnostics.empty(); }
};

/// Parses and elaborates a source text. Lexical, syntactic, reference,
/// width and shape errors come back as positioned Diagnostics (document
/// absent); algebra axiom failures do not: they are recorded on the item.
ParseResult parse(std::string_view text);

/// Canonical rendering; parse(render(d)) reproduces d byte-for-byte on
/// documents that came out of parse.
std::string render(const Document& doc);
std::string render_algebra(const AlgebraItem& item);

/// Resolves an algebra by document item name or reserved built-in name
/// ("universal", "barnatan", "gadnaot", "group Z/n ..."); nullopt when
/// unknown.
struct ResolvedAlgebra {
    std::string name;
    SystemData data;
    std::optional<FrobeniusSystem> system;
    std::string failure;
    std::optional<QuotientForm> quotient;
};
std::optional<ResolvedAlgebra> resolve_algebra(const Document& doc, std::string_view name);

// Single-expression parsers for CLI arguments and JSON re-ingestion.
// Errors are reported as positioned Diagnostics within the given text.
RingDescriptorPtr parse_ground_expr(std::string_view text, std::vector<Diagnostic>& diags);
RingElem parse_ring_expr(const RingDescriptorPtr& ring, std::string_view text,
                         std::vector<Diagnostic>& diags);
AlgElem parse_element_expr(const SystemData& data, std::string_view text,
                           std::vector<Diagnostic>& diags);
/// want_arity: expected tensor arity; 0 parses a plain ring scalar.
TensorElem parse_tensor_expr(const SystemData& data, std::string_view text,
                             std::size_t want_arity, std::vector<Diagnostic>& diags);

}   // namespace skein
