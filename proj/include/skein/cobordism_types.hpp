#pragma once

#include <map>
#include <vector>

#include "skein/frobenius.hpp"

namespace skein {

/// One connected piece of an abstract colored surface: genus, attached
/// input/output boundary circles (1-based, sorted), and its color.
struct CobComponent {
    unsigned genus = 0;
    std::vector<int> inputs;
    std::vector<int> outputs;
    AlgElem color;

    bool closed() const { return inputs.empty() && outputs.empty(); }
    std::size_t boundary_count() const { return inputs.size() + outputs.size(); }

    bool operator==(const CobComponent& other) const = default;
    bool operator<(const CobComponent& other) const;
};

/// Abstract colored cobordism between r input and s output circles: the
/// component records partition {1..r} and {1..s}. Closed components have
/// empty boundary. Componets are kept in canonical sorted order.
struct ColoredCobordism {
    std::size_t num_inputs = 0;
    std::size_t num_outputs = 0;
    std::vector<CobComponent> components;

    void canonicalize();
    /// Checks the boundary partition invariants; throws errc::usage.
    void validate() const;

    bool operator==(const ColoredCobordism& other) const = default;
    bool operator<(const ColoredCobordism& other) const;
};

/// R-linear combination of cobordisms of one signature.
struct SurfaceCombination {
    std::size_t num_inputs = 0;
    std::size_t num_outputs = 0;
    std::map<ColoredCobordism, RingElem> terms;

    static SurfaceCombination zero(std::size_t r, std::size_t s);
    static SurfaceCombination of(ColoredCobordism c, RingElem coeff);
    void add(ColoredCobordism c, const RingElem& coeff);
    SurfaceCombination& operator+=(const SurfaceCombination& rhs);
    SurfaceCombination scaled(const RingElem& c) const;
};

/// Normal form of a skein class: a tensor over colored disks, input disk
/// slots 1..r first, then output disk slots 1..s.
struct SkeinElement {
    std::size_t num_inputs = 0;
    std::size_t num_outputs = 0;
    TensorElem tensor;   // arity = num_inputs + num_outputs

    bool operator==(const SkeinElement& other) const = default;
};

}   // namespace skein
