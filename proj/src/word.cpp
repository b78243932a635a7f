#include "skein/word.hpp"

#include <functional>

namespace skein {

std::size_t Generator::in_arity() const {
    switch (kind) {
        case GenKind::unit: return 0;
        case GenKind::mult:
        case GenKind::swap_gen: return 2;
        default: return 1;
    }
}

std::size_t Generator::out_arity() const {
    switch (kind) {
        case GenKind::counit_gen: return 0;
        case GenKind::comult:
        case GenKind::swap_gen: return 2;
        default: return 1;
    }
}

std::size_t validate_word(const CobordismWord& w) {
    std::size_t width = w.input_width;
    for (std::size_t lv = 0; lv < w.levels.size(); ++lv) {
        std::size_t in = 0, out = 0;
        for (const auto& g : w.levels[lv]) {
            in += g.in_arity();
            out += g.out_arity();
        }
        if (in != width)
            throw error(errc::word_shape,
                        "level " + std::to_string(lv + 1) + ": needs " + std::to_string(in) +
                            " strands, found " + std::to_string(width));
        width = out;
    }
    return width;
}

std::size_t word_output_width(const CobordismWord& w) {
    return validate_word(w);
}

namespace {

// image of a single basis tuple under one level
TensorElem apply_level(const FrobeniusSystem& s, const std::vector<Generator>& level,
                       const BasisTuple& tup, const RingElem& coeff) {
    TensorElem acc = s.tensor_scalar(coeff);
    std::size_t pos = 0;
    for (const auto& g : level) {
        TensorElem piece;
        switch (g.kind) {
            case GenKind::identity: {
                piece.arity = 1;
                piece.add_term({tup[pos]}, s.ring_one());
                break;
            }
            case GenKind::unit:
                piece = s.tensor_of(s.one());
                break;
            case GenKind::counit_gen:
                piece = s.tensor_scalar(s.counit(s.basis_elem(tup[pos])));
                break;
            case GenKind::mult:
                piece = s.tensor_of(s.mul(s.basis_elem(tup[pos]), s.basis_elem(tup[pos + 1])));
                break;
            case GenKind::comult:
                piece = s.coproduct(s.basis_elem(tup[pos]));
                break;
            case GenKind::swap_gen: {
                piece.arity = 2;
                piece.add_term({tup[pos + 1], tup[pos]}, s.ring_one());
                break;
            }
            case GenKind::color:
                piece = s.tensor_of(s.mul(g.color_elem, s.basis_elem(tup[pos])));
                break;
        }
        pos += g.in_arity();
        acc = tensor_product(acc, piece);
        if (acc.is_zero())
            break;
    }
    return acc;
}

}   // namespace

TensorElem apply_word(const FrobeniusSystem& s, const CobordismWord& w, const TensorElem& x) {
    const std::size_t out_width = validate_word(w);
    if (x.arity != w.input_width)
        throw error(errc::word_shape, "input tensor arity " + std::to_string(x.arity) +
                                          " does not match word input width " +
                                          std::to_string(w.input_width));
    TensorElem cur = x;
    for (const auto& level : w.levels) {
        TensorElem next;
        next.arity = 0;
        for (const auto& g : level)
            next.arity += g.out_arity();
        for (const auto& [tup, c] : cur.terms) {
            TensorElem img = apply_level(s, level, tup, c);
            img.arity = next.arity;   // zero images keep the level arity
            next += img;
        }
        cur = std::move(next);
    }
    cur.arity = out_width;
    return cur;
}

TensorElem LinearMap::apply(const TensorElem& x) const {
    if (x.arity != domain_arity)
        throw error(errc::word_shape, "tensor arity does not match map domain");
    TensorElem out;
    out.arity = codomain_arity;
    for (const auto& [tup, c] : x.terms) {
        auto it = columns.find(tup);
        if (it == columns.end())
            throw error(errc::usage, "linear map is missing a basis column");
        out += it->second.scaled(c);
    }
    return out;
}

namespace {

void for_each_tuple(std::size_t rank, std::size_t arity,
                    const std::function<void(const BasisTuple&)>& fn) {
    BasisTuple tup(arity, 0);
    while (true) {
        fn(tup);
        std::size_t i = arity;
        while (i > 0) {
            if (++tup[i - 1] < rank)
                break;
            tup[i - 1] = 0;
            --i;
        }
        if (i == 0)
            break;
    }
}

}   // namespace

LinearMap word_to_map(const FrobeniusSystem& s, const CobordismWord& w) {
    LinearMap m;
    m.domain_arity = w.input_width;
    m.codomain_arity = validate_word(w);
    for_each_tuple(s.rank(), w.input_width, [&](const BasisTuple& tup) {
        TensorElem x;
        x.arity = w.input_width;
        x.add_term(tup, s.ring_one());
        m.columns.emplace(tup, apply_word(s, w, x));
    });
    return m;
}

LinearMap compose(const FrobeniusSystem& s, const LinearMap& g, const LinearMap& f) {
    (void)s;
    if (f.codomain_arity != g.domain_arity)
        throw error(errc::signature_mismatch, "maps are not composable");
    LinearMap m;
    m.domain_arity = f.domain_arity;
    m.codomain_arity = g.codomain_arity;
    for (const auto& [tup, img] : f.columns)
        m.columns.emplace(tup, g.apply(img));
    return m;
}

LinearMap identity_map(const FrobeniusSystem& s, std::size_t arity) {
    LinearMap m;
    m.domain_arity = m.codomain_arity = arity;
    for_each_tuple(s.rank(), arity, [&](const BasisTuple& tup) {
        TensorElem x;
        x.arity = arity;
        x.add_term(tup, s.ring_one());
        m.columns.emplace(tup, std::move(x));
    });
    return m;
}

namespace {

// union-find over the surface pieces created while scanning a word
struct ComponentTracker {
    struct Node {
        int parent;
        int chi = 0;
        AlgElem color;
        std::vector<int> inputs;
        std::vector<int> outputs;
    };
    std::vector<Node> nodes;
    const FrobeniusSystem& sys;

    explicit ComponentTracker(const FrobeniusSystem& s) : sys(s) {}

    int fresh(int chi) {
        nodes.push_back({static_cast<int>(nodes.size()), chi, sys.one(), {}, {}});
        return static_cast<int>(nodes.size()) - 1;
    }
    int find(int i) {
        while (nodes[i].parent != i) {
            nodes[i].parent = nodes[nodes[i].parent].parent;
            i = nodes[i].parent;
        }
        return i;
    }
    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b)
            return a;
        nodes[a].chi += nodes[b].chi;
        nodes[a].color = sys.mul(nodes[a].color, nodes[b].color);
        nodes[a].inputs.insert(nodes[a].inputs.end(), nodes[b].inputs.begin(),
                               nodes[b].inputs.end());
        nodes[a].outputs.insert(nodes[a].outputs.end(), nodes[b].outputs.begin(),
                                nodes[b].outputs.end());
        nodes[b].parent = a;
        return a;
    }
};

}   // namespace

ColoredCobordism word_to_surface(const FrobeniusSystem& s, const CobordismWord& w,
                                 const std::vector<AlgElem>& input_colors) {
    const std::size_t out_width = validate_word(w);
    if (!input_colors.empty() && input_colors.size() != w.input_width)
        throw error(errc::word_shape, "input color list does not match word input width");

    ComponentTracker tracker(s);
    std::vector<int> wires;   // strand position -> component node
    wires.reserve(w.input_width);
    for (std::size_t i = 0; i < w.input_width; ++i) {
        int c = tracker.fresh(0);
        tracker.nodes[c].inputs.push_back(static_cast<int>(i) + 1);
        if (!input_colors.empty())
            tracker.nodes[c].color = input_colors[i];
        wires.push_back(c);
    }

    for (const auto& level : w.levels) {
        std::vector<int> next;
        std::size_t pos = 0;
        for (const auto& g : level) {
            switch (g.kind) {
                case GenKind::identity:
                    next.push_back(wires[pos]);
                    break;
                case GenKind::swap_gen:
                    next.push_back(wires[pos + 1]);
                    next.push_back(wires[pos]);
                    break;
                case GenKind::unit:
                    next.push_back(tracker.fresh(1));
                    break;
                case GenKind::counit_gen: {
                    int c = tracker.find(wires[pos]);
                    tracker.nodes[c].chi += 1;
                    break;
                }
                case GenKind::mult: {
                    int c = tracker.unite(wires[pos], wires[pos + 1]);
                    tracker.nodes[c].chi -= 1;
                    next.push_back(c);
                    break;
                }
                case GenKind::comult: {
                    int c = tracker.find(wires[pos]);
                    tracker.nodes[c].chi -= 1;
                    next.push_back(c);
                    next.push_back(c);
                    break;
                }
                case GenKind::color: {
                    int c = tracker.find(wires[pos]);
                    tracker.nodes[c].color = s.mul(tracker.nodes[c].color, g.color_elem);
                    next.push_back(c);
                    break;
                }
            }
            pos += g.in_arity();
        }
        wires = std::move(next);
    }

    for (std::size_t j = 0; j < wires.size(); ++j)
        tracker.nodes[tracker.find(wires[j])].outputs.push_back(static_cast<int>(j) + 1);

    ColoredCobordism cob;
    cob.num_inputs = w.input_width;
    cob.num_outputs = out_width;
    for (std::size_t i = 0; i < tracker.nodes.size(); ++i) {
        if (tracker.find(static_cast<int>(i)) != static_cast<int>(i))
            continue;
        const auto& n = tracker.nodes[i];
        const int b = static_cast<int>(n.inputs.size() + n.outputs.size());
        const int two_genus = 2 - b - n.chi;   // χ = 2 - 2g - b
        if (two_genus < 0 || two_genus % 2 != 0)
            throw error(errc::usage, "internal: inconsistent Euler characteristic");
        CobComponent comp;
        comp.genus = static_cast<unsigned>(two_genus / 2);
        comp.inputs = n.inputs;
        comp.outputs = n.outputs;
        comp.color = n.color;
        cob.components.push_back(std::move(comp));
    }
    cob.canonicalize();
    cob.validate();
    return cob;
}

}   // namespace skein
