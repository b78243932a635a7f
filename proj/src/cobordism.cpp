#include "skein/cobordism.hpp"

#include <algorithm>
#include <functional>

namespace skein {

bool CobComponent::operator<(const CobComponent& other) const {
    if (inputs != other.inputs)
        return inputs < other.inputs;
    if (outputs != other.outputs)
        return outputs < other.outputs;
    if (genus != other.genus)
        return genus < other.genus;
    return color < other.color;
}

void ColoredCobordism::canonicalize() {
    for (auto& c : components) {
        std::sort(c.inputs.begin(), c.inputs.end());
        std::sort(c.outputs.begin(), c.outputs.end());
    }
    std::sort(components.begin(), components.end());
}

void ColoredCobordism::validate() const {
    std::vector<bool> in_seen(num_inputs, false), out_seen(num_outputs, false);
    for (const auto& c : components) {
        for (int i : c.inputs) {
            if (i < 1 || static_cast<std::size_t>(i) > num_inputs || in_seen[i - 1])
                throw error(errc::usage, "input circles do not partition {1..r}");
            in_seen[i - 1] = true;
        }
        for (int j : c.outputs) {
            if (j < 1 || static_cast<std::size_t>(j) > num_outputs || out_seen[j - 1])
                throw error(errc::usage, "output circles do not partition {1..s}");
            out_seen[j - 1] = true;
        }
    }
    if (!std::all_of(in_seen.begin(), in_seen.end(), [](bool b) { return b; }) ||
        !std::all_of(out_seen.begin(), out_seen.end(), [](bool b) { return b; }))
        throw error(errc::usage, "some boundary circles belong to no component");
}

bool ColoredCobordism::operator<(const ColoredCobordism& other) const {
    if (num_inputs != other.num_inputs)
        return num_inputs < other.num_inputs;
    if (num_outputs != other.num_outputs)
        return num_outputs < other.num_outputs;
    return components < other.components;
}

SurfaceCombination SurfaceCombination::zero(std::size_t r, std::size_t s) {
    SurfaceCombination c;
    c.num_inputs = r;
    c.num_outputs = s;
    return c;
}

SurfaceCombination SurfaceCombination::of(ColoredCobordism c, RingElem coeff) {
    SurfaceCombination result = zero(c.num_inputs, c.num_outputs);
    result.add(std::move(c), coeff);
    return result;
}

void SurfaceCombination::add(ColoredCobordism c, const RingElem& coeff) {
    if (c.num_inputs != num_inputs || c.num_outputs != num_outputs)
        throw error(errc::signature_mismatch,
                    "cobordism signature does not match the combination");
    if (coeff.is_zero())
        return;
    c.canonicalize();
    auto it = terms.find(c);
    if (it == terms.end()) {
        terms.emplace(std::move(c), coeff);
        return;
    }
    it->second += coeff;
    if (it->second.is_zero())
        terms.erase(it);
}

SurfaceCombination& SurfaceCombination::operator+=(const SurfaceCombination& rhs) {
    if (rhs.num_inputs != num_inputs || rhs.num_outputs != num_outputs)
        throw error(errc::signature_mismatch, "combinations of different signature");
    for (const auto& [c, k] : rhs.terms)
        add(c, k);
    return *this;
}

SurfaceCombination SurfaceCombination::scaled(const RingElem& c) const {
    SurfaceCombination r = zero(num_inputs, num_outputs);
    for (const auto& [cob, k] : terms)
        r.add(cob, k * c);
    return r;
}

SkeinElement normal_form(const FrobeniusSystem& s, const ColoredCobordism& cob) {
    cob.validate();
    const std::size_t r = cob.num_inputs, t = cob.num_outputs;
    const AlgElem h = s.handle();

    TensorElem acc;
    acc.arity = r + t;
    acc.add_term(BasisTuple(r + t, 0), s.ring_one());

    for (const auto& comp : cob.components) {
        const AlgElem x = s.mul(s.pow(h, comp.genus), comp.color);
        const std::size_t k = comp.boundary_count();
        if (k == 0) {
            acc = acc.scaled(s.counit(x));
            if (acc.is_zero())
                break;
            continue;
        }
        // slots of this component in the r+s disk tensor, inputs first
        std::vector<std::size_t> slots;
        slots.reserve(k);
        for (int i : comp.inputs)
            slots.push_back(static_cast<std::size_t>(i) - 1);
        for (int j : comp.outputs)
            slots.push_back(r + static_cast<std::size_t>(j) - 1);

        const TensorElem part = s.iterated_coproduct(x, k);
        TensorElem next;
        next.arity = acc.arity;
        for (const auto& [ta, ca] : acc.terms) {
            for (const auto& [tp, cp] : part.terms) {
                BasisTuple tup = ta;
                for (std::size_t q = 0; q < k; ++q)
                    tup[slots[q]] = tp[q];
                next.add_term(tup, ca * cp);
            }
        }
        acc = std::move(next);
        if (acc.is_zero())
            break;
    }
    return SkeinElement{r, t, std::move(acc)};
}

SkeinElement normal_form(const FrobeniusSystem& s, const SurfaceCombination& c) {
    SkeinElement out{c.num_inputs, c.num_outputs, {}};
    out.tensor.arity = c.num_inputs + c.num_outputs;
    for (const auto& [cob, coeff] : c.terms)
        out.tensor += normal_form(s, cob).tensor.scaled(coeff);
    return out;
}

bool skein_equal(const FrobeniusSystem& s, const SurfaceCombination& a,
                 const SurfaceCombination& b) {
    if (a.num_inputs != b.num_inputs || a.num_outputs != b.num_outputs)
        throw error(errc::signature_mismatch, "skein elements of different signature");
    return normal_form(s, a) == normal_form(s, b);
}

SkeinElement compose(const FrobeniusSystem& s, const SkeinElement& g, const SkeinElement& f) {
    if (f.num_outputs != g.num_inputs)
        throw error(errc::signature_mismatch,
                    "composition needs matching middle signature: f has " +
                        std::to_string(f.num_outputs) + " outputs, g has " +
                        std::to_string(g.num_inputs) + " inputs");
    const std::size_t r = f.num_inputs, m = f.num_outputs, t = g.num_outputs;
    SkeinElement out{r, t, {}};
    out.tensor.arity = r + t;
    for (const auto& [ft, fc] : f.tensor.terms) {
        for (const auto& [gt, gc] : g.tensor.terms) {
            // pairing ε(b_k b'_k) over the middle disks
            RingElem pairing = fc * gc;
            for (std::size_t k = 0; k < m && !pairing.is_zero(); ++k)
                pairing *= s.counit(s.data().table[ft[r + k]][gt[k]]);
            if (pairing.is_zero())
                continue;
            BasisTuple tup;
            tup.reserve(r + t);
            tup.insert(tup.end(), ft.begin(), ft.begin() + r);
            tup.insert(tup.end(), gt.begin() + m, gt.end());
            out.tensor.add_term(tup, pairing);
        }
    }
    return out;
}

SkeinElement monoidal_product(const SkeinElement& f, const SkeinElement& g) {
    SkeinElement out{f.num_inputs + g.num_inputs, f.num_outputs + g.num_outputs, {}};
    out.tensor.arity = out.num_inputs + out.num_outputs;
    for (const auto& [ft, fc] : f.tensor.terms) {
        for (const auto& [gt, gc] : g.tensor.terms) {
            BasisTuple tup;
            tup.reserve(out.tensor.arity);
            tup.insert(tup.end(), ft.begin(), ft.begin() + f.num_inputs);
            tup.insert(tup.end(), gt.begin(), gt.begin() + g.num_inputs);
            tup.insert(tup.end(), ft.begin() + f.num_inputs, ft.end());
            tup.insert(tup.end(), gt.begin() + g.num_inputs, gt.end());
            out.tensor.add_term(tup, fc * gc);
        }
    }
    return out;
}

SkeinElement identity_skein(const FrobeniusSystem& s, std::size_t width) {
    ColoredCobordism cyl;
    cyl.num_inputs = cyl.num_outputs = width;
    for (std::size_t i = 1; i <= width; ++i)
        cyl.components.push_back(
            CobComponent{0, {static_cast<int>(i)}, {static_cast<int>(i)}, s.one()});
    cyl.canonicalize();
    return normal_form(s, cyl);
}

LinearMap skein_to_map(const FrobeniusSystem& s, const SkeinElement& x) {
    const std::size_t r = x.num_inputs, t = x.num_outputs;
    LinearMap m;
    m.domain_arity = r;
    m.codomain_arity = t;

    std::function<void(BasisTuple&)> fill = [&](BasisTuple& tup) {
        if (tup.size() == r) {
            TensorElem img;
            img.arity = t;
            for (const auto& [xt, xc] : x.tensor.terms) {
                RingElem f = xc;
                for (std::size_t k = 0; k < r && !f.is_zero(); ++k)
                    f *= s.counit(s.data().table[xt[k]][tup[k]]);
                if (f.is_zero())
                    continue;
                img.add_term(BasisTuple(xt.begin() + r, xt.end()), f);
            }
            m.columns.emplace(tup, std::move(img));
            return;
        }
        for (std::uint32_t b = 0; b < s.rank(); ++b) {
            tup.push_back(b);
            fill(tup);
            tup.pop_back();
        }
    };
    BasisTuple tup;
    fill(tup);
    return m;
}

SkeinElement map_to_skein(const FrobeniusSystem& s, const LinearMap& m) {
    const std::size_t r = m.domain_arity, t = m.codomain_arity;
    SkeinElement out{r, t, {}};
    out.tensor.arity = r + t;

    // expand each domain slot through the structure pairs: the identity (2)
    // reconstructs a_k from ε(a_k u_i) v_i, so the tensor is
    // Σ v_{i_1} ⊗ ... ⊗ v_{i_r} ⊗ m(u_{i_1} ⊗ ... ⊗ u_{i_r})
    const std::size_t p = s.pair_count();
    std::vector<std::size_t> pick(r, 0);
    while (true) {
        TensorElem u_input = s.tensor_scalar(s.ring_one());
        TensorElem v_prefix = s.tensor_scalar(s.ring_one());
        for (std::size_t k = 0; k < r; ++k) {
            u_input = tensor_product(u_input, s.tensor_of(s.data().pairs[pick[k]].first));
            v_prefix = tensor_product(v_prefix, s.tensor_of(s.data().pairs[pick[k]].second));
        }
        const TensorElem img = m.apply(u_input);
        out.tensor += tensor_product(v_prefix, img);

        std::size_t k = r;
        while (k > 0) {
            if (++pick[k - 1] < p)
                break;
            pick[k - 1] = 0;
            --k;
        }
        if (k == 0)
            break;
    }
    return out;
}

long degree(const FrobeniusSystem& s, const ColoredCobordism& c) {
    if (!s.has_grading())
        throw error(errc::grading, "system has no declared generator degrees");
    long total = 0;
    for (const auto& comp : c.components) {
        const long chi = 2 - 2 * static_cast<long>(comp.genus) -
                         static_cast<long>(comp.boundary_count());
        total -= chi;
        if (auto d = s.elem_degree(comp.color))
            total += *d;
    }
    return total;
}

namespace {

ColoredCobordism without_component(const ColoredCobordism& c, std::size_t comp) {
    ColoredCobordism r = c;
    r.components.erase(r.components.begin() + static_cast<std::ptrdiff_t>(comp));
    return r;
}

}   // namespace

SurfaceCombination cut_sphere(const FrobeniusSystem& s, const ColoredCobordism& c,
                              std::size_t comp) {
    if (comp >= c.components.size())
        throw error(errc::usage, "no such component");
    const CobComponent& target = c.components[comp];
    if (!target.closed() || target.genus != 0)
        throw error(errc::usage, "sphere relation applies to closed genus-0 components");
    return SurfaceCombination::of(without_component(c, comp), s.counit(target.color));
}

SurfaceCombination cut_nonseparating(const FrobeniusSystem& s, const ColoredCobordism& c,
                                     std::size_t comp) {
    if (comp >= c.components.size())
        throw error(errc::usage, "no such component");
    if (c.components[comp].genus == 0)
        throw error(errc::usage, "nonseparating neck cut needs genus >= 1");
    ColoredCobordism r = c;
    r.components[comp].genus -= 1;
    r.components[comp].color = s.mul(s.handle(), r.components[comp].color);
    r.canonicalize();
    return SurfaceCombination::of(std::move(r), s.ring_one());
}

SurfaceCombination cut_separating(const FrobeniusSystem& s, const ColoredCobordism& c,
                                  std::size_t comp, unsigned genus1,
                                  const std::vector<int>& inputs1,
                                  const std::vector<int>& outputs1) {
    if (comp >= c.components.size())
        throw error(errc::usage, "no such component");
    const CobComponent& target = c.components[comp];
    if (genus1 > target.genus)
        throw error(errc::usage, "piece genus exceeds component genus");
    auto subset_rest = [](const std::vector<int>& all, const std::vector<int>& part) {
        std::vector<int> rest;
        for (int x : all)
            if (std::find(part.begin(), part.end(), x) == part.end())
                rest.push_back(x);
        if (rest.size() + part.size() != all.size())
            throw error(errc::usage, "boundary split is not a subset of the component");
        return rest;
    };
    for (int x : inputs1)
        if (std::find(target.inputs.begin(), target.inputs.end(), x) == target.inputs.end())
            throw error(errc::usage, "boundary split is not a subset of the component");
    for (int x : outputs1)
        if (std::find(target.outputs.begin(), target.outputs.end(), x) ==
            target.outputs.end())
            throw error(errc::usage, "boundary split is not a subset of the component");

    const std::vector<int> inputs2 = subset_rest(target.inputs, inputs1);
    const std::vector<int> outputs2 = subset_rest(target.outputs, outputs1);

    SurfaceCombination out = SurfaceCombination::zero(c.num_inputs, c.num_outputs);
    for (const auto& [u, v] : s.data().pairs) {
        ColoredCobordism piece = without_component(c, comp);
        CobComponent p1{genus1, inputs1, outputs1, s.mul(target.color, u)};
        CobComponent p2{target.genus - genus1, inputs2, outputs2, v};
        piece.components.push_back(std::move(p1));
        piece.components.push_back(std::move(p2));
        piece.canonicalize();
        out.add(std::move(piece), s.ring_one());
    }
    return out;
}

}   // namespace skein
