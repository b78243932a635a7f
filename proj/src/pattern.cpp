#include "skein/pattern.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace skein {

std::vector<int> Pattern::black_indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i].black)
            out.push_back(static_cast<int>(i));
    return out;
}

namespace {

std::vector<int> component_roots(const Pattern& p) {
    std::vector<int> parent(p.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    for (const auto& [a, b] : p.edges)
        parent[find(a)] = find(b);
    std::vector<int> roots(p.vertices.size());
    for (std::size_t i = 0; i < p.vertices.size(); ++i)
        roots[i] = find(static_cast<int>(i));
    return roots;
}

}   // namespace

void Pattern::finalize(const SystemData& d) {
    const int n = static_cast<int>(vertices.size());
    for (const auto& [a, b] : edges)
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw error(errc::pattern, "edge references a missing vertex");
    for (const auto& [anchor, color] : colors) {
        if (anchor < 0 || anchor >= n)
            throw error(errc::pattern, "color anchor references a missing vertex");
        if (color.coords.size() != d.rank())
            throw error(errc::pattern, "component color does not belong to the system");
    }
    if (n == 0) {
        if (!colors.empty())
            throw error(errc::pattern, "colors on an empty pattern");
        return;
    }
    const std::vector<int> roots = component_roots(*this);
    std::map<int, int> colored;   // root -> color entry count
    for (const auto& [anchor, color] : colors) {
        (void)color;
        if (++colored[roots[anchor]] > 1)
            throw error(errc::pattern, "component colored more than once");
    }
    // default color 1 anchored at each component's first vertex
    for (int i = 0; i < n; ++i) {
        if (roots[i] == i && !colored.count(i)) {
            int anchor = -1;
            for (int j = 0; j < n && anchor < 0; ++j)
                if (roots[j] == i)
                    anchor = j;
            colors.emplace_back(anchor, d.unit);
            colored[i] = 1;
        }
    }
}

StateSumResult state_sum(const FrobeniusSystem& s, const Pattern& p) {
    Pattern pat = p;
    pat.finalize(s.data());

    const std::size_t e = pat.edges.size();
    if (e > 12)
        throw error(errc::guard, "state sum beyond 12 edges (" + std::to_string(e) +
                                     " requested)");
    const std::size_t r = s.pair_count();
    const std::vector<int> blacks = pat.black_indices();

    StateSumResult out;
    for (int b : blacks)
        out.black_symbols.push_back(pat.vertices[b].name);

    std::vector<std::size_t> state(e, 0);
    while (true) {
        // accumulate the vertex values of this state
        std::vector<AlgElem> acc(pat.vertices.size(), s.one());
        for (const auto& [anchor, color] : pat.colors)
            acc[anchor] = s.mul(acc[anchor], color);
        for (std::size_t k = 0; k < e; ++k) {
            const auto& [tail, head] = pat.edges[k];
            const auto& [u, v] = s.data().pairs[state[k]];
            acc[tail] = s.mul(acc[tail], u);
            acc[head] = s.mul(acc[head], v);
        }

        RingElem scalar = s.ring_one();
        for (std::size_t i = 0; i < pat.vertices.size() && !scalar.is_zero(); ++i)
            if (!pat.vertices[i].black)
                scalar *= s.counit(acc[i]);

        if (!scalar.is_zero()) {
            // expand black-vertex values in the basis
            std::map<BasisTuple, RingElem> expansion;
            expansion.emplace(BasisTuple{}, scalar);
            for (int b : blacks) {
                std::map<BasisTuple, RingElem> next;
                for (const auto& [tup, c] : expansion) {
                    for (std::uint32_t i = 0; i < s.rank(); ++i) {
                        if (acc[b].coords[i].is_zero())
                            continue;
                        BasisTuple nt = tup;
                        nt.push_back(i);
                        RingElem nc = c * acc[b].coords[i];
                        auto it = next.find(nt);
                        if (it == next.end())
                            next.emplace(std::move(nt), std::move(nc));
                        else
                            it->second += nc;
                    }
                }
                expansion = std::move(next);
            }
            for (const auto& [tup, c] : expansion) {
                if (c.is_zero())
                    continue;
                auto it = out.terms.find(tup);
                if (it == out.terms.end())
                    it = out.terms.emplace(tup, RingElem::zero(s.ring())).first;
                it->second += c;
                if (it->second.is_zero())
                    out.terms.erase(it);
            }
        }

        std::size_t k = e;
        while (k > 0) {
            if (++state[k - 1] < r)
                break;
            state[k - 1] = 0;
            --k;
        }
        if (k == 0)
            break;
    }
    return out;
}

StateSumResult tubing_difference(const FrobeniusSystem& s, const Pattern& p1,
                                 const Pattern& p2) {
    StateSumResult k1 = state_sum(s, p1);
    StateSumResult k2 = state_sum(s, p2);

    // align p2's black vertices to p1's by symbol (multiset equality required)
    if (k1.black_symbols.size() != k2.black_symbols.size())
        throw error(errc::pairing, "patterns have different black-vertex counts");
    std::vector<std::size_t> perm(k2.black_symbols.size());
    std::vector<bool> used(k2.black_symbols.size(), false);
    for (std::size_t i = 0; i < k1.black_symbols.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < k2.black_symbols.size() && !found; ++j) {
            if (!used[j] && k2.black_symbols[j] == k1.black_symbols[i]) {
                perm[i] = j;
                used[j] = true;
                found = true;
            }
        }
        if (!found)
            throw error(errc::pairing, "patterns do not share black-vertex symbol '" +
                                           k1.black_symbols[i] + "'");
    }

    StateSumResult out;
    out.black_symbols = k1.black_symbols;
    out.terms = std::move(k1.terms);
    for (const auto& [tup, c] : k2.terms) {
        BasisTuple aligned(tup.size());
        for (std::size_t i = 0; i < tup.size(); ++i)
            aligned[i] = tup[perm[i]];
        auto it = out.terms.find(aligned);
        if (it == out.terms.end())
            it = out.terms.emplace(std::move(aligned), RingElem::zero(s.ring())).first;
        it->second -= c;
        if (it->second.is_zero())
            out.terms.erase(it);
    }
    return out;
}

std::vector<std::string> forget_projection(const Pattern& p) {
    std::vector<std::string> out;
    for (const auto& v : p.vertices)
        if (v.black)
            out.push_back(v.name);
    return out;
}

}   // namespace skein
