#include "skein/builtins.hpp"

#include <algorithm>
#include <cctype>

namespace skein {

namespace {

FrobeniusSystem make_universal() {
    auto ring = RingDescriptor::make({"h", "t"});
    const RingElem h = RingElem::variable(ring, "h");
    const RingElem t = RingElem::variable(ring, "t");
    SystemData d = quotient_data(ring, "X", 2, {t, h});   // X² = hX + t
    d.counit = {RingElem::zero(ring), RingElem::constant(ring, 1)};
    AlgElem one{{RingElem::constant(ring, 1), RingElem::zero(ring)}};
    AlgElem x{{RingElem::zero(ring), RingElem::constant(ring, 1)}};
    AlgElem x_minus_h{{-h, RingElem::constant(ring, 1)}};
    d.pairs = {{one, x_minus_h}, {x, one}};
    d.degrees = {{"X", 1}, {"h", 2}, {"t", 4}};
    return FrobeniusSystem::make(std::move(d));
}

FrobeniusSystem make_barnatan() {
    auto ring = RingDescriptor::make({});
    SystemData d = quotient_data(ring, "X", 2, {});   // X² = 0
    d.counit = {RingElem::zero(ring), RingElem::constant(ring, 1)};
    AlgElem one{{RingElem::constant(ring, 1), RingElem::zero(ring)}};
    AlgElem x{{RingElem::zero(ring), RingElem::constant(ring, 1)}};
    d.pairs = {{one, x}, {x, one}};
    d.degrees = {{"X", 1}};
    return FrobeniusSystem::make(std::move(d));
}

FrobeniusSystem make_gadnaot() {
    auto ring = RingDescriptor::make({"t"});
    const RingElem t = RingElem::variable(ring, "t");
    SystemData d = quotient_data(ring, "X", 2, {t});   // X² = t
    d.counit = {RingElem::zero(ring), RingElem::constant(ring, 1)};
    AlgElem one{{RingElem::constant(ring, 1), RingElem::zero(ring)}};
    AlgElem x{{RingElem::zero(ring), RingElem::constant(ring, 1)}};
    d.pairs = {{one, x}, {x, one}};
    d.degrees = {{"X", 1}, {"t", 4}};
    return FrobeniusSystem::make(std::move(d));
}

std::string group_element_name(const std::vector<unsigned>& orders,
                               const std::vector<unsigned>& exps) {
    const bool trivial =
        std::all_of(exps.begin(), exps.end(), [](unsigned e) { return e == 0; });
    if (trivial)
        return "e";
    if (orders.size() == 1)
        return exps[0] == 1 ? "g" : "g" + std::to_string(exps[0]);
    std::string name = "g";
    for (std::size_t i = 0; i < exps.size(); ++i) {
        if (i)
            name += "_";
        name += std::to_string(exps[i]);
    }
    return name;
}

}   // namespace

const FrobeniusSystem& universal() {
    static const FrobeniusSystem s = make_universal();
    return s;
}

const FrobeniusSystem& barnatan() {
    static const FrobeniusSystem s = make_barnatan();
    return s;
}

const FrobeniusSystem& gadnaot() {
    static const FrobeniusSystem s = make_gadnaot();
    return s;
}

FrobeniusSystem group_algebra(const std::vector<unsigned>& cyclic_orders) {
    if (cyclic_orders.empty())
        throw error(errc::construction, "empty group order list");
    for (unsigned n : cyclic_orders)
        if (n == 0)
            throw error(errc::construction, "cyclic factor of order zero");
    std::size_t size = 1;
    for (unsigned n : cyclic_orders) {
        size *= n;
        if (size > 64)
            throw error(errc::guard, "group algebra beyond order 64");
    }

    const std::size_t k = cyclic_orders.size();
    auto exps_of = [&](std::size_t idx) {
        std::vector<unsigned> e(k);
        for (std::size_t i = k; i-- > 0;) {
            e[i] = static_cast<unsigned>(idx % cyclic_orders[i]);
            idx /= cyclic_orders[i];
        }
        return e;
    };
    auto index_of = [&](const std::vector<unsigned>& e) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < k; ++i)
            idx = idx * cyclic_orders[i] + e[i];
        return idx;
    };

    auto ring = RingDescriptor::make({});
    SystemData d;
    d.ring = ring;
    for (std::size_t idx = 0; idx < size; ++idx)
        d.basis.push_back(group_element_name(cyclic_orders, exps_of(idx)));

    auto unit_coord = [&](std::size_t target) {
        AlgElem a;
        a.coords.assign(size, RingElem::zero(ring));
        a.coords[target] = RingElem::constant(ring, 1);
        return a;
    };
    d.unit = unit_coord(0);
    d.table.assign(size, std::vector<AlgElem>(size));
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            const auto ei = exps_of(i), ej = exps_of(j);
            std::vector<unsigned> e(k);
            for (std::size_t c = 0; c < k; ++c)
                e[c] = (ei[c] + ej[c]) % cyclic_orders[c];
            d.table[i][j] = unit_coord(index_of(e));
        }
    d.counit.assign(size, RingElem::zero(ring));
    d.counit[0] = RingElem::constant(ring, 1);
    for (std::size_t idx = 0; idx < size; ++idx) {
        const auto e = exps_of(idx);
        std::vector<unsigned> inv(k);
        for (std::size_t c = 0; c < k; ++c)
            inv[c] = e[c] == 0 ? 0 : cyclic_orders[c] - e[c];
        d.pairs.emplace_back(unit_coord(index_of(inv)), unit_coord(idx));
    }
    return FrobeniusSystem::make(std::move(d));
}

std::optional<FrobeniusSystem> builtin_system(std::string_view name) {
    if (name == "universal")
        return universal();
    if (name == "barnatan")
        return barnatan();
    if (name == "gadnaot")
        return gadnaot();
    // "group Z/n x Z/m x ..."
    if (name.substr(0, 5) == "group") {
        std::string_view rest = name.substr(5);
        std::vector<unsigned> orders;
        std::size_t pos = 0;
        auto skip_ws = [&] {
            while (pos < rest.size() && rest[pos] == ' ')
                ++pos;
        };
        while (true) {
            skip_ws();
            if (pos + 1 >= rest.size() || rest[pos] != 'Z' || rest[pos + 1] != '/')
                return std::nullopt;
            pos += 2;
            std::size_t start = pos;
            while (pos < rest.size() && std::isdigit(static_cast<unsigned char>(rest[pos])))
                ++pos;
            if (pos == start)
                return std::nullopt;
            orders.push_back(
                static_cast<unsigned>(std::stoul(std::string(rest.substr(start, pos - start)))));
            skip_ws();
            if (pos == rest.size())
                break;
            if (rest[pos] != 'x')
                return std::nullopt;
            ++pos;
        }
        if (orders.empty())
            return std::nullopt;
        return group_algebra(orders);
    }
    return std::nullopt;
}

}   // namespace skein
