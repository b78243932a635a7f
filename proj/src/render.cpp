#include <sstream>

#include "skein/dsl.hpp"

namespace skein {

namespace {

// joins (coefficient, body) pieces with sign pulling for single-monomial
// coefficients; an empty body means the bare coefficient
std::string join_terms(const std::vector<std::pair<RingElem, std::string>>& pieces) {
    if (pieces.empty())
        return "0";
    std::string out;
    bool first = true;
    for (const auto& [coeff, body] : pieces) {
        bool negative = false;
        std::string piece;
        if (body.empty()) {
            piece = coeff.text();
            if (coeff.terms().size() == 1 && !piece.empty() && piece[0] == '-') {
                negative = true;
                piece = piece.substr(1);
            } else if (coeff.terms().size() > 1) {
                piece = "(" + piece + ")";
            }
        } else if (coeff.is_one()) {
            piece = body;
        } else if (coeff.terms().size() == 1) {
            std::string cs = coeff.text();
            if (!cs.empty() && cs[0] == '-') {
                negative = true;
                cs = cs.substr(1);
            }
            piece = (cs == "1") ? body : cs + "*" + body;
        } else {
            piece = "(" + coeff.text() + ")*" + body;
        }
        if (first)
            out += (negative ? "-" : "") + piece;
        else
            out += (negative ? " - " : " + ") + piece;
        first = false;
    }
    return out;
}

std::string render_ground(const RingDescriptor& d) {
    return d.text();
}

std::string render_extension(const QuotientForm& q) {
    std::vector<std::pair<RingElem, std::string>> pieces;
    for (std::size_t k = q.p_coeffs.size(); k-- > 0;) {
        if (q.p_coeffs[k].is_zero())
            continue;
        std::string body;
        if (k == 1)
            body = q.var;
        else if (k > 1)
            body = q.var + "^" + std::to_string(k);
        pieces.emplace_back(q.p_coeffs[k], body);
    }
    return join_terms(pieces);
}

std::string render_int_list(const std::vector<int>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(xs[i]);
    }
    return out + "]";
}

void render_algebra_into(std::ostringstream& os, const AlgebraItem& a) {
    if (a.group) {
        os << "algebra " << a.name << " = group ";
        for (std::size_t i = 0; i < a.group->orders.size(); ++i) {
            if (i)
                os << " x ";
            os << "Z/" << a.group->orders[i];
        }
        os << ";";
        return;
    }
    os << "algebra " << a.name << " {\n";
    os << "  ground " << render_ground(*a.data.ring) << ";\n";
    if (a.quotient) {
        os << "  extension " << a.quotient->var << "^" << a.quotient->degree << " = "
           << render_extension(*a.quotient) << ";\n";
    } else {
        os << "  basis ";
        for (std::size_t i = 0; i < a.data.basis.size(); ++i) {
            if (i)
                os << ", ";
            os << a.data.basis[i];
        }
        os << ";\n";
        os << "  unit " << render_elem(a.data, a.data.unit) << ";\n";
        os << "  table ";
        bool first = true;
        for (std::size_t i = 0; i < a.data.basis.size(); ++i)
            for (std::size_t j = i; j < a.data.basis.size(); ++j) {
                if (!first)
                    os << ", ";
                os << a.data.basis[i] << "*" << a.data.basis[j] << " = "
                   << render_elem(a.data, a.data.table[i][j]);
                first = false;
            }
        os << ";\n";
    }
    os << "  counit ";
    for (std::size_t i = 0; i < a.data.basis.size(); ++i) {
        if (i)
            os << ", ";
        os << a.data.basis[i] << " -> " << a.data.counit[i].text();
    }
    os << ";\n";
    os << "  delta1 ";
    for (std::size_t i = 0; i < a.data.pairs.size(); ++i) {
        if (i)
            os << " + ";
        os << "(" << render_elem(a.data, a.data.pairs[i].first) << ", "
           << render_elem(a.data, a.data.pairs[i].second) << ")";
    }
    os << ";\n";
    if (!a.data.degrees.empty()) {
        os << "  degrees ";
        bool first = true;
        auto emit = [&](const std::string& key) {
            auto it = a.data.degrees.find(key);
            if (it == a.data.degrees.end())
                return;
            if (!first)
                os << ", ";
            os << key << " -> " << it->second;
            first = false;
        };
        for (const auto& b : a.data.basis)
            emit(b);
        for (const auto& v : a.data.ring->indeterminates)
            emit(v);
        os << ";\n";
    }
    os << "}";
}

void render_word_into(std::ostringstream& os, const WordItem& w, const SystemData& data) {
    os << "word " << w.name << " over " << w.algebra << " inputs " << w.word.input_width
       << " {\n";
    for (const auto& level : w.word.levels) {
        os << "  ";
        for (std::size_t i = 0; i < level.size(); ++i) {
            if (i)
                os << " | ";
            switch (level[i].kind) {
                case GenKind::identity: os << "id"; break;
                case GenKind::unit: os << "unit"; break;
                case GenKind::counit_gen: os << "counit"; break;
                case GenKind::mult: os << "mult"; break;
                case GenKind::comult: os << "comult"; break;
                case GenKind::swap_gen: os << "swap"; break;
                case GenKind::color:
                    os << "color(" << render_elem(data, level[i].color_elem) << ")";
                    break;
            }
        }
        os << ";\n";
    }
    os << "}";
}

void render_surface_into(std::ostringstream& os, const SurfaceItem& s,
                         const SystemData& data) {
    os << "surface " << s.name << " over " << s.algebra << " (" << s.surface.num_inputs
       << "," << s.surface.num_outputs << ") {\n";
    for (const auto& comp : s.surface.components) {
        os << "  comp genus=" << comp.genus << " in=" << render_int_list(comp.inputs)
           << " out=" << render_int_list(comp.outputs) << " color="
           << render_elem(data, comp.color) << ";\n";
    }
    os << "}";
}

void render_combination_into(std::ostringstream& os, const CombinationItem& c) {
    os << "combination " << c.name << " over " << c.algebra << " (" << c.combo.num_inputs
       << "," << c.combo.num_outputs << ") = ";
    std::vector<std::pair<RingElem, std::string>> pieces;
    for (const auto& [coeff, name] : c.parts)
        pieces.emplace_back(coeff, name);
    os << join_terms(pieces) << ";";
}

void render_pattern_into(std::ostringstream& os, const PatternItem& pt,
                         const SystemData& data) {
    os << "pattern " << pt.name << " over " << pt.algebra << " {\n";
    for (const auto& v : pt.pattern.vertices)
        os << "  " << (v.black ? "black " : "white ") << v.name << ";\n";
    for (const auto& [a, b] : pt.pattern.edges)
        os << "  edge " << pt.pattern.vertices[a].name << " -> "
           << pt.pattern.vertices[b].name << ";\n";
    for (const auto& [anchor, color] : pt.pattern.colors)
        os << "  color comp(" << pt.pattern.vertices[anchor].name << ") = "
           << render_elem(data, color) << ";\n";
    os << "}";
}

SystemData resolve_data_for(const Document& doc, const std::string& algebra) {
    if (auto resolved = resolve_algebra(doc, algebra))
        return resolved->data;
    throw error(errc::lookup, "unknown algebra '" + algebra + "'");
}

}   // namespace

std::string render_algebra(const AlgebraItem& item) {
    std::ostringstream os;
    render_algebra_into(os, item);
    return os.str();
}

std::string render(const Document& doc) {
    std::ostringstream os;
    bool first = true;
    for (const auto& item : doc.items) {
        if (!first)
            os << "\n";
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, AlgebraItem>) {
                    render_algebra_into(os, node);
                } else if constexpr (std::is_same_v<T, ElementItem>) {
                    os << "element " << node.name << " over " << node.algebra << " = "
                       << render_elem(resolve_data_for(doc, node.algebra), node.value)
                       << ";";
                } else if constexpr (std::is_same_v<T, WordItem>) {
                    render_word_into(os, node, resolve_data_for(doc, node.algebra));
                } else if constexpr (std::is_same_v<T, SurfaceItem>) {
                    render_surface_into(os, node, resolve_data_for(doc, node.algebra));
                } else if constexpr (std::is_same_v<T, CombinationItem>) {
                    render_combination_into(os, node);
                } else {
                    render_pattern_into(os, node, resolve_data_for(doc, node.algebra));
                }
            },
            item.node);
        os << "\n";
        first = false;
    }
    return os.str();
}

}   // namespace skein
