#include "skein/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "skein/cobordism.hpp"
#include "skein/dsl.hpp"

namespace skein {

namespace {

using nlohmann::ordered_json;

struct CliExit {
    int code;
};

struct Ctx {
    std::ostream& out;
    std::ostream& err;
    bool json = false;
};

std::string read_file(Ctx& ctx, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ctx.err << "cannot open '" << path << "'\n";
        throw CliExit{1};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Document load(Ctx& ctx, const std::string& path) {
    ParseResult result = parse(read_file(ctx, path));
    if (!result.ok()) {
        for (const auto& d : result.diagnostics)
            ctx.err << path << ":" << d.text() << "\n";
        throw CliExit{2};
    }
    return *std::move(result.document);
}

void report_diags(Ctx& ctx, const std::string& what, const std::vector<Diagnostic>& diags) {
    for (const auto& d : diags)
        ctx.err << what << ":" << d.text() << "\n";
    throw CliExit{2};
}

ResolvedAlgebra need_algebra(Ctx& ctx, const Document& doc, const std::string& name) {
    auto resolved = resolve_algebra(doc, name);
    if (!resolved) {
        ctx.err << "unknown algebra '" << name << "'\n";
        throw CliExit{1};
    }
    return *resolved;
}

const FrobeniusSystem& need_system(Ctx& ctx, const ResolvedAlgebra& alg) {
    if (!alg.system) {
        ctx.err << "algebra " << alg.name << ": " << alg.failure << "\n";
        throw CliExit{1};
    }
    return *alg.system;
}

ordered_json tensor_terms_json(const SystemData& data, const TensorElem& t) {
    ordered_json terms = ordered_json::array();
    for (const auto& [tup, coeff] : t.terms) {
        ordered_json coords = ordered_json::array();
        for (auto b : tup)
            coords.push_back(data.basis[b]);
        terms.push_back({{"coords", coords}, {"coeff", coeff.text()}});
    }
    return terms;
}

void emit_tensor(Ctx& ctx, const SystemData& data, const char* kind, std::size_t r,
                 std::size_t s, const TensorElem& t) {
    if (ctx.json) {
        ordered_json j{{"schema", 1},
                       {"result", kind},
                       {"signature", {r, s}},
                       {"terms", tensor_terms_json(data, t)}};
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << render_tensor(data, t) << "\n";
    }
}

// looks up a surface or combination item and returns it as a combination
SurfaceCombination combination_of(Ctx& ctx, const Document& doc, const std::string& name,
                                  std::string& algebra_out) {
    const Item* item = doc.find(name);
    if (!item) {
        ctx.err << "no surface or combination named '" << name << "'\n";
        throw CliExit{1};
    }
    if (const auto* surf = std::get_if<SurfaceItem>(&item->node)) {
        algebra_out = surf->algebra;
        RingDescriptorPtr ring = resolve_algebra(doc, surf->algebra)->data.ring;
        return SurfaceCombination::of(surf->surface, RingElem::constant(ring, 1));
    }
    if (const auto* comb = std::get_if<CombinationItem>(&item->node)) {
        algebra_out = comb->algebra;
        return comb->combo;
    }
    ctx.err << "'" << name << "' is not a surface or combination\n";
    throw CliExit{1};
}

std::string sanitized(const std::string& name) {
    std::string out;
    for (char c : name)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
    return out;
}

void emit_algebra(Ctx& ctx, const AlgebraItem& item) {
    const std::string text = render_algebra(item);
    if (ctx.json) {
        ordered_json j{{"schema", 1}, {"result", "algebra"}, {"text", text}};
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << text << "\n";
    }
}

// ---------------------------------------------------------- commands

int cmd_check(Ctx& ctx, const std::string& file) {
    Document doc = load(ctx, file);
    bool all_ok = true;
    ordered_json report = ordered_json::array();
    for (const auto& item : doc.items) {
        const auto* alg = std::get_if<AlgebraItem>(&item.node);
        if (!alg)
            continue;
        const bool ok = alg->system.has_value();
        all_ok = all_ok && ok;
        if (ctx.json) {
            ordered_json entry{{"name", alg->name}, {"ok", ok}};
            if (!ok)
                entry["error"] = alg->failure;
            report.push_back(std::move(entry));
        } else if (ok) {
            ctx.out << "algebra " << alg->name << ": ok\n";
        } else {
            ctx.out << "algebra " << alg->name << ": FAIL " << alg->failure << "\n";
        }
    }
    if (ctx.json)
        ctx.out << ordered_json{{"schema", 1}, {"result", "check"}, {"algebras", report}}
                       .dump(2)
                << "\n";
    return all_ok ? 0 : 1;
}

int cmd_eval_word(Ctx& ctx, const std::string& file, const std::string& word_name,
                  const std::string& input) {
    Document doc = load(ctx, file);
    const Item* item = doc.find(word_name);
    const WordItem* word = item ? std::get_if<WordItem>(&item->node) : nullptr;
    if (!word) {
        ctx.err << "no word named '" << word_name << "'\n";
        throw CliExit{1};
    }
    ResolvedAlgebra alg = need_algebra(ctx, doc, word->algebra);
    const FrobeniusSystem& sys = need_system(ctx, alg);
    TensorElem x;
    if (input.empty()) {
        x = sys.unit_tensor(word->word.input_width);
    } else {
        std::vector<Diagnostic> diags;
        x = parse_tensor_expr(alg.data, input, word->word.input_width, diags);
        if (!diags.empty())
            report_diags(ctx, "<input>", diags);
    }
    TensorElem y = apply_word(sys, word->word, x);
    emit_tensor(ctx, alg.data, "tensor", word->word.input_width, y.arity, y);
    return 0;
}

int cmd_normal_form(Ctx& ctx, const std::string& file, const std::string& name) {
    Document doc = load(ctx, file);
    std::string algebra;
    SurfaceCombination combo = combination_of(ctx, doc, name, algebra);
    ResolvedAlgebra alg = need_algebra(ctx, doc, algebra);
    SkeinElement nf = normal_form(need_system(ctx, alg), combo);
    emit_tensor(ctx, alg.data, "normal-form", nf.num_inputs, nf.num_outputs, nf.tensor);
    return 0;
}

int cmd_closed_eval(Ctx& ctx, const std::string& file, const std::string& name) {
    Document doc = load(ctx, file);
    std::string algebra;
    SurfaceCombination combo = combination_of(ctx, doc, name, algebra);
    if (combo.num_inputs != 0 || combo.num_outputs != 0) {
        ctx.err << "'" << name << "' is not closed: signature (" << combo.num_inputs << ","
                << combo.num_outputs << ")\n";
        throw CliExit{1};
    }
    ResolvedAlgebra alg = need_algebra(ctx, doc, algebra);
    SkeinElement nf = normal_form(need_system(ctx, alg), combo);
    const RingElem value =
        nf.tensor.is_zero() ? RingElem::zero(alg.data.ring) : nf.tensor.terms.begin()->second;
    if (ctx.json) {
        ordered_json j{{"schema", 1}, {"result", "scalar"}, {"value", value.text()}};
        ctx.out << j.dump(2) << "\n";
    } else {
        ctx.out << value.text() << "\n";
    }
    return 0;
}

int cmd_compose(Ctx& ctx, const std::string& file, const std::string& g_name,
                const std::string& f_name) {
    Document doc = load(ctx, file);
    std::string alg_g, alg_f;
    SurfaceCombination cg = combination_of(ctx, doc, g_name, alg_g);
    SurfaceCombination cf = combination_of(ctx, doc, f_name, alg_f);
    if (alg_g != alg_f) {
        ctx.err << "cannot compose: '" << g_name << "' is over " << alg_g << ", '" << f_name
                << "' over " << alg_f << "\n";
        throw CliExit{1};
    }
    ResolvedAlgebra alg = need_algebra(ctx, doc, alg_g);
    const FrobeniusSystem& sys = need_system(ctx, alg);
    try {
        SkeinElement nf = compose(sys, normal_form(sys, cg), normal_form(sys, cf));
        emit_tensor(ctx, alg.data, "normal-form", nf.num_inputs, nf.num_outputs, nf.tensor);
    } catch (const error& e) {
        ctx.err << e.what() << "\n";
        throw CliExit{1};
    }
    return 0;
}

int cmd_equal(Ctx& ctx, const std::string& file, const std::string& a_name,
              const std::string& b_name) {
    Document doc = load(ctx, file);
    std::string alg_a, alg_b;
    SurfaceCombination ca = combination_of(ctx, doc, a_name, alg_a);
    SurfaceCombination cb = combination_of(ctx, doc, b_name, alg_b);
    if (alg_a != alg_b) {
        ctx.err << "cannot compare: different algebras " << alg_a << " and " << alg_b << "\n";
        throw CliExit{1};
    }
    ResolvedAlgebra alg = need_algebra(ctx, doc, alg_a);
    bool eq = false;
    try {
        eq = skein_equal(need_system(ctx, alg), ca, cb);
    } catch (const error& e) {
        ctx.err << e.what() << "\n";
        throw CliExit{1};
    }
    if (ctx.json)
        ctx.out << ordered_json{{"schema", 1}, {"result", "equal"}, {"equal", eq}}.dump(2)
                << "\n";
    else
        ctx.out << (eq ? "equal" : "not equal") << "\n";
    return eq ? 0 : 1;
}

int cmd_statesum(Ctx& ctx, const std::string& file, const std::string& name) {
    Document doc = load(ctx, file);
    const Item* item = doc.find(name);
    const PatternItem* pat = item ? std::get_if<PatternItem>(&item->node) : nullptr;
    if (!pat) {
        ctx.err << "no pattern named '" << name << "'\n";
        throw CliExit{1};
    }
    ResolvedAlgebra alg = need_algebra(ctx, doc, pat->algebra);
    StateSumResult result;
    try {
        result = state_sum(need_system(ctx, alg), pat->pattern);
    } catch (const error& e) {
        ctx.err << e.what() << "\n";
        throw CliExit{1};
    }
    if (ctx.json) {
        ordered_json terms = ordered_json::array();
        for (const auto& [tup, coeff] : result.terms) {
            ordered_json coords = ordered_json::array();
            for (auto b : tup)
                coords.push_back(alg.data.basis[b]);
            terms.push_back({{"coords", coords}, {"coeff", coeff.text()}});
        }
        ordered_json j{{"schema", 1},
                       {"result", "statesum"},
                       {"black", result.black_symbols},
                       {"terms", terms}};
        ctx.out << j.dump(2) << "\n";
        return 0;
    }
    if (result.terms.empty()) {
        ctx.out << "0\n";
        return 0;
    }
    for (const auto& [tup, coeff] : result.terms) {
        ctx.out << "(";
        for (std::size_t i = 0; i < tup.size(); ++i) {
            if (i)
                ctx.out << ", ";
            ctx.out << result.black_symbols[i] << "=" << alg.data.basis[tup[i]];
        }
        ctx.out << "): " << coeff.text() << "\n";
    }
    return 0;
}

int cmd_dual_basis(Ctx& ctx, const std::string& file, const std::string& name) {
    Document doc = load(ctx, file);
    ResolvedAlgebra alg = need_algebra(ctx, doc, name);
    const FrobeniusSystem& sys = need_system(ctx, alg);
    std::vector<AlgElem> dual;
    try {
        dual = sys.dual_basis();
    } catch (const error& e) {
        ctx.err << e.what() << "\n";
        throw CliExit{1};
    }
    if (ctx.json) {
        ordered_json elems = ordered_json::array();
        for (const auto& w : dual)
            elems.push_back(tensor_terms_json(alg.data, sys.tensor_of(w)));
        ordered_json j{{"schema", 1},
                       {"result", "elements"},
                       {"basis", alg.data.basis},
                       {"elements", elems}};
        ctx.out << j.dump(2) << "\n";
    } else {
        for (const auto& w : dual)
            ctx.out << render_elem(alg.data, w) << "\n";
    }
    return 0;
}

int cmd_twist(Ctx& ctx, const std::string& file, const std::string& name,
              const std::string& elem_text) {
    Document doc = load(ctx, file);
    ResolvedAlgebra alg = need_algebra(ctx, doc, name);
    const FrobeniusSystem& sys = need_system(ctx, alg);
    std::vector<Diagnostic> diags;
    AlgElem y = parse_element_expr(alg.data, elem_text, diags);
    if (!diags.empty())
        report_diags(ctx, "<element>", diags);
    try {
        FrobeniusSystem twisted = sys.twist(y);
        AlgebraItem item;
        item.name = sanitized(alg.name) + "_tw";
        item.quotient = alg.quotient;
        item.data = twisted.data();
        item.system = std::move(twisted);
        emit_algebra(ctx, item);
    } catch (const error& e) {
        ctx.err << e.what() << "\n";
        throw CliExit{1};
    }
    return 0;
}

int cmd_specialize(Ctx& ctx, const std::string& file, const std::string& name,
                   const std::string& assignment_text, const std::string& ground_text) {
    Document doc = load(ctx, file);
    ResolvedAlgebra alg = need_algebra(ctx, doc, name);
    const FrobeniusSystem& sys = need_system(ctx, alg);

    // split "h=0, t=t" into entries
    std::vector<std::pair<std::string, std::string>> entries;
    {
        std::string rest = assignment_text;
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            std::size_t comma = rest.find(',', pos);
            std::string piece = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
            const std::size_t eq = piece.find('=');
            if (eq == std::string::npos) {
                ctx.err << "assignment entry '" << piece << "' is missing '='\n";
                throw CliExit{2};
            }
            auto trim = [](std::string s) {
                const auto b = s.find_first_not_of(" \t");
                const auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            entries.emplace_back(trim(piece.substr(0, eq)), trim(piece.substr(eq + 1)));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
    }

    RingDescriptorPtr target;
    std::vector<Diagnostic> diags;
    if (!ground_text.empty()) {
        target = parse_ground_expr(ground_text, diags);
        if (!diags.empty())
            report_diags(ctx, "<ground>", diags);
    } else {
        // default target: the source indeterminates that still appear on
        // some right-hand side, with the source denominators
        std::vector<std::string> vars;
        for (const auto& v : alg.data.ring->indeterminates) {
            bool used = false;
            for (const auto& [lhs, rhs] : entries) {
                (void)lhs;
                std::size_t at = 0;
                while ((at = rhs.find(v, at)) != std::string::npos) {
                    const bool left_ok =
                        at == 0 || !(std::isalnum(static_cast<unsigned char>(rhs[at - 1])) ||
                                     rhs[at - 1] == '_');
                    const std::size_t after = at + v.size();
                    const bool right_ok =
                        after >= rhs.size() ||
                        !(std::isalnum(static_cast<unsigned char>(rhs[after])) ||
                          rhs[after] == '_');
                    if (left_ok && right_ok) {
                        used = true;
                        break;
                    }
                    ++at;
                }
                if (used)
                    break;
            }
            if (used)
                vars.push_back(v);
        }
        target = RingDescriptor::make(vars, alg.data.ring->denominator_primes);
    }

    std::map<std::string, RingElem> assignment;
    for (const auto& [lhs, rhs] : entries) {
        if (!alg.data.ring->index_of(lhs)) {
            ctx.err << "'" << lhs << "' is not an indeterminate of " << alg.data.ring->text()
                    << "\n";
            throw CliExit{2};
        }
        RingElem value = parse_ring_expr(target, rhs, diags);
        if (!diags.empty())
            report_diags(ctx, "<assignment>", diags);
        assignment.emplace(lhs, std::move(value));
    }

    try {
        SpecializeResult spec = sys.specialize(target, assignment);
        AlgebraItem item;
        item.name = sanitized(alg.name) + "_sp";
        if (alg.quotient) {
            QuotientForm form = *alg.quotient;
            for (auto& c : form.p_coeffs)
                c = spec.map_ring(c);
            item.quotient = std::move(form);
        }
        item.data = spec.system.data();
        item.system = std::move(spec.system);
        emit_algebra(ctx, item);
    } catch (const error& e) {
        ctx.err << e.what() << "\n";
        throw CliExit{1};
    }
    return 0;
}

}   // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Ctx ctx{out, err, false};

    CLI::App app{"exact engine for Frobenius-algebra surface skein calculus"};
    app.fallthrough();
    app.add_flag("--json", ctx.json, "emit results as JSON");
    app.require_subcommand(1);

    std::string file, name_a, name_b, input, ground;

    auto* check = app.add_subcommand("check", "verify every algebra in a file");
    check->add_option("file", file)->required();

    auto* eval_word = app.add_subcommand("eval-word", "evaluate a word on a tensor");
    eval_word->add_option("file", file)->required();
    eval_word->add_option("word", name_a)->required();
    eval_word->add_option("--input", input, "input tensor expression");

    auto* nf = app.add_subcommand("normal-form", "normal form of a surface or combination");
    nf->add_option("file", file)->required();
    nf->add_option("name", name_a)->required();

    auto* closed = app.add_subcommand("closed-eval", "evaluate a closed surface");
    closed->add_option("file", file)->required();
    closed->add_option("name", name_a)->required();

    auto* comp = app.add_subcommand("compose", "compose two normal forms (g after f)");
    comp->add_option("file", file)->required();
    comp->add_option("g", name_a)->required();
    comp->add_option("f", name_b)->required();

    auto* equal = app.add_subcommand("equal", "decide skein equality");
    equal->add_option("file", file)->required();
    equal->add_option("first", name_a)->required();
    equal->add_option("second", name_b)->required();

    auto* statesum = app.add_subcommand("statesum", "state sum of a pattern");
    statesum->add_option("file", file)->required();
    statesum->add_option("pattern", name_a)->required();

    auto* dual = app.add_subcommand("dual-basis", "dual basis of an algebra");
    dual->add_option("file", file)->required();
    dual->add_option("algebra", name_a)->required();

    auto* twist = app.add_subcommand("twist", "twist an algebra by an invertible element");
    twist->add_option("file", file)->required();
    twist->add_option("algebra", name_a)->required();
    twist->add_option("element", name_b)->required();

    auto* spec = app.add_subcommand("specialize", "base-change an algebra");
    spec->add_option("file", file)->required();
    spec->add_option("algebra", name_a)->required();
    spec->add_option("assignment", name_b, "e.g. \"h=0,t=t\"")->required();
    spec->add_option("--ground", ground, "target ground ring, e.g. \"Z[1/2][t]\"");

    std::vector<const char*> argv{"skn"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (check->parsed())
            return cmd_check(ctx, file);
        if (eval_word->parsed())
            return cmd_eval_word(ctx, file, name_a, input);
        if (nf->parsed())
            return cmd_normal_form(ctx, file, name_a);
        if (closed->parsed())
            return cmd_closed_eval(ctx, file, name_a);
        if (comp->parsed())
            return cmd_compose(ctx, file, name_a, name_b);
        if (equal->parsed())
            return cmd_equal(ctx, file, name_a, name_b);
        if (statesum->parsed())
            return cmd_statesum(ctx, file, name_a);
        if (dual->parsed())
            return cmd_dual_basis(ctx, file, name_a);
        if (twist->parsed())
            return cmd_twist(ctx, file, name_a, name_b);
        if (spec->parsed())
            return cmd_specialize(ctx, file, name_a, name_b, ground);
        err << "no subcommand\n";
        return 2;
    } catch (const CliExit& e) {
        return e.code;
    } catch (const error& e) {
        err << e.what() << "\n";
        return 1;
    }
}

}   // namespace skein
