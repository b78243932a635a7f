#include "skein/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace skein {

std::string Diagnostic::text() const {
    return std::to_string(line) + ":" + std::to_string(column) +
           (severity == Severity::error ? ": error: " : ": warning: ") + message;
}

const std::string& Item::name() const {
    return std::visit([](const auto& n) -> const std::string& { return n.name; }, node);
}

const Item* Document::find(std::string_view name) const {
    for (const auto& item : items)
        if (item.name() == name)
            return &item;
    return nullptr;
}

const AlgebraItem* Document::find_algebra(std::string_view name) const {
    const Item* item = find(name);
    if (!item)
        return nullptr;
    return std::get_if<AlgebraItem>(&item->node);
}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok {
    ident, integer, lbrace, rbrace, lparen, rparen, lbracket, rbracket,
    comma, semi, eq, plus, minus, star, slash, caret, at, pipe, arrow, eof
};

struct Token {
    Tok kind = Tok::eof;
    std::string text;
    long value = 0;
    int line = 1;
    int column = 1;
};

struct Lexed {
    std::vector<Token> tokens;
    std::vector<Diagnostic> diags;
};

Lexed lex(std::string_view src) {
    Lexed out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string text, long v, int l, int c) {
        out.tokens.push_back(Token{k, std::move(text), v, l, c});
    };
    while (i < src.size()) {
        const char c = src[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') {
            ++col;
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                ++i;
            continue;
        }
        const int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                      src[j] == '_'))
                ++j;
            push(Tok::ident, std::string(src.substr(i, j - i)), 0, tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            const std::string text(src.substr(i, j - i));
            long v = 0;
            if (text.size() > 12) {
                out.diags.push_back(
                    {Diagnostic::Severity::error, "integer literal too large", tl, tc});
            } else {
                v = std::stol(text);
            }
            push(Tok::integer, text, v, tl, tc);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        auto simple = [&](Tok k) {
            push(k, std::string(1, c), 0, tl, tc);
            ++col;
            ++i;
        };
        switch (c) {
            case '{': simple(Tok::lbrace); continue;
            case '}': simple(Tok::rbrace); continue;
            case '(': simple(Tok::lparen); continue;
            case ')': simple(Tok::rparen); continue;
            case '[': simple(Tok::lbracket); continue;
            case ']': simple(Tok::rbracket); continue;
            case ',': simple(Tok::comma); continue;
            case ';': simple(Tok::semi); continue;
            case '=': simple(Tok::eq); continue;
            case '+': simple(Tok::plus); continue;
            case '*': simple(Tok::star); continue;
            case '/': simple(Tok::slash); continue;
            case '^': simple(Tok::caret); continue;
            case '@': simple(Tok::at); continue;
            case '|': simple(Tok::pipe); continue;
            case '-':
                if (i + 1 < src.size() && src[i + 1] == '>') {
                    push(Tok::arrow, "->", 0, tl, tc);
                    col += 2;
                    i += 2;
                } else {
                    simple(Tok::minus);
                }
                continue;
            default:
                out.diags.push_back({Diagnostic::Severity::error,
                                     std::string("unexpected character '") + c + "'", tl, tc});
                ++col;
                ++i;
                continue;
        }
    }
    out.tokens.push_back(Token{Tok::eof, "", 0, line, col});
    return out;
}

// ---------------------------------------------------------------- parser

struct ParseAbort {};   // unwinds to the item loop after a diagnostic

struct Parser {
    const std::vector<Token>& toks;
    std::size_t pos = 0;
    std::vector<Diagnostic>& diags;
    int expr_depth = 0;

    Parser(const std::vector<Token>& t, std::vector<Diagnostic>& d) : toks(t), diags(d) {}

    const Token& peek(std::size_t ahead = 0) const {
        const std::size_t i = pos + ahead;
        return i < toks.size() ? toks[i] : toks.back();
    }
    const Token& get() {
        const Token& t = peek();
        if (pos < toks.size() - 1)
            ++pos;
        return t;
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_ident(std::string_view s) const {
        return peek().kind == Tok::ident && peek().text == s;
    }
    bool accept(Tok k) {
        if (!at(k))
            return false;
        get();
        return true;
    }
    bool accept_ident(std::string_view s) {
        if (!at_ident(s))
            return false;
        get();
        return true;
    }
    [[noreturn]] void fail(const Token& where, std::string msg) {
        diags.push_back(
            {Diagnostic::Severity::error, std::move(msg), where.line, where.column});
        throw ParseAbort{};
    }
    const Token& expect(Tok k, const char* what) {
        if (!at(k))
            fail(peek(), std::string("expected ") + what + ", found '" +
                             (peek().kind == Tok::eof ? "end of input" : peek().text) + "'");
        return get();
    }
    std::string expect_ident(const char* what) { return expect(Tok::ident, what).text; }
    long expect_int(const char* what) { return expect(Tok::integer, what).value; }
};

// ----------------------------------------------------- expression eval

struct ExprCtx {
    RingDescriptorPtr ring;
    const SystemData* sys = nullptr;   // null for ring-only contexts
    bool allow_products = true;        // false while the table itself is being defined
};

struct Value {
    TensorElem t;   // arity 0 is a ring scalar
};

Value scalar_value(const ExprCtx& ctx, const RingElem& c) {
    (void)ctx;
    Value v;
    v.t.arity = 0;
    v.t.add_term({}, c);
    return v;
}

RingElem ctx_scalar(const ExprCtx& ctx, const Value& v) {
    return v.t.terms.empty() ? RingElem::zero(ctx.ring) : v.t.terms.begin()->second;
}

AlgElem value_elem(const ExprCtx& ctx, const Value& v) {
    AlgElem a;
    a.coords.assign(ctx.sys->rank(), RingElem::zero(ctx.ring));
    for (const auto& [tup, c] : v.t.terms)
        a.coords[tup[0]] += c;
    return a;
}

// raw-table product, usable before axiom verification
AlgElem ctx_mul(const ExprCtx& ctx, const AlgElem& a, const AlgElem& b) {
    const SystemData& d = *ctx.sys;
    AlgElem r;
    r.coords.assign(d.rank(), RingElem::zero(d.ring));
    for (std::size_t i = 0; i < d.rank(); ++i) {
        if (a.coords[i].is_zero())
            continue;
        for (std::size_t j = 0; j < d.rank(); ++j) {
            if (b.coords[j].is_zero())
                continue;
            const RingElem f = a.coords[i] * b.coords[j];
            for (std::size_t k = 0; k < d.rank(); ++k)
                r.coords[k] += d.table[i][j].coords[k] * f;
        }
    }
    return r;
}

Value elem_value(const ExprCtx& ctx, const AlgElem& a) {
    (void)ctx;
    Value v;
    v.t.arity = 1;
    for (std::uint32_t i = 0; i < a.coords.size(); ++i)
        v.t.add_term({i}, a.coords[i]);
    return v;
}

struct Evaluator {
    Parser& p;
    ExprCtx ctx;

    Value lift(const Token& where, Value v, std::size_t target_arity) {
        if (v.t.arity == target_arity)
            return v;
        if (v.t.arity == 0 && target_arity == 1 && ctx.sys && !ctx.sys->unit.coords.empty())
            return elem_value(ctx, ctx.sys->unit.scaled(ctx_scalar(ctx, v)));
        p.fail(where, "tensor arity mismatch: found " + std::to_string(v.t.arity) +
                          ", expected " + std::to_string(target_arity));
    }

    Value parse_expr() {
        if (++p.expr_depth > 200)
            p.fail(p.peek(), "expression nests too deeply");
        Value v = parse_sum();
        --p.expr_depth;
        return v;
    }

    Value parse_sum() {
        Value acc = parse_tensor_level();
        while (p.at(Tok::plus) || p.at(Tok::minus)) {
            const Token op = p.get();
            Value rhs = parse_tensor_level();
            // scalars lift across an arity-1 sum (e.g. X - h)
            if (acc.t.arity != rhs.t.arity) {
                if (acc.t.arity == 1 && rhs.t.arity == 0)
                    rhs = lift(op, std::move(rhs), 1);
                else if (acc.t.arity == 0 && rhs.t.arity == 1)
                    acc = lift(op, std::move(acc), 1);
                else
                    p.fail(op, "cannot add tensors of arity " + std::to_string(acc.t.arity) +
                                   " and " + std::to_string(rhs.t.arity));
            }
            if (op.kind == Tok::plus)
                acc.t += rhs.t;
            else
                acc.t -= rhs.t;
        }
        return acc;
    }

    Value parse_tensor_level() {
        Value acc = parse_product();
        while (p.at(Tok::at)) {
            p.get();
            Value rhs = parse_product();
            acc.t = tensor_product(acc.t, rhs.t);
        }
        return acc;
    }

    Value parse_product() {
        Value acc = parse_power();
        while (p.at(Tok::star)) {
            const Token op = p.get();
            Value rhs = parse_power();
            if (acc.t.arity == 0) {
                const RingElem c = ctx_scalar(ctx, acc);
                acc = rhs;
                acc.t = acc.t.scaled(c);
            } else if (rhs.t.arity == 0) {
                acc.t = acc.t.scaled(ctx_scalar(ctx, rhs));
            } else if (acc.t.arity == 1 && rhs.t.arity == 1 && ctx.sys) {
                if (!ctx.allow_products)
                    p.fail(op, "products of basis elements are not available here");
                acc = elem_value(ctx,
                                 ctx_mul(ctx, value_elem(ctx, acc), value_elem(ctx, rhs)));
            } else {
                p.fail(op, "cannot multiply tensors of arity " +
                               std::to_string(acc.t.arity) + " and " +
                               std::to_string(rhs.t.arity));
            }
        }
        return acc;
    }

    Value parse_power() {
        Value base = parse_unary();
        while (p.at(Tok::caret)) {
            const Token op = p.get();
            const long e = p.expect_int("a nonnegative exponent");
            if (e < 0 || e > 64)
                p.fail(op, "exponent out of range");
            if (base.t.arity == 0) {
                base = scalar_value(ctx,
                                    ctx_scalar(ctx, base).pow(static_cast<unsigned>(e)));
            } else if (base.t.arity == 1 && ctx.sys) {
                if (!ctx.allow_products && e != 1)
                    p.fail(op, "products of basis elements are not available here");
                AlgElem acc = ctx.sys->unit;
                const AlgElem b = value_elem(ctx, base);
                for (long i = 0; i < e; ++i)
                    acc = ctx_mul(ctx, acc, b);
                base = elem_value(ctx, acc);
            } else {
                p.fail(op, "cannot exponentiate a tensor of arity " +
                               std::to_string(base.t.arity));
            }
        }
        return base;
    }

    Value parse_unary() {
        if (p.at(Tok::minus)) {
            p.get();
            Value v = parse_unary();
            TensorElem neg;
            neg.arity = v.t.arity;
            for (const auto& [tup, c] : v.t.terms)
                neg.add_term(tup, -c);
            v.t = std::move(neg);
            return v;
        }
        return parse_atom();
    }

    Value parse_atom() {
        const Token t = p.peek();
        if (t.kind == Tok::integer) {
            p.get();
            long num = t.value, den = 1;
            if (p.at(Tok::slash) && p.peek(1).kind == Tok::integer) {
                p.get();
                den = p.expect_int("a denominator");
                if (den == 0)
                    p.fail(t, "zero denominator");
            }
            try {
                return scalar_value(ctx,
                                    RingElem::constant(ctx.ring, make_rational(num, den)));
            } catch (const error& e) {
                p.fail(t, e.what());
            }
        }
        if (t.kind == Tok::ident) {
            p.get();
            if (ctx.sys) {
                for (std::uint32_t i = 0; i < ctx.sys->basis.size(); ++i) {
                    if (ctx.sys->basis[i] == t.text) {
                        AlgElem b;
                        b.coords.assign(ctx.sys->rank(), RingElem::zero(ctx.ring));
                        b.coords[i] = RingElem::constant(ctx.ring, 1);
                        return elem_value(ctx, b);
                    }
                }
            }
            if (ctx.ring->index_of(t.text))
                return scalar_value(ctx, RingElem::variable(ctx.ring, t.text));
            p.fail(t, "unknown symbol '" + t.text + "'");
        }
        if (t.kind == Tok::lparen) {
            p.get();
            Value v = parse_expr();
            p.expect(Tok::rparen, "')'");
            return v;
        }
        p.fail(t, "expected an expression, found '" +
                      (t.kind == Tok::eof ? "end of input" : t.text) + "'");
    }
};

AlgElem eval_alg_expr(Parser& p, const ExprCtx& ctx) {
    const Token start = p.peek();
    Evaluator e{p, ctx};
    Value v = e.parse_expr();
    v = e.lift(start, std::move(v), 1);
    return value_elem(ctx, v);
}

// Z with optional bracket groups of indeterminates and 1/p entries
RingDescriptorPtr parse_ground_tokens(Parser& p) {
    const Token z = p.peek();
    if (!(z.kind == Tok::ident && z.text == "Z"))
        p.fail(z, "ground ring must be Z with optional brackets");
    p.get();
    std::vector<std::string> vars;
    std::set<unsigned long> primes;
    while (p.at(Tok::lbracket)) {
        p.get();
        while (true) {
            const Token t = p.peek();
            if (t.kind == Tok::integer && t.value == 1) {
                p.get();
                p.expect(Tok::slash, "'/'");
                const Token pt = p.peek();
                const long prime = p.expect_int("a prime");
                if (prime < 2)
                    p.fail(pt, "denominator must be a prime");
                primes.insert(static_cast<unsigned long>(prime));
            } else if (t.kind == Tok::ident) {
                vars.push_back(p.get().text);
            } else {
                p.fail(t, "expected an indeterminate or 1/p");
            }
            if (!p.accept(Tok::comma))
                break;
        }
        p.expect(Tok::rbracket, "']'");
    }
    try {
        return RingDescriptor::make(std::move(vars), std::move(primes));
    } catch (const error& e) {
        p.fail(z, e.what());
    }
}

RingElem eval_ring_expr(Parser& p, const RingDescriptorPtr& ring) {
    ExprCtx ctx{ring, nullptr, true};
    Evaluator e{p, ctx};
    const Token start = p.peek();
    Value v = e.parse_expr();
    if (v.t.arity != 0)
        p.fail(start, "expected a ground-ring expression");
    return ctx_scalar(ctx, v);
}

// ----------------------------------------------------------- items

struct DocBuilder {
    Parser& p;
    Document doc;

    explicit DocBuilder(Parser& parser) : p(parser) {}

    // parses ALGREF = IDENT | "group" Z/n (x Z/m)*, returns canonical name
    std::string parse_algebra_ref() {
        const Token& t = p.peek();
        if (t.kind == Tok::ident && t.text == "group") {
            p.get();
            std::vector<unsigned> orders = parse_group_spec();
            std::string name = "group ";
            for (std::size_t i = 0; i < orders.size(); ++i) {
                if (i)
                    name += " x ";
                name += "Z/" + std::to_string(orders[i]);
            }
            return name;
        }
        return p.expect_ident("an algebra name");
    }

    std::vector<unsigned> parse_group_spec() {
        std::vector<unsigned> orders;
        while (true) {
            const Token z = p.peek();
            if (!(z.kind == Tok::ident && z.text == "Z"))
                p.fail(z, "expected Z/n in group specification");
            p.get();
            p.expect(Tok::slash, "'/'");
            const long n = p.expect_int("a cyclic order");
            if (n <= 0)
                p.fail(z, "cyclic order must be positive");
            orders.push_back(static_cast<unsigned>(n));
            if (!p.accept_ident("x"))
                break;
        }
        return orders;
    }

    // resolved structure data of an algebra reference
    struct RefData {
        std::string name;
        SystemData data;
    };
    RefData resolve_ref() {
        const Token where = p.peek();
        const std::string name = parse_algebra_ref();
        if (const AlgebraItem* a = doc.find_algebra(name))
            return {name, a->data};
        if (doc.find(name))
            p.fail(where, "'" + name + "' is not an algebra");
        if (auto sys = builtin_system(name))
            return {name, sys->data()};
        p.fail(where, "unknown algebra '" + name + "'");
    }

    void check_fresh_name(const Token& where, const std::string& name) {
        if (doc.find(name))
            p.fail(where, "duplicate definition of '" + name + "'");
        if (builtin_system(name))
            p.fail(where, "'" + name + "' is a reserved built-in name");
    }

    // ------------------------------------------------------ algebra

    void parse_algebra_item() {
        const Token kw = p.get();   // 'algebra'
        const Token name_tok = p.peek();
        const std::string name = p.expect_ident("an algebra name");
        check_fresh_name(name_tok, name);

        AlgebraItem item;
        item.name = name;

        if (p.accept(Tok::eq)) {
            if (!p.accept_ident("group"))
                p.fail(p.peek(), "expected 'group'");
            GroupForm gf{parse_group_spec()};
            p.expect(Tok::semi, "';'");
            try {
                FrobeniusSystem sys = group_algebra(gf.orders);
                item.data = sys.data();
                item.system = std::move(sys);
            } catch (const error& e) {
                p.fail(name_tok, e.what());
            }
            item.group = std::move(gf);
            doc.items.push_back(Item{kw.line, kw.column, std::move(item)});
            return;
        }

        p.expect(Tok::lbrace, "'{' or '='");

        // first pass: record statement spans keyed by their keyword
        struct Span {
            Token kw;
            std::size_t start;
        };
        std::map<std::string, Span> spans;
        static const std::set<std::string> known = {"ground", "extension", "basis", "unit",
                                                    "table",  "counit",    "delta1",
                                                    "degrees"};
        while (!p.at(Tok::rbrace)) {
            if (p.at(Tok::eof))
                p.fail(p.peek(), "unterminated algebra block");
            const Token kw_tok = p.peek();
            const std::string stmt = p.expect_ident("an algebra statement");
            if (!known.count(stmt))
                p.fail(kw_tok, "unknown algebra statement '" + stmt + "'");
            if (spans.count(stmt))
                p.fail(kw_tok, "duplicate '" + stmt + "' statement");
            spans.emplace(stmt, Span{kw_tok, p.pos});
            // skim to the closing ';' at bracket depth zero
            int depth = 0;
            while (true) {
                const Token& t = p.peek();
                if (t.kind == Tok::eof || t.kind == Tok::rbrace)
                    p.fail(kw_tok, "statement is missing its ';'");
                if (t.kind == Tok::lparen || t.kind == Tok::lbracket)
                    ++depth;
                if (t.kind == Tok::rparen || t.kind == Tok::rbracket)
                    --depth;
                p.get();
                if (t.kind == Tok::semi && depth <= 0)
                    break;
            }
        }
        p.expect(Tok::rbrace, "'}'");
        const std::size_t after = p.pos;

        auto seek = [&](const char* stmt) -> bool {
            auto it = spans.find(stmt);
            if (it == spans.end())
                return false;
            p.pos = it->second.start;
            return true;
        };
        auto require_stmt = [&](const char* stmt) {
            if (!seek(stmt))
                p.fail(name_tok, std::string("algebra needs a '") + stmt + "' statement");
        };

        require_stmt("ground");
        RingDescriptorPtr ring = parse_ground();

        const bool quotient_mode = spans.count("extension") > 0;
        const bool explicit_mode = spans.count("basis") > 0;
        if (quotient_mode && explicit_mode)
            p.fail(name_tok, "algebra cannot have both 'extension' and 'basis'");
        if (!quotient_mode && !explicit_mode)
            p.fail(name_tok, "algebra needs an 'extension' or a 'basis' statement");
        if (quotient_mode && (spans.count("unit") || spans.count("table")))
            p.fail(name_tok, "'unit' and 'table' belong to explicit-basis algebras");

        SystemData data;
        if (quotient_mode) {
            seek("extension");
            item.quotient = parse_extension(ring, data);
        } else {
            parse_basis_stmt(ring, data, require_stmt, seek);
        }

        require_stmt("counit");
        parse_counit(data);
        require_stmt("delta1");
        parse_delta1(data);
        if (seek("degrees"))
            parse_degrees(data);

        p.pos = after;

        item.data = data;
        try {
            item.system = FrobeniusSystem::make(std::move(data));
        } catch (const error& e) {
            item.failure = e.what();
        }
        doc.items.push_back(Item{kw.line, kw.column, std::move(item)});
    }

    template <typename Require, typename Seek>
    void parse_basis_stmt(const RingDescriptorPtr& ring, SystemData& data, Require require_stmt,
                          Seek seek) {
        (void)seek;
        require_stmt("basis");
        parse_basis(ring, data);
        require_stmt("unit");
        parse_unit(data);
        require_stmt("table");
        parse_table(data);
    }

    RingDescriptorPtr parse_ground() {
        RingDescriptorPtr ring = parse_ground_tokens(p);
        p.expect(Tok::semi, "';'");
        return ring;
    }

    QuotientForm parse_extension(const RingDescriptorPtr& ring, SystemData& data) {
        const Token var_tok = p.peek();
        const std::string var = p.expect_ident("the extension variable");
        if (ring->index_of(var))
            p.fail(var_tok, "extension variable collides with indeterminate '" + var + "'");
        p.expect(Tok::caret, "'^'");
        const Token deg_tok = p.peek();
        const long n = p.expect_int("the extension degree");
        if (n < 1 || n > 16)
            p.fail(deg_tok, "extension degree must be between 1 and 16");
        p.expect(Tok::eq, "'='");

        // evaluate p(X) over a scratch ring with X adjoined, then split by
        // X-degree into the dense coefficient list
        std::vector<std::string> scratch_vars = ring->indeterminates;
        scratch_vars.push_back(var);
        RingDescriptorPtr scratch =
            RingDescriptor::make(scratch_vars, ring->denominator_primes);
        const Token expr_tok = p.peek();
        RingElem poly = eval_ring_expr(p, scratch);
        p.expect(Tok::semi, "';'");

        QuotientForm form;
        form.var = var;
        form.degree = static_cast<unsigned>(n);
        form.p_coeffs.assign(static_cast<std::size_t>(n), RingElem::zero(ring));
        const std::size_t xi = ring->indeterminates.size();
        for (const auto& [exps, coeff] : poly.terms()) {
            const std::uint32_t k = exps[xi];
            if (k >= static_cast<std::uint32_t>(n))
                p.fail(expr_tok, "relation of degree " + std::to_string(k) +
                                     " is not below the extension degree");
            Exponents base(exps.begin(), exps.end() - 1);
            form.p_coeffs[k] += RingElem::monomial(ring, std::move(base), coeff);
        }
        data = quotient_data(ring, var, form.degree, form.p_coeffs);
        return form;
    }

    void parse_basis(const RingDescriptorPtr& ring, SystemData& data) {
        data.ring = ring;
        while (true) {
            const Token t = p.peek();
            const std::string bname = p.expect_ident("a basis symbol");
            if (std::find(data.basis.begin(), data.basis.end(), bname) != data.basis.end())
                p.fail(t, "duplicate basis symbol '" + bname + "'");
            if (ring->index_of(bname))
                p.fail(t, "basis symbol collides with indeterminate '" + bname + "'");
            data.basis.push_back(bname);
            if (!p.accept(Tok::comma))
                break;
        }
        p.expect(Tok::semi, "';'");
        const std::size_t nb = data.basis.size();
        AlgElem zero;
        zero.coords.assign(nb, RingElem::zero(ring));
        data.unit = zero;
        data.table.assign(nb, std::vector<AlgElem>(nb, zero));
        data.counit.assign(nb, RingElem::zero(ring));
    }

    void parse_unit(SystemData& data) {
        ExprCtx ctx{data.ring, &data, false};
        const Token t = p.peek();
        Evaluator e{p, ctx};
        Value v = e.parse_expr();
        if (v.t.arity != 1)
            p.fail(t, "the unit must be a combination of basis symbols");
        data.unit = value_elem(ctx, v);
        p.expect(Tok::semi, "';'");
    }

    std::optional<std::size_t> basis_index(const SystemData& data, const std::string& name) {
        for (std::size_t i = 0; i < data.basis.size(); ++i)
            if (data.basis[i] == name)
                return i;
        return std::nullopt;
    }

    void parse_table(SystemData& data) {
        ExprCtx ctx{data.ring, &data, false};
        std::set<std::pair<std::size_t, std::size_t>> seen;
        while (true) {
            const Token t1 = p.peek();
            const std::string a = p.expect_ident("a basis symbol");
            auto ia = basis_index(data, a);
            if (!ia)
                p.fail(t1, "unknown basis symbol '" + a + "'");
            p.expect(Tok::star, "'*'");
            const Token t2 = p.peek();
            const std::string b = p.expect_ident("a basis symbol");
            auto ib = basis_index(data, b);
            if (!ib)
                p.fail(t2, "unknown basis symbol '" + b + "'");
            p.expect(Tok::eq, "'='");
            const Token et = p.peek();
            Evaluator e{p, ctx};
            Value v = e.parse_expr();
            if (v.t.arity != 1)
                p.fail(et, "table entries must be combinations of basis symbols");
            const auto key = std::minmax(*ia, *ib);
            if (!seen.insert(key).second)
                p.fail(t1, "duplicate table entry " + a + "*" + b);
            data.table[*ia][*ib] = value_elem(ctx, v);
            data.table[*ib][*ia] = data.table[*ia][*ib];
            if (!p.accept(Tok::comma))
                break;
        }
        p.expect(Tok::semi, "';'");
        for (std::size_t i = 0; i < data.basis.size(); ++i)
            for (std::size_t j = i; j < data.basis.size(); ++j)
                if (!seen.count({i, j}))
                    p.fail(p.peek(), "missing table entry " + data.basis[i] + "*" +
                                         data.basis[j]);
    }

    // basis keys: 1, X, X^2, e, g, ...
    std::string parse_basis_key() {
        const Token t = p.peek();
        if (t.kind == Tok::integer && t.value == 1) {
            p.get();
            return "1";
        }
        std::string name = p.expect_ident("a basis symbol");
        if (p.at(Tok::caret) && p.peek(1).kind == Tok::integer) {
            p.get();
            name += "^" + p.get().text;
        }
        return name;
    }

    void parse_counit(SystemData& data) {
        std::set<std::size_t> seen;
        while (true) {
            const Token t = p.peek();
            const std::string key = parse_basis_key();
            auto idx = basis_index(data, key);
            if (!idx)
                p.fail(t, "unknown basis symbol '" + key + "'");
            if (!seen.insert(*idx).second)
                p.fail(t, "duplicate counit value for '" + key + "'");
            p.expect(Tok::arrow, "'->'");
            data.counit[*idx] = eval_ring_expr(p, data.ring);
            if (!p.accept(Tok::comma))
                break;
        }
        p.expect(Tok::semi, "';'");
        if (seen.size() != data.basis.size())
            p.fail(p.peek(), "counit must cover every basis symbol");
    }

    void parse_delta1(SystemData& data) {
        ExprCtx ctx{data.ring, &data, true};
        while (true) {
            p.expect(Tok::lparen, "'('");
            AlgElem u = eval_alg_expr(p, ctx);
            p.expect(Tok::comma, "','");
            AlgElem v = eval_alg_expr(p, ctx);
            p.expect(Tok::rparen, "')'");
            data.pairs.emplace_back(std::move(u), std::move(v));
            if (!p.accept(Tok::plus))
                break;
        }
        p.expect(Tok::semi, "';'");
    }

    void parse_degrees(SystemData& data) {
        while (true) {
            const Token t = p.peek();
            const std::string key = parse_basis_key();
            const bool is_basis = basis_index(data, key).has_value();
            if (!is_basis && !data.ring->index_of(key))
                p.fail(t, "degree declared for unknown symbol '" + key + "'");
            p.expect(Tok::arrow, "'->'");
            long sign = 1;
            if (p.accept(Tok::minus))
                sign = -1;
            const long v = p.expect_int("a degree");
            if (data.degrees.count(key))
                p.fail(t, "duplicate degree for '" + key + "'");
            data.degrees.emplace(key, static_cast<int>(sign * v));
            if (!p.accept(Tok::comma))
                break;
        }
        p.expect(Tok::semi, "';'");
    }

    // ------------------------------------------------------ element

    void parse_element_item() {
        const Token kw = p.get();
        const Token name_tok = p.peek();
        const std::string name = p.expect_ident("an element name");
        check_fresh_name(name_tok, name);
        if (!p.accept_ident("over"))
            p.fail(p.peek(), "expected 'over'");
        RefData ref = resolve_ref();
        p.expect(Tok::eq, "'='");
        ExprCtx ctx{ref.data.ring, &ref.data, true};
        AlgElem value = eval_alg_expr(p, ctx);
        p.expect(Tok::semi, "';'");
        doc.items.push_back(
            Item{kw.line, kw.column, ElementItem{name, ref.name, std::move(value)}});
    }

    // ------------------------------------------------------ word

    void parse_word_item() {
        const Token kw = p.get();
        const Token name_tok = p.peek();
        const std::string name = p.expect_ident("a word name");
        check_fresh_name(name_tok, name);
        if (!p.accept_ident("over"))
            p.fail(p.peek(), "expected 'over'");
        RefData ref = resolve_ref();
        if (!p.accept_ident("inputs"))
            p.fail(p.peek(), "expected 'inputs'");
        const long width = p.expect_int("the input width");
        if (width < 0 || width > 16)
            p.fail(name_tok, "input width out of range");
        p.expect(Tok::lbrace, "'{'");

        CobordismWord word;
        word.input_width = static_cast<std::size_t>(width);
        ExprCtx ctx{ref.data.ring, &ref.data, true};
        while (!p.at(Tok::rbrace)) {
            std::vector<Generator> level;
            while (true) {
                const Token t = p.peek();
                const std::string g = p.expect_ident("a generator");
                if (g == "id")
                    level.push_back(Generator::identity());
                else if (g == "unit")
                    level.push_back(Generator::unit());
                else if (g == "counit")
                    level.push_back(Generator::counit());
                else if (g == "mult")
                    level.push_back(Generator::mult());
                else if (g == "comult")
                    level.push_back(Generator::comult());
                else if (g == "swap")
                    level.push_back(Generator::swap());
                else if (g == "color") {
                    p.expect(Tok::lparen, "'('");
                    level.push_back(Generator::color(eval_alg_expr(p, ctx)));
                    p.expect(Tok::rparen, "')'");
                } else {
                    p.fail(t, "unknown generator '" + g + "'");
                }
                if (!p.accept(Tok::pipe))
                    break;
            }
            word.levels.push_back(std::move(level));
            if (!p.accept(Tok::semi)) {
                if (!p.at(Tok::rbrace))
                    p.fail(p.peek(), "expected ';' after a level");
                break;
            }
        }
        p.expect(Tok::rbrace, "'}'");
        try {
            validate_word(word);
        } catch (const error& e) {
            p.fail(name_tok, e.what());
        }
        doc.items.push_back(
            Item{kw.line, kw.column, WordItem{name, ref.name, std::move(word)}});
    }

    // ------------------------------------------------------ surface

    void parse_surface_item() {
        const Token kw = p.get();
        const Token name_tok = p.peek();
        const std::string name = p.expect_ident("a surface name");
        check_fresh_name(name_tok, name);
        if (!p.accept_ident("over"))
            p.fail(p.peek(), "expected 'over'");
        RefData ref = resolve_ref();
        p.expect(Tok::lparen, "'('");
        const long r = p.expect_int("the input count");
        p.expect(Tok::comma, "','");
        const long s = p.expect_int("the output count");
        p.expect(Tok::rparen, "')'");
        if (r < 0 || s < 0 || r > 16 || s > 16)
            p.fail(name_tok, "signature out of range");
        p.expect(Tok::lbrace, "'{'");

        ColoredCobordism surf;
        surf.num_inputs = static_cast<std::size_t>(r);
        surf.num_outputs = static_cast<std::size_t>(s);
        ExprCtx ctx{ref.data.ring, &ref.data, true};
        while (!p.at(Tok::rbrace)) {
            if (!p.accept_ident("comp"))
                p.fail(p.peek(), "expected 'comp'");
            CobComponent comp;
            comp.color = ref.data.unit;
            if (!p.accept_ident("genus"))
                p.fail(p.peek(), "expected 'genus'");
            p.expect(Tok::eq, "'='");
            comp.genus = static_cast<unsigned>(p.expect_int("a genus"));
            if (!p.accept_ident("in"))
                p.fail(p.peek(), "expected 'in'");
            p.expect(Tok::eq, "'='");
            comp.inputs = parse_int_list();
            if (!p.accept_ident("out"))
                p.fail(p.peek(), "expected 'out'");
            p.expect(Tok::eq, "'='");
            comp.outputs = parse_int_list();
            if (p.at_ident("color")) {
                p.get();
                p.expect(Tok::eq, "'='");
                comp.color = eval_alg_expr(p, ctx);
            }
            surf.components.push_back(std::move(comp));
            if (!p.accept(Tok::semi)) {
                if (!p.at(Tok::rbrace))
                    p.fail(p.peek(), "expected ';' after a component");
                break;
            }
        }
        p.expect(Tok::rbrace, "'}'");
        surf.canonicalize();
        try {
            surf.validate();
        } catch (const error& e) {
            p.fail(name_tok, e.what());
        }
        doc.items.push_back(
            Item{kw.line, kw.column, SurfaceItem{name, ref.name, std::move(surf)}});
    }

    std::vector<int> parse_int_list() {
        p.expect(Tok::lbracket, "'['");
        std::vector<int> out;
        if (!p.at(Tok::rbracket)) {
            while (true) {
                out.push_back(static_cast<int>(p.expect_int("a circle index")));
                if (!p.accept(Tok::comma))
                    break;
            }
        }
        p.expect(Tok::rbracket, "']'");
        return out;
    }

    // ------------------------------------------------------ combination

    void parse_combination_item() {
        const Token kw = p.get();
        const Token name_tok = p.peek();
        const std::string name = p.expect_ident("a combination name");
        check_fresh_name(name_tok, name);
        if (!p.accept_ident("over"))
            p.fail(p.peek(), "expected 'over'");
        RefData ref = resolve_ref();
        p.expect(Tok::lparen, "'('");
        const long r = p.expect_int("the input count");
        p.expect(Tok::comma, "','");
        const long s = p.expect_int("the output count");
        p.expect(Tok::rparen, "')'");
        if (r < 0 || s < 0 || r > 16 || s > 16)
            p.fail(name_tok, "signature out of range");
        p.expect(Tok::eq, "'='");

        CombinationItem item;
        item.name = name;
        item.algebra = ref.name;
        item.combo = SurfaceCombination::zero(static_cast<std::size_t>(r),
                                              static_cast<std::size_t>(s));
        bool negate = p.accept(Tok::minus);
        while (true) {
            RingElem coeff = RingElem::constant(ref.data.ring, 1);
            if (p.at(Tok::integer)) {
                const Token ct = p.get();
                coeff = RingElem::constant(ref.data.ring, make_rational(ct.value));
                p.expect(Tok::star, "'*'");
            } else if (p.at(Tok::lparen)) {
                p.get();
                coeff = eval_ring_expr(p, ref.data.ring);
                p.expect(Tok::rparen, "')'");
                p.expect(Tok::star, "'*'");
            }
            if (negate)
                coeff = -coeff;
            const Token surf_tok = p.peek();
            const std::string surf_name = p.expect_ident("a surface name");
            const Item* si = doc.find(surf_name);
            const SurfaceItem* surf = si ? std::get_if<SurfaceItem>(&si->node) : nullptr;
            if (!surf)
                p.fail(surf_tok, "unknown surface '" + surf_name + "'");
            if (surf->algebra != ref.name)
                p.fail(surf_tok, "surface '" + surf_name + "' is over algebra '" +
                                     surf->algebra + "'");
            if (surf->surface.num_inputs != item.combo.num_inputs ||
                surf->surface.num_outputs != item.combo.num_outputs)
                p.fail(surf_tok, "surface '" + surf_name + "' has a different signature");
            item.parts.emplace_back(coeff, surf_name);
            item.combo.add(surf->surface, coeff);
            if (p.accept(Tok::plus))
                negate = false;
            else if (p.accept(Tok::minus))
                negate = true;
            else
                break;
        }
        p.expect(Tok::semi, "';'");
        doc.items.push_back(Item{kw.line, kw.column, std::move(item)});
    }

    // ------------------------------------------------------ pattern

    void parse_pattern_item() {
        const Token kw = p.get();
        const Token name_tok = p.peek();
        const std::string name = p.expect_ident("a pattern name");
        check_fresh_name(name_tok, name);
        if (!p.accept_ident("over"))
            p.fail(p.peek(), "expected 'over'");
        RefData ref = resolve_ref();
        p.expect(Tok::lbrace, "'{'");

        PatternItem item;
        item.name = name;
        item.algebra = ref.name;
        ExprCtx ctx{ref.data.ring, &ref.data, true};
        auto vertex_index = [&](const Token& t, const std::string& vn) -> int {
            for (std::size_t i = 0; i < item.vertex_names.size(); ++i)
                if (item.vertex_names[i] == vn)
                    return static_cast<int>(i);
            p.fail(t, "unknown vertex '" + vn + "'");
        };
        while (!p.at(Tok::rbrace)) {
            const Token t = p.peek();
            const std::string stmt = p.expect_ident("a pattern statement");
            if (stmt == "black" || stmt == "white") {
                const Token vt = p.peek();
                const std::string vn = p.expect_ident("a vertex name");
                if (std::find(item.vertex_names.begin(), item.vertex_names.end(), vn) !=
                    item.vertex_names.end())
                    p.fail(vt, "duplicate vertex '" + vn + "'");
                item.vertex_names.push_back(vn);
                item.pattern.vertices.push_back({vn, stmt == "black"});
            } else if (stmt == "edge") {
                const Token at_tok = p.peek();
                const std::string a = p.expect_ident("a vertex name");
                const int ia = vertex_index(at_tok, a);
                p.expect(Tok::arrow, "'->'");
                const Token bt = p.peek();
                const std::string b = p.expect_ident("a vertex name");
                const int ib = vertex_index(bt, b);
                item.pattern.edges.emplace_back(ia, ib);
            } else if (stmt == "color") {
                if (!p.accept_ident("comp"))
                    p.fail(p.peek(), "expected 'comp'");
                p.expect(Tok::lparen, "'('");
                const Token vt = p.peek();
                const std::string vn = p.expect_ident("a vertex name");
                const int anchor = vertex_index(vt, vn);
                p.expect(Tok::rparen, "')'");
                p.expect(Tok::eq, "'='");
                item.pattern.colors.emplace_back(anchor, eval_alg_expr(p, ctx));
            } else {
                p.fail(t, "unknown pattern statement '" + stmt + "'");
            }
            p.expect(Tok::semi, "';'");
        }
        p.expect(Tok::rbrace, "'}'");
        try {
            item.pattern.finalize(ref.data);
        } catch (const error& e) {
            p.fail(name_tok, e.what());
        }
        doc.items.push_back(Item{kw.line, kw.column, std::move(item)});
    }

    // ------------------------------------------------------ document

    void run() {
        while (!p.at(Tok::eof)) {
            try {
                const Token& t = p.peek();
                if (t.kind != Tok::ident)
                    p.fail(t, "expected an item (algebra, element, word, surface, "
                              "combination or pattern)");
                if (t.text == "algebra")
                    parse_algebra_item();
                else if (t.text == "element")
                    parse_element_item();
                else if (t.text == "word")
                    parse_word_item();
                else if (t.text == "surface")
                    parse_surface_item();
                else if (t.text == "combination")
                    parse_combination_item();
                else if (t.text == "pattern")
                    parse_pattern_item();
                else
                    p.fail(t, "unknown item '" + t.text + "'");
            } catch (const ParseAbort&) {
                resync();
            }
        }
    }

    void resync() {
        // skip to the next plausible top-level item keyword
        int depth = 0;
        while (!p.at(Tok::eof)) {
            const Token& t = p.peek();
            if (t.kind == Tok::lbrace)
                ++depth;
            if (t.kind == Tok::rbrace)
                depth = std::max(0, depth - 1);
            if (depth == 0 && t.kind == Tok::ident &&
                (t.text == "algebra" || t.text == "element" || t.text == "word" ||
                 t.text == "surface" || t.text == "combination" || t.text == "pattern"))
                return;
            p.get();
        }
    }
};

}   // namespace

ParseResult parse(std::string_view text) {
    ParseResult result;
    Lexed lexed = lex(text);
    result.diagnostics = lexed.diags;
    Parser parser(lexed.tokens, result.diagnostics);
    DocBuilder builder(parser);
    try {
        builder.run();
    } catch (const ParseAbort&) {
        // diagnostic already recorded
    } catch (const error& e) {
        result.diagnostics.push_back({Diagnostic::Severity::error, e.what(),
                                      parser.peek().line, parser.peek().column});
    }
    if (result.diagnostics.empty())
        result.document = std::move(builder.doc);
    return result;
}

std::optional<ResolvedAlgebra> resolve_algebra(const Document& doc, std::string_view name) {
    if (const AlgebraItem* item = doc.find_algebra(name))
        return ResolvedAlgebra{item->name, item->data, item->system, item->failure,
                               item->quotient};
    if (auto sys = builtin_system(name)) {
        // the named builtins are monic quotient presentations; recover the
        // extension polynomial from X^{n-1} · X so they render as written
        std::optional<QuotientForm> form;
        const SystemData& d = sys->data();
        if (d.basis.size() >= 2 && d.basis[0] == "1") {
            QuotientForm q;
            q.var = d.basis[1];
            q.degree = static_cast<unsigned>(d.rank());
            q.p_coeffs = d.table[d.rank() - 1][1].coords;
            form = std::move(q);
        }
        return ResolvedAlgebra{std::string(name), d, sys, "", std::move(form)};
    }
    return std::nullopt;
}

namespace {

template <typename R, typename F>
R run_expr(std::string_view text, std::vector<Diagnostic>& diags, F&& fn) {
    Lexed lexed = lex(text);
    if (!lexed.diags.empty()) {
        diags.insert(diags.end(), lexed.diags.begin(), lexed.diags.end());
        return R{};
    }
    Parser parser(lexed.tokens, diags);
    try {
        R value = fn(parser);
        if (!parser.at(Tok::eof)) {
            diags.push_back({Diagnostic::Severity::error,
                             "unexpected trailing input '" + parser.peek().text + "'",
                             parser.peek().line, parser.peek().column});
            return R{};
        }
        return value;
    } catch (const ParseAbort&) {
        return R{};
    } catch (const error& e) {
        diags.push_back({Diagnostic::Severity::error, e.what(), parser.peek().line,
                         parser.peek().column});
        return R{};
    }
}

}   // namespace

RingDescriptorPtr parse_ground_expr(std::string_view text, std::vector<Diagnostic>& diags) {
    return run_expr<RingDescriptorPtr>(text, diags,
                                       [&](Parser& p) { return parse_ground_tokens(p); });
}

RingElem parse_ring_expr(const RingDescriptorPtr& ring, std::string_view text,
                         std::vector<Diagnostic>& diags) {
    return run_expr<RingElem>(text, diags,
                              [&](Parser& p) { return eval_ring_expr(p, ring); });
}

AlgElem parse_element_expr(const SystemData& data, std::string_view text,
                           std::vector<Diagnostic>& diags) {
    return run_expr<AlgElem>(text, diags, [&](Parser& p) {
        ExprCtx ctx{data.ring, &data, true};
        return eval_alg_expr(p, ctx);
    });
}

TensorElem parse_tensor_expr(const SystemData& data, std::string_view text,
                             std::size_t want_arity, std::vector<Diagnostic>& diags) {
    return run_expr<TensorElem>(text, diags, [&](Parser& p) -> TensorElem {
        ExprCtx ctx{data.ring, &data, true};
        Evaluator e{p, ctx};
        const Token start = p.peek();
        Value v = e.parse_expr();
        if (v.t.arity != want_arity) {
            if (want_arity == 1 && v.t.arity == 0)
                v = e.lift(start, std::move(v), 1);
            else
                p.fail(start, "expected a tensor of arity " + std::to_string(want_arity) +
                                  ", found arity " + std::to_string(v.t.arity));
        }
        return v.t;
    });
}

}   // namespace skein
