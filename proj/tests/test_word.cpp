#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "skein/builtins.hpp"
#include "skein/cobordism.hpp"
#include "skein/word.hpp"

using namespace skein;

namespace {

using Level = std::vector<Generator>;

CobordismWord make_word(std::size_t width, std::vector<Level> levels) {
    return CobordismWord{width, std::move(levels)};
}

RingElem rc(const FrobeniusSystem& s, long v) {
    return RingElem::constant(s.ring(), make_rational(v));
}

TensorElem basis_tensor(const FrobeniusSystem& s, const BasisTuple& t) {
    TensorElem x;
    x.arity = t.size();
    x.add_term(t, s.ring_one());
    return x;
}

// random well-chained word of bounded width; colors drawn from {1, X}
CobordismWord random_word(std::mt19937_64& rng, const FrobeniusSystem& s,
                          std::size_t max_width = 4, std::size_t max_levels = 8) {
    std::uniform_int_distribution<std::size_t> wd(0, max_width);
    std::uniform_int_distribution<std::size_t> nl(1, max_levels);
    std::uniform_int_distribution<int> pick(0, 6);
    CobordismWord w;
    w.input_width = wd(rng);
    std::size_t width = w.input_width;
    const std::size_t levels = nl(rng);
    for (std::size_t lv = 0; lv < levels; ++lv) {
        Level level;
        std::size_t consumed = 0, produced = 0;
        while (consumed < width) {
            const std::size_t left = width - consumed;
            switch (pick(rng)) {
                case 0:
                    if (left >= 2) {
                        level.push_back(Generator::mult());
                        consumed += 2;
                        produced += 1;
                        continue;
                    }
                    break;
                case 1:
                    if (produced + 2 <= max_width + 2) {
                        level.push_back(Generator::comult());
                        consumed += 1;
                        produced += 2;
                        continue;
                    }
                    break;
                case 2:
                    if (left >= 2) {
                        level.push_back(Generator::swap());
                        consumed += 2;
                        produced += 2;
                        continue;
                    }
                    break;
                case 3:
                    level.push_back(Generator::counit());
                    consumed += 1;
                    continue;
                case 4: {
                    level.push_back(Generator::color(s.basis_elem(rng() % s.rank() == 0 ? 0 : 1)));
                    consumed += 1;
                    produced += 1;
                    continue;
                }
                default:
                    break;
            }
            level.push_back(Generator::identity());
            consumed += 1;
            produced += 1;
        }
        if (produced == 0 && rng() % 2 == 0) {
            level.push_back(Generator::unit());
            produced += 1;
        }
        // keep the next level within width bounds
        while (produced > max_width) {
            level.pop_back();
            produced -= 1;
            if (level.empty())
                break;
        }
        if (level.empty() && width > 0)
            break;
        w.levels.push_back(std::move(level));
        std::size_t in = 0, out = 0;
        for (const auto& g : w.levels.back()) {
            in += g.in_arity();
            out += g.out_arity();
        }
        if (in != width) {
            w.levels.pop_back();
            break;
        }
        width = out;
    }
    validate_word(w);
    return w;
}

}   // namespace

TEST_CASE("word evaluation reproduces the handle element") {
    const auto& u = universal();
    auto w = make_word(1, {{Generator::comult()}, {Generator::mult()}});
    TensorElem out = apply_word(u, w, basis_tensor(u, {0}));
    CHECK(out == u.tensor_of(u.handle()));
    CHECK(u.render_tensor(out) == "2*X - h");
}

TEST_CASE("sphere word evaluates to zero in the universal system") {
    const auto& u = universal();
    auto w = make_word(0, {{Generator::unit()}, {Generator::counit()}});
    TensorElem out = apply_word(u, w, u.tensor_scalar(u.ring_one()));
    CHECK(out.arity == 0);
    CHECK(out.is_zero());

    // in the group algebra the sphere evaluates to ε(e) = 1
    FrobeniusSystem z2 = group_algebra({2});
    TensorElem z = apply_word(z2, w, z2.tensor_scalar(z2.ring_one()));
    CHECK(z == z2.tensor_scalar(z2.ring_one()));
}

TEST_CASE("swap transposes tensor factors") {
    const auto& u = universal();
    auto w = make_word(2, {{Generator::swap()}});
    TensorElem ab = basis_tensor(u, {0, 1});
    CHECK(apply_word(u, w, ab) == basis_tensor(u, {1, 0}));
    std::mt19937_64 rng(3);
    TensorElem mixed;
    mixed.arity = 2;
    mixed.add_term({0, 1}, rc(u, 3));
    mixed.add_term({1, 1}, RingElem::variable(u.ring(), "h"));
    TensorElem expect;
    expect.arity = 2;
    expect.add_term({1, 0}, rc(u, 3));
    expect.add_term({1, 1}, RingElem::variable(u.ring(), "h"));
    CHECK(apply_word(u, w, mixed) == expect);
}

TEST_CASE("word_to_map columns") {
    const auto& bn = barnatan();
    auto w = make_word(1, {{Generator::comult()}});
    LinearMap m = word_to_map(bn, w);
    TensorElem img1 = m.columns.at({0});
    TensorElem expect1;
    expect1.arity = 2;
    expect1.add_term({0, 1}, rc(bn, 1));
    expect1.add_term({1, 0}, rc(bn, 1));
    CHECK(img1 == expect1);
    TensorElem imgx = m.columns.at({1});
    TensorElem expectx;
    expectx.arity = 2;
    expectx.add_term({1, 1}, rc(bn, 1));
    CHECK(imgx == expectx);

    const auto& u = universal();
    CHECK(word_to_map(u, make_word(2, {{Generator::identity(), Generator::identity()}})) ==
          identity_map(u, 2));

    // multiplication-by-X matrix [[0, t], [1, h]] over basis {1, X}
    LinearMap mx = word_to_map(u, make_word(1, {{Generator::color(u.basis_elem(1))}}));
    CHECK(mx.columns.at({0}) == u.tensor_of(u.basis_elem(1)));
    TensorElem xcol = mx.columns.at({1});
    CHECK(xcol.terms.at({0}) == RingElem::variable(u.ring(), "t"));
    CHECK(xcol.terms.at({1}) == RingElem::variable(u.ring(), "h"));
}

TEST_CASE("malformed words name the offending level") {
    auto w = make_word(1, {{Generator::mult()}});
    try {
        validate_word(w);
        FAIL("expected a word-shape error");
    } catch (const error& e) {
        CHECK(e.kind() == errc::word_shape);
        CHECK(std::string(e.what()).find("level 1") != std::string::npos);
        CHECK(std::string(e.what()).find("needs 2 strands, found 1") != std::string::npos);
    }
    auto w2 = make_word(1, {{Generator::comult()}, {Generator::identity()}});
    try {
        validate_word(w2);
        FAIL("expected a word-shape error");
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("level 2") != std::string::npos);
    }
}

TEST_CASE("word_to_surface recovers genus from the Euler characteristic") {
    const auto& u = universal();

    auto tube = word_to_surface(u, make_word(1, {{Generator::comult()}, {Generator::mult()}}));
    REQUIRE(tube.components.size() == 1);
    CHECK(tube.components[0].genus == 1);
    CHECK(tube.components[0].inputs == std::vector<int>{1});
    CHECK(tube.components[0].outputs == std::vector<int>{1});
    CHECK(tube.components[0].color == u.one());

    auto sphere = word_to_surface(u, make_word(0, {{Generator::unit()}, {Generator::counit()}}));
    REQUIRE(sphere.components.size() == 1);
    CHECK(sphere.components[0].closed());
    CHECK(sphere.components[0].genus == 0);

    // pants colored a via pre-applied input colors
    AlgElem a = u.basis_elem(1);
    auto pants = word_to_surface(u, make_word(2, {{Generator::mult()}}), {a, u.one()});
    REQUIRE(pants.components.size() == 1);
    CHECK(pants.components[0].genus == 0);
    CHECK(pants.components[0].inputs == std::vector<int>{1, 2});
    CHECK(pants.components[0].outputs == std::vector<int>{1});
    CHECK(pants.components[0].color == a);

    // in-word colors multiply into their component
    auto colored = word_to_surface(
        u, make_word(1, {{Generator::color(a)}, {Generator::color(a)}}));
    REQUIRE(colored.components.size() == 1);
    CHECK(colored.components[0].color == u.mul(a, a));
}

TEST_CASE("functoriality: concatenation evaluates to composition") {
    std::mt19937_64 rng(101);
    const auto& u = universal();
    const auto& bn = barnatan();
    int done = 0;
    while (done < 60) {
        const FrobeniusSystem& s = (done % 2 == 0) ? u : bn;
        CobordismWord w1 = random_word(rng, s);
        CobordismWord w2 = random_word(rng, s);
        // chain w2 after w1 when the widths line up
        if (word_output_width(w1) != w2.input_width)
            continue;
        CobordismWord chained = w1;
        chained.levels.insert(chained.levels.end(), w2.levels.begin(), w2.levels.end());
        LinearMap lhs = word_to_map(s, chained);
        LinearMap rhs = compose(s, word_to_map(s, w2), word_to_map(s, w1));
        CHECK(lhs == rhs);
        ++done;
    }
}

TEST_CASE("color insertion commutes across strands of a connected word") {
    std::mt19937_64 rng(7);
    const auto& u = universal();
    std::uniform_int_distribution<long> cf(-3, 3);
    int done = 0;
    while (done < 40) {
        CobordismWord w = random_word(rng, u);
        if (w.input_width == 0 && w.levels.empty())
            continue;
        ColoredCobordism surf = word_to_surface(u, w);
        if (surf.components.size() != 1)
            continue;   // color mobility needs a connected surface
        AlgElem a = u.zero();
        a.coords[0] = rc(u, cf(rng));
        a.coords[1] = rc(u, cf(rng));
        // insert a color level at two random positions (strand choices differ)
        auto insert_color = [&](std::size_t level_pos, std::size_t strand) {
            CobordismWord v = w;
            std::size_t width = v.input_width;
            for (std::size_t i = 0; i < level_pos; ++i) {
                std::size_t out = 0;
                for (const auto& g : v.levels[i])
                    out += g.out_arity();
                width = out;
            }
            if (width == 0)
                return v;   // nothing to color at this height
            Level lvl;
            for (std::size_t i = 0; i < width; ++i)
                lvl.push_back(i == strand % width ? Generator::color(a)
                                                  : Generator::identity());
            v.levels.insert(v.levels.begin() + static_cast<std::ptrdiff_t>(level_pos),
                            std::move(lvl));
            return v;
        };
        std::size_t p1 = rng() % (w.levels.size() + 1);
        std::size_t p2 = rng() % (w.levels.size() + 1);
        CobordismWord v1 = insert_color(p1, rng() % 8);
        CobordismWord v2 = insert_color(p2, rng() % 8);
        if (v1.levels.size() != w.levels.size() + 1 || v2.levels.size() != w.levels.size() + 1)
            continue;
        CHECK(word_to_map(u, v1) == word_to_map(u, v2));
        ++done;
    }
}

TEST_CASE("consecutive saddles exchange") {
    // (Id ⊗ Δ)∘Δ = (Δ ⊗ Id)∘Δ
    for (const FrobeniusSystem* s : {&universal(), &barnatan(), &gadnaot()}) {
        auto w1 = make_word(1, {{Generator::comult()},
                                {Generator::identity(), Generator::comult()}});
        auto w2 = make_word(1, {{Generator::comult()},
                                {Generator::comult(), Generator::identity()}});
        CHECK(word_to_map(*s, w1) == word_to_map(*s, w2));
    }
}

TEST_CASE("words and normal forms induce the same linear map") {
    std::mt19937_64 rng(2024);
    const auto& u = universal();
    const auto& bn = barnatan();
    for (int i = 0; i < 100; ++i) {
        const FrobeniusSystem& s = (i % 2 == 0) ? u : bn;
        CobordismWord w = random_word(rng, s);
        LinearMap direct = word_to_map(s, w);
        LinearMap via_surface = skein_to_map(s, normal_form(s, word_to_surface(s, w)));
        CHECK(direct == via_surface);
    }
}
