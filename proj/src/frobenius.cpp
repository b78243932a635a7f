#include "skein/frobenius.hpp"

#include <algorithm>
#include <cassert>

namespace skein {

bool AlgElem::is_zero() const {
    return std::all_of(coords.begin(), coords.end(),
                       [](const RingElem& c) { return c.is_zero(); });
}

AlgElem AlgElem::operator-() const {
    AlgElem r = *this;
    for (auto& c : r.coords)
        c = -c;
    return r;
}

AlgElem& AlgElem::operator+=(const AlgElem& rhs) {
    if (coords.size() != rhs.coords.size())
        throw error(errc::usage, "algebra elements of different rank");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] += rhs.coords[i];
    return *this;
}

AlgElem& AlgElem::operator-=(const AlgElem& rhs) {
    if (coords.size() != rhs.coords.size())
        throw error(errc::usage, "algebra elements of different rank");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] -= rhs.coords[i];
    return *this;
}

AlgElem AlgElem::scaled(const RingElem& c) const {
    AlgElem r = *this;
    for (auto& x : r.coords)
        x *= c;
    return r;
}

void TensorElem::add_term(const BasisTuple& t, const RingElem& c) {
    if (t.size() != arity)
        throw error(errc::usage, "tensor term of wrong arity");
    if (c.is_zero())
        return;
    auto it = terms.find(t);
    if (it == terms.end()) {
        terms.emplace(t, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero())
        terms.erase(it);
}

TensorElem& TensorElem::operator+=(const TensorElem& rhs) {
    if (arity != rhs.arity)
        throw error(errc::usage, "tensors of different arity");
    for (const auto& [t, c] : rhs.terms)
        add_term(t, c);
    return *this;
}

TensorElem& TensorElem::operator-=(const TensorElem& rhs) {
    if (arity != rhs.arity)
        throw error(errc::usage, "tensors of different arity");
    for (const auto& [t, c] : rhs.terms)
        add_term(t, -c);
    return *this;
}

TensorElem TensorElem::scaled(const RingElem& c) const {
    TensorElem r;
    r.arity = arity;
    if (c.is_zero())
        return r;
    for (const auto& [t, k] : terms) {
        RingElem prod = k * c;
        if (!prod.is_zero())
            r.terms.emplace(t, std::move(prod));
    }
    return r;
}

TensorElem tensor_product(const TensorElem& a, const TensorElem& b) {
    TensorElem r;
    r.arity = a.arity + b.arity;
    for (const auto& [ta, ca] : a.terms) {
        for (const auto& [tb, cb] : b.terms) {
            BasisTuple t = ta;
            t.insert(t.end(), tb.begin(), tb.end());
            r.add_term(t, ca * cb);
        }
    }
    return r;
}

bool SystemData::operator==(const SystemData& other) const {
    return same_ring(ring, other.ring) && basis == other.basis && unit == other.unit &&
           table == other.table && counit == other.counit && pairs == other.pairs &&
           degrees == other.degrees;
}

namespace {

// bilinear extension of the stored table, usable before verification
AlgElem data_mul(const SystemData& d, const AlgElem& a, const AlgElem& b) {
    const std::size_t n = d.rank();
    AlgElem r;
    r.coords.assign(n, RingElem::zero(d.ring));
    for (std::size_t i = 0; i < n; ++i) {
        if (a.coords[i].is_zero())
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (b.coords[j].is_zero())
                continue;
            const RingElem f = a.coords[i] * b.coords[j];
            for (std::size_t k = 0; k < n; ++k)
                r.coords[k] += d.table[i][j].coords[k] * f;
        }
    }
    return r;
}

RingElem data_counit(const SystemData& d, const AlgElem& a) {
    RingElem r = RingElem::zero(d.ring);
    for (std::size_t i = 0; i < d.rank(); ++i)
        r += a.coords[i] * d.counit[i];
    return r;
}

AlgElem data_basis(const SystemData& d, std::size_t i) {
    AlgElem e;
    e.coords.assign(d.rank(), RingElem::zero(d.ring));
    e.coords[i] = RingElem::constant(d.ring, 1);
    return e;
}

TensorElem data_tensor_of(const SystemData& d, const AlgElem& a) {
    TensorElem t;
    t.arity = 1;
    for (std::uint32_t i = 0; i < a.coords.size(); ++i)
        t.add_term({i}, a.coords[i]);
    return t;
}

// Δ(a) = Σ u_i ⊗ (v_i · a)
TensorElem data_coproduct(const SystemData& d, const AlgElem& a) {
    TensorElem t;
    t.arity = 2;
    for (const auto& [u, v] : d.pairs) {
        const AlgElem va = data_mul(d, v, a);
        for (std::uint32_t p = 0; p < d.rank(); ++p) {
            if (u.coords[p].is_zero())
                continue;
            for (std::uint32_t q = 0; q < d.rank(); ++q)
                t.add_term({p, q}, u.coords[p] * va.coords[q]);
        }
    }
    return t;
}

TensorElem data_comult_at(const SystemData& d, const TensorElem& t, std::size_t slot) {
    TensorElem r;
    r.arity = t.arity + 1;
    for (const auto& [tup, c] : t.terms) {
        const TensorElem delta = data_coproduct(d, data_basis(d, tup[slot]));
        for (const auto& [dt, dc] : delta.terms) {
            BasisTuple nt;
            nt.reserve(tup.size() + 1);
            nt.insert(nt.end(), tup.begin(), tup.begin() + slot);
            nt.push_back(dt[0]);
            nt.push_back(dt[1]);
            nt.insert(nt.end(), tup.begin() + slot + 1, tup.end());
            r.add_term(nt, c * dc);
        }
    }
    return r;
}

TensorElem data_mul_into_slot(const SystemData& d, const TensorElem& t, std::size_t slot,
                              const AlgElem& a) {
    TensorElem r;
    r.arity = t.arity;
    for (const auto& [tup, c] : t.terms) {
        const AlgElem prod = data_mul(d, a, data_basis(d, tup[slot]));
        for (std::uint32_t q = 0; q < prod.coords.size(); ++q) {
            if (prod.coords[q].is_zero())
                continue;
            BasisTuple nt = tup;
            nt[slot] = q;
            r.add_term(nt, c * prod.coords[q]);
        }
    }
    return r;
}

std::string describe_basis(const SystemData& d, std::size_t i) {
    return d.basis[i];
}

void construction_fail(const std::string& what) {
    throw error(errc::construction, "not a Frobenius system: " + what);
}

void verify_shape(const SystemData& d) {
    const std::size_t n = d.rank();
    if (n == 0)
        construction_fail("empty basis");
    if (!d.ring)
        construction_fail("missing ground ring");
    for (std::size_t i = 0; i < n; ++i) {
        if (d.basis[i].empty())
            construction_fail("empty basis symbol name");
        for (std::size_t j = i + 1; j < n; ++j)
            if (d.basis[i] == d.basis[j])
                construction_fail("duplicate basis symbol '" + d.basis[i] + "'");
    }
    auto check_alg = [&](const AlgElem& a, const char* where) {
        if (a.coords.size() != n)
            construction_fail(std::string(where) + " has wrong coordinate length");
        for (const auto& c : a.coords)
            if (!same_ring(c.descriptor(), d.ring))
                construction_fail(std::string(where) + " has coordinates outside " +
                                  d.ring->text());
    };
    check_alg(d.unit, "unit");
    if (d.table.size() != n)
        construction_fail("multiplication table has wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        if (d.table[i].size() != n)
            construction_fail("multiplication table has wrong size");
        for (std::size_t j = 0; j < n; ++j)
            check_alg(d.table[i][j], "multiplication table entry");
    }
    if (d.counit.size() != n)
        construction_fail("counit vector has wrong length");
    for (const auto& c : d.counit)
        if (!same_ring(c.descriptor(), d.ring))
            construction_fail("counit value outside " + d.ring->text());
    if (d.pairs.empty())
        construction_fail("empty structure pair list");
    for (const auto& [u, v] : d.pairs) {
        check_alg(u, "structure pair");
        check_alg(v, "structure pair");
    }
    for (const auto& [name, deg] : d.degrees) {
        (void)deg;
        const bool is_basis = std::find(d.basis.begin(), d.basis.end(), name) != d.basis.end();
        if (!is_basis && !d.ring->index_of(name))
            construction_fail("degree declared for unknown symbol '" + name + "'");
    }
}

void verify_axioms(const SystemData& d) {
    const std::size_t n = d.rank();

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!(d.table[i][j] == d.table[j][i]))
                construction_fail("multiplication is not commutative at basis pair (" +
                                  describe_basis(d, i) + ", " + describe_basis(d, j) + ")");

    for (std::size_t i = 0; i < n; ++i) {
        const AlgElem bi = data_basis(d, i);
        if (!(data_mul(d, d.unit, bi) == bi))
            construction_fail("unit law fails at basis element " + describe_basis(d, i));
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const AlgElem lhs = data_mul(d, d.table[i][j], data_basis(d, k));
                const AlgElem rhs = data_mul(d, data_basis(d, i), d.table[j][k]);
                if (!(lhs == rhs))
                    construction_fail("multiplication is not associative at basis triple (" +
                                      describe_basis(d, i) + ", " + describe_basis(d, j) +
                                      ", " + describe_basis(d, k) + ")");
            }

    // Σ u_i ⊗ v_i = Σ v_i ⊗ u_i
    {
        TensorElem uv, vu;
        uv.arity = vu.arity = 2;
        for (const auto& [u, v] : d.pairs) {
            uv += tensor_product(data_tensor_of(d, u), data_tensor_of(d, v));
            vu += tensor_product(data_tensor_of(d, v), data_tensor_of(d, u));
        }
        if (!(uv == vu))
            construction_fail("Δ(1) = Σ u_i ⊗ v_i is not symmetric");
    }

    // expansion identity (2), both forms
    for (std::size_t k = 0; k < n; ++k) {
        const AlgElem bk = data_basis(d, k);
        AlgElem s1, s2;
        s1.coords.assign(n, RingElem::zero(d.ring));
        s2.coords.assign(n, RingElem::zero(d.ring));
        for (const auto& [u, v] : d.pairs) {
            s1 += v.scaled(data_counit(d, data_mul(d, bk, u)));
            s2 += u.scaled(data_counit(d, data_mul(d, bk, v)));
        }
        if (!(s1 == bk))
            construction_fail("expansion identity (2) a = Σ ε(a·u_i)·v_i fails at basis "
                              "element " + describe_basis(d, k));
        if (!(s2 == bk))
            construction_fail("expansion identity (2) a = Σ ε(a·v_i)·u_i fails at basis "
                              "element " + describe_basis(d, k));
    }

    // counit condition (1): (ε ⊗ Id)∘Δ = Id
    for (std::size_t k = 0; k < n; ++k) {
        const AlgElem bk = data_basis(d, k);
        AlgElem s;
        s.coords.assign(n, RingElem::zero(d.ring));
        for (const auto& [u, v] : d.pairs)
            s += data_mul(d, v, bk).scaled(data_counit(d, u));
        if (!(s == bk))
            construction_fail("counit condition (1) fails at basis element " +
                              describe_basis(d, k));
    }

    // cocommutativity and coassociativity on every basis element
    for (std::size_t k = 0; k < n; ++k) {
        const TensorElem delta = data_coproduct(d, data_basis(d, k));
        TensorElem flipped;
        flipped.arity = 2;
        for (const auto& [t, c] : delta.terms)
            flipped.add_term({t[1], t[0]}, c);
        if (!(flipped == delta))
            construction_fail("coproduct is not cocommutative at basis element " +
                              describe_basis(d, k));
        if (!(data_comult_at(d, delta, 0) == data_comult_at(d, delta, 1)))
            construction_fail("coproduct is not coassociative at basis element " +
                              describe_basis(d, k));
    }

    // A-bimodule property on basis pairs
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const TensorElem lhs = data_coproduct(d, d.table[i][j]);
            const TensorElem right =
                data_mul_into_slot(d, data_coproduct(d, data_basis(d, i)), 1,
                                   data_basis(d, j));
            const TensorElem left =
                data_mul_into_slot(d, data_coproduct(d, data_basis(d, j)), 0,
                                   data_basis(d, i));
            if (!(lhs == right) || !(lhs == left))
                construction_fail("coproduct is not an A-bimodule map at basis pair (" +
                                  describe_basis(d, i) + ", " + describe_basis(d, j) + ")");
        }

    // no nonempty sub-collection of pairs sums to zero in A ⊗ A
    const std::size_t r = d.pairs.size();
    std::vector<TensorElem> pair_tensors;
    pair_tensors.reserve(r);
    for (const auto& [u, v] : d.pairs)
        pair_tensors.push_back(tensor_product(data_tensor_of(d, u), data_tensor_of(d, v)));
    bool disjoint = true;
    {
        std::map<BasisTuple, int> seen;
        for (const auto& t : pair_tensors) {
            if (t.is_zero())
                construction_fail("structure pair with u_i ⊗ v_i = 0");
            for (const auto& [tup, c] : t.terms)
                if (++seen[tup] > 1) {
                    disjoint = false;
                    break;
                }
        }
    }
    if (!disjoint) {
        if (r > 12)
            throw error(errc::guard,
                        "pair sub-collection check needs 2^" + std::to_string(r) +
                            " subset sums; refusing beyond 12 pairs");
        for (std::size_t mask = 1; mask < (std::size_t(1) << r); ++mask) {
            TensorElem sum;
            sum.arity = 2;
            for (std::size_t i = 0; i < r; ++i)
                if (mask & (std::size_t(1) << i))
                    sum += pair_tensors[i];
            if (sum.is_zero())
                construction_fail("a sub-collection of structure pairs sums to zero");
        }
    }
}

}   // namespace

SystemData quotient_data(RingDescriptorPtr ring, const std::string& var, unsigned n,
                         std::vector<RingElem> p_coeffs) {
    if (n == 0)
        throw error(errc::construction, "quotient of degree zero");
    if (p_coeffs.size() > n)
        throw error(errc::construction, "relation polynomial of degree >= " +
                                            std::to_string(n));
    p_coeffs.resize(n, RingElem::zero(ring));

    SystemData d;
    d.ring = ring;
    d.basis.reserve(n);
    for (unsigned k = 0; k < n; ++k) {
        if (k == 0)
            d.basis.push_back("1");
        else if (k == 1)
            d.basis.push_back(var);
        else
            d.basis.push_back(var + "^" + std::to_string(k));
    }

    // powers X^0 .. X^{2n-2} reduced mod X^n = p(X)
    std::vector<std::vector<RingElem>> pw;
    pw.reserve(2 * n - 1);
    std::vector<RingElem> cur(n, RingElem::zero(ring));
    cur[0] = RingElem::constant(ring, 1);
    pw.push_back(cur);
    for (unsigned k = 1; k <= 2 * n - 2; ++k) {
        std::vector<RingElem> next(n, RingElem::zero(ring));
        const RingElem top = cur[n - 1];
        for (unsigned i = n - 1; i >= 1; --i)
            next[i] = cur[i - 1];
        next[0] = RingElem::zero(ring);
        if (!top.is_zero())
            for (unsigned i = 0; i < n; ++i)
                next[i] += p_coeffs[i] * top;
        pw.push_back(next);
        cur = next;
    }

    d.unit.coords = pw[0];
    d.table.assign(n, std::vector<AlgElem>(n));
    for (unsigned i = 0; i < n; ++i)
        for (unsigned j = 0; j < n; ++j)
            d.table[i][j].coords = pw[i + j];
    d.counit.assign(n, RingElem::zero(ring));
    return d;
}

FrobeniusSystem FrobeniusSystem::make(SystemData data) {
    verify_shape(data);
    verify_axioms(data);
    return FrobeniusSystem(std::move(data));
}

void FrobeniusSystem::check_elem(const AlgElem& a) const {
    if (a.coords.size() != rank())
        throw error(errc::usage, "element does not belong to this system");
}

AlgElem FrobeniusSystem::zero() const {
    AlgElem e;
    e.coords.assign(rank(), RingElem::zero(data_.ring));
    return e;
}

AlgElem FrobeniusSystem::basis_elem(std::size_t i) const {
    return data_basis(data_, i);
}

AlgElem FrobeniusSystem::from_scalar(const RingElem& c) const {
    return data_.unit.scaled(c);
}

AlgElem FrobeniusSystem::mul(const AlgElem& a, const AlgElem& b) const {
    check_elem(a);
    check_elem(b);
    return data_mul(data_, a, b);
}

AlgElem FrobeniusSystem::pow(const AlgElem& a, unsigned n) const {
    AlgElem acc = one();
    for (unsigned i = 0; i < n; ++i)
        acc = mul(acc, a);
    return acc;
}

RingElem FrobeniusSystem::counit(const AlgElem& a) const {
    check_elem(a);
    return data_counit(data_, a);
}

TensorElem FrobeniusSystem::coproduct(const AlgElem& a) const {
    check_elem(a);
    return data_coproduct(data_, a);
}

AlgElem FrobeniusSystem::handle() const {
    AlgElem h = zero();
    for (const auto& [u, v] : data_.pairs)
        h += data_mul(data_, u, v);
    return h;
}

RingElem FrobeniusSystem::rank_invariant() const {
    return counit(handle());
}

RingElem poly_determinant(const std::vector<std::vector<RingElem>>& m,
                          const RingDescriptorPtr& ring) {
    const std::size_t n = m.size();
    if (n > 16)
        throw error(errc::guard, "determinant beyond rank 16");
    if (n == 0)
        return RingElem::constant(ring, 1);
    // D[mask] = det of rows 0..popcount-1, columns = mask, built bottom up
    std::vector<RingElem> dp(std::size_t(1) << n);
    dp[0] = RingElem::constant(ring, 1);
    for (std::size_t mask = 1; mask < dp.size(); ++mask) {
        const int row = __builtin_popcountll(mask) - 1;
        RingElem acc = RingElem::zero(ring);
        int idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (std::size_t(1) << j)))
                continue;
            const RingElem& entry = m[row][j];
            if (!entry.is_zero()) {
                RingElem contrib = entry * dp[mask & ~(std::size_t(1) << j)];
                if ((row + idx) % 2)
                    acc -= contrib;
                else
                    acc += contrib;
            }
            ++idx;
        }
        dp[mask] = std::move(acc);
    }
    return dp.back();
}

namespace {

// Cramer solve M x = rhs, assuming det(M) is a unit (detinv supplied).
std::vector<RingElem> cramer_solve(const std::vector<std::vector<RingElem>>& m,
                                   const std::vector<RingElem>& rhs,
                                   const RingElem& detinv, const RingDescriptorPtr& ring) {
    const std::size_t n = m.size();
    std::vector<RingElem> x(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<RingElem>> mj = m;
        for (std::size_t i = 0; i < n; ++i)
            mj[i][j] = rhs[i];
        x[j] = poly_determinant(mj, ring) * detinv;
    }
    return x;
}

}   // namespace

std::vector<AlgElem> dual_basis_for(const SystemData& d) {
    const std::size_t n = d.rank();
    std::vector<std::vector<RingElem>> gram(n, std::vector<RingElem>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            gram[i][j] = data_counit(d, d.table[i][j]);
    const RingElem det = poly_determinant(gram, d.ring);
    if (!is_unit(det))
        throw error(errc::no_dual_basis,
                    "Gram determinant " + det.text() + " is not a unit of " +
                        d.ring->text());
    const RingElem detinv = unit_inverse(det);
    std::vector<AlgElem> dual;
    dual.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<RingElem> ej(n, RingElem::zero(d.ring));
        ej[j] = RingElem::constant(d.ring, 1);
        AlgElem w;
        w.coords = cramer_solve(gram, ej, detinv, d.ring);
        dual.push_back(std::move(w));
    }
    return dual;
}

std::vector<AlgElem> FrobeniusSystem::dual_basis() const {
    return dual_basis_for(data_);
}

bool FrobeniusSystem::is_invertible(const AlgElem& y) const {
    check_elem(y);
    const std::size_t n = rank();
    std::vector<std::vector<RingElem>> m(n, std::vector<RingElem>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const AlgElem col = mul(y, basis_elem(j));
        for (std::size_t i = 0; i < n; ++i)
            m[i][j] = col.coords[i];
    }
    return is_unit(poly_determinant(m, data_.ring));
}

AlgElem FrobeniusSystem::inverse(const AlgElem& y) const {
    check_elem(y);
    const std::size_t n = rank();
    std::vector<std::vector<RingElem>> m(n, std::vector<RingElem>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const AlgElem col = mul(y, basis_elem(j));
        for (std::size_t i = 0; i < n; ++i)
            m[i][j] = col.coords[i];
    }
    const RingElem det = poly_determinant(m, data_.ring);
    if (!is_unit(det))
        throw error(errc::not_a_unit, "element " + render_elem(y) +
                                          " is not invertible: multiplication determinant " +
                                          det.text() + " is not a unit");
    AlgElem z;
    z.coords = cramer_solve(m, data_.unit.coords, unit_inverse(det), data_.ring);
    return z;
}

FrobeniusSystem FrobeniusSystem::twist(const AlgElem& y) const {
    check_elem(y);
    AlgElem yinv;
    try {
        yinv = inverse(y);
    } catch (const error& e) {
        throw error(errc::twist, std::string("cannot twist: ") + e.what());
    }
    SystemData d = data_;
    for (std::size_t i = 0; i < rank(); ++i)
        d.counit[i] = counit(mul(y, basis_elem(i)));
    for (auto& [u, v] : d.pairs)
        v = mul(v, yinv);
    return make(std::move(d));
}

SpecializeResult FrobeniusSystem::specialize(
    const RingDescriptorPtr& target, const std::map<std::string, RingElem>& assignment) const {
    SystemData d;
    d.ring = target;
    d.basis = data_.basis;
    auto map_alg = [&](const AlgElem& a) {
        AlgElem r;
        r.coords.reserve(a.coords.size());
        for (const auto& c : a.coords)
            r.coords.push_back(substitute(c, target, assignment));
        return r;
    };
    d.unit = map_alg(data_.unit);
    d.table.reserve(rank());
    for (const auto& row : data_.table) {
        std::vector<AlgElem> nrow;
        nrow.reserve(row.size());
        for (const auto& e : row)
            nrow.push_back(map_alg(e));
        d.table.push_back(std::move(nrow));
    }
    d.counit.reserve(rank());
    for (const auto& c : data_.counit)
        d.counit.push_back(substitute(c, target, assignment));
    d.pairs.reserve(data_.pairs.size());
    for (const auto& [u, v] : data_.pairs)
        d.pairs.emplace_back(map_alg(u), map_alg(v));
    for (const auto& [name, deg] : data_.degrees) {
        const bool is_basis =
            std::find(d.basis.begin(), d.basis.end(), name) != d.basis.end();
        if (is_basis || target->index_of(name))
            d.degrees.emplace(name, deg);
    }
    return SpecializeResult{make(std::move(d)), target, assignment};
}

RingElem SpecializeResult::map_ring(const RingElem& c) const {
    return substitute(c, target, assignment);
}

AlgElem SpecializeResult::map_elem(const AlgElem& a) const {
    AlgElem r;
    r.coords.reserve(a.coords.size());
    for (const auto& c : a.coords)
        r.coords.push_back(map_ring(c));
    return r;
}

TensorElem SpecializeResult::map_tensor(const TensorElem& t) const {
    TensorElem r;
    r.arity = t.arity;
    for (const auto& [tup, c] : t.terms)
        r.add_term(tup, map_ring(c));
    return r;
}

bool FrobeniusSystem::geometric_check() const {
    const std::size_t n = rank();
    const AlgElem h = handle();
    std::vector<std::vector<RingElem>> m(n, std::vector<RingElem>(n));
    AlgElem p = one();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i)
            m[i][k] = p.coords[i];
        p = mul(p, h);
    }
    return is_unit(poly_determinant(m, data_.ring));
}

TensorElem FrobeniusSystem::tensor_scalar(const RingElem& c) const {
    TensorElem t;
    t.arity = 0;
    t.add_term({}, c);
    return t;
}

TensorElem FrobeniusSystem::tensor_of(const AlgElem& a) const {
    check_elem(a);
    return data_tensor_of(data_, a);
}

TensorElem FrobeniusSystem::unit_tensor(std::size_t arity) const {
    TensorElem t = tensor_scalar(ring_one());
    for (std::size_t i = 0; i < arity; ++i)
        t = tensor_product(t, tensor_of(one()));
    return t;
}

AlgElem FrobeniusSystem::alg_of(const TensorElem& t) const {
    if (t.arity != 1)
        throw error(errc::usage, "tensor of arity != 1 is not an algebra element");
    AlgElem a = zero();
    for (const auto& [tup, c] : t.terms)
        a.coords[tup[0]] += c;
    return a;
}

TensorElem FrobeniusSystem::mul_into_slot(const TensorElem& t, std::size_t slot,
                                          const AlgElem& a) const {
    check_elem(a);
    if (slot >= t.arity)
        throw error(errc::usage, "slot out of range");
    return data_mul_into_slot(data_, t, slot, a);
}

TensorElem FrobeniusSystem::comult_at(const TensorElem& t, std::size_t slot) const {
    if (slot >= t.arity)
        throw error(errc::usage, "slot out of range");
    return data_comult_at(data_, t, slot);
}

TensorElem FrobeniusSystem::mult_at(const TensorElem& t, std::size_t slot) const {
    if (slot + 1 >= t.arity)
        throw error(errc::usage, "slot out of range");
    TensorElem r;
    r.arity = t.arity - 1;
    for (const auto& [tup, c] : t.terms) {
        const AlgElem& prod = data_.table[tup[slot]][tup[slot + 1]];
        for (std::uint32_t q = 0; q < prod.coords.size(); ++q) {
            if (prod.coords[q].is_zero())
                continue;
            BasisTuple nt;
            nt.reserve(tup.size() - 1);
            nt.insert(nt.end(), tup.begin(), tup.begin() + slot);
            nt.push_back(q);
            nt.insert(nt.end(), tup.begin() + slot + 2, tup.end());
            r.add_term(nt, c * prod.coords[q]);
        }
    }
    return r;
}

TensorElem FrobeniusSystem::counit_at(const TensorElem& t, std::size_t slot) const {
    if (slot >= t.arity)
        throw error(errc::usage, "slot out of range");
    TensorElem r;
    r.arity = t.arity - 1;
    for (const auto& [tup, c] : t.terms) {
        const RingElem f = c * data_.counit[tup[slot]];
        if (f.is_zero())
            continue;
        BasisTuple nt;
        nt.reserve(tup.size() - 1);
        nt.insert(nt.end(), tup.begin(), tup.begin() + slot);
        nt.insert(nt.end(), tup.begin() + slot + 1, tup.end());
        r.add_term(nt, f);
    }
    return r;
}

TensorElem FrobeniusSystem::swap_at(const TensorElem& t, std::size_t slot) const {
    if (slot + 1 >= t.arity)
        throw error(errc::usage, "slot out of range");
    TensorElem r;
    r.arity = t.arity;
    for (const auto& [tup, c] : t.terms) {
        BasisTuple nt = tup;
        std::swap(nt[slot], nt[slot + 1]);
        r.add_term(nt, c);
    }
    return r;
}

TensorElem FrobeniusSystem::iterated_coproduct(const AlgElem& a, std::size_t k) const {
    if (k == 0)
        throw error(errc::usage, "iterated coproduct needs arity >= 1");
    TensorElem t = tensor_of(a);
    for (std::size_t i = 1; i < k; ++i)
        t = comult_at(t, 0);
    return t;
}

namespace {

long degree_of(const SystemData& d, const std::string& name) {
    auto it = d.degrees.find(name);
    return it == d.degrees.end() ? 0 : it->second;
}

}   // namespace

std::optional<long> FrobeniusSystem::ring_degree(const RingElem& c) const {
    if (c.is_zero())
        return std::nullopt;
    std::optional<long> deg;
    for (const auto& [exps, coeff] : c.terms()) {
        (void)coeff;
        long dsum = 0;
        for (std::size_t i = 0; i < exps.size(); ++i)
            dsum += static_cast<long>(exps[i]) *
                    degree_of(data_, data_.ring->indeterminates[i]);
        if (deg && *deg != dsum)
            throw error(errc::grading, "inhomogeneous coefficient " + c.text());
        deg = dsum;
    }
    return deg;
}

std::optional<long> FrobeniusSystem::elem_degree(const AlgElem& a) const {
    check_elem(a);
    std::optional<long> deg;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (a.coords[i].is_zero())
            continue;
        const long di = *ring_degree(a.coords[i]) + degree_of(data_, data_.basis[i]);
        if (deg && *deg != di)
            throw error(errc::grading, "inhomogeneous color " + render_elem(a));
        deg = di;
    }
    return deg;
}

FrobeniusSystem::OperatorDegrees FrobeniusSystem::measured_operator_degrees() const {
    OperatorDegrees out;
    out.counit_offsets.resize(rank());
    out.coproduct_offsets.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
        const long base = degree_of(data_, data_.basis[i]);
        if (!data_.counit[i].is_zero())
            out.counit_offsets[i] = *ring_degree(data_.counit[i]) - base;
        const TensorElem delta = coproduct(basis_elem(i));
        std::set<long> offs;
        for (const auto& [tup, c] : delta.terms) {
            const long dterm = *ring_degree(c) + degree_of(data_, data_.basis[tup[0]]) +
                               degree_of(data_, data_.basis[tup[1]]);
            offs.insert(dterm - base);
        }
        out.coproduct_offsets[i].assign(offs.begin(), offs.end());
    }
    return out;
}

std::string FrobeniusSystem::render_elem(const AlgElem& a) const {
    return skein::render_elem(data_, a);
}

std::string FrobeniusSystem::render_tensor(const TensorElem& t) const {
    return skein::render_tensor(data_, t);
}

std::string render_elem(const SystemData& d, const AlgElem& a) {
    return render_tensor(d, data_tensor_of(d, a));
}

std::string render_tensor(const SystemData& d, const TensorElem& t) {
    if (t.arity == 0) {
        if (t.terms.empty())
            return "0";
        return t.terms.begin()->second.text();
    }
    if (t.terms.empty())
        return "0";
    std::string out;
    bool first = true;
    // leading (highest) basis tuple first
    for (auto it = t.terms.rbegin(); it != t.terms.rend(); ++it) {
        const auto& [tup, coeff] = *it;
        std::string body;
        for (std::size_t i = 0; i < tup.size(); ++i) {
            if (i)
                body += "@";
            body += d.basis[tup[i]];
        }
        bool negative = false;
        std::string piece;
        if (t.arity == 1 && body == "1") {
            // a multiple of the unit renders as its bare coefficient
            piece = coeff.text();
            if (piece.size() > 1 && piece[0] == '-' && coeff.terms().size() == 1) {
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

}   // namespace skein
