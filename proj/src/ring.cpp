#include "skein/ring.hpp"

#include <algorithm>
#include <sstream>

namespace skein {

Rational make_rational(long num, long den) {
    if (den == 0)
        throw error(errc::coefficient_domain, "zero denominator in rational literal");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string rational_text(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

std::shared_ptr<const RingDescriptor> RingDescriptor::make(std::vector<std::string> vars,
                                                           std::set<unsigned long> primes) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].empty())
            throw error(errc::invalid_descriptor, "indeterminate name must be nonempty");
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
                throw error(errc::invalid_descriptor,
                            "duplicate indeterminate '" + vars[i] + "'");
    }
    for (unsigned long p : primes) {
        Integer z(static_cast<unsigned long>(p));
        if (mpz_probab_prime_p(z.get_mpz_t(), 32) == 0)
            throw error(errc::invalid_descriptor,
                        "denominator " + std::to_string(p) + " is not prime");
    }
    auto d = std::make_shared<RingDescriptor>();
    d->indeterminates = std::move(vars);
    d->denominator_primes = std::move(primes);
    return d;
}

std::optional<std::size_t> RingDescriptor::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < indeterminates.size(); ++i)
        if (indeterminates[i] == name)
            return i;
    return std::nullopt;
}

bool RingDescriptor::factors_over_primes(const Integer& n) const {
    Integer m = abs(n);
    if (m == 0)
        return false;
    for (unsigned long p : denominator_primes) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p))
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
    return m == 1;
}

std::string RingDescriptor::text() const {
    std::string s = "Z";
    if (!denominator_primes.empty()) {
        s += "[";
        bool first = true;
        for (unsigned long p : denominator_primes) {
            if (!first) s += ",";
            s += "1/" + std::to_string(p);
            first = false;
        }
        s += "]";
    }
    if (!indeterminates.empty()) {
        s += "[";
        for (std::size_t i = 0; i < indeterminates.size(); ++i) {
            if (i) s += ",";
            s += indeterminates[i];
        }
        s += "]";
    }
    return s;
}

bool same_ring(const RingDescriptorPtr& a, const RingDescriptorPtr& b) {
    if (a == b)
        return true;
    return a && b && *a == *b;
}

namespace {

void require_same_ring(const RingElem& a, const RingElem& b) {
    if (!same_ring(a.descriptor(), b.descriptor()))
        throw error(errc::descriptor_mismatch,
                    "operands belong to different ground rings: " +
                        (a.descriptor() ? a.descriptor()->text() : "<detached>") + " vs " +
                        (b.descriptor() ? b.descriptor()->text() : "<detached>"));
}

void require_coefficient(const RingDescriptor& desc, const Rational& c) {
    const Integer den = c.get_den();
    if (den == 1)
        return;
    if (!desc.factors_over_primes(den))
        throw error(errc::coefficient_domain,
                    "coefficient " + rational_text(c) + " has denominator outside " +
                        desc.text());
}

}   // namespace

RingElem RingElem::zero(RingDescriptorPtr desc) {
    RingElem e;
    e.desc_ = std::move(desc);
    return e;
}

RingElem RingElem::constant(RingDescriptorPtr desc, const Rational& c) {
    RingElem e = zero(std::move(desc));
    if (c != 0) {
        require_coefficient(*e.desc_, c);
        e.terms_.emplace(Exponents(e.desc_->indeterminates.size(), 0), c);
    }
    return e;
}

RingElem RingElem::variable(RingDescriptorPtr desc, std::string_view name) {
    auto idx = desc->index_of(name);
    if (!idx)
        throw error(errc::lookup,
                    "no indeterminate '" + std::string(name) + "' in " + desc->text());
    Exponents exps(desc->indeterminates.size(), 0);
    exps[*idx] = 1;
    return monomial(std::move(desc), std::move(exps), 1);
}

RingElem RingElem::monomial(RingDescriptorPtr desc, Exponents exps, const Rational& c) {
    if (exps.size() != desc->indeterminates.size())
        throw error(errc::invalid_descriptor, "exponent vector has wrong length");
    RingElem e = zero(std::move(desc));
    if (c != 0) {
        require_coefficient(*e.desc_, c);
        e.terms_.emplace(std::move(exps), c);
    }
    return e;
}

bool RingElem::is_constant() const {
    if (terms_.empty())
        return true;
    if (terms_.size() > 1)
        return false;
    const Exponents& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](std::uint32_t k) { return k == 0; });
}

bool RingElem::is_one() const {
    return is_constant() && constant_value() == 1;
}

Rational RingElem::constant_value() const {
    if (terms_.empty())
        return Rational(0);
    return terms_.begin()->second;
}

void RingElem::add_term(const Exponents& e, const Rational& c) {
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        if (c != 0)
            terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second == 0)
        terms_.erase(it);
}

RingElem RingElem::operator-() const {
    RingElem r = *this;
    for (auto& [e, c] : r.terms_)
        c = -c;
    return r;
}

RingElem& RingElem::operator+=(const RingElem& rhs) {
    require_same_ring(*this, rhs);
    for (const auto& [e, c] : rhs.terms_)
        add_term(e, c);
    return *this;
}

RingElem& RingElem::operator-=(const RingElem& rhs) {
    require_same_ring(*this, rhs);
    for (const auto& [e, c] : rhs.terms_)
        add_term(e, -c);
    return *this;
}

RingElem& RingElem::operator*=(const RingElem& rhs) {
    require_same_ring(*this, rhs);
    RingElem prod = zero(desc_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : rhs.terms_) {
            Exponents e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            prod.add_term(e, ca * cb);
        }
    }
    *this = std::move(prod);
    return *this;
}

RingElem RingElem::scaled(const Rational& c) const {
    RingElem r = zero(desc_);
    if (c == 0)
        return r;
    require_coefficient(*desc_, c);
    for (const auto& [e, k] : terms_)
        r.terms_.emplace(e, k * c);
    return r;
}

RingElem RingElem::pow(unsigned n) const {
    RingElem acc = constant(desc_, 1);
    for (unsigned i = 0; i < n; ++i)
        acc *= *this;
    return acc;
}

bool RingElem::operator==(const RingElem& other) const {
    return same_ring(desc_, other.desc_) && terms_ == other.terms_;
}

bool RingElem::operator<(const RingElem& other) const {
    return terms_ < other.terms_;
}

std::string RingElem::text() const {
    if (terms_.empty())
        return "0";
    std::string out;
    bool first = true;
    // leading term first: iterate in descending lexicographic exponent order
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [exps, coeff] = *it;
        std::string mono;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] == 0)
                continue;
            if (!mono.empty())
                mono += "*";
            mono += desc_->indeterminates[i];
            if (exps[i] > 1)
                mono += "^" + std::to_string(exps[i]);
        }
        const bool negative = coeff < 0;
        Rational mag = negative ? Rational(-coeff) : coeff;
        std::string body;
        if (mono.empty())
            body = rational_text(mag);
        else if (mag == 1)
            body = mono;
        else
            body = rational_text(mag) + "*" + mono;
        if (first)
            out += (negative ? "-" : "") + body;
        else
            out += (negative ? " - " : " + ") + body;
        first = false;
    }
    return out;
}

RingElem substitute(const RingElem& x, const RingDescriptorPtr& target,
                    const std::map<std::string, RingElem>& assignment) {
    const auto& src = x.descriptor();
    if (!src)
        throw error(errc::descriptor_mismatch, "substitute on a detached element");
    std::vector<const RingElem*> images(src->indeterminates.size(), nullptr);
    for (std::size_t i = 0; i < src->indeterminates.size(); ++i) {
        auto it = assignment.find(src->indeterminates[i]);
        if (it == assignment.end())
            throw error(errc::incomplete_substitution,
                        "no assignment for indeterminate '" + src->indeterminates[i] + "'");
        if (!same_ring(it->second.descriptor(), target))
            throw error(errc::descriptor_mismatch,
                        "assignment for '" + src->indeterminates[i] +
                            "' is not an element of " + target->text());
        images[i] = &it->second;
    }
    RingElem result = RingElem::zero(target);
    for (const auto& [exps, coeff] : x.terms()) {
        RingElem term = RingElem::constant(target, coeff);
        for (std::size_t i = 0; i < exps.size(); ++i)
            if (exps[i] > 0)
                term *= images[i]->pow(exps[i]);
        result += term;
    }
    return result;
}

bool is_unit(const RingElem& x) {
    if (!x.is_constant() || x.is_zero())
        return false;
    const Rational c = x.constant_value();
    return x.descriptor()->factors_over_primes(c.get_num());
}

RingElem unit_inverse(const RingElem& x) {
    if (!is_unit(x))
        throw error(errc::not_a_unit, x.text() + " is not a unit in " +
                                          (x.descriptor() ? x.descriptor()->text() : "?"));
    Rational inv = 1 / x.constant_value();
    return RingElem::constant(x.descriptor(), inv);
}

}   // namespace skein
