#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace skein {

enum class errc {
    invalid_descriptor,
    descriptor_mismatch,
    coefficient_domain,
    incomplete_substitution,
    not_a_unit,
    construction,
    no_dual_basis,
    twist,
    word_shape,
    signature_mismatch,
    grading,
    pairing,
    pattern,
    guard,
    lookup,
    usage,
};

/// Domain error carrying a machine-checkable kind next to the message.
class error : public std::runtime_error {
public:
    error(errc kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    errc kind() const { return kind_; }

private:
    errc kind_;
};

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
std::string rational_text(const Rational& q);

/// Ground ring descriptor: named indeterminates over Z, with coefficient
/// denominators restricted to products of the declared primes (empty set
/// means integer coefficients). Covers Z, Z[h,t] and Z[1/2][t].
struct RingDescriptor {
    std::vector<std::string> indeterminates;
    std::set<unsigned long> denominator_primes;

    static std::shared_ptr<const RingDescriptor> make(std::vector<std::string> vars,
                                                      std::set<unsigned long> primes = {});

    std::optional<std::size_t> index_of(std::string_view name) const;
    /// True iff |n| is a (possibly empty) product of the declared primes.
    bool factors_over_primes(const Integer& n) const;
    std::string text() const;

    bool operator==(const RingDescriptor& other) const = default;
};

using RingDescriptorPtr = std::shared_ptr<const RingDescriptor>;

bool same_ring(const RingDescriptorPtr& a, const RingDescriptorPtr& b);

/// Exponent vector, one entry per descriptor indeterminate.
using Exponents = std::vector<std::uint32_t>;

/// Element of the ground ring in canonical form: a sorted term map from
/// exponent vectors to nonzero rational coefficients. Immutable value
/// semantics; equal elements have identical term maps.
class RingElem {
public:
    RingElem() = default;   // detached zero; only valid as a container placeholder

    static RingElem zero(RingDescriptorPtr desc);
    static RingElem constant(RingDescriptorPtr desc, const Rational& c);
    static RingElem variable(RingDescriptorPtr desc, std::string_view name);
    static RingElem monomial(RingDescriptorPtr desc, Exponents exps, const Rational& c);

    const RingDescriptorPtr& descriptor() const { return desc_; }
    const std::map<Exponents, Rational>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    /// Constant term (zero if absent); total value only when is_constant().
    Rational constant_value() const;

    RingElem operator-() const;
    RingElem& operator+=(const RingElem& rhs);
    RingElem& operator-=(const RingElem& rhs);
    RingElem& operator*=(const RingElem& rhs);
    friend RingElem operator+(RingElem lhs, const RingElem& rhs) { return lhs += rhs; }
    friend RingElem operator-(RingElem lhs, const RingElem& rhs) { return lhs -= rhs; }
    friend RingElem operator*(RingElem lhs, const RingElem& rhs) { return lhs *= rhs; }

    RingElem scaled(const Rational& c) const;
    RingElem pow(unsigned n) const;

    bool operator==(const RingElem& other) const;
    bool operator!=(const RingElem& other) const { return !(*this == other); }
    bool operator<(const RingElem& other) const;   // arbitrary total order for map keys

    std::string text() const;

private:
    RingDescriptorPtr desc_;
    std::map<Exponents, Rational> terms_;

    void add_term(const Exponents& e, const Rational& c);
    friend RingElem substitute(const RingElem&, const RingDescriptorPtr&,
                               const std::map<std::string, RingElem>&);
};

/// Evaluation homomorphism: every indeterminate of x's descriptor must be
/// assigned an element of the target ring.
RingElem substitute(const RingElem& x, const RingDescriptorPtr& target,
                    const std::map<std::string, RingElem>& assignment);

/// True iff x is invertible: a nonzero constant whose numerator factors
/// over the descriptor's denominator primes, up to sign.
bool is_unit(const RingElem& x);

/// The inverse of a unit; throws errc::not_a_unit otherwise.
RingElem unit_inverse(const RingElem& x);

}   // namespace skein
