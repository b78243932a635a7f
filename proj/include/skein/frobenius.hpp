#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skein/ring.hpp"

namespace skein {

/// Element of the algebra A in normal form: a coordinate vector over the
/// system's fixed basis. Plain data; the owning system supplies the ops.
struct AlgElem {
    std::vector<RingElem> coords;

    bool is_zero() const;
    bool operator==(const AlgElem& other) const { return coords == other.coords; }
    bool operator!=(const AlgElem& other) const { return !(*this == other); }
    bool operator<(const AlgElem& other) const { return coords < other.coords; }

    AlgElem operator-() const;
    AlgElem& operator+=(const AlgElem& rhs);
    AlgElem& operator-=(const AlgElem& rhs);
    friend AlgElem operator+(AlgElem lhs, const AlgElem& rhs) { return lhs += rhs; }
    friend AlgElem operator-(AlgElem lhs, const AlgElem& rhs) { return lhs -= rhs; }
    AlgElem scaled(const RingElem& c) const;
};

using BasisTuple = std::vector<std::uint32_t>;

/// Element of A^{⊗k}: sparse map from basis-index tuples to coefficients.
/// Arity 0 is the scalar case (a single empty-tuple term).
struct TensorElem {
    std::size_t arity = 0;
    std::map<BasisTuple, RingElem> terms;

    bool is_zero() const { return terms.empty(); }
    void add_term(const BasisTuple& t, const RingElem& c);

    TensorElem& operator+=(const TensorElem& rhs);
    TensorElem& operator-=(const TensorElem& rhs);
    friend TensorElem operator+(TensorElem lhs, const TensorElem& rhs) { return lhs += rhs; }
    friend TensorElem operator-(TensorElem lhs, const TensorElem& rhs) { return lhs -= rhs; }
    TensorElem scaled(const RingElem& c) const;

    bool operator==(const TensorElem& other) const {
        return arity == other.arity && terms == other.terms;
    }
    bool operator!=(const TensorElem& other) const { return !(*this == other); }
};

/// Concatenation of tensor factors (arities add).
TensorElem tensor_product(const TensorElem& a, const TensorElem& b);

/// Unverified structure data of a Frobenius system. FrobeniusSystem::make
/// runs the axiom suite over this and rejects anything inconsistent.
struct SystemData {
    RingDescriptorPtr ring;
    std::vector<std::string> basis;
    AlgElem unit;
    std::vector<std::vector<AlgElem>> table;      // table[i][j] = b_i * b_j
    std::vector<RingElem> counit;                 // counit[i] = ε(b_i)
    std::vector<std::pair<AlgElem, AlgElem>> pairs;   // Δ(1) = Σ u_i ⊗ v_i
    std::map<std::string, int> degrees;           // optional grading on basis + indeterminates

    std::size_t rank() const { return basis.size(); }
    bool operator==(const SystemData& other) const;
};

/// Builds the basis {1, X, ..., X^{n-1}} and multiplication table of the
/// monic quotient A = R[X]/(X^n - p(X)). p is given by its dense coefficient
/// list (degree < n); counit and pairs are left for the caller to fill.
SystemData quotient_data(RingDescriptorPtr ring, const std::string& var, unsigned n,
                         std::vector<RingElem> p_coeffs);

struct SpecializeResult;

/// A finite-rank free Frobenius system. Instances are immutable and always
/// satisfy the full axiom suite: construction verifies associativity,
/// commutativity, the unit law, counit condition (1), the expansion
/// identity (2), symmetry of Δ(1), cocommutativity, coassociativity, the
/// bimodule law, and that no sub-collection of pairs sums to zero.
class FrobeniusSystem {
public:
    static FrobeniusSystem make(SystemData data);

    const SystemData& data() const { return data_; }
    const RingDescriptorPtr& ring() const { return data_.ring; }
    std::size_t rank() const { return data_.basis.size(); }
    std::size_t pair_count() const { return data_.pairs.size(); }
    const std::vector<std::string>& basis_names() const { return data_.basis; }

    AlgElem zero() const;
    AlgElem one() const { return data_.unit; }
    AlgElem basis_elem(std::size_t i) const;
    AlgElem from_scalar(const RingElem& c) const;
    RingElem ring_zero() const { return RingElem::zero(data_.ring); }
    RingElem ring_one() const { return RingElem::constant(data_.ring, 1); }

    AlgElem mul(const AlgElem& a, const AlgElem& b) const;
    AlgElem pow(const AlgElem& a, unsigned n) const;
    RingElem counit(const AlgElem& a) const;
    /// Δ(a) = Σ u_i ⊗ (v_i · a), an arity-2 tensor.
    TensorElem coproduct(const AlgElem& a) const;
    /// μ(Δ(1)) = Σ u_i · v_i.
    AlgElem handle() const;
    RingElem rank_invariant() const;

    /// {w_j} with ε(b_i w_j) = δ_ij; throws errc::no_dual_basis when the
    /// Gram determinant is not a unit.
    std::vector<AlgElem> dual_basis() const;

    /// Twisted system: pairs (u_i, v_i y⁻¹), counit a ↦ ε(y a). Throws
    /// errc::twist when y is not invertible in A.
    FrobeniusSystem twist(const AlgElem& y) const;

    /// Coefficient-induced base change along the assignment; the result
    /// carries an element mapper for transporting elements and tensors.
    SpecializeResult specialize(const RingDescriptorPtr& target,
                                const std::map<std::string, RingElem>& assignment) const;

    /// True iff the powers H^0..H^{n-1} of the handle element generate A
    /// over R (unit determinant of their coordinate matrix).
    bool geometric_check() const;

    /// Inverse of y in A via the adjugate of its multiplication matrix;
    /// throws errc::not_a_unit when det is not a unit of R.
    AlgElem inverse(const AlgElem& y) const;
    bool is_invertible(const AlgElem& y) const;

    // tensor helpers
    TensorElem tensor_scalar(const RingElem& c) const;
    TensorElem tensor_of(const AlgElem& a) const;                // arity 1
    TensorElem unit_tensor(std::size_t arity) const;             // 1 ⊗ ... ⊗ 1
    AlgElem alg_of(const TensorElem& t) const;                   // arity 1 -> AlgElem
    /// Multiply a into slot `slot` of every term.
    TensorElem mul_into_slot(const TensorElem& t, std::size_t slot, const AlgElem& a) const;
    /// Replace slot `slot` by the coproduct of its content (arity +1).
    TensorElem comult_at(const TensorElem& t, std::size_t slot) const;
    /// Contract slots `slot` and `slot+1` by multiplication (arity -1).
    TensorElem mult_at(const TensorElem& t, std::size_t slot) const;
    /// Apply the counit to slot `slot` (arity -1).
    TensorElem counit_at(const TensorElem& t, std::size_t slot) const;
    TensorElem swap_at(const TensorElem& t, std::size_t slot) const;
    /// Left-nested iterated coproduct Δ^{(k-1)}(a) of arity k >= 1.
    TensorElem iterated_coproduct(const AlgElem& a, std::size_t k) const;

    /// Degree of a homogeneous ring element under the declared grading;
    /// nullopt for zero, throws errc::grading when inhomogeneous.
    std::optional<long> ring_degree(const RingElem& c) const;
    std::optional<long> elem_degree(const AlgElem& a) const;
    bool has_grading() const { return !data_.degrees.empty(); }

    std::string render_elem(const AlgElem& a) const;
    std::string render_tensor(const TensorElem& t) const;

    bool operator==(const FrobeniusSystem& other) const { return data_ == other.data_; }
    bool operator!=(const FrobeniusSystem& other) const { return !(*this == other); }

    /// Measured degree offsets of ε and Δ under the declared grading, per
    /// basis element: deg ε(b) - deg b where ε(b) ≠ 0, and the set of
    /// term degrees of Δ(b) minus deg b. Reported, never asserted.
    struct OperatorDegrees {
        std::vector<std::optional<long>> counit_offsets;
        std::vector<std::vector<long>> coproduct_offsets;
    };
    OperatorDegrees measured_operator_degrees() const;

private:
    explicit FrobeniusSystem(SystemData data) : data_(std::move(data)) {}
    SystemData data_;

    void check_elem(const AlgElem& a) const;
};

/// Result of FrobeniusSystem::specialize: the new system plus the induced
/// mapper on elements and tensors.
struct SpecializeResult {
    FrobeniusSystem system;
    RingDescriptorPtr target;
    std::map<std::string, RingElem> assignment;

    RingElem map_ring(const RingElem& c) const;
    AlgElem map_elem(const AlgElem& a) const;
    TensorElem map_tensor(const TensorElem& t) const;
};

/// Dual basis computed directly from unverified data (the verified system
/// delegates here). Exposed so the failure path is reachable in tests.
std::vector<AlgElem> dual_basis_for(const SystemData& data);

/// Canonical text of elements and tensors over possibly-unverified data
/// (the verified system's render methods delegate here).
std::string render_tensor(const SystemData& d, const TensorElem& t);
std::string render_elem(const SystemData& d, const AlgElem& a);

/// Determinant over the ground ring by subset dynamic programming
/// (division-free); square matrices up to rank 16.
RingElem poly_determinant(const std::vector<std::vector<RingElem>>& m,
                          const RingDescriptorPtr& ring);

}   // namespace skein
