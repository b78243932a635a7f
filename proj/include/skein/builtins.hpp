#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "skein/frobenius.hpp"

namespace skein {

/// F_U: R = Z[h,t], A = R[X]/(X² - hX - t), ε(1) = 0, ε(X) = 1,
/// pairs {(1, X-h), (X, 1)}, graded by deg X = 1, deg h = 2, deg t = 4.
const FrobeniusSystem& universal();

/// F_BN: the h = t = 0 reduction over Z (two-dot relation X² = 0).
const FrobeniusSystem& barnatan();

/// F_GN: the h = 0 reduction over Z[t] (X² = t).
const FrobeniusSystem& gadnaot();

/// Group algebra Z[G] for G a product of cyclic groups, Δ(1) = Σ g⁻¹ ⊗ g.
FrobeniusSystem group_algebra(const std::vector<unsigned>& cyclic_orders);

/// Resolves a reserved system name: "universal", "barnatan", "gadnaot",
/// or "group Z/n1 x Z/n2 x ...".
std::optional<FrobeniusSystem> builtin_system(std::string_view name);

}   // namespace skein
