#pragma once

#include <array>
#include <optional>
#include <vector>

#include "k3density/exact.hpp"

namespace k3density {

using Vec3 = std::array<Int, 3>;

/// Integral symmetric 3x3 Gram matrix, viewed as a quadratic form over Q.
/// Must be nondegenerate.
struct TernaryForm {
    IntMatrix gram;

    explicit TernaryForm(IntMatrix g);

    Int eval(const Vec3& v) const;
    Int pair(const Vec3& v, const Vec3& w) const;
};

enum class IsotropyStatus { kIsotropic, kAnisotropic };

/// Hasse-Minkowski diagnosis of isotropy over Q. For the isotropic case an
/// explicit primitive integer zero of the original form is produced; for
/// the anisotropic case, the places (primes, or -1 for the real place)
/// where the localized form has no nontrivial zero.
struct IsotropyDiagnosis {
    IsotropyStatus status;
    std::array<Int, 3> diagonal;          // squarefree rational-diagonal model
    std::vector<Int> obstructing_places;  // empty iff isotropic
    std::optional<Vec3> zero;             // set iff isotropic
};

/// Decide isotropy: rational diagonalization, squarefree reduction, local
/// tests at the real place, 2, and the odd primes dividing the diagonal;
/// an explicit zero is then searched for (it must exist when every local
/// test passes). Throws std::invalid_argument on a degenerate form.
IsotropyDiagnosis decide_isotropy(const TernaryForm& f);

/// First nontrivial zero with all coordinates bounded by `bound` in
/// absolute value, or nullopt. Deterministic scan order; exact.
std::optional<Vec3> exhaustive_zero_search(const TernaryForm& f, const Int& bound);

/// Hilbert symbol (a, b)_p for an odd prime, p = 2, or p = -1 (real place).
/// a, b nonzero.
int hilbert_symbol(const Int& a, const Int& b, const Int& p);

/// Distinct prime factors by trial division (magnitudes here are small).
std::vector<Int> prime_factors(Int n);

/// Squarefree part, sign preserved. squarefree_part(0) = 0.
Int squarefree_part(const Int& n);

}  // namespace k3density
