#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "k3density/exact.hpp"

namespace k3density {

/// Residue condition t == coefficient * y (mod modulus), applied to
/// solutions after solving. Sign-invariant: (t, y) passes iff (-t, -y) does.
struct CongruenceFilter {
    Int modulus;
    Int coefficient;

    bool passes(const Int& t, const Int& y) const;
};

/// Generalized Pell equation t^2 - D y^2 = N.
/// Invariant: D > 0 and not a perfect square; N != 0.
struct PellProblem {
    Int D;
    Int N;
    std::optional<CongruenceFilter> filter;

    PellProblem(Int D_, Int N_, std::optional<CongruenceFilter> f = std::nullopt);
};

struct PellSolution {
    Int t;
    Int y;
};

bool operator==(const PellSolution& a, const PellSolution& b);

/// One class of solutions under the unit action
/// (t, y) -> (u t + D v y, v t + u y), identified with its negative.
/// `fundamental` is the class member with minimal |y| >= 1
/// (ties: smaller |t|, then t > 0).
struct PellSolutionClass {
    PellSolution fundamental;
    Int unit_u;
    Int unit_v;
    Int D;

    PellSolution apply_unit(const PellSolution& s) const;
    PellSolution apply_unit_inverse(const PellSolution& s) const;
};

/// Minimal (u, v), both positive, with u^2 - D v^2 = 1, via the periodic
/// continued fraction of sqrt(D). Throws std::invalid_argument when D is a
/// perfect square or D < 2.
std::pair<Int, Int> fundamental_unit(const Int& D);

/// One representative per solution class. The congruence filter on the
/// problem is NOT applied here (classes describe the full solution set);
/// enumeration applies it. Empty iff the equation has no integer solutions.
std::vector<PellSolutionClass> solution_classes(const PellProblem& p);

/// All solutions with |y| <= y_bound (filter applied when present),
/// sorted lexicographically by (|y|, y, t).
std::vector<PellSolution> enumerate_solutions(const PellProblem& p, const Int& y_bound);

/// Smallest-|t| solution passing the problem's filter, or nullopt when no
/// filtered solution exists at all. Exact: |t| is monotone in |y| on the
/// solution set, and filter residues are periodic along each unit orbit, so
/// scanning one residue cycle per class in each direction is complete.
std::optional<PellSolution> minimal_filtered_solution(const PellProblem& p);

}  // namespace k3density
