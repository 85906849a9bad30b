#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "k3density/exact.hpp"
#include "k3density/pell.hpp"

namespace k3density {

using Vec2 = std::pair<Int, Int>;

/// Rank-2 hyperbolic lattice with Gram [[4, a], [a, 4]] and
/// form b_a(x, y) = 4x^2 + 2axy + 4y^2. Requires |a| >= 5 so that the
/// discriminant D = a^2 - 16 is positive (signature (1,1)).
class SurfaceLattice {
public:
    explicit SurfaceLattice(Int a);

    const Int& a() const { return a_; }
    const Int& disc() const { return disc_; }  // D = a^2 - 16
    const IntMatrix& gram() const { return gram_; }

    Int form(const Int& x, const Int& y) const;
    Int pair(const Vec2& v, const Vec2& w) const;

private:
    Int a_;
    Int disc_;
    IntMatrix gram_;
};

/// Vector v = (x, y) with b_a(v) = -2, plus its degrees against the two
/// generators: deg1 = h1.v = 4x + ay (the Pell t), deg2 = h2.v = ax + 4y.
struct NodalClass {
    Int x;
    Int y;
    Int deg1;
    Int deg2;
};

bool operator==(const NodalClass& a, const NodalClass& b);

/// Outcome of the zero-representation test for b_a, with certificate:
/// an isotropic vector when positive, the non-square witness when negative.
struct IsotropyCertificate {
    bool represents_zero;
    std::optional<Vec2> isotropic_vector;  // primitive, first coordinate > 0
    Int disc;
    Int floor_sqrt_disc;
};

/// Exact simultaneous-ampleness certificate for h1, h2. Pass means every
/// nodal class meets both generators with the same nonzero sign.
struct AmpleCertificate {
    bool pass;
    bool nodal_classes_exist;
    Int asymptotic_witness;  // 8a^2 - 256; > 0 makes sign agreement automatic for a > 0
    Int finite_check_bound;
    long finite_checked;
    std::optional<NodalClass> counterexample;
    std::string note;
};

struct VeryAmpleChecklist {
    bool degree_at_least_four;    // h_k^2 = 4 >= 4
    bool no_isotropic_classes;    // b_a does not represent 0
    bool no_orthogonal_nodal;     // no nodal class with h_k . v = 0
    bool no_lines;                // min nodal degree >= 2
    std::optional<Int> min_degree;
    bool all_pass() const {
        return degree_at_least_four && no_isotropic_classes && no_orthogonal_nodal && no_lines;
    }
};

/// True iff b_a represents zero nontrivially, i.e. iff D is a perfect square.
IsotropyCertificate has_elliptic_pencil(const SurfaceLattice& lat);

/// All nodal classes with |y| <= y_bound, via the Pell problem
/// t^2 - D y^2 = -8 with the integrality filter t == a y (mod 4) and
/// x = (t - a y)/4; ordered by (|y|, y, t).
std::vector<NodalClass> nodal_classes(const SurfaceLattice& lat, const Int& y_bound);

/// Exact: decided through solution classes (plus residue cycles for the
/// filter), not through any bounded enumeration.
bool nodal_classes_exist(const SurfaceLattice& lat);

/// The nodal class of smallest degree |h1 . v| (nullopt when none exist).
std::optional<NodalClass> minimal_nodal_class(const SurfaceLattice& lat);

AmpleCertificate ample_pair_certificate(const SurfaceLattice& lat);

/// Minimum of |h_k . v| over all nodal classes v, or nullopt when none
/// exist. k must be 1 or 2 (the two values coincide: (x,y) -> (y,x) is a
/// form-preserving swap exchanging the generators).
std::optional<Int> min_nodal_degree(const SurfaceLattice& lat, int k);

VeryAmpleChecklist very_ample_checklist(const SurfaceLattice& lat, int k);

/// Picard-Lefschetz reflection w -> w + (w.v) v in the nodal class v
/// (v^2 = -2, so this fixes the wall v-perp). Throws unless b_a(v) = -2.
Vec2 reflect_nodal(const SurfaceLattice& lat, const Vec2& w, const NodalClass& v);

}  // namespace k3density
