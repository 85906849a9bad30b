#include "k3density/surface.hpp"

#include <algorithm>
#include <tuple>

namespace k3density {

SurfaceLattice::SurfaceLattice(Int a) : a_(std::move(a)), gram_(2, 2) {
    if (abs(a_) < 5)
        throw std::invalid_argument(
            "SurfaceLattice: |a| >= 5 required (a^2 - 16 must be positive)");
    disc_ = a_ * a_ - 16;
    gram_.at(0, 0) = 4;
    gram_.at(0, 1) = a_;
    gram_.at(1, 0) = a_;
    gram_.at(1, 1) = 4;
}

Int SurfaceLattice::form(const Int& x, const Int& y) const {
    return 4 * x * x + 2 * a_ * x * y + 4 * y * y;
}

Int SurfaceLattice::pair(const Vec2& v, const Vec2& w) const {
    return 4 * v.first * w.first + a_ * (v.first * w.second + v.second * w.first) +
           4 * v.second * w.second;
}

bool operator==(const NodalClass& a, const NodalClass& b) {
    return a.x == b.x && a.y == b.y;
}

IsotropyCertificate has_elliptic_pencil(const SurfaceLattice& lat) {
    const Int& D = lat.disc();
    Int r = int_sqrt(D);
    if (r * r != D) return {false, std::nullopt, D, r};
    // 4 b_a(x, y) = (4x + ay)^2 - D y^2, so D = s^2 gives the isotropic
    // vector (s - a, 4), made primitive with positive leading coordinate
    Int x = r - lat.a(), y = 4;
    Int g = gcd(x, y);
    if (g != 0) {
        x /= g;
        y /= g;
    }
    if (x < 0 || (x == 0 && y < 0)) {
        x = -x;
        y = -y;
    }
    if (lat.form(x, y) != 0) throw std::logic_error("has_elliptic_pencil: witness not isotropic");
    return {true, Vec2{x, y}, D, r};
}

namespace {

// Solutions of t^2 - D y^2 = N for square D = s^2 are finite: factor
// (t - s y)(t + s y) = N over divisor pairs.
std::vector<PellSolution> square_disc_solutions(const Int& D, const Int& N) {
    Int s = int_sqrt(D);
    std::vector<PellSolution> out;
    for (Int d1 = 1; d1 * d1 <= abs(N); ++d1) {
        if (N % d1 != 0) continue;
        for (const Int& a : {Int(d1), Int(-d1)}) {
            Int b = N / a;
            for (int swap = 0; swap < 2; ++swap) {
                Int lo = swap ? b : a, hi = swap ? a : b;
                // t - s y = lo, t + s y = hi
                if ((lo + hi) % 2 != 0) continue;
                Int t = (lo + hi) / 2;
                Int sy = (hi - lo) / 2;
                if (sy % s != 0) continue;
                out.push_back({t, sy / s});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const PellSolution& a, const PellSolution& b) {
        return std::tuple<Int, Int, Int>(abs(a.y), a.y, a.t) <
               std::tuple<Int, Int, Int>(abs(b.y), b.y, b.t);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

CongruenceFilter integrality_filter(const SurfaceLattice& lat) {
    // x = (t - a y)/4 integral
    return {Int(4), lat.a()};
}

NodalClass to_nodal(const SurfaceLattice& lat, const PellSolution& s) {
    Int x = (s.t - lat.a() * s.y) / 4;
    NodalClass v{x, s.y, s.t, (lat.a() * s.t - lat.disc() * s.y) / 4};
    if (lat.form(v.x, v.y) != -2) throw std::logic_error("to_nodal: not a (-2)-class");
    if (v.deg1 != 4 * v.x + lat.a() * v.y || v.deg2 != lat.a() * v.x + 4 * v.y)
        throw std::logic_error("to_nodal: degree bookkeeping broken");
    return v;
}

// filtered Pell solutions of t^2 - D y^2 = -8 with |y| <= y_bound, both
// for square and non-square D
std::vector<PellSolution> nodal_solutions(const SurfaceLattice& lat, const Int& y_bound) {
    const CongruenceFilter f = integrality_filter(lat);
    std::vector<PellSolution> sols;
    if (is_perfect_square(lat.disc())) {
        for (const auto& s : square_disc_solutions(lat.disc(), Int(-8)))
            if (abs(s.y) <= y_bound && f.passes(s.t, s.y)) sols.push_back(s);
    } else {
        PellProblem p(lat.disc(), Int(-8), f);
        sols = enumerate_solutions(p, y_bound);
    }
    return sols;
}

std::optional<PellSolution> minimal_nodal_solution(const SurfaceLattice& lat) {
    const CongruenceFilter f = integrality_filter(lat);
    if (is_perfect_square(lat.disc())) {
        std::optional<PellSolution> best;
        for (const auto& s : square_disc_solutions(lat.disc(), Int(-8))) {
            if (!f.passes(s.t, s.y)) continue;
            if (!best || abs(s.t) < abs(best->t)) best = s;
        }
        return best;
    }
    PellProblem p(lat.disc(), Int(-8), f);
    return minimal_filtered_solution(p);
}

}  // namespace

std::vector<NodalClass> nodal_classes(const SurfaceLattice& lat, const Int& y_bound) {
    std::vector<NodalClass> out;
    for (const auto& s : nodal_solutions(lat, y_bound)) out.push_back(to_nodal(lat, s));
    return out;
}

bool nodal_classes_exist(const SurfaceLattice& lat) {
    return minimal_nodal_solution(lat).has_value();
}

std::optional<NodalClass> minimal_nodal_class(const SurfaceLattice& lat) {
    auto s = minimal_nodal_solution(lat);
    if (!s) return std::nullopt;
    return to_nodal(lat, *s);
}

AmpleCertificate ample_pair_certificate(const SurfaceLattice& lat) {
    AmpleCertificate cert;
    cert.asymptotic_witness = 8 * lat.a() * lat.a() - 256;
    cert.finite_check_bound = 8;
    cert.finite_checked = 0;
    cert.nodal_classes_exist = nodal_classes_exist(lat);
    if (!cert.nodal_classes_exist) {
        cert.pass = true;
        cert.note = "no nodal classes: the positive cone has no walls to check";
        return cert;
    }

    // On solutions of t^2 = D y^2 - 8 one has
    //   (a t)^2 - (D y)^2 = 16 D y^2 - 8 a^2 >= 8 a^2 - 256 for |y| >= 1,
    // and 4 (h2 . v) = a t - D y, so when 8a^2 - 256 > 0 and a > 0 the two
    // degrees agree in sign automatically (y = 0 is impossible: t^2 = -8).
    // For a < 0 the same identity forces opposite signs on every nodal
    // class. |a| = 5 has 8a^2 - 256 < 0 but a square discriminant, so the
    // finite solution list decides.
    const bool asymptotic_applies = cert.asymptotic_witness > 0 && lat.a() > 0;

    // explicit finite verification layer (and counterexample search)
    auto verify_box = [&](const Int& bound) -> std::optional<NodalClass> {
        for (const auto& v : nodal_classes(lat, bound)) {
            ++cert.finite_checked;
            if (v.deg1 == 0 || v.deg2 == 0 || (sgn(v.deg1) != sgn(v.deg2))) return v;
        }
        return std::nullopt;
    };

    if (asymptotic_applies) {
        cert.pass = true;
        if (auto bad = verify_box(cert.finite_check_bound)) {
            // unreachable while the sign identity holds; the verdict
            // follows the explicit check, not the derivation
            cert.pass = false;
            cert.counterexample = bad;
            cert.note = "finite check contradicts the asymptotic witness";
        }
        return cert;
    }

    // a <= -6: the identity forces opposite signs on every nodal class,
    // so the smallest one is already a counterexample
    if (lat.a() < 0 && cert.asymptotic_witness > 0) {
        NodalClass bad = to_nodal(lat, *minimal_nodal_solution(lat));
        ++cert.finite_checked;
        if (bad.deg1 != 0 && bad.deg2 != 0 && sgn(bad.deg1) == sgn(bad.deg2))
            throw std::logic_error("ample_pair_certificate: sign identity violated for a < 0");
        cert.pass = false;
        cert.counterexample = bad;
        cert.note = "signs disagree on every nodal class (a < 0)";
        return cert;
    }

    // |a| = 5: D = 9 is square, the nodal list is finite and complete
    cert.note = "square discriminant: complete finite nodal list checked";
    Int big = abs(Int(8)) + lat.disc();  // generous |y| cap for the finite list
    if (auto bad = verify_box(big)) {
        cert.pass = false;
        cert.counterexample = bad;
    } else {
        cert.pass = true;
    }
    return cert;
}

std::optional<Int> min_nodal_degree(const SurfaceLattice& lat, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("min_nodal_degree: k must be 1 or 2");
    // (x, y) -> (y, x) preserves b_a and swaps the generators, so the
    // minimum is the same for k = 1 and k = 2; compute it as min |t|.
    auto s = minimal_nodal_solution(lat);
    if (!s) return std::nullopt;
    return abs(s->t);
}

VeryAmpleChecklist very_ample_checklist(const SurfaceLattice& lat, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("very_ample_checklist: k must be 1 or 2");
    VeryAmpleChecklist c;
    c.degree_at_least_four = true;  // h_k^2 = 4 by construction
    c.no_isotropic_classes = !has_elliptic_pencil(lat).represents_zero;
    c.min_degree = min_nodal_degree(lat, k);
    if (c.min_degree) {
        c.no_orthogonal_nodal = *c.min_degree > 0;
        c.no_lines = *c.min_degree >= 2;
    } else {
        // no nodal classes at all: nothing orthogonal, no (-2)-curves,
        // hence no lines in the embedding
        c.no_orthogonal_nodal = true;
        c.no_lines = true;
    }
    return c;
}

Vec2 reflect_nodal(const SurfaceLattice& lat, const Vec2& w, const NodalClass& v) {
    if (lat.form(v.x, v.y) != -2)
        throw std::invalid_argument("reflect_nodal: class does not have self-intersection -2");
    Int c = lat.pair(w, {v.x, v.y});
    return {w.first + c * v.x, w.second + c * v.y};
}

}  // namespace k3density
