#include "k3density/hilb2.hpp"

namespace k3density {

Hilb2Lattice::Hilb2Lattice(Int a) : a_(a), gram_(3, 3), surface_(a) {
    gram_.at(0, 0) = 4;
    gram_.at(0, 2) = a_;
    gram_.at(1, 1) = -2;
    gram_.at(2, 0) = a_;
    gram_.at(2, 2) = 4;
}

Int Hilb2Lattice::q(const Vec3& v, const Vec3& w) const {
    Int acc = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) acc += gram_.at(i, j) * v[i] * w[j];
    return acc;
}

Vec3 Isometry::apply(const Vec3& v) const {
    auto out = matrix.mul_vec({v[0], v[1], v[2]});
    return {out[0], out[1], out[2]};
}

Isometry beauville_matrix(const Hilb2Lattice& lat, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("beauville_matrix: k must be 1 or 2");
    const Vec3 axis = (k == 1) ? Vec3{Int(1), Int(-1), Int(0)} : Vec3{Int(0), Int(-1), Int(1)};
    if (lat.q(axis) != 2) throw std::logic_error("beauville_matrix: axis norm is not 2");

    IntMatrix m(3, 3);
    const Vec3 basis[3] = {Hilb2Lattice::h1(), Hilb2Lattice::e(), Hilb2Lattice::h2()};
    for (std::size_t j = 0; j < 3; ++j) {
        Int c = lat.q(basis[j], axis);
        for (std::size_t i = 0; i < 3; ++i) {
            Int img = c * axis[i];
            if (i == j) img -= 1;
            m.at(i, j) = img;  // column j = -e_j + q(e_j, A_k) A_k
        }
    }

    Isometry iso{m, k == 1 ? "reflection in H1 - E" : "reflection in H2 - E"};
    if (!(m * m == IntMatrix::identity(3)))
        throw std::logic_error("beauville_matrix: constructed matrix is not an involution");
    if (!is_isometry(m, lat.gram()))
        throw std::logic_error("beauville_matrix: constructed matrix is not an isometry");
    return iso;
}

namespace {

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 primitive_positive(Vec3 v) {
    Int g = gcd(gcd(v[0], v[1]), v[2]);
    if (g > 1)
        for (auto& c : v) c /= g;
    int s = 0;
    for (const auto& c : v)
        if (c != 0) {
            s = sgn(c);
            break;
        }
    if (s < 0)
        for (auto& c : v) c = -c;
    return v;
}

}  // namespace

ComposedAction composed_action(const Hilb2Lattice& lat, const Rat& eigen_width) {
    const IntMatrix m = beauville_matrix(lat, 1).matrix * beauville_matrix(lat, 2).matrix;
    if (m.det() != 1) throw std::logic_error("composed_action: determinant is not 1");

    ComposedAction out{m, char_poly(m), (lat.a() - 2) * (lat.a() - 2) - 2,
                       {Int(0), Int(0), Int(0)}, {}};

    const IntPolynomial expected =
        IntPolynomial({-1, 1}) *
        IntPolynomial(std::vector<Int>{Int(1), -out.middle_trace, Int(1)});
    if (!(out.characteristic == expected))
        throw std::logic_error("composed_action: unexpected characteristic polynomial");

    // kernel of (M - I): cross product of two independent rows
    IntMatrix mi = m - IntMatrix::identity(3);
    Vec3 rows[3];
    for (std::size_t i = 0; i < 3; ++i) rows[i] = {mi.at(i, 0), mi.at(i, 1), mi.at(i, 2)};
    Vec3 ker{Int(0), Int(0), Int(0)};
    for (std::size_t i = 0; i < 3 && ker == Vec3{Int(0), Int(0), Int(0)}; ++i)
        for (std::size_t j = i + 1; j < 3 && ker == Vec3{Int(0), Int(0), Int(0)}; ++j)
            ker = cross(rows[i], rows[j]);
    if (ker == Vec3{Int(0), Int(0), Int(0)})
        throw std::logic_error("composed_action: eigenspace of 1 is not one-dimensional");
    out.invariant_vector = primitive_positive(ker);
    // present at the scale 2 H1 - (a+4) E + 2 H2 (for even a the primitive
    // vector is half of that)
    if (out.invariant_vector[0] == 1)
        for (auto& c : out.invariant_vector) c *= 2;
    if (out.invariant_vector[0] != 2)
        throw std::logic_error("composed_action: invariant vector has unexpected H1-coefficient");
    if (!(m.mul_vec({out.invariant_vector[0], out.invariant_vector[1],
                     out.invariant_vector[2]}) ==
          std::vector<Int>{out.invariant_vector[0], out.invariant_vector[1],
                           out.invariant_vector[2]}))
        throw std::logic_error("composed_action: invariant vector not fixed");

    out.top_eigenvalue = spectral_radius_bounds(out.characteristic, eigen_width);
    return out;
}

InvariantClassResult invariant_class(const Hilb2Lattice& lat) {
    const Vec3 L = composed_action(lat).invariant_vector;  // nonzero, guarded
    const Vec3 ample{Int(1), Int(-1), Int(0)};             // A = H1 - E
    Int pairing = lat.q(ample, L);
    // a nonzero effective class pairs strictly positively with an ample one
    return {L, pairing, pairing > 0};
}

Int fujiki_product(const Hilb2Lattice& lat, const Vec3& a, const Vec3& b, const Vec3& c,
                   const Vec3& d) {
    return lat.q(a, b) * lat.q(c, d) + lat.q(a, c) * lat.q(b, d) + lat.q(a, d) * lat.q(b, c);
}

Int surface_class_product(const Hilb2Lattice& lat, const Vec3& alpha, const Vec3& beta) {
    // surface parts (H1, H2 coefficients) pair through b_a; E-coefficients
    // meet on the exceptional curve of the blow-up
    Int qs = lat.surface().pair({alpha[0], alpha[2]}, {beta[0], beta[2]});
    return qs - alpha[1] * beta[1];
}

Int FourClass::intersect(const Hilb2Lattice& lat, const Vec3& gamma, const Vec3& delta) const {
    const Vec3 basis[3] = {Hilb2Lattice::h1(), Hilb2Lattice::e(), Hilb2Lattice::h2()};
    Int acc = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (sym.at(i, j) == 0) continue;
            acc += sym.at(i, j) * fujiki_product(lat, basis[i], basis[j], gamma, delta);
        }
    acc += sigma * surface_class_product(lat, gamma, delta);
    return acc;
}

FourClass delta_class(const Hilb2Lattice& lat, int k) {
    if (k != 1 && k != 2) throw std::invalid_argument("delta_class: k must be 1 or 2");
    const Vec3 hk = (k == 1) ? Hilb2Lattice::h1() : Hilb2Lattice::h2();
    FourClass d{IntMatrix(3, 3), -lat.q(hk)};  // H_k^2 - q(H_k) Sigma, q(H_k) = 4
    d.sym.at(k == 1 ? 0 : 2, k == 1 ? 0 : 2) = 1;
    return d;
}

DeltaInvariance delta_invariance_test(const Hilb2Lattice& lat) {
    const FourClass d1 = delta_class(lat, 1);
    const Vec3 e = Hilb2Lattice::e();
    const Vec3 image = beauville_matrix(lat, 2).apply(e);  // iota_2* E = 2 H2 - 3 E
    DeltaInvariance out{d1.intersect(lat, e, e), d1.intersect(lat, image, image), false};
    out.invariant = (out.on_e_squared == out.on_image_squared);
    return out;
}

bool periodicity_reduces_to_invariance(const IntPolynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("periodicity_reduces_to_invariance: zero polynomial");
    IntPolynomial rest = p;
    const IntPolynomial t_minus_1({-1, 1});
    if (auto q = rest.divide_exact(t_minus_1)) rest = *q;  // strip the expected eigenvalue 1
    if (rest.degree() < 1) return true;                    // nothing left to obstruct
    return cyclotomic_root_of_unity_part(rest).empty();
}

bool periodicity_reduction(const Hilb2Lattice& lat) {
    return periodicity_reduces_to_invariance(composed_action(lat).characteristic);
}

FibrationObstruction abelian_fibration_obstruction(const Hilb2Lattice& lat,
                                                   const Int& search_bound) {
    TernaryForm form(lat.gram());
    FibrationObstruction out{FibrationStatus::kAnisotropic, decide_isotropy(form), search_bound,
                             std::nullopt};
    out.status = out.diagnosis.status == IsotropyStatus::kIsotropic ? FibrationStatus::kIsotropic
                                                                    : FibrationStatus::kAnisotropic;
    // when the surface form already represents zero, surface that vector
    // (lifted by E-coefficient 0) as the witness
    if (out.status == FibrationStatus::kIsotropic) {
        auto pencil = has_elliptic_pencil(lat.surface());
        if (pencil.represents_zero && pencil.isotropic_vector) {
            Vec3 lifted{pencil.isotropic_vector->first, Int(0), pencil.isotropic_vector->second};
            if (lat.q(lifted) != 0)
                throw std::logic_error("abelian_fibration_obstruction: bad lifted zero");
            out.diagnosis.zero = lifted;
        }
    }
    out.search_zero = exhaustive_zero_search(form, search_bound);
    // the search layer must agree with the local decision
    if (out.status == FibrationStatus::kAnisotropic && out.search_zero)
        throw std::logic_error("abelian_fibration_obstruction: search found a zero of an anisotropic form");
    if (out.status == FibrationStatus::kIsotropic && out.diagnosis.zero &&
        form.eval(*out.diagnosis.zero) != 0)
        throw std::logic_error("abelian_fibration_obstruction: recorded zero is invalid");
    return out;
}

}  // namespace k3density
