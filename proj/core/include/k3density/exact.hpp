#pragma once

#include <gmpxx.h>

#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3density {

/// Arbitrary-precision signed integer. All verdict-affecting arithmetic in
/// this library runs on these; no floating point anywhere.
using Int = mpz_class;

/// Exact rational, always reduced with positive denominator.
using Rat = mpq_class;

/// Reduced rational from an integer pair (mpq_class alone does not canonicalize).
Rat make_rat(const Int& num, const Int& den);

/// Floor of the square root. Requires n >= 0.
Int int_sqrt(const Int& n);

bool is_perfect_square(const Int& n);

/// Dense integer matrix. Dimensions stay tiny here (<= 4 in practice,
/// hard-capped at 8); everything is exact cofactor-style arithmetic.
class IntMatrix {
public:
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Int& at(std::size_t i, std::size_t j);
    const Int& at(std::size_t i, std::size_t j) const;

    IntMatrix transpose() const;

    /// Exact determinant by cofactor expansion. Requires a square matrix.
    Int det() const;

    std::vector<Int> mul_vec(const std::vector<Int>& v) const;

    std::string to_string() const;

private:
    std::size_t rows_, cols_;
    std::vector<Int> data_;  // row-major
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
bool operator==(const IntMatrix& a, const IntMatrix& b);

/// Integer polynomial, coefficients ascending by degree, trailing zeros
/// stripped (so the leading coefficient is nonzero unless the polynomial
/// is zero).
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Int> coeffs);
    IntPolynomial(std::initializer_list<long> coeffs);

    static IntPolynomial monomial(std::size_t degree, const Int& coeff = 1);

    bool is_zero() const { return coeffs_.empty(); }
    /// Degree, or -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
    const Int& coeff(std::size_t i) const;
    const Int& leading() const;
    const std::vector<Int>& coeffs() const { return coeffs_; }

    Int eval(const Int& x) const;
    Rat eval(const Rat& x) const;
    /// Horner evaluation at a square matrix (constant term times identity).
    IntMatrix eval_matrix(const IntMatrix& m) const;

    IntPolynomial derivative() const;

    /// Exact division over the integers: returns the quotient iff
    /// *this == q * divisor with q integral, otherwise nullopt.
    std::optional<IntPolynomial> divide_exact(const IntPolynomial& divisor) const;

    std::string to_string(const std::string& var = "t") const;

private:
    std::vector<Int> coeffs_;
    void normalize();
};

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
bool operator==(const IntPolynomial& a, const IntPolynomial& b);

/// Closed rational interval [lower, upper].
struct RationalInterval {
    Rat lower;
    Rat upper;

    Rat width() const { return upper - lower; }
    bool contains(const Rat& x) const { return lower <= x && x <= upper; }
};

/// det(tI - M) with exact integer coefficients; degree = dim(M).
/// Throws std::invalid_argument for non-square input.
IntPolynomial char_poly(const IntMatrix& m);

/// True iff M^T * G * M == G entrywise. G must be symmetric, dimensions
/// must agree.
bool is_isometry(const IntMatrix& m, const IntMatrix& gram);

/// n-th cyclotomic polynomial, by the recursive exact-division formula.
IntPolynomial cyclotomic_polynomial(unsigned long n);

struct CyclotomicFactor {
    unsigned long index;  // n of Phi_n
    IntPolynomial poly;
};

/// Every irreducible cyclotomic polynomial dividing p, found by trial
/// division by Phi_n over all n with phi(n) <= deg p. Complete for the
/// degrees handled here. Throws on the zero polynomial.
std::vector<CyclotomicFactor> cyclotomic_root_of_unity_part(const IntPolynomial& p);

/// Interval of width <= `width` containing the largest real root of p,
/// which must be > 1 (throws std::domain_error otherwise). Exact Sturm
/// bisection; collapses to a point when the root is rational and hit.
RationalInterval spectral_radius_bounds(const IntPolynomial& p, const Rat& width);

}  // namespace k3density
