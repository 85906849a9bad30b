#include "k3density/exact.hpp"

#include <algorithm>
#include <sstream>

namespace k3density {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Int int_sqrt(const Int& n) {
    if (n < 0) throw std::invalid_argument("int_sqrt: negative argument");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_perfect_square(const Int& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// ---------------------------------------------------------------------------
// IntMatrix

namespace {
constexpr std::size_t kMaxDim = 8;
}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0 || rows > kMaxDim || cols > kMaxDim)
        throw std::invalid_argument("IntMatrix: unsupported dimensions");
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    : IntMatrix(rows.size(), rows.size() ? rows.begin()->size() : 0) {
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != cols_)
            throw std::invalid_argument("IntMatrix: ragged initializer");
        std::size_t j = 0;
        for (long v : row) at(i, j++) = v;
        ++i;
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Int& IntMatrix::at(std::size_t i, std::size_t j) {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("IntMatrix::at");
    return data_[i * cols_ + j];
}

const Int& IntMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw std::out_of_range("IntMatrix::at");
    return data_[i * cols_ + j];
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
}

Int IntMatrix::det() const {
    if (!is_square()) throw std::invalid_argument("det: non-square matrix");
    const std::size_t n = rows_;
    if (n == 1) return at(0, 0);
    if (n == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    Int d = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (at(0, j) == 0) continue;
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = at(r, c);
            }
        }
        Int term = at(0, j) * minor.det();
        if (j % 2 == 0)
            d += term;
        else
            d -= term;
    }
    return d;
}

std::vector<Int> IntMatrix::mul_vec(const std::vector<Int>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("mul_vec: size mismatch");
    std::vector<Int> out(rows_, Int(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += at(i, j) * v[j];
    return out;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i == 0 ? "[" : " ") << "[";
        for (std::size_t j = 0; j < cols_; ++j) {
            if (j) os << ", ";
            os << at(i, j).get_str();
        }
        os << "]" << (i + 1 == rows_ ? "]" : "\n");
    }
    return os.str();
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product: dimension mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.at(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c.at(i, j) += a.at(i, k) * b.at(k, j);
        }
    return c;
}

IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix sum: dimension mismatch");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) + b.at(i, j);
    return c;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix difference: dimension mismatch");
    IntMatrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) - b.at(i, j);
    return c;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.at(i, j) != b.at(i, j)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// IntPolynomial

IntPolynomial::IntPolynomial(std::vector<Int> coeffs) : coeffs_(std::move(coeffs)) {
    normalize();
}

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
    coeffs_.assign(coeffs.begin(), coeffs.end());
    normalize();
}

IntPolynomial IntPolynomial::monomial(std::size_t degree, const Int& coeff) {
    std::vector<Int> c(degree + 1, Int(0));
    c[degree] = coeff;
    return IntPolynomial(std::move(c));
}

void IntPolynomial::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Int& IntPolynomial::coeff(std::size_t i) const {
    static const Int zero(0);
    return i < coeffs_.size() ? coeffs_[i] : zero;
}

const Int& IntPolynomial::leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading: zero polynomial");
    return coeffs_.back();
}

Int IntPolynomial::eval(const Int& x) const {
    Int acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Rat IntPolynomial::eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
}

IntMatrix IntPolynomial::eval_matrix(const IntMatrix& m) const {
    if (!m.is_square()) throw std::invalid_argument("eval_matrix: non-square matrix");
    const std::size_t n = m.rows();
    IntMatrix acc(n, n);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * m;
        for (std::size_t i = 0; i < n; ++i) acc.at(i, i) += *it;
    }
    return acc;
}

IntPolynomial IntPolynomial::derivative() const {
    if (coeffs_.size() <= 1) return IntPolynomial();
    std::vector<Int> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * Int(i);
    return IntPolynomial(std::move(d));
}

std::optional<IntPolynomial> IntPolynomial::divide_exact(const IntPolynomial& divisor) const {
    if (divisor.is_zero()) throw std::invalid_argument("divide_exact: zero divisor");
    if (is_zero()) return IntPolynomial();
    if (degree() < divisor.degree()) return std::nullopt;
    // long division over Q, then integrality check
    std::vector<Rat> rem(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) rem[i] = Rat(coeffs_[i]);
    const long dd = divisor.degree();
    const Rat lead(divisor.leading());
    std::vector<Rat> quot(degree() - dd + 1, Rat(0));
    for (long k = degree() - dd; k >= 0; --k) {
        Rat q = rem[k + dd] / lead;
        quot[k] = q;
        if (q != 0)
            for (long j = 0; j <= dd; ++j) rem[k + j] -= q * Rat(divisor.coeff(j));
    }
    for (long j = 0; j < dd; ++j)
        if (rem[j] != 0) return std::nullopt;
    std::vector<Int> qi(quot.size());
    for (std::size_t i = 0; i < quot.size(); ++i) {
        if (quot[i].get_den() != 1) return std::nullopt;
        qi[i] = quot[i].get_num();
    }
    return IntPolynomial(std::move(qi));
}

std::string IntPolynomial::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (long i = degree(); i >= 0; --i) {
        const Int& c = coeff(static_cast<std::size_t>(i));
        if (c == 0) continue;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Int a = abs(c);
        if (a != 1 || i == 0) os << a.get_str();
        if (i >= 1) {
            os << var;
            if (i >= 2) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.coeffs().size(), b.coeffs().size()), Int(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
    return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<Int> c(std::max(a.coeffs().size(), b.coeffs().size()), Int(0));
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
    return IntPolynomial(std::move(c));
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.is_zero() || b.is_zero()) return IntPolynomial();
    std::vector<Int> c(a.coeffs().size() + b.coeffs().size() - 1, Int(0));
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
        if (a.coeff(i) == 0) continue;
        for (std::size_t j = 0; j < b.coeffs().size(); ++j)
            c[i + j] += a.coeff(i) * b.coeff(j);
    }
    return IntPolynomial(std::move(c));
}

bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
    return a.coeffs() == b.coeffs();
}

// ---------------------------------------------------------------------------
// char_poly / is_isometry

namespace {

// determinant of a small polynomial matrix by cofactor expansion
IntPolynomial poly_det(std::vector<std::vector<IntPolynomial>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    IntPolynomial d;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<IntPolynomial>> minor(n - 1);
        for (std::size_t r = 1; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) minor[r - 1].push_back(m[r][c]);
        IntPolynomial term = m[0][j] * poly_det(minor);
        if (j % 2 == 0)
            d = d + term;
        else
            d = d - term;
    }
    return d;
}

}  // namespace

IntPolynomial char_poly(const IntMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("char_poly: non-square matrix");
    const std::size_t n = m.rows();
    std::vector<std::vector<IntPolynomial>> p(n, std::vector<IntPolynomial>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                p[i][j] = IntPolynomial({0, 1}) - IntPolynomial(std::vector<Int>{m.at(i, j)});
            else
                p[i][j] = IntPolynomial(std::vector<Int>{-m.at(i, j)});
        }
    return poly_det(p);
}

bool is_isometry(const IntMatrix& m, const IntMatrix& gram) {
    if (!m.is_square() || !gram.is_square() || m.rows() != gram.rows())
        throw std::invalid_argument("is_isometry: dimension mismatch");
    if (!(gram.transpose() == gram))
        throw std::invalid_argument("is_isometry: gram matrix not symmetric");
    return m.transpose() * gram * m == gram;
}

// ---------------------------------------------------------------------------
// cyclotomic polynomials

namespace {

unsigned long euler_phi(unsigned long n) {
    unsigned long result = n;
    for (unsigned long p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

}  // namespace

IntPolynomial cyclotomic_polynomial(unsigned long n) {
    if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    // Phi_n = (t^n - 1) / prod_{d | n, d < n} Phi_d
    IntPolynomial num = IntPolynomial::monomial(n) - IntPolynomial({1});
    for (unsigned long d = 1; d < n; ++d) {
        if (n % d) continue;
        auto q = num.divide_exact(cyclotomic_polynomial(d));
        if (!q) throw std::logic_error("cyclotomic_polynomial: division failed");
        num = *q;
    }
    return num;
}

std::vector<CyclotomicFactor> cyclotomic_root_of_unity_part(const IntPolynomial& p) {
    if (p.is_zero())
        throw std::invalid_argument("cyclotomic_root_of_unity_part: zero polynomial");
    const auto deg = static_cast<unsigned long>(p.degree());
    std::vector<CyclotomicFactor> out;
    if (deg == 0) return out;
    // phi(n) >= sqrt(n/2), so phi(n) <= deg forces n <= 2*deg^2
    for (unsigned long n = 1; n <= 2 * deg * deg + 1; ++n) {
        if (euler_phi(n) > deg) continue;
        IntPolynomial phi_n = cyclotomic_polynomial(n);
        if (p.divide_exact(phi_n)) out.push_back({n, std::move(phi_n)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sturm sequences and the spectral-radius bracket

namespace {

using RatPoly = std::vector<Rat>;  // ascending coefficients

void rp_normalize(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

RatPoly rp_from(const IntPolynomial& p) {
    RatPoly out(p.coeffs().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Rat(p.coeff(i));
    return out;
}

Rat rp_eval(const RatPoly& p, const Rat& x) {
    Rat acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

RatPoly rp_derivative(const RatPoly& p) {
    if (p.size() <= 1) return {};
    RatPoly d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Rat(Int(i));
    return d;
}

// remainder of a by b (b nonzero)
RatPoly rp_rem(RatPoly a, const RatPoly& b) {
    rp_normalize(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rat q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        rp_normalize(a);
    }
    return a;
}

RatPoly rp_gcd(RatPoly a, RatPoly b) {
    rp_normalize(a);
    rp_normalize(b);
    while (!b.empty()) {
        RatPoly r = rp_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

RatPoly rp_div_exact(const RatPoly& a, const RatPoly& b) {
    RatPoly rem = a;
    rp_normalize(rem);
    RatPoly quot(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, Rat(0));
    while (rem.size() >= b.size() && !rem.empty()) {
        Rat q = rem.back() / b.back();
        std::size_t shift = rem.size() - b.size();
        quot[shift] = q;
        for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] -= q * b[i];
        rp_normalize(rem);
    }
    return quot;
}

std::vector<RatPoly> sturm_chain(const RatPoly& p) {
    std::vector<RatPoly> chain;
    chain.push_back(p);
    chain.push_back(rp_derivative(p));
    rp_normalize(chain.back());
    while (chain.back().size() > 0 && chain[chain.size() - 2].size() > 1) {
        RatPoly r = rp_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sturm_variations(const std::vector<RatPoly>& chain, const Rat& x) {
    int count = 0, prev = 0;
    for (const auto& q : chain) {
        if (q.empty()) continue;
        int s = sgn(rp_eval(q, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

// number of distinct real roots of squarefree p in the open interval (a, b);
// neither endpoint may be a root
int sturm_count(const std::vector<RatPoly>& chain, const Rat& a, const Rat& b) {
    return sturm_variations(chain, a) - sturm_variations(chain, b);
}

}  // namespace

RationalInterval spectral_radius_bounds(const IntPolynomial& p, const Rat& width) {
    if (p.is_zero() || p.degree() < 1)
        throw std::invalid_argument("spectral_radius_bounds: non-constant polynomial required");
    if (width <= 0) throw std::invalid_argument("spectral_radius_bounds: width must be positive");

    RatPoly rp = rp_from(p);
    RatPoly g = rp_gcd(rp, rp_derivative(rp));
    RatPoly sf = (g.size() > 1) ? rp_div_exact(rp, g) : rp;  // squarefree part
    rp_normalize(sf);

    // Sturm endpoints must not be roots: deflate any root at exactly 1
    // (it does not count as "> 1" anyway).
    const Rat one(1);
    const RatPoly t_minus_1{Rat(-1), Rat(1)};
    while (sf.size() > 1 && rp_eval(sf, one) == 0) sf = rp_div_exact(sf, t_minus_1);
    if (sf.size() <= 1)
        throw std::domain_error("spectral_radius_bounds: no real root greater than 1");

    // Cauchy bound: every root has |r| < 1 + max |a_i / a_d|
    Rat bound = 0;
    for (std::size_t i = 0; i + 1 < sf.size(); ++i) {
        Rat q = abs(sf[i] / sf.back());
        if (q > bound) bound = q;
    }
    bound += 2;  // strict bound, with margin

    auto chain = sturm_chain(sf);
    if (sturm_count(chain, one, bound) == 0)
        throw std::domain_error("spectral_radius_bounds: no real root greater than 1");

    Rat lo = one, hi = bound;
    bool integer_checked = false;
    // invariant: the largest real root lies in (lo, hi], and sf(hi) != 0 unless hi is it
    while (hi - lo > width) {
        if (!integer_checked && hi - lo < 1) {
            // collapse exactly onto an integer top root (the rational case
            // that actually occurs); at most one integer fits in (lo, hi]
            integer_checked = true;
            Int n;
            mpz_cdiv_q(n.get_mpz_t(), lo.get_num().get_mpz_t(), lo.get_den().get_mpz_t());
            Rat cand(n);
            if (cand > lo && cand <= hi && rp_eval(sf, cand) == 0 &&
                sturm_count(chain, cand, hi) == 0)
                return {cand, cand};
        }
        Rat mid = (lo + hi) / 2;
        if (rp_eval(sf, mid) == 0) {
            if (sturm_count(chain, mid, hi) == 0) return {mid, mid};  // mid is the top root
            lo = mid;
            continue;
        }
        if (sturm_count(chain, mid, hi) >= 1)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

}  // namespace k3density
