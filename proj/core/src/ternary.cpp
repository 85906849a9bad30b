#include "k3density/ternary.hpp"

#include <algorithm>

namespace k3density {

TernaryForm::TernaryForm(IntMatrix g) : gram(std::move(g)) {
    if (gram.rows() != 3 || gram.cols() != 3)
        throw std::invalid_argument("TernaryForm: 3x3 matrix required");
    if (!(gram.transpose() == gram))
        throw std::invalid_argument("TernaryForm: matrix not symmetric");
    if (gram.det() == 0) throw std::invalid_argument("TernaryForm: degenerate form");
}

Int TernaryForm::eval(const Vec3& v) const { return pair(v, v); }

Int TernaryForm::pair(const Vec3& v, const Vec3& w) const {
    Int acc = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) acc += gram.at(i, j) * v[i] * w[j];
    return acc;
}

std::vector<Int> prime_factors(Int n) {
    n = abs(n);
    std::vector<Int> out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

Int squarefree_part(const Int& n) {
    if (n == 0) return 0;
    Int m = abs(n), result = 1;
    for (Int p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p != 0) continue;
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e % 2) result *= p;
    }
    result *= m;  // remaining prime, exponent 1
    return n < 0 ? -result : result;
}

namespace {

int legendre(const Int& a, const Int& p) {
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

// v_p(n) and the unit part
std::pair<long, Int> split_valuation(Int n, const Int& p) {
    long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return {v, n};
}

}  // namespace

int hilbert_symbol(const Int& a, const Int& b, const Int& p) {
    if (a == 0 || b == 0) throw std::invalid_argument("hilbert_symbol: zero argument");
    if (p == -1) return (a < 0 && b < 0) ? -1 : 1;
    if (p < 2) throw std::invalid_argument("hilbert_symbol: invalid place");
    if (p == 2) {
        auto [alpha, u] = split_valuation(a, 2);
        auto [beta, v] = split_valuation(b, 2);
        auto eps = [](const Int& x) { return ((x - 1) / 2) % 2 != 0; };   // (x-1)/2 mod 2
        auto omega = [](const Int& x) { return ((x * x - 1) / 8) % 2 != 0; };  // (x^2-1)/8 mod 2
        bool exp = (eps(u) && eps(v)) ^ ((alpha % 2) && omega(v)) ^ ((beta % 2) && omega(u));
        return exp ? -1 : 1;
    }
    auto [alpha, u] = split_valuation(a, p);
    auto [beta, v] = split_valuation(b, p);
    int sym = 1;
    if ((alpha % 2) && (beta % 2) && ((p - 1) / 2) % 2 != 0) sym = -sym;
    if (beta % 2) sym *= legendre(u, p);
    if (alpha % 2) sym *= legendre(v, p);
    return sym;
}

namespace {

// symmetric Gaussian diagonalization over Q; returns the diagonal entries
std::array<Rat, 3> rational_diagonal(const IntMatrix& gram) {
    Rat g[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g[i][j] = Rat(gram.at(i, j));

    auto swap_basis = [&](int i, int j) {
        for (int k = 0; k < 3; ++k) std::swap(g[i][k], g[j][k]);
        for (int k = 0; k < 3; ++k) std::swap(g[k][i], g[k][j]);
    };
    auto add_basis = [&](int i, int j) {  // e_i += e_j
        for (int k = 0; k < 3; ++k) g[i][k] += g[j][k];
        for (int k = 0; k < 3; ++k) g[k][i] += g[k][j];
    };

    for (int step = 0; step < 3; ++step) {
        if (g[step][step] == 0) {
            int found = -1;
            for (int i = step + 1; i < 3; ++i)
                if (g[i][i] != 0) found = i;
            if (found >= 0) {
                swap_basis(step, found);
            } else {
                // all remaining diagonal entries vanish; a nonzero
                // off-diagonal pair exists (nondegeneracy)
                for (int i = step; i < 3 && g[step][step] == 0; ++i)
                    for (int j = i + 1; j < 3; ++j)
                        if (g[i][j] != 0) {
                            if (i != step) swap_basis(step, i);
                            add_basis(step, j);
                            break;
                        }
            }
        }
        if (g[step][step] == 0) throw std::logic_error("rational_diagonal: pivot not found");
        for (int i = step + 1; i < 3; ++i) {
            if (g[i][step] == 0) continue;
            Rat c = g[i][step] / g[step][step];
            // e_i -= c e_step
            for (int k = 0; k < 3; ++k) g[i][k] -= c * g[step][k];
            for (int k = 0; k < 3; ++k) g[k][i] -= c * g[k][step];
        }
    }
    return {g[0][0], g[1][1], g[2][2]};
}

// expanding search for a nontrivial zero: pick a pivot coordinate with
// nonzero diagonal and solve the resulting quadratic exactly
std::optional<Vec3> zero_search(const TernaryForm& f, const Int& bound, bool expanding) {
    const IntMatrix& G = f.gram;
    for (std::size_t k = 0; k < 3; ++k)
        if (G.at(k, k) == 0) {
            Vec3 v{Int(0), Int(0), Int(0)};
            v[k] = 1;
            return v;  // basis vector is already isotropic
        }

    // pivot: smallest |diagonal| (ties: lower index)
    std::size_t piv = 0;
    for (std::size_t k = 1; k < 3; ++k)
        if (abs(G.at(k, k)) < abs(G.at(piv, piv))) piv = k;
    const std::size_t i = (piv == 0) ? 1 : 0;
    const std::size_t j = (piv == 2) ? 1 : 2;

    const Int A = G.at(piv, piv);
    auto try_pair = [&](const Int& xi, const Int& xj) -> std::optional<Vec3> {
        // A z^2 + B z + C = 0 with z the pivot coordinate
        Int B = 2 * (G.at(piv, i) * xi + G.at(piv, j) * xj);
        Int C = G.at(i, i) * xi * xi + 2 * G.at(i, j) * xi * xj + G.at(j, j) * xj * xj;
        Int disc = B * B - 4 * A * C;
        if (!is_perfect_square(disc)) return std::nullopt;
        Int s = int_sqrt(disc);
        for (const Int& root_num : {Int(-B + s), Int(-B - s)}) {
            if (root_num % (2 * A) != 0) continue;
            Int z = root_num / (2 * A);
            if (!expanding && abs(z) > bound) continue;
            Vec3 v{Int(0), Int(0), Int(0)};
            v[piv] = z;
            v[i] = xi;
            v[j] = xj;
            if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
            if (f.eval(v) != 0) throw std::logic_error("zero_search: candidate not a zero");
            return v;
        }
        return std::nullopt;
    };

    for (Int m = 0; m <= bound; ++m) {
        // perimeter of the shell max(|xi|, |xj|) == m
        for (Int xi = -m; xi <= m; ++xi) {
            if (abs(xi) == m) {
                for (Int xj = -m; xj <= m; ++xj)
                    if (auto v = try_pair(xi, xj)) return v;
            } else {
                if (auto v = try_pair(xi, -m)) return v;
                if (auto v = try_pair(xi, m)) return v;
            }
        }
    }
    return std::nullopt;
}

Vec3 make_primitive(Vec3 v) {
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

IsotropyDiagnosis decide_isotropy(const TernaryForm& f) {
    IsotropyDiagnosis diag;
    auto d = rational_diagonal(f.gram);
    for (int k = 0; k < 3; ++k) {
        if (d[k] == 0) throw std::logic_error("decide_isotropy: degenerate diagonal");
        diag.diagonal[static_cast<std::size_t>(k)] = squarefree_part(d[k].get_num() * d[k].get_den());
    }
    const Int& d1 = diag.diagonal[0];
    const Int& d2 = diag.diagonal[1];
    const Int& d3 = diag.diagonal[2];

    // <d1, d2, d3> isotropic over Q_p  iff  (-d1 d3, -d2 d3)_p = 1
    std::vector<Int> places{Int(-1), Int(2)};
    for (const Int& p : prime_factors(d1 * d2 * d3))
        if (p != 2) places.push_back(p);
    std::sort(places.begin() + 1, places.end());

    for (const Int& p : places)
        if (hilbert_symbol(-d1 * d3, -d2 * d3, p) != 1) diag.obstructing_places.push_back(p);

    if (!diag.obstructing_places.empty()) {
        diag.status = IsotropyStatus::kAnisotropic;
        return diag;
    }

    diag.status = IsotropyStatus::kIsotropic;
    // a zero exists by Hasse-Minkowski; minimal ones are small for our
    // magnitudes (Holzer-type bounds), the cap only stops a broken caller
    auto z = zero_search(f, Int(1000000), true);
    if (!z) throw std::logic_error("decide_isotropy: local tests passed but no zero found");
    diag.zero = make_primitive(*z);
    return diag;
}

std::optional<Vec3> exhaustive_zero_search(const TernaryForm& f, const Int& bound) {
    if (bound < 0) throw std::invalid_argument("exhaustive_zero_search: negative bound");
    auto z = zero_search(f, bound, false);
    if (!z) return std::nullopt;
    // keep only zeros actually inside the box (pivot coordinate included)
    for (const auto& c : *z)
        if (abs(c) > bound) return std::nullopt;
    return z;
}

}  // namespace k3density
