#ifndef HOMALG_SYMPLECTIC_HPP
#define HOMALG_SYMPLECTIC_HPP

#include "homalg/koszul.hpp"

namespace homalg {

struct DegeneratePairing : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotSymplecticFixedSpace : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polynomial symplectic vector space Q[x_1..x_n, xi_1..xi_n] with
// omega = sum_i dx_i ^ dxi_i; variables 0..n-1 are x, n..2n-1 are xi.

inline Element poly_partial(const Element& f, int i) {
    Element out;
    for (const auto& [m, c] : f) {
        if (m[i] == 0) continue;
        Mono d = m;
        d[i] -= 1;
        elem_add_to(out, d, c * m[i]);
    }
    return out;
}

// {f, g} = sum_i df/dxi_i dg/dx_i - df/dx_i dg/dxi_i; normalized so that the
// bracket of leading symbols matches the commutator: {xi, x} = 1 = [xi, x].
inline Element poisson_bracket(int n, const Element& f, const Element& g) {
    PolynomialAlgebra ring(2 * n);
    Element out;
    for (int i = 0; i < n; ++i) {
        elem_axpy(out, Rat(1), ring.elem_mul(poly_partial(f, n + i), poly_partial(g, i)));
        elem_axpy(out, Rat(-1), ring.elem_mul(poly_partial(f, i), poly_partial(g, n + i)));
    }
    return out;
}

// delta(f dX_{i_1} ^ ... ^ dX_{i_k}) = sum_j (-1)^{j-1} {f, X_{i_j}} dX_{I minus i_j};
// lowers form degree by one and total weight by two.
inline PolyForm brylinski_delta(int n, const PolyForm& a) {
    PolyForm out;
    for (const auto& [key, c] : a) {
        for (size_t j = 0; j < key.I.size(); ++j) {
            Rat sign((j % 2 == 0) ? c : -c);
            Mono xv(2 * n, 0);
            xv[key.I[j]] = 1;
            Element br = poisson_bracket(n, Element{{key.m, Rat(1)}}, Element{{xv, Rat(1)}});
            IndexSet rest;
            for (size_t t = 0; t < key.I.size(); ++t)
                if (t != j) rest.push_back(key.I[t]);
            for (const auto& [m, v] : br) form_add_to(out, {m, rest}, sign * v);
        }
    }
    return out;
}

// omega^n / n! as an explicit top form (the symplectic volume).
inline PolyForm symplectic_volume(int n) {
    Mono one(2 * n, 0);
    PolyForm omega;
    for (int i = 0; i < n; ++i) form_add_to(omega, {one, {i, n + i}}, Rat(1));
    PolyForm vol{{{one, {}}, Rat(1)}};
    for (int i = 0; i < n; ++i) vol = form_wedge(vol, omega);
    PolyForm out;
    form_axpy(out, Rat(1, factorial(n)), vol);
    return out;
}

// Hodge-type star for the symplectic pairing: beta ^ *alpha = G_k(beta, alpha)
// vol for all k-forms beta, extended function-linearly over the coefficients.
class SymplecticStar {
public:
    explicit SymplecticStar(int n) : n_(n) {
        Mono one(2 * n, 0);
        PolyForm vol = symplectic_volume(n);
        IndexSet top;
        for (int i = 0; i < 2 * n; ++i) top.push_back(i);
        Rat vcoeff = vol.at({one, top});
        for (int k = 0; k <= 2 * n; ++k) {
            std::vector<IndexSet> dom = index_sets(k), cod = index_sets(2 * n - k);
            // M[b][j]: coefficient of dX_B ^ dX_J on the volume form
            SparseMatrix m(static_cast<int>(dom.size()), static_cast<int>(cod.size()));
            for (size_t bi = 0; bi < dom.size(); ++bi)
                for (size_t j = 0; j < cod.size(); ++j) {
                    IndexSet merged;
                    int sign = merge_indices(dom[bi], cod[j], merged);
                    if (sign != 0)
                        m.set(static_cast<int>(bi), static_cast<int>(j), Rat(sign) / vcoeff);
                }
            for (const auto& alpha : dom) {
                std::vector<Rat> rhs(dom.size());
                for (size_t bi = 0; bi < dom.size(); ++bi) rhs[bi] = pairing(dom[bi], alpha);
                auto x = solve(m, rhs);
                if (!x) throw DegeneratePairing("symplectic pairing does not determine the star");
                PolyForm img;
                for (size_t j = 0; j < cod.size(); ++j)
                    if ((*x)[j] != 0) img[{one, cod[j]}] = (*x)[j];
                table_.emplace(alpha, std::move(img));
            }
        }
    }

    int n() const { return n_; }

    PolyForm apply(const PolyForm& a) const {
        PolyForm out;
        for (const auto& [key, c] : a)
            for (const auto& [sk, sc] : table_.at(key.I)) form_add_to(out, {key.m, sk.I}, c * sc);
        return out;
    }

    // determinant pairing of constant k-forms induced by G(dx_i, dxi_i) = 1
    Rat pairing(const IndexSet& a, const IndexSet& b) const {
        int k = static_cast<int>(a.size());
        if (k != static_cast<int>(b.size())) return Rat(0);
        if (k == 0) return Rat(1);
        std::vector<std::vector<Rat>> g(k, std::vector<Rat>(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) g[i][j] = g1(a[i], b[j]);
        return det(g);
    }

private:
    Rat g1(int i, int j) const {
        if (j == i + n_) return Rat(-1);
        if (i == j + n_) return Rat(1);
        return Rat(0);
    }

    static Rat det(std::vector<std::vector<Rat>> m) {
        int k = static_cast<int>(m.size());
        Rat d(1);
        for (int c = 0; c < k; ++c) {
            int p = -1;
            for (int r = c; r < k; ++r)
                if (m[r][c] != 0) {
                    p = r;
                    break;
                }
            if (p < 0) return Rat(0);
            if (p != c) {
                std::swap(m[p], m[c]);
                d = -d;
            }
            d *= m[c][c];
            for (int r = c + 1; r < k; ++r) {
                if (m[r][c] == 0) continue;
                Rat f = m[r][c] / m[c][c];
                for (int t = c; t < k; ++t) m[r][t] -= f * m[c][t];
            }
        }
        return d;
    }

    std::vector<IndexSet> index_sets(int k) const {
        std::vector<IndexSet> out;
        IndexSet cur;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(cur.size()) == k) {
                out.push_back(cur);
                return;
            }
            for (int i = start; i < 2 * n_; ++i) {
                cur.push_back(i);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
        return out;
    }

    int n_;
    std::map<IndexSet, PolyForm> table_;
};

// alpha = i(Xi)omega = sum_i xi_i dx_i for the vertical Euler field
// Xi = sum_i xi_i d/dxi_i, in the orientation matching the bracket above.
inline PolyForm euler_alpha(int n) {
    PolyForm a;
    for (int i = 0; i < n; ++i) {
        Mono m(2 * n, 0);
        m[n + i] = 1;
        a[{m, {i}}] = Rat(1);
    }
    return a;
}

// eigenvalue of the Lie derivative along the vertical Euler field: total
// xi-degree of coefficient and index set combined
inline long xi_mass(int n, const FormKey& key) {
    long s = 0;
    for (int i = n; i < 2 * n; ++i) s += key.m[i];
    for (int i : key.I)
        if (i >= n) ++s;
    return s;
}

inline long x_mass(int n, const FormKey& key) {
    long a = 0;
    for (int i = 0; i < n; ++i) a += key.m[i];
    for (int i : key.I)
        if (i < n) ++a;
    return a;
}

inline PolyForm lie_euler(int n, const PolyForm& a) {
    PolyForm out;
    for (const auto& [key, c] : a) form_add_to(out, key, c * xi_mass(n, key));
    return out;
}

// The coordinate functionals of the projection V -> V^gamma along the
// symplectic orthogonal complement, as an m x 2n substitution matrix: pulling
// a form on V^gamma back through these rows extends it to V.
// Throws when omega restricted to the fixed space is degenerate.
inline DenseMat symplectic_extension_substitution(int n, const Subspace& fixed) {
    int N = 2 * n, m = fixed.dim();
    // ambient omega matrix
    auto omega = [&](int i, int j) -> Rat {
        if (j == i + n) return Rat(1);
        if (i == j + n) return Rat(-1);
        return Rat(0);
    };
    // Gram matrix of omega on the fixed-space basis
    DenseMat b(m, std::vector<Rat>(N, Rat(0)));
    for (int r = 0; r < m; ++r)
        for (const auto& [j, v] : fixed.basis().row(r)) b[r][j] = v;
    DenseMat gram(m, std::vector<Rat>(m, Rat(0)));
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) gram[r][s] += b[r][i] * omega(i, j) * b[s][j];
    if (!dense_inverse(gram)) throw NotSymplecticFixedSpace("omega degenerates on the fixed space");
    // symplectic orthogonal: kernel of v -> B Omega v
    SparseMatrix bo(m, N);
    for (int r = 0; r < m; ++r)
        for (int i = 0; i < N; ++i) {
            Rat acc(0);
            for (int j = 0; j < N; ++j) acc += b[r][j] * omega(j, i);
            if (acc != 0) bo.set(r, i, acc);
        }
    Subspace comp = kernel_basis(bo);
    if (comp.dim() != N - m) throw NotSymplecticFixedSpace("orthogonal complement has wrong dimension");
    // change of basis: rows are the fixed basis then the complement basis
    DenseMat mt(N, std::vector<Rat>(N, Rat(0)));
    for (int r = 0; r < m; ++r)
        for (int j = 0; j < N; ++j) mt[j][r] = b[r][j];
    for (int r = 0; r < N - m; ++r)
        for (const auto& [j, v] : comp.basis().row(r)) mt[j][m + r] = v;
    auto inv = dense_inverse(mt);
    if (!inv) throw NotSymplecticFixedSpace("fixed space and complement do not span");
    DenseMat s(m, std::vector<Rat>(N));
    for (int r = 0; r < m; ++r)
        for (int j = 0; j < N; ++j) s[r][j] = (*inv)[r][j];
    return s;
}

}  // namespace homalg

#endif
