#ifndef HOMALG_KOSZUL_HPP
#define HOMALG_KOSZUL_HPP

#include "homalg/forms.hpp"
#include "homalg/hochschild.hpp"

namespace homalg {

struct NotCommutative : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Koszul complex K(R : f_1..f_q): R (x) Lambda Q^q with the contraction
// differential delta(r (x) v_{i_1}^...^v_{i_l}) = sum_j (-1)^{j-1} (r f_{i_j})
// (x) v_{I minus i_j}. Each v_j carries weight 1, so the differential is
// weight-preserving for (at most) linear f_j and every (l, w) slice is finite.
class KoszulComplex {
public:
    KoszulComplex(AlgebraPtr ring, std::vector<Element> elements)
        : ring_(std::move(ring)), elements_(std::move(elements)) {
        // commutativity probe on all monomial pairs of small weight
        auto monos = ring_->monos_up_to(2);
        for (const auto& a : monos)
            for (const auto& b : monos)
                if (ring_->mono_mul(a, b) != ring_->mono_mul(b, a))
                    throw NotCommutative("Koszul complex needs a commutative ring");
        for (const auto& f : elements_)
            for (const auto& [m, c] : f)
                if (ring_->weight(m) != 1)
                    throw std::logic_error("Koszul elements must be homogeneous of weight 1");
    }

    const AlgebraPtr& ring() const { return ring_; }
    int count() const { return static_cast<int>(elements_.size()); }
    const Element& element(int j) const { return elements_[j]; }

    // basis of R_{w-l} (x) Lambda^l, as (monomial, index set) keys
    std::vector<FormKey> slice(int l, long w) const {
        std::vector<FormKey> out;
        if (l < 0 || l > count() || w < l) return out;
        std::vector<Mono> monos;
        for (const auto& m : ring_->monos_up_to(w - l))
            if (ring_->weight(m) == w - l) monos.push_back(m);
        std::vector<IndexSet> sets;
        IndexSet cur;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(cur.size()) == l) {
                sets.push_back(cur);
                return;
            }
            for (int i = start; i < count(); ++i) {
                cur.push_back(i);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
        for (const auto& m : monos)
            for (const auto& I : sets) out.push_back({m, I});
        return out;
    }

    PolyForm delta_of(const FormKey& key) const {
        PolyForm out;
        for (size_t j = 0; j < key.I.size(); ++j) {
            Rat sign((j % 2 == 0) ? 1 : -1);
            IndexSet rest;
            for (size_t t = 0; t < key.I.size(); ++t)
                if (t != j) rest.push_back(key.I[t]);
            for (const auto& [fm, fc] : elements_[key.I[j]])
                for (const auto& [m, c] : ring_->mono_mul(key.m, fm))
                    form_add_to(out, {m, rest}, sign * fc * c);
        }
        return out;
    }

    SparseMatrix delta_matrix(const std::vector<FormKey>& dom, const std::vector<FormKey>& cod) const {
        return form_operator_matrix([this](const FormKey& k) { return delta_of(k); }, dom, cod);
    }

    int homology(int l, long w) const {
        auto up = slice(l + 1, w), mid = slice(l, w), dn = slice(l - 1, w);
        return homology_dim(delta_matrix(up, mid), delta_matrix(mid, dn));
    }

private:
    AlgebraPtr ring_;
    std::vector<Element> elements_;
};

// K(R (x) R' : S join S') with the factor rings' variables concatenated;
// the slice bijection (r (x) v_I, r' (x) v'_J) -> r r' (x) v_{I join (J+q)}
// intertwines the differentials with sign +1 (indices of the first factor all
// precede the second).
inline KoszulComplex koszul_product(const KoszulComplex& k1, const KoszulComplex& k2) {
    int n1 = k1.ring()->vars(), n2 = k2.ring()->vars();
    auto ring = std::make_shared<PolynomialAlgebra>(n1 + n2);
    std::vector<Element> elems;
    for (int j = 0; j < k1.count(); ++j) {
        Element f;
        for (const auto& [m, c] : k1.element(j)) {
            Mono ext(n1 + n2, 0);
            for (int i = 0; i < n1; ++i) ext[i] = m[i];
            f[ext] = c;
        }
        elems.push_back(std::move(f));
    }
    for (int j = 0; j < k2.count(); ++j) {
        Element f;
        for (const auto& [m, c] : k2.element(j)) {
            Mono ext(n1 + n2, 0);
            for (int i = 0; i < n2; ++i) ext[n1 + i] = m[i];
            f[ext] = c;
        }
        elems.push_back(std::move(f));
    }
    return KoszulComplex(ring, std::move(elems));
}

// The image of a basis pair under the product identification.
inline FormKey koszul_split_key(const KoszulComplex& k1, const KoszulComplex& k2, const FormKey& a,
                                const FormKey& b) {
    int n1 = k1.ring()->vars(), n2 = k2.ring()->vars();
    FormKey out;
    out.m.assign(n1 + n2, 0);
    for (int i = 0; i < n1; ++i) out.m[i] = a.m[i];
    for (int i = 0; i < n2; ++i) out.m[n1 + i] = b.m[i];
    out.I = a.I;
    for (int j : b.I) out.I.push_back(j + k1.count());
    return out;
}

// The action map X_i -> sum_j M_ji X_j as ring elements.
inline std::vector<Element> koszul_twist_elements(int n, const DenseMat& gamma) {
    std::vector<Element> elems;
    for (int i = 0; i < n; ++i) {
        Element f;
        Mono xi(n, 0);
        xi[i] = 1;
        f[xi] = 1;
        for (int j = 0; j < n; ++j) {
            if (gamma[j][i] == 0) continue;
            Mono xj(n, 0);
            xj[i] = 0;
            xj[j] = 1;
            elem_add_to(f, xj, -gamma[j][i]);
        }
        elems.push_back(std::move(f));
    }
    return elems;
}

// Homology of K(Q[V] : {X_i - gamma(X_i)}) at (l, w); by the fixed-point
// theorem this equals the dimension of polynomial l-forms on V^gamma.
inline int twisted_via_koszul(int n, const DenseMat& gamma, int l, long w) {
    auto ring = std::make_shared<PolynomialAlgebra>(n);
    KoszulComplex K(ring, koszul_twist_elements(n, gamma));
    return K.homology(l, w);
}

// chi(a_0 (x) a_1 (x) ... (x) a_k) = (1/k!) a_0 da_1 ^ ... ^ da_k over a
// commutative polynomial-type base. The factorial sits here (and not on the
// antisymmetrization section below) so that the comparison of the first-page
// differential with the Poisson delta comes out with coefficient one.
inline PolyForm hkr_chi(const Algebra& base, const TwTensor& t) {
    PolyForm wedge{{{t[0], {}}, Rat(1)}};
    for (size_t i = 1; i < t.size(); ++i)
        wedge = form_wedge(wedge, exterior_d(PolyForm{{{t[i], {}}, Rat(1)}}));
    PolyForm out;
    form_axpy(out, Rat(1, factorial(static_cast<int>(t.size()) - 1)), wedge);
    return out;
}

inline PolyForm hkr_chi_comb(const Algebra& base, const TwTensorComb& comb) {
    PolyForm out;
    for (const auto& [t, c] : comb) form_axpy(out, c, hkr_chi(base, t));
    return out;
}

// E(f dX_{i_1} ^ ... ^ dX_{i_k}) = sum_pi sgn(pi) f (x) X_{i_pi(1)}
// (x) ... (x) X_{i_pi(k)}: the antisymmetrization right inverse of chi.
inline TwTensorComb hkr_E(int n, const FormKey& key) {
    TwTensorComb out;
    int k = static_cast<int>(key.I.size());
    std::vector<int> perm(key.I.begin(), key.I.end());
    std::sort(perm.begin(), perm.end());
    Rat scale(1);
    do {
        // permutation sign by inversion count
        int inv = 0;
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                if (perm[a] > perm[b]) ++inv;
        TwTensor t(1 + k, Mono(n, 0));
        t[0] = key.m;
        for (int a = 0; a < k; ++a) t[1 + a][perm[a]] = 1;
        tw_add_to(out, t, (inv % 2 == 0) ? scale : -scale);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline TwTensorComb hkr_E_form(int n, const PolyForm& form) {
    TwTensorComb out;
    for (const auto& [key, c] : form)
        for (const auto& [t, v] : hkr_E(n, key)) tw_add_to(out, t, c * v);
    return out;
}

// Basis matrix of the fixed subspace V^gamma as a column substitution
// X_i -> sum_s B_{s i} U_s (rows of B are the echelon basis vectors).
inline DenseMat fixed_space_substitution(const Subspace& fixed, int n) {
    DenseMat s(n, std::vector<Rat>(fixed.dim(), Rat(0)));
    for (int r = 0; r < fixed.dim(); ++r)
        for (const auto& [i, v] : fixed.basis().row(r)) s[i][r] = v;
    return s;
}

// The m x m matrix C of the action induced by M on V^gamma coordinates:
// B^T C = M^T B^T (column-wise solve); the induced substitution on u-forms.
inline DenseMat induced_fixed_action(const Subspace& fixed, const DenseMat& M) {
    int n = static_cast<int>(M.size());
    int m = fixed.dim();
    DenseMat bt = fixed_space_substitution(fixed, n);  // n x m, = B^T
    SparseMatrix lhs(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            if (bt[i][j] != 0) lhs.set(i, j, bt[i][j]);
    DenseMat c(m, std::vector<Rat>(m, Rat(0)));
    for (int col = 0; col < m; ++col) {
        std::vector<Rat> rhs(n, Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rhs[i] += M[j][i] * bt[j][col];
        auto x = solve(lhs, rhs);
        if (!x) throw std::logic_error("fixed space is not invariant under the centralizer");
        for (int r = 0; r < m; ++r) c[r][col] = (*x)[r];
    }
    return c;
}

// chi^gamma of a conjugacy-component chain: the averaged pullback form
// restricted to the fixed subspace, in V^gamma coordinates.
class ChiGamma {
public:
    ChiGamma(CrossedPtr alg, int class_id)
        : alg_(std::move(alg)), class_id_(class_id) {
        const auto& cls = alg_->classes()[class_id];
        gamma_ = cls.representative;
        centralizer_ = cls.centralizer;
        fixed_ = alg_->group().fixed_decomposition(gamma_).fixed;
        subst_ = fixed_space_substitution(fixed_, alg_->group().dim());
    }

    int gamma() const { return gamma_; }
    const Subspace& fixed() const { return fixed_; }
    int fixed_dim() const { return fixed_.dim(); }

    PolyForm of(const Tensor& t) const {
        const FiniteMatrixGroup& grp = alg_->group();
        std::vector<int> gs(t.size());
        for (size_t i = 0; i < t.size(); ++i) gs[i] = t[i].g;
        if (alg_->class_of_product(gs) != class_id_)
            throw WrongComponent("chain lies outside the requested conjugacy component");
        int gamma_prime = grp.identity();
        for (size_t i = 1; i < t.size(); ++i) gamma_prime = grp.mul(gamma_prime, gs[i]);
        gamma_prime = grp.mul(gamma_prime, gs[0]);
        PolyForm acc;
        Rat scale(Rat(1, static_cast<long>(centralizer_.size())) /
                  Rat(factorial(static_cast<int>(t.size()) - 1)));
        for (int h = 0; h < grp.order(); ++h) {
            if (grp.mul(grp.mul(h, gamma_prime), grp.inv(h)) != gamma_) continue;
            // factor 0 acted by gamma h g_0^{-1}; factor i >= 1 by h g_1...g_{i-1}
            int act0 = grp.mul(grp.mul(gamma_, h), grp.inv(gs[0]));
            PolyForm term = to_form(alg_->act(act0, t[0].m));
            int run = h;
            for (size_t i = 1; i < t.size(); ++i) {
                term = form_wedge(term, exterior_d(to_form(alg_->act(run, t[i].m))));
                run = grp.mul(run, gs[i]);
            }
            form_axpy(acc, scale, term);
        }
        return substitute_linear(acc, subst_);
    }

    PolyForm of_comb(const TensorComb& comb) const {
        PolyForm out;
        for (const auto& [t, c] : comb) form_axpy(out, c, of(t));
        return out;
    }

private:
    static PolyForm to_form(const Element& e) {
        PolyForm f;
        for (const auto& [m, c] : e) f[{m, {}}] = c;
        return f;
    }

    CrossedPtr alg_;
    int class_id_;
    int gamma_;
    std::vector<int> centralizer_;
    Subspace fixed_;
    DenseMat subst_;
};

// Dimension of the centralizer-invariant polynomial l-forms on V^gamma at
// weight w.
inline int invariant_forms_dim(const FiniteMatrixGroup& grp, int gamma, int l, long w,
                               const std::vector<int>& centralizer) {
    Subspace fixed = grp.fixed_decomposition(gamma).fixed;
    int m = fixed.dim();
    std::vector<FormKey> basis = form_basis(m, l, w);
    if (basis.empty()) return 0;
    std::map<int, SparseMatrix> rep;
    for (int g : centralizer) {
        DenseMat c = induced_fixed_action(fixed, grp.matrix(g));
        rep.emplace(g, form_operator_matrix(
                           [&](const FormKey& k) {
                               return substitute_linear(PolyForm{{k, Rat(1)}}, c);
                           },
                           basis, basis));
    }
    return rank(FiniteMatrixGroup::average_projector(grp, centralizer, rep));
}

}  // namespace homalg

#endif
