#ifndef HOMALG_FORMS_HPP
#define HOMALG_FORMS_HPP

#include <functional>

#include "homalg/algebra.hpp"

namespace homalg {

// Polynomial-coefficient differential forms on Q^n: finite rational
// combinations of f * dX_{i1} ^ ... ^ dX_{ik} with strictly increasing index
// sets. Default weight of a term is deg(f) + k.
using IndexSet = std::vector<int>;

struct FormKey {
    Mono m;      // coefficient monomial exponents
    IndexSet I;  // strictly increasing dX indices
    auto operator<=>(const FormKey&) const = default;
};
using PolyForm = std::map<FormKey, Rat>;

inline void form_add_to(PolyForm& dst, const FormKey& k, const Rat& c) {
    if (c == 0) return;
    Rat& slot = dst[k];
    slot += c;
    if (slot == 0) dst.erase(k);
}

inline void form_axpy(PolyForm& dst, const Rat& c, const PolyForm& src) {
    for (const auto& [k, v] : src) form_add_to(dst, k, c * v);
}

// Merges strictly increasing index sets, returning the shuffle sign, or 0 on
// overlap.
inline int merge_indices(const IndexSet& a, const IndexSet& b, IndexSet& out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    int inversions = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return 0;
        if (a[i] < b[j]) {
            out.push_back(a[i++]);
        } else {
            out.push_back(b[j++]);
            inversions += static_cast<int>(a.size() - i);
        }
    }
    while (i < a.size()) out.push_back(a[i++]);
    while (j < b.size()) out.push_back(b[j++]);
    return (inversions % 2 == 0) ? 1 : -1;
}

inline PolyForm form_wedge(const PolyForm& a, const PolyForm& b) {
    PolyForm out;
    IndexSet merged;
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            int sgn = merge_indices(ka.I, kb.I, merged);
            if (sgn == 0) continue;
            Mono m(ka.m.size());
            for (size_t v = 0; v < m.size(); ++v) m[v] = ka.m[v] + kb.m[v];
            form_add_to(out, {m, merged}, Rat(sgn) * ca * cb);
        }
    return out;
}

// Exterior derivative d(f dX_I) = sum_i df/dX_i dX_i ^ dX_I.
inline PolyForm exterior_d(const PolyForm& a) {
    PolyForm out;
    IndexSet merged;
    for (const auto& [k, c] : a) {
        for (size_t i = 0; i < k.m.size(); ++i) {
            if (k.m[i] == 0) continue;
            int sgn = merge_indices({static_cast<int>(i)}, k.I, merged);
            if (sgn == 0) continue;
            Mono m = k.m;
            m[i] -= 1;
            form_add_to(out, {m, merged}, Rat(sgn) * c * Rat(k.m[i]));
        }
    }
    return out;
}

// Linear substitution X_i -> sum_j S[i][j] Y_j (S is n_old x n_new), applied
// to both the coefficient polynomial and the dX factors.
inline PolyForm substitute_linear(const PolyForm& a, const DenseMat& S) {
    size_t n_new = S.empty() ? 0 : S[0].size();
    // images of the variables and their differentials
    auto var_image = [&](int i) {
        PolyForm img;
        for (size_t j = 0; j < n_new; ++j) {
            if (S[i][j] == 0) continue;
            Mono m(n_new, 0);
            m[j] = 1;
            img[{m, {}}] = S[i][j];
        }
        return img;
    };
    auto dvar_image = [&](int i) {
        PolyForm img;
        for (size_t j = 0; j < n_new; ++j)
            if (S[i][j] != 0) img[{Mono(n_new, 0), {static_cast<int>(j)}}] = S[i][j];
        return img;
    };
    PolyForm out;
    for (const auto& [k, c] : a) {
        PolyForm term{{{Mono(n_new, 0), {}}, c}};
        for (size_t i = 0; i < k.m.size(); ++i)
            for (int e = 0; e < k.m[i]; ++e) term = form_wedge(term, var_image(static_cast<int>(i)));
        for (int i : k.I) term = form_wedge(term, dvar_image(i));
        form_axpy(out, Rat(1), term);
    }
    return out;
}

// Group action on forms matching the action on polynomials (X_i -> sum_j M_ji X_j).
inline PolyForm form_act(const DenseMat& g, const PolyForm& a) {
    int n = static_cast<int>(g.size());
    DenseMat s(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s[i][j] = g[j][i];
    return substitute_linear(a, s);
}

inline long form_weight(const FormKey& k) {
    long w = static_cast<long>(k.I.size());
    for (int e : k.m) w += e;
    return w;
}

// All form basis keys on n variables with form degree k and weight w
// (coefficient degree w - k); empty when w < k.
inline std::vector<FormKey> form_basis(int n, int k, long w) {
    std::vector<FormKey> out;
    if (k < 0 || k > n || w < k) return out;
    // coefficient monomials of total degree w - k
    std::vector<Mono> monos;
    {
        PolynomialAlgebra poly(n);
        for (const auto& m : poly.monos_up_to(w - k))
            if (poly.weight(m) == w - k) monos.push_back(m);
    }
    // index sets of size k
    std::vector<IndexSet> sets;
    IndexSet cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            sets.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
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

// Matrix of a linear operator on forms with respect to explicit bases.
// Columns indexed by `domain`; any output term outside `codomain` throws.
inline SparseMatrix form_operator_matrix(const std::function<PolyForm(const FormKey&)>& op,
                                         const std::vector<FormKey>& domain,
                                         const std::vector<FormKey>& codomain) {
    std::map<FormKey, int> index;
    for (int i = 0; i < static_cast<int>(codomain.size()); ++i) index[codomain[i]] = i;
    SparseMatrix out(static_cast<int>(codomain.size()), static_cast<int>(domain.size()));
    for (int j = 0; j < static_cast<int>(domain.size()); ++j) {
        for (const auto& [k, c] : op(domain[j])) {
            auto it = index.find(k);
            if (it == index.end()) throw std::logic_error("form operator leaves the declared codomain");
            out.add(it->second, j, c);
        }
    }
    return out;
}

// Expands a form in an explicit basis; throws when a term is missing.
inline SparseVec form_coordinates(const PolyForm& a, const std::vector<FormKey>& basis) {
    std::map<FormKey, int> index;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) index[basis[i]] = i;
    SparseVec v;
    for (const auto& [k, c] : a) {
        auto it = index.find(k);
        if (it == index.end()) throw std::logic_error("form has a term outside the basis");
        v[it->second] = c;
    }
    return v;
}

}  // namespace homalg

#endif
