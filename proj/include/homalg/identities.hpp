#ifndef HOMALG_IDENTITIES_HPP
#define HOMALG_IDENTITIES_HPP

#include <functional>
#include <memory>
#include <sstream>

#include "homalg/hochschild.hpp"

namespace homalg {

struct IdentityFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string tensor_str(const Tensor& t) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) os << " | ";
        for (size_t v = 0; v < t[i].m.size(); ++v) {
            if (v) os << ",";
            os << t[i].m[v];
        }
        os << ";g" << t[i].g;
    }
    os << ")";
    return os.str();
}

}  // namespace detail

inline TensorComb b_comb(const HochschildComplex& h, const TensorComb& in) {
    TensorComb out;
    for (const auto& [t, c] : in)
        for (const auto& [r, v] : h.b_of(t)) comb_add_to(out, r, c * v);
    return out;
}

inline TensorComb B_comb(const HochschildComplex& h, const TensorComb& in) {
    TensorComb out;
    for (const auto& [t, c] : in)
        for (const auto& [r, v] : h.connes_B_of(t)) comb_add_to(out, r, c * v);
    return out;
}

inline TwTensorComb bh_comb(const TwistedComplex& tw, const TwTensorComb& in) {
    TwTensorComb out;
    for (const auto& [t, c] : in)
        for (const auto& [r, v] : tw.bh_of(t)) tw_add_to(out, r, c * v);
    return out;
}

// Streaming verification of b^2 = 0, B^2 = 0 and bB + Bb = 0 on one basis
// tensor: the composites are accumulated term by term and must cancel
// exactly, so no slice matrix is ever materialized.
inline void check_simplicial_column(const HochschildComplex& h, const Tensor& t) {
    TensorComb bt = h.b_of(t);
    if (!b_comb(h, bt).empty())
        throw IdentityFailure("b^2 != 0 on column " + detail::tensor_str(t));
    TensorComb Bt = h.connes_B_of(t);
    if (!B_comb(h, Bt).empty())
        throw IdentityFailure("B^2 != 0 on column " + detail::tensor_str(t));
    TensorComb mixed = b_comb(h, Bt);
    for (const auto& [r, c] : B_comb(h, bt)) comb_add_to(mixed, r, c);
    if (!mixed.empty())
        throw IdentityFailure("bB + Bb != 0 on column " + detail::tensor_str(t));
}

inline void check_twisted_column(const TwistedComplex& tw, const TwTensor& t) {
    if (!bh_comb(tw, tw.bh_of(t)).empty())
        throw IdentityFailure("b_h^2 != 0 on a twisted column (twist " +
                              std::to_string(tw.twist()) + ")");
}

// F on a single twisted tensor: decorate the first factor with h and the rest
// with the identity.
inline Tensor F_of(const CrossedAlgebra& alg, int h, const TwTensor& t) {
    int e = alg.group().identity();
    Tensor r(t.size());
    r[0] = {t[0], h};
    for (size_t i = 1; i < t.size(); ++i) r[i] = {t[i], e};
    return r;
}

// G on a single conjugacy-component tensor (the columnwise core of map_G).
inline TwTensorComb G_of(const CrossedAlgebra& alg, int h, const std::vector<int>& centralizer,
                         int class_id, const Tensor& t, bool normalized = true) {
    return map_G_of(alg, h, centralizer, class_id, t, normalized);
}

inline TwTensorComb G_comb(const CrossedAlgebra& alg, int h, const std::vector<int>& centralizer,
                           int class_id, const TensorComb& in) {
    TwTensorComb out;
    for (const auto& [t, c] : in)
        for (const auto& [r, v] : G_of(alg, h, centralizer, class_id, t))
            tw_add_to(out, r, c * v);
    return out;
}

// b_h(G(t)) = G(b(t)) on one conjugacy-component tensor.
inline void check_g_chain_column(const CrossedAlgebra& alg, const TwistedComplex& tw, int h,
                                 const std::vector<int>& centralizer, int class_id,
                                 const HochschildComplex& hoch, const Tensor& t) {
    TwTensorComb lhs = bh_comb(tw, G_of(alg, h, centralizer, class_id, t));
    TwTensorComb rhs = G_comb(alg, h, centralizer, class_id, hoch.b_of(t));
    if (lhs != rhs)
        throw IdentityFailure("b_h G != G b on column " + detail::tensor_str(t));
}

// Upper bound on the number of basis tensors of a (k, w) slice of the crossed
// complex over a graded base, without enumerating it: a positions-by-weight
// count with the normalization veto but without the conjugacy-class filter.
inline long long slice_size_bound(const CrossedAlgebra& alg, int k, long w) {
    const Algebra& base = *alg.base();
    if (base.filtered()) throw std::logic_error("size bound is for graded bases only");
    if (k < 0 || w < 0) return 0;
    long m = alg.group().order();
    std::vector<long long> per_deg(w + 1, 0);  // decorated factors of weight d
    for (const auto& mono : base.monos_up_to(w)) {
        long d = base.weight(mono);
        if (d >= 0 && d <= w) per_deg[d] += m;
    }
    // slots >= 1 exclude the unit with the identity decoration
    std::vector<long long> interior = per_deg;
    if (interior[0] > 0) interior[0] -= 1;
    std::vector<long long> cur(w + 1, 0);
    for (long d = 0; d <= w; ++d) cur[d] = per_deg[d];
    for (int pos = 1; pos <= k; ++pos) {
        std::vector<long long> next(w + 1, 0);
        for (long a = 0; a <= w; ++a) {
            if (cur[a] == 0) continue;
            for (long d = 0; a + d <= w; ++d) next[a + d] += cur[a] * interior[d];
        }
        cur = std::move(next);
    }
    return cur[w];
}

// Universal pattern columns.
//
// Every basis tensor of every (degree k, weight w) slice over a commutative
// graded base A with a linear Gamma-action is the image of a "pattern column"
// over the free commutative Gamma-algebra on one marker per tensor slot,
// under the equivariant algebra map y_{(s,g)} -> g(a_s). That map commutes
// with b, B and G (they are built from products, the action, rotations and
// unit insertions) and matches the normalized complex's unit-dropping exactly,
// because a product of non-unit monomials is never the unit in these bases
// and the markers record which slots carry the unit. A composite that
// vanishes identically on pattern columns therefore vanishes on every slice
// column of every weight at once, which is how the identity suite covers
// slices too large to enumerate. The free algebra is realized as a polynomial
// ring on (k+1)|Gamma| variables with Gamma permuting them by left
// translation, so all of the existing machinery applies unchanged.
class UniversalKernel {
public:
    explicit UniversalKernel(const FiniteMatrixGroup& grp) : real_(grp) {}

    // b^2, B^2 and bB + Bb on all degree-k pattern columns; returns the
    // number of columns checked.
    long check_simplicial(int k) {
        const Ctx& ctx = context(k);
        long count = 0;
        for_each_pattern(ctx, k, [&](const Tensor& t) {
            check_simplicial_column(*ctx.hoch, t);
            ++count;
        });
        return count;
    }

    // b_h G = G b on all degree-k pattern columns, with h the representative
    // of the column's conjugacy component.
    long check_g_chain(int k) {
        const Ctx& ctx = context(k);
        // class ids below come from the marker group, whose class order can
        // differ from the real group's, so index by the marker class
        const auto& real_classes = real_.conjugacy_classes();
        const auto& marker_classes = ctx.alg->classes();
        std::vector<std::unique_ptr<TwistedComplex>> tw(marker_classes.size());
        std::vector<std::vector<int>> cent(marker_classes.size());
        for (const auto& rc : real_classes) {
            int h = to_marker(rc.representative);
            int c = ctx.alg->group().class_of(h, marker_classes);
            tw[c] = std::make_unique<TwistedComplex>(ctx.alg, h);
            for (int g : rc.centralizer) cent[c].push_back(to_marker(g));
        }
        long count = 0;
        for_each_pattern(ctx, k, [&](const Tensor& t) {
            std::vector<int> gs(t.size());
            for (size_t i = 0; i < t.size(); ++i) gs[i] = t[i].g;
            int c = ctx.alg->class_of_product(gs);
            check_g_chain_column(*ctx.alg, *tw[c], tw[c]->twist(), cent[c], c, *ctx.hoch, t);
            ++count;
        });
        return count;
    }

private:
    struct Ctx {
        CrossedPtr alg;
        std::unique_ptr<HochschildComplex> hoch;
    };

    // permutation matrix of left translation by h on the markers of degree k
    DenseMat translation(int h, int slots) const {
        int m = real_.order();
        DenseMat p(slots * m, std::vector<Rat>(slots * m, Rat(0)));
        for (int s = 0; s < slots; ++s)
            for (int g = 0; g < m; ++g) p[s * m + real_.mul(h, g)][s * m + g] = 1;
        return p;
    }

    const Ctx& context(int k) {
        cur_k_ = k;
        auto it = ctx_.find(k);
        if (it != ctx_.end()) return it->second;
        int slots = k + 1, m = real_.order();
        std::vector<DenseMat> gens;
        for (int h = 0; h < m; ++h) gens.push_back(translation(h, slots));
        FiniteMatrixGroup marker_grp = FiniteMatrixGroup::close(gens);
        if (marker_grp.order() != m) throw std::logic_error("marker group is not a faithful copy");
        // index of each real element inside the closed marker group
        std::vector<int>& lut = marker_of_[k];
        lut.assign(m, -1);
        for (int h = 0; h < m; ++h) {
            DenseMat p = translation(h, slots);
            for (int i = 0; i < m; ++i)
                if (marker_grp.matrix(i) == p) lut[h] = i;
            if (lut[h] < 0) throw std::logic_error("marker element not found");
        }
        auto poly = std::make_shared<PolynomialAlgebra>(slots * m);
        auto act = std::make_shared<LinearAction>(poly, marker_grp);
        Ctx ctx;
        ctx.alg = std::make_shared<CrossedAlgebra>(poly, act);
        ctx.hoch = std::make_unique<HochschildComplex>(ctx.alg);
        cur_k_ = k;
        return ctx_.emplace(k, std::move(ctx)).first->second;
    }

    int to_marker(int real_g) const { return marker_of_.at(cur_k_).at(real_g); }

    // Enumerates all pattern columns of degree k: real decorations
    // (g_0..g_k) and unit flags, with unit interior slots requiring a
    // nontrivial decoration (the normalized complex has no others).
    template <class Fn>
    void for_each_pattern(const Ctx& ctx, int k, const Fn& fn) const {
        int m = real_.order(), e = real_.identity(), slots = k + 1;
        int nvars = slots * m;
        std::vector<int> g(slots, 0), u(slots, 0);
        std::function<void(int)> rec = [&](int s) {
            if (s == slots) {
                Tensor t(slots);
                for (int i = 0; i < slots; ++i) {
                    Mono mono(nvars, 0);
                    if (!u[i]) mono[i * m + e] = 1;
                    t[i] = {mono, to_marker(g[i])};
                }
                fn(t);
                return;
            }
            for (g[s] = 0; g[s] < m; ++g[s])
                for (u[s] = 0; u[s] <= ((s == 0 || g[s] != e) ? 1 : 0); ++u[s]) rec(s + 1);
        };
        rec(0);
    }

    const FiniteMatrixGroup& real_;
    std::map<int, Ctx> ctx_;
    std::map<int, std::vector<int>> marker_of_;
    int cur_k_ = 0;
};

}  // namespace homalg

#endif
