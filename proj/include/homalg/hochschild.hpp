#ifndef HOMALG_HOCHSCHILD_HPP
#define HOMALG_HOCHSCHILD_HPP

#include <functional>
#include <optional>

#include "homalg/algebra.hpp"

namespace homalg {

struct WrongComponent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr long kNoCap = std::numeric_limits<long>::max() / 4;
constexpr int kPlainClass = -1;

// Elementary tensor a_0 g_0 (x) ... (x) a_k g_k over a crossed product.
using Tensor = std::vector<CPMono>;
using TensorComb = std::map<Tensor, Rat>;

// Tensor over the base algebra only (twisted complexes).
using TwTensor = std::vector<Mono>;
using TwTensorComb = std::map<TwTensor, Rat>;

inline void comb_add_to(TensorComb& dst, const Tensor& t, const Rat& c) {
    if (c == 0) return;
    Rat& slot = dst[t];
    slot += c;
    if (slot == 0) dst.erase(t);
}

inline void tw_add_to(TwTensorComb& dst, const TwTensor& t, const Rat& c) {
    if (c == 0) return;
    Rat& slot = dst[t];
    slot += c;
    if (slot == 0) dst.erase(t);
}

// A finite (degree, weight/filtration, class) slice of a Hochschild-type
// complex with its basis in a fixed order.
template <class T>
struct BasisSlice {
    int k = 0;
    std::optional<long> w;   // total weight, when the differential preserves it
    long filcap = kNoCap;    // total filtration bound
    int class_id = kPlainClass;
    std::vector<T> basis;
    std::map<T, int> index;

    int dim() const { return static_cast<int>(basis.size()); }
    void finalize() {
        for (int i = 0; i < dim(); ++i) index[basis[i]] = i;
    }
};

using ChainSlice = BasisSlice<Tensor>;
using TwistedSlice = BasisSlice<TwTensor>;

namespace detail {

// Shared tuple enumerator: picks one factor per position from `candidates`
// (each with weight and filtration degree), subject to an exact total weight
// (when requested), a total filtration cap, and a per-position veto.
struct FactorInfo {
    long w = 0;
    long fil = 0;
    long aux = 0;  // nonnegative mass (Fourier |m| for symbol slices), total bounded
};

template <class Candidate, class Veto, class Emit>
void enumerate_tuples(const std::vector<Candidate>& cands, const std::vector<FactorInfo>& info,
                      int positions, std::optional<long> total_w, long filcap, long auxcap,
                      const Veto& veto, const Emit& emit) {
    if (cands.empty()) return;
    long min_w = info[0].w, max_w = info[0].w, min_fil = info[0].fil;
    for (const auto& fi : info) {
        min_w = std::min(min_w, fi.w);
        max_w = std::max(max_w, fi.w);
        min_fil = std::min(min_fil, fi.fil);
    }
    std::vector<int> chosen(positions);
    std::function<void(int, long, long, long)> rec = [&](int pos, long sw, long sf, long sa) {
        if (pos == positions) {
            if (!total_w || *total_w == sw) emit(chosen);
            return;
        }
        long rest = positions - pos;
        for (int c = 0; c < static_cast<int>(cands.size()); ++c) {
            if (veto(pos, c)) continue;
            long nw = sw + info[c].w;
            long nf = sf + info[c].fil;
            long na = sa + info[c].aux;
            if (nf + (rest - 1) * min_fil > filcap) continue;
            if (na > auxcap) continue;
            if (total_w) {
                if (nw + (rest - 1) * min_w > *total_w) continue;
                if (nw + (rest - 1) * max_w < *total_w) continue;
            }
            chosen[pos] = c;
            rec(pos + 1, nw, nf, na);
        }
    };
    rec(0, 0, 0, 0);
}

// Candidate factor monomials for a degree-k slice with total filtration cap:
// with negative filtration degrees (symbol model) a single factor may carry
// more than the cap, compensated by the other k factors.
inline std::vector<Mono> slice_candidates(const Algebra& base, int k, long filcap, long& auxcap) {
    auxcap = kNoCap;
    long cap = filcap;
    if (const auto* sym = dynamic_cast<const SymbolAlgebra*>(&base)) {
        auxcap = sym->fourier_cutoff();
        cap = filcap - static_cast<long>(k) * std::min<long>(0, sym->low());
    }
    return base.monos_up_to(cap);
}

inline FactorInfo factor_info(const Algebra& base, const Mono& m) {
    FactorInfo fi;
    fi.w = base.weight(m);
    fi.fil = base.fildeg(m);
    fi.aux = dynamic_cast<const SymbolAlgebra*>(&base) ? std::abs(fi.w) : 0;
    return fi;
}

}  // namespace detail

// The Hochschild complex of a crossed product (trivial group = plain algebra),
// sliced by (degree, weight, filtration cap, conjugacy class). Normalized by
// default: factors in positions >= 1 avoid the unit of the crossed product.
class HochschildComplex {
public:
    explicit HochschildComplex(CrossedPtr alg, bool normalized = true)
        : alg_(std::move(alg)), normalized_(normalized) {}

    const CrossedAlgebra& algebra() const { return *alg_; }
    bool normalized() const { return normalized_; }

    ChainSlice slice(int k, std::optional<long> w, long filcap = kNoCap,
                     int class_id = kPlainClass) const {
        ChainSlice s;
        s.k = k;
        s.w = w;
        s.filcap = filcap;
        s.class_id = class_id;
        if (k < 0) return s;
        const Algebra& base = *alg_->base();
        long cap = filcap;
        if (cap >= kNoCap) {
            if (base.filtered()) throw std::logic_error("filtered algebra slice needs a filtration cap");
            if (!w) throw std::logic_error("graded slice needs a weight");
            cap = *w;  // graded: fildeg = weight >= 0 per factor
        }
        long auxcap = kNoCap;
        std::vector<Mono> monos = detail::slice_candidates(base, k, cap, auxcap);
        const FiniteMatrixGroup& grp = alg_->group();
        // joint candidates (mono, g)
        std::vector<CPMono> cands;
        std::vector<detail::FactorInfo> info;
        for (const auto& m : monos)
            for (int g = 0; g < grp.order(); ++g) {
                cands.push_back({m, g});
                info.push_back(detail::factor_info(base, m));
            }
        Mono unit = base.unit();
        int e = grp.identity();
        auto veto = [&](int pos, int c) {
            return normalized_ && pos >= 1 && cands[c].m == unit && cands[c].g == e;
        };
        detail::enumerate_tuples(cands, info, k + 1, w, cap, auxcap, veto,
                                 [&](const std::vector<int>& chosen) {
                                     Tensor t(k + 1);
                                     std::vector<int> gs(k + 1);
                                     for (int i = 0; i <= k; ++i) {
                                         t[i] = cands[chosen[i]];
                                         gs[i] = t[i].g;
                                     }
                                     if (class_id != kPlainClass &&
                                         alg_->class_of_product(gs) != class_id)
                                         return;
                                     s.basis.push_back(std::move(t));
                                 });
        s.finalize();
        return s;
    }

    // b(t) = sum_i (-1)^i (..., t_i t_{i+1}, ...) + (-1)^k (t_k t_0, t_1, ...).
    TensorComb b_of(const Tensor& t) const {
        TensorComb out;
        int k = static_cast<int>(t.size()) - 1;
        if (k < 1) return out;
        for (int i = 0; i < k; ++i) {
            Rat sign((i % 2 == 0) ? 1 : -1);
            for (const auto& [m, c] : alg_->mul(t[i], t[i + 1]))
                emit_merged(out, t, i, i + 1, i, m, sign * c);
        }
        Rat sign((k % 2 == 0) ? 1 : -1);
        for (const auto& [m, c] : alg_->mul(t[k], t[0])) emit_merged(out, t, 0, k, 0, m, sign * c);
        return out;
    }

    // Normalized Connes B: sum_i (-1)^{ki} (1e, t_i, ..., t_k, t_0, ..., t_{i-1}).
    TensorComb connes_B_of(const Tensor& t) const {
        TensorComb out;
        int k = static_cast<int>(t.size()) - 1;
        CPMono one = alg_->unit();
        for (int i = 0; i <= k; ++i) {
            Tensor r(k + 2);
            r[0] = one;
            bool degenerate = false;
            for (int j = 0; j <= k; ++j) {
                r[1 + j] = t[(i + j) % (k + 1)];
                if (normalized_ && r[1 + j] == one) degenerate = true;
            }
            if (degenerate) continue;
            Rat sign(((k * i) % 2 == 0) ? 1 : -1);
            comb_add_to(out, r, sign);
        }
        return out;
    }

    // Conjugation action of the group on the complex: a_i g_i -> g(a_i) g g_i g^{-1}.
    TensorComb group_act(int g, const Tensor& t) const {
        const FiniteMatrixGroup& grp = alg_->group();
        TensorComb out{{Tensor{}, Rat(1)}};
        for (const auto& f : t) {
            int cg = grp.mul(grp.mul(g, f.g), grp.inv(g));
            TensorComb next;
            for (const auto& [pre, c] : out)
                for (const auto& [m, cm] : alg_->act(g, f.m)) {
                    Tensor ext = pre;
                    ext.push_back({m, cg});
                    comb_add_to(next, ext, c * cm);
                }
            out = std::move(next);
        }
        return out;
    }

    SparseMatrix matrix_of(const std::function<TensorComb(const Tensor&)>& op, const ChainSlice& dom,
                           const ChainSlice& cod) const {
        SparseMatrix m(cod.dim(), dom.dim());
        for (int j = 0; j < dom.dim(); ++j)
            for (const auto& [t, c] : op(dom.basis[j])) {
                auto it = cod.index.find(t);
                if (it == cod.index.end())
                    throw std::logic_error("differential leaves the declared codomain slice");
                m.add(it->second, j, c);
            }
        return m;
    }

    SparseMatrix b_matrix(const ChainSlice& dom, const ChainSlice& cod) const {
        return matrix_of([this](const Tensor& t) { return b_of(t); }, dom, cod);
    }
    SparseMatrix B_matrix(const ChainSlice& dom, const ChainSlice& cod) const {
        return matrix_of([this](const Tensor& t) { return connes_B_of(t); }, dom, cod);
    }
    SparseMatrix rep_matrix(int g, const ChainSlice& s) const {
        return matrix_of([this, g](const Tensor& t) { return group_act(g, t); }, s, s);
    }

    int hh(int k, std::optional<long> w, long filcap = kNoCap, int class_id = kPlainClass) const {
        ChainSlice above = slice(k + 1, w, filcap, class_id);
        ChainSlice here = slice(k, w, filcap, class_id);
        ChainSlice below = slice(k - 1, w, filcap, class_id);
        return homology_dim(b_matrix(above, here), b_matrix(here, below));
    }

    // Cyclic homology of the (b,B) total complex T_k = (+)_{j>=0} C_{k-2j}.
    int hc(int k, std::optional<long> w, long filcap = kNoCap, int class_id = kPlainClass) const {
        auto total_dims = [&](int deg, std::vector<ChainSlice>& parts) {
            parts.clear();
            for (int d = deg; d >= 0; d -= 2) parts.push_back(slice(d, w, filcap, class_id));
        };
        std::vector<ChainSlice> up, here, down;
        total_dims(k + 1, up);
        total_dims(k, here);
        total_dims(k - 1, down);
        return homology_dim(total_matrix(up, here), total_matrix(here, down));
    }

    // Block matrix of b + B between (b,B)-total-complex columns.
    SparseMatrix total_matrix(const std::vector<ChainSlice>& dom,
                              const std::vector<ChainSlice>& cod) const {
        std::vector<int> dom_off(dom.size() + 1, 0), cod_off(cod.size() + 1, 0);
        for (size_t i = 0; i < dom.size(); ++i) dom_off[i + 1] = dom_off[i] + dom[i].dim();
        for (size_t i = 0; i < cod.size(); ++i) cod_off[i + 1] = cod_off[i] + cod[i].dim();
        SparseMatrix m(cod_off.back(), dom_off.back());
        auto place = [&](const SparseMatrix& blk, int r0, int c0) {
            for (int i = 0; i < blk.rows(); ++i)
                for (const auto& [j, v] : blk.row(i)) m.add(r0 + i, c0 + j, v);
        };
        for (size_t j = 0; j < dom.size(); ++j) {
            int deg = dom[j].k;
            for (size_t i = 0; i < cod.size(); ++i) {
                if (cod[i].k == deg - 1) place(b_matrix(dom[j], cod[i]), cod_off[i], dom_off[j]);
                if (cod[i].k == deg + 1) place(B_matrix(dom[j], cod[i]), cod_off[i], dom_off[j]);
            }
        }
        return m;
    }

private:
    void emit_merged(TensorComb& out, const Tensor& t, int a, int b, int merged_pos, const CPMono& m,
                     const Rat& c) const {
        int k = static_cast<int>(t.size()) - 1;
        Tensor r;
        r.reserve(k);
        for (int j = 0; j <= k; ++j) {
            if (j == a) {
                r.push_back(m);
            } else if (j == b) {
                continue;
            } else {
                r.push_back(t[j]);
            }
        }
        if (normalized_ && merged_pos >= 1 && m == alg_->unit()) return;
        comb_add_to(out, r, c);
    }

    CrossedPtr alg_;
    bool normalized_;
};

// The twisted complex (C_*(A)_h, b_h) of the base algebra with twisting
// automorphism h, together with the centralizer action and its invariants.
class TwistedComplex {
public:
    TwistedComplex(CrossedPtr alg, int h, bool normalized = true)
        : alg_(std::move(alg)), h_(h), normalized_(normalized) {}

    int twist() const { return h_; }

    TwistedSlice slice(int k, std::optional<long> w, long filcap = kNoCap) const {
        TwistedSlice s;
        s.k = k;
        s.w = w;
        s.filcap = filcap;
        if (k < 0) return s;
        const Algebra& base = *alg_->base();
        long cap = filcap;
        if (cap >= kNoCap) {
            if (base.filtered()) throw std::logic_error("filtered algebra slice needs a filtration cap");
            if (!w) throw std::logic_error("graded slice needs a weight");
            cap = *w;
        }
        long auxcap = kNoCap;
        std::vector<Mono> cands = detail::slice_candidates(base, k, cap, auxcap);
        std::vector<detail::FactorInfo> info;
        for (const auto& m : cands) info.push_back(detail::factor_info(base, m));
        Mono unit = base.unit();
        auto veto = [&](int pos, int c) { return normalized_ && pos >= 1 && cands[c] == unit; };
        detail::enumerate_tuples(cands, info, k + 1, w, cap, auxcap, veto,
                                 [&](const std::vector<int>& chosen) {
                                     TwTensor t(k + 1);
                                     for (int i = 0; i <= k; ++i) t[i] = cands[chosen[i]];
                                     s.basis.push_back(std::move(t));
                                 });
        s.finalize();
        return s;
    }

    // b_h(a_0 (x) ... (x) a_k) = (a_0 h(a_1), a_2, ...) + middle terms + wrap.
    TwTensorComb bh_of(const TwTensor& t) const {
        TwTensorComb out;
        int k = static_cast<int>(t.size()) - 1;
        if (k < 1) return out;
        const Algebra& base = *alg_->base();
        for (const auto& [m1, c1] : alg_->act(h_, t[1]))
            for (const auto& [m, c] : base.mono_mul(t[0], m1)) emit_merged(out, t, 0, 1, 0, m, c1 * c);
        for (int i = 1; i < k; ++i) {
            Rat sign((i % 2 == 0) ? 1 : -1);
            for (const auto& [m, c] : base.mono_mul(t[i], t[i + 1]))
                emit_merged(out, t, i, i + 1, i, m, sign * c);
        }
        Rat sign((k % 2 == 0) ? 1 : -1);
        for (const auto& [m, c] : base.mono_mul(t[k], t[0])) emit_merged(out, t, 0, k, 0, m, sign * c);
        return out;
    }

    TwTensorComb group_act(int g, const TwTensor& t) const {
        TwTensorComb out{{TwTensor{}, Rat(1)}};
        for (const auto& f : t) {
            TwTensorComb next;
            for (const auto& [pre, c] : out)
                for (const auto& [m, cm] : alg_->act(g, f)) {
                    TwTensor ext = pre;
                    ext.push_back(m);
                    tw_add_to(next, ext, c * cm);
                }
            out = std::move(next);
        }
        return out;
    }

    SparseMatrix matrix_of(const std::function<TwTensorComb(const TwTensor&)>& op,
                           const TwistedSlice& dom, const TwistedSlice& cod) const {
        SparseMatrix m(cod.dim(), dom.dim());
        for (int j = 0; j < dom.dim(); ++j)
            for (const auto& [t, c] : op(dom.basis[j])) {
                auto it = cod.index.find(t);
                if (it == cod.index.end())
                    throw std::logic_error("twisted differential leaves the declared codomain slice");
                m.add(it->second, j, c);
            }
        return m;
    }

    SparseMatrix bh_matrix(const TwistedSlice& dom, const TwistedSlice& cod) const {
        return matrix_of([this](const TwTensor& t) { return bh_of(t); }, dom, cod);
    }
    SparseMatrix rep_matrix(int g, const TwistedSlice& s) const {
        return matrix_of([this, g](const TwTensor& t) { return group_act(g, t); }, s, s);
    }

    // Projector onto the centralizer invariants of the slice.
    SparseMatrix invariant_projector(const TwistedSlice& s,
                                     const std::vector<int>& centralizer) const {
        std::map<int, SparseMatrix> rep;
        for (int g : centralizer) rep.emplace(g, rep_matrix(g, s));
        return FiniteMatrixGroup::average_projector(alg_->group(), centralizer, rep);
    }

    int hh(int k, std::optional<long> w, long filcap = kNoCap) const {
        TwistedSlice above = slice(k + 1, w, filcap);
        TwistedSlice here = slice(k, w, filcap);
        TwistedSlice below = slice(k - 1, w, filcap);
        return homology_dim(bh_matrix(above, here), bh_matrix(here, below));
    }

    // Homology of the centralizer-invariant subcomplex.
    int invariant_hh(int k, std::optional<long> w, const std::vector<int>& centralizer,
                     long filcap = kNoCap) const {
        TwistedSlice above = slice(k + 1, w, filcap);
        TwistedSlice here = slice(k, w, filcap);
        TwistedSlice below = slice(k - 1, w, filcap);
        SparseMatrix d_in = bh_matrix(above, here);
        SparseMatrix d_out = bh_matrix(here, below);
        Subspace inv_above = image(invariant_projector(above, centralizer));
        Subspace inv_here = image(invariant_projector(here, centralizer));
        // ker(d_out) restricted to invariants, modulo d_in of the invariants above
        Subspace cycles = kernel_basis(d_out).intersect(inv_here);
        SparseMatrix boundaries(inv_above.dim(), here.dim());
        for (int i = 0; i < inv_above.dim(); ++i) {
            SparseVec y = d_in.apply(inv_above.basis().row(i));
            boundaries.row_mut(i) = y;
        }
        Subspace bnd = Subspace::span(boundaries);
        if (!cycles.contains(bnd)) throw std::logic_error("invariant boundaries escape invariant cycles");
        return cycles.dim() - bnd.dim();
    }

private:
    void emit_merged(TwTensorComb& out, const TwTensor& t, int a, int b, int merged_pos,
                     const Mono& m, const Rat& c) const {
        int k = static_cast<int>(t.size()) - 1;
        TwTensor r;
        r.reserve(k);
        for (int j = 0; j <= k; ++j) {
            if (j == a) {
                r.push_back(m);
            } else if (j == b) {
                continue;
            } else {
                r.push_back(t[j]);
            }
        }
        if (normalized_ && merged_pos >= 1 && m == alg_->base()->unit()) return;
        tw_add_to(out, r, c);
    }

    CrossedPtr alg_;
    int h_;
    bool normalized_;
};

// F(a_0, ..., a_k) = (a_0 h, a_1 e, ..., a_k e), as a matrix from a twisted
// slice into the matching conjugacy-class slice.
inline SparseMatrix map_F(const CrossedAlgebra& alg, int h, const TwistedSlice& dom,
                          const ChainSlice& cod) {
    int e = alg.group().identity();
    SparseMatrix m(cod.dim(), dom.dim());
    for (int j = 0; j < dom.dim(); ++j) {
        const TwTensor& t = dom.basis[j];
        Tensor r(t.size());
        r[0] = {t[0], h};
        for (size_t i = 1; i < t.size(); ++i) r[i] = {t[i], e};
        auto it = cod.index.find(r);
        if (it == cod.index.end()) throw std::logic_error("F image missing from class slice");
        m.add(it->second, j, 1);
    }
    return m;
}

// G on a single class-component tensor (b_0 h_0, ..., b_k h_k) with
// decoration product p = h_1...h_k h_0:
//   G(t) = (1/|C(h)|) sum_{z p z^{-1} = h} (h z h_0^{-1}(b_0), z(b_1),
//          (z h_1)(b_2), ..., (z h_1...h_{k-1})(b_k)).
// The average runs over the transporter {z : z p z^{-1} = h}, not the
// centralizer of h: the wrap face only matches under z p = h z, and the
// first face shifts z to z h_1 while conjugating p, so the transporter is
// the unique averaging set making G a chain map on the whole component.
// (They coincide when p = h, in particular for abelian groups.) Every
// transporter is a centralizer coset, so the 1/|C(h)| scale is uniform.
inline TwTensorComb map_G_of(const CrossedAlgebra& alg, int h, const std::vector<int>& centralizer,
                             int class_id, const Tensor& t, bool normalized = true) {
    const FiniteMatrixGroup& grp = alg.group();
    const Mono unit = alg.base()->unit();
    std::vector<int> gs(t.size());
    for (size_t i = 0; i < t.size(); ++i) gs[i] = t[i].g;
    if (alg.class_of_product(gs) != class_id)
        throw WrongComponent("chain lies outside the requested conjugacy component");
    int p = gs[0];
    if (gs.size() > 1) {
        p = gs[1];
        for (size_t i = 2; i < gs.size(); ++i) p = grp.mul(p, gs[i]);
        p = grp.mul(p, gs[0]);
    }
    TwTensorComb out;
    Rat scale(1, static_cast<long>(centralizer.size()));
    for (int z = 0; z < grp.order(); ++z) {
        if (grp.mul(z, p) != grp.mul(h, z)) continue;
        std::vector<int> act_by(t.size());
        act_by[0] = grp.mul(grp.mul(h, z), grp.inv(t[0].g));
        int run = z;
        for (size_t i = 1; i < t.size(); ++i) {
            act_by[i] = run;
            run = grp.mul(run, t[i].g);
        }
        TwTensorComb terms{{TwTensor{}, scale}};
        for (size_t i = 0; i < t.size(); ++i) {
            TwTensorComb next;
            for (const auto& [pre, c] : terms)
                for (const auto& [mm, cm] : alg.act(act_by[i], t[i].m)) {
                    if (normalized && i >= 1 && mm == unit) continue;
                    TwTensor ext = pre;
                    ext.push_back(mm);
                    tw_add_to(next, ext, c * cm);
                }
            terms = std::move(next);
        }
        for (const auto& [r, c] : terms) tw_add_to(out, r, c);
    }
    return out;
}

inline SparseMatrix map_G(const CrossedAlgebra& alg, int h, const std::vector<int>& centralizer,
                          int class_id, const ChainSlice& dom, const TwistedSlice& cod,
                          bool normalized = true) {
    SparseMatrix m(cod.dim(), dom.dim());
    for (int j = 0; j < dom.dim(); ++j)
        for (const auto& [r, c] : map_G_of(alg, h, centralizer, class_id, dom.basis[j], normalized)) {
            auto it = cod.index.find(r);
            if (it == cod.index.end()) throw std::logic_error("G image missing from twisted slice");
            m.add(it->second, j, c);
        }
    return m;
}

}  // namespace homalg

#endif
