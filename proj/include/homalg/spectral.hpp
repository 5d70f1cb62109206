#ifndef HOMALG_SPECTRAL_HPP
#define HOMALG_SPECTRAL_HPP

#include "homalg/symplectic.hpp"

namespace homalg {

inline long tensor_fildeg(const CrossedAlgebra& alg, const Tensor& t) {
    long p = 0;
    for (const auto& f : t) p += alg.fildeg(f);
    return p;
}

struct E1MismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SBIViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectral sequence of the filtration-by-total-degree on the Hochschild
// complex of a filtered crossed product, at a fixed exact weight w (for
// weight-preserving actions) or at a fixed degree parity (for actions that
// mix weights). Levels relabel the filtration so the differential drops one
// level per page step: l = (p - w)/step.
//
// Every page quantity at (r, k, l) is exact for the full (untruncated)
// complex as long as l + r - 1 stays within the ambient level cap.
class FilteredSS {
public:
    FilteredSS(CrossedPtr alg, int k_max, std::optional<long> w, long level_cap,
               int class_id = kPlainClass, int parity = 0, bool normalized = true)
        : complex_(std::move(alg), normalized),
          k_max_(k_max),
          w_(w),
          level_cap_(level_cap),
          class_id_(class_id),
          parity_(parity) {
        const Algebra& base = *complex_.algebra().base();
        if (!base.filtered()) throw std::logic_error("spectral sequence needs a filtered algebra");
        step_ = base.filtration_step();
        base_ = w_ ? *w_ : static_cast<long>(parity_);
        // every chain of level <= level_cap has total filtration degree
        // base + step * level, so this cap is tight
        long filcap = base_ + step_ * level_cap_;
        slices_.resize(k_max_ + 2);
        levels_.resize(k_max_ + 2);
        b_.resize(k_max_ + 2);
        for (int k = 0; k <= k_max_ + 1; ++k) {
            ChainSlice full = complex_.slice(k, w_, filcap, class_id_);
            // keep only the requested parity when slicing across weights
            ChainSlice s;
            s.k = k;
            s.w = w_;
            s.filcap = filcap;
            s.class_id = class_id_;
            for (auto& t : full.basis) {
                long p = fildeg_of(t);
                if ((p - base_) % step_ != 0) continue;
                s.basis.push_back(std::move(t));
            }
            s.finalize();
            slices_[k] = std::move(s);
            for (const auto& t : slices_[k].basis)
                levels_[k].push_back((fildeg_of(t) - base_) / step_);
        }
        for (int k = 1; k <= k_max_ + 1; ++k) {
            b_[k] = SparseMatrix(slices_[k - 1].dim(), slices_[k].dim());
            for (int j = 0; j < slices_[k].dim(); ++j)
                for (const auto& [t, c] : complex_.b_of(slices_[k].basis[j])) {
                    long p = fildeg_of(t);
                    if ((p - base_) % step_ != 0)
                        throw std::logic_error("differential broke the filtration parity");
                    auto it = slices_[k - 1].index.find(t);
                    if (it == slices_[k - 1].index.end())
                        throw std::logic_error("differential leaves the ambient slice");
                    // filtration compatibility: b never raises the level
                    if (levels_[k - 1][it->second] > levels_[k][j])
                        throw std::logic_error("differential raised the filtration level");
                    b_[k].add(it->second, j, c);
                }
        }
    }

    const HochschildComplex& complex() const { return complex_; }
    const ChainSlice& slice(int k) const { return slices_.at(k); }
    long level_of(int k, int idx) const { return levels_.at(k).at(idx); }
    long level_cap() const { return level_cap_; }
    int step() const { return step_; }
    long base_degree() const { return base_; }
    const SparseMatrix& b_matrix(int k) const { return b_.at(k); }

    // coordinate subspace of chains of level <= l
    Subspace filtration(int k, long l) const {
        if (k < 0 || k > k_max_ + 1) return Subspace(k < 0 ? 0 : slices_.at(k).dim());
        long lc = clamp_level(k, l);
        auto key = std::make_pair(k, lc);
        auto it = f_memo_.find(key);
        if (it != f_memo_.end()) return it->second;
        int n = 0;
        for (int i = 0; i < slices_[k].dim(); ++i)
            if (levels_[k][i] <= lc) ++n;
        SparseMatrix rows(n, slices_[k].dim());
        int r = 0;
        for (int i = 0; i < slices_[k].dim(); ++i)
            if (levels_[k][i] <= lc) rows.set(r++, i, 1);
        Subspace s = Subspace::span(rows);
        f_memo_.emplace(key, s);
        return s;
    }

    // Z^r(k, l) = {x in F_l C_k : b(x) in F_{l-r} C_{k-1}}
    Subspace cycles_to_depth(int r, int k, long l) const {
        if (k < 0 || k > k_max_ + 1 || r < 0) return Subspace(k >= 0 && k <= k_max_ + 1 ? slices_.at(k).dim() : 0);
        if (k == 0 || r == 0) return filtration(k, l);
        // memoize on the pair of effective levels: distinct (r, l) can name
        // the same subspace once both levels saturate
        auto key = std::make_tuple(k, clamp_level(k, l), clamp_level(k - 1, l - r));
        auto it = z_memo_.find(key);
        if (it != z_memo_.end()) return it->second;
        Subspace s = filtration(k, l).intersect(filtration(k - 1, l - r).preimage(b_[k]));
        z_memo_.emplace(key, s);
        return s;
    }

    // boundary part at page r: Z^{r-1}(k, l-1) + b Z^{r-1}(k+1, l+r-1)
    Subspace boundaries_at(int r, int k, long l) const {
        if (r == 0) return filtration(k, l - 1);
        Subspace s = cycles_to_depth(r - 1, k, l - 1);
        if (k + 1 <= k_max_ + 1) {
            Subspace zup = cycles_to_depth(r - 1, k + 1, l + r - 1);
            SparseMatrix img(zup.dim(), slices_[k].dim());
            for (int i = 0; i < zup.dim(); ++i) img.row_mut(i) = b_[k + 1].apply(zup.basis().row(i));
            s = s.sum(Subspace::span(img));
        }
        return s;
    }

    // True when the computed entry agrees with the untruncated complex: the
    // boundary term draws on cycles up at level l + r - 1, which the ambient
    // cap must cover. Beyond that the numbers are still the exact spectral
    // sequence of the level-capped subcomplex (which converges to its
    // homology, so abutment checks remain meaningful at any cap).
    bool entry_is_exact(int r, long l) const { return l + r - 1 <= level_cap_; }

    int page_dim(int r, int k, long l) const {
        if (k < 0 || k > k_max_) return 0;
        Subspace z = cycles_to_depth(r, k, l);
        Subspace d = boundaries_at(r, k, l);
        if (!z.contains(d)) throw std::logic_error("page boundaries escape page cycles");
        return z.dim() - d.dim();
    }

    // representatives spanning E^r(k, l) on top of the boundary part
    std::vector<SparseVec> page_reps(int r, int k, long l) const {
        std::vector<SparseVec> reps;
        if (k < 0 || k > k_max_) return reps;
        Subspace z = cycles_to_depth(r, k, l);
        Subspace span = boundaries_at(r, k, l);
        for (int i = 0; i < z.dim(); ++i) {
            SparseVec v = z.basis().row(i);
            if (span.contains(v)) continue;
            reps.push_back(v);
            SparseMatrix one(1, slices_[k].dim());
            one.row_mut(0) = v;
            span = span.sum(Subspace::span(one));
        }
        return reps;
    }

    // matrix of d_r : E^r(k, l) -> E^r(k-1, l-r) in the representative bases
    SparseMatrix page_differential(int r, int k, long l) const {
        std::vector<SparseVec> dom = page_reps(r, k, l);
        std::vector<SparseVec> cod = page_reps(r, k - 1, l - r);
        SparseMatrix m(static_cast<int>(cod.size()), static_cast<int>(dom.size()));
        if (dom.empty() || k < 1) return m;
        Subspace zt = cycles_to_depth(r, k - 1, l - r);
        Subspace dt = boundaries_at(r, k - 1, l - r);
        // columns: boundary-part basis then the representatives
        SparseMatrix sys(slices_[k - 1].dim(), dt.dim() + static_cast<int>(cod.size()));
        for (int i = 0; i < dt.dim(); ++i)
            for (const auto& [j, v] : dt.basis().row(i)) sys.add(j, i, v);
        for (size_t i = 0; i < cod.size(); ++i)
            for (const auto& [j, v] : cod[i]) sys.add(j, dt.dim() + static_cast<int>(i), v);
        for (size_t c = 0; c < dom.size(); ++c) {
            SparseVec y = b_.at(k).apply(dom[c]);
            if (!zt.contains(y)) throw std::logic_error("page differential leaves the target cycles");
            std::vector<Rat> rhs(slices_[k - 1].dim(), Rat(0));
            for (const auto& [j, v] : y) rhs[j] = v;
            auto x = solve(sys, rhs);
            if (!x) throw std::logic_error("page differential has no expansion in the target page");
            for (size_t i = 0; i < cod.size(); ++i)
                if ((*x)[dt.dim() + i] != 0) m.set(static_cast<int>(i), static_cast<int>(c), (*x)[dt.dim() + i]);
        }
        return m;
    }

    // stabilized page dimension with a +1 confirmation step
    std::pair<int, bool> einf_dim(int k, long l, int depth) const {
        int a = page_dim(depth, k, l);
        int b = page_dim(depth + 1, k, l);
        return {b, a == b};
    }

    long min_level(int k) const {
        long lo = level_cap_;
        for (long l : levels_.at(k)) lo = std::min(lo, l);
        return lo;
    }

private:
    long clamp_level(int k, long l) const {
        long lo = slices_.at(k).dim() ? levels_.at(k).front() : 0;
        for (long x : levels_.at(k)) lo = std::min(lo, x);
        return std::clamp(l, lo - 1, level_cap_);
    }

    long fildeg_of(const Tensor& t) const {
        long p = 0;
        for (const auto& f : t) p += complex_.algebra().fildeg(f);
        return p;
    }

    HochschildComplex complex_;
    int k_max_;
    std::optional<long> w_;
    long level_cap_;
    int class_id_;
    int parity_;
    int step_ = 1;
    long base_ = 0;
    std::vector<ChainSlice> slices_;
    std::vector<std::vector<long>> levels_;
    std::vector<SparseMatrix> b_;
    mutable std::map<std::pair<int, long>, Subspace> f_memo_;
    mutable std::map<std::tuple<int, int, long>, Subspace> z_memo_;
};

// Dimension of the centralizer-invariant forms on the full symplectic space
// with form degree k, x-mass a and xi-mass s (E^1 target for a class whose
// fixed space is everything); the point case handles fixed dimension zero.
inline int invariant_symplectic_forms_dim(const FiniteMatrixGroup& grp, int gamma,
                                          const std::vector<int>& centralizer, int k, long a,
                                          long s) {
    Subspace fixed = grp.fixed_decomposition(gamma).fixed;
    int N = grp.dim();
    int n = N / 2;
    if (fixed.dim() == 0) return (k == 0 && a == 0 && s == 0) ? 1 : 0;
    if (fixed.dim() != N)
        throw std::logic_error("mass-resolved invariant forms need a full or zero fixed space");
    if (a < 0 || s < 0 || a + s < k) return 0;
    std::vector<FormKey> basis;
    for (const auto& key : form_basis(N, k, a + s))
        if (x_mass(n, key) == a && xi_mass(n, key) == s) basis.push_back(key);
    if (basis.empty()) return 0;
    std::map<int, SparseMatrix> rep;
    for (int g : centralizer)
        rep.emplace(g, form_operator_matrix(
                           [&](const FormKey& key) {
                               return form_act(grp.matrix(g), PolyForm{{key, Rat(1)}});
                           },
                           basis, basis));
    return rank(FiniteMatrixGroup::average_projector(grp, centralizer, rep));
}

// Comparison machinery between the first page of the Weyl-model spectral
// sequence and polynomial forms: the associated graded crossed product, the
// symbol of a chain, the averaged normal-ordered section, and the zig-zag d^1.
class WeylFormBridge {
public:
    WeylFormBridge(CrossedPtr weyl, int class_id)
        : weyl_(std::move(weyl)), class_id_(class_id) {
        const Algebra& base = *weyl_->base();
        if (base.filtration_step() != 2)
            throw std::logic_error("the form bridge expects a Weyl-type filtration");
        n_ = base.vars() / 2;
        auto poly = std::make_shared<PolynomialAlgebra>(base.vars());
        if (weyl_->has_action()) {
            auto act = std::make_shared<LinearAction>(poly, weyl_->group());
            gr_ = std::make_shared<CrossedAlgebra>(poly, act);
        } else {
            gr_ = std::make_shared<CrossedAlgebra>(poly);
        }
        chi_ = std::make_unique<ChiGamma>(gr_, class_id_);
        gamma_ = weyl_->classes()[class_id_].representative;
        centralizer_ = weyl_->classes()[class_id_].centralizer;
    }

    int n() const { return n_; }
    int gamma() const { return gamma_; }
    const std::vector<int>& centralizer() const { return centralizer_; }
    const CrossedPtr& graded() const { return gr_; }
    const ChiGamma& chi() const { return *chi_; }

    // the level-l symbol of a chain vector, as a form on the fixed space
    PolyForm symbol_form(const FilteredSS& ss, int k, const SparseVec& v, long l) const {
        TensorComb lead;
        for (const auto& [i, c] : v)
            if (ss.level_of(k, i) == l) comb_add_to(lead, ss.slice(k).basis[i], c);
        return chi_->of_comb(lead);
    }

    // normal-ordered section of the antisymmetrized form, decorated
    // (gamma, e, ..., e), averaged over the centralizer on the chain level
    TensorComb averaged_section(const HochschildComplex& hoch, const PolyForm& form) const {
        int e = weyl_->group().identity();
        TensorComb raw;
        for (const auto& [key, c] : form)
            for (const auto& [t, v] : hkr_E(2 * n_, key)) {
                Tensor dec(t.size());
                dec[0] = {t[0], gamma_};
                for (size_t i = 1; i < t.size(); ++i) dec[i] = {t[i], e};
                comb_add_to(raw, dec, c * v);
            }
        TensorComb avg;
        Rat scale(1, static_cast<long>(centralizer_.size()));
        for (int g : centralizer_)
            for (const auto& [t, c] : raw)
                for (const auto& [r, v] : hoch.group_act(g, t)) comb_add_to(avg, r, scale * c * v);
        return avg;
    }

    // zig-zag d^1 of a homogeneous form: lift through the averaged section,
    // apply b, take the symbol one filtration step down. The top part of the
    // boundary cancels identically because the section of a form is a cycle
    // for the graded differential; this is asserted, not assumed.
    PolyForm d1_of_form(const HochschildComplex& hoch, const PolyForm& form) const {
        TensorComb lift = averaged_section(hoch, form);
        if (lift.empty()) return {};
        const CrossedAlgebra& alg = hoch.algebra();
        long p = tensor_fildeg(alg, lift.begin()->first);
        TensorComb bl;
        for (const auto& [t, c] : lift) {
            if (tensor_fildeg(alg, t) != p)
                throw std::logic_error("section of an inhomogeneous form");
            for (const auto& [r, v] : hoch.b_of(t)) comb_add_to(bl, r, c * v);
        }
        TensorComb lead;
        for (const auto& [t, c] : bl) {
            long q = tensor_fildeg(alg, t);
            if (q > p - 2) throw std::logic_error("leading symbol of the lifted boundary did not cancel");
            if (q == p - 2) comb_add_to(lead, t, c);
        }
        return chi_->of_comb(lead);
    }

    // delta on fixed-space forms (zero map on a point)
    PolyForm delta_form(const PolyForm& form) const {
        if (chi_->fixed_dim() == 0) return {};
        if (chi_->fixed_dim() != 2 * n_)
            throw std::logic_error("delta on a proper fixed subspace is out of scope here");
        return brylinski_delta(n_, form);
    }

private:
    CrossedPtr weyl_;
    int class_id_;
    int n_;
    CrossedPtr gr_;
    std::unique_ptr<ChiGamma> chi_;
    int gamma_ = 0;
    std::vector<int> centralizer_;
};

// First-page entry checked against the invariant-form model: E^1(k, l) at
// weight w must match centralizer-invariant forms on the fixed space with
// form degree k, x-mass l and xi-mass l + w.
inline int verify_e1_dims(const FilteredSS& ss, const WeylFormBridge& bridge, int k, long l) {
    const FiniteMatrixGroup& grp = ss.complex().algebra().group();
    long w = ss.base_degree();
    int forms = invariant_symplectic_forms_dim(grp, bridge.gamma(), bridge.centralizer(), k, l, l + w);
    int page = ss.page_dim(1, k, l);
    if (forms != page)
        throw E1MismatchError("E1(k=" + std::to_string(k) + ", l=" + std::to_string(l) +
                              ", w=" + std::to_string(w) + ") has dimension " + std::to_string(page) +
                              " but the invariant forms with x-mass " + std::to_string(l) +
                              " and xi-mass " + std::to_string(l + w) + " have dimension " +
                              std::to_string(forms));
    return page;
}

struct StabilizedCount {
    int value = 0;
    bool stable = false;
};

// Rank of the inclusion-induced map H_k(F_window) -> H_k(F_ambient): cycles
// supported inside the window, counted modulo boundaries from the whole
// ambient cap. The homology of the full algebra is the colimit of these
// images, so stabilization of this rank (not of the plain capped homology,
// whose dimension can be propped up forever by ever-higher classes) is the
// honest finite surrogate.
inline int hh_image_rank(const HochschildComplex& hoch, int k, std::optional<long> w,
                         long cap_window, long cap_ambient, int class_id = kPlainClass) {
    ChainSlice up = hoch.slice(k + 1, w, cap_ambient, class_id);
    ChainSlice here = hoch.slice(k, w, cap_ambient, class_id);
    ChainSlice down = hoch.slice(k - 1, w, cap_ambient, class_id);
    const CrossedAlgebra& alg = hoch.algebra();
    Subspace cycles = kernel_basis(hoch.b_matrix(here, down));
    SparseMatrix window(0, here.dim());
    {
        std::vector<int> inside;
        for (int i = 0; i < here.dim(); ++i)
            if (tensor_fildeg(alg, here.basis[i]) <= cap_window) inside.push_back(i);
        window = SparseMatrix(static_cast<int>(inside.size()), here.dim());
        for (size_t r = 0; r < inside.size(); ++r) window.set(static_cast<int>(r), inside[r], 1);
    }
    Subspace z = cycles.intersect(Subspace::span(window));
    Subspace bd = image(hoch.b_matrix(up, here));
    return z.dim() - z.intersect(bd).dim();
}

inline int hc_image_rank(const HochschildComplex& hoch, int k, std::optional<long> w,
                         long cap_window, long cap_ambient, int class_id = kPlainClass) {
    auto parts = [&](int deg) {
        std::vector<ChainSlice> p;
        for (int d = deg; d >= 0; d -= 2) p.push_back(hoch.slice(d, w, cap_ambient, class_id));
        return p;
    };
    std::vector<ChainSlice> up = parts(k + 1), here = parts(k), down = parts(k - 1);
    const CrossedAlgebra& alg = hoch.algebra();
    Subspace cycles = kernel_basis(hoch.total_matrix(here, down));
    int total = 0;
    for (const auto& s : here) total += s.dim();
    std::vector<int> inside;
    int off = 0;
    for (const auto& s : here) {
        for (int i = 0; i < s.dim(); ++i)
            if (tensor_fildeg(alg, s.basis[i]) <= cap_window) inside.push_back(off + i);
        off += s.dim();
    }
    SparseMatrix window(static_cast<int>(inside.size()), total);
    for (size_t r = 0; r < inside.size(); ++r) window.set(static_cast<int>(r), inside[r], 1);
    Subspace z = cycles.intersect(Subspace::span(window));
    Subspace bd = image(hoch.total_matrix(up, here));
    return z.dim() - z.intersect(bd).dim();
}

// Stabilized homology count: the image rank at window depth j, probed one
// filtration step deeper in both the window and the ambient cap.
inline StabilizedCount hh_filtered(const HochschildComplex& hoch, int k, std::optional<long> w,
                                   int depth, int class_id = kPlainClass, int probe = 1) {
    const Algebra& base = *hoch.algebra().base();
    int step = base.filtration_step();
    long base_fil = w ? std::max<long>(*w, -*w) : 0;
    long cj = base_fil + static_cast<long>(step) * depth;
    long cJ = cj + static_cast<long>(step) * probe;
    StabilizedCount out;
    out.value = hh_image_rank(hoch, k, w, cj, cJ, class_id);
    out.stable = (out.value == hh_image_rank(hoch, k, w, cj, cJ + step, class_id)) &&
                 (out.value == hh_image_rank(hoch, k, w, cj + step, cJ + step, class_id));
    return out;
}

inline StabilizedCount hc_filtered(const HochschildComplex& hoch, int k, std::optional<long> w,
                                   int depth, int class_id = kPlainClass, int probe = 1) {
    const Algebra& base = *hoch.algebra().base();
    int step = base.filtration_step();
    long base_fil = w ? std::max<long>(*w, -*w) : 0;
    long cj = base_fil + static_cast<long>(step) * depth;
    long cJ = cj + static_cast<long>(step) * probe;
    StabilizedCount out;
    out.value = hc_image_rank(hoch, k, w, cj, cJ, class_id);
    out.stable = (out.value == hc_image_rank(hoch, k, w, cj, cJ + step, class_id)) &&
                 (out.value == hc_image_rank(hoch, k, w, cj + step, cJ + step, class_id));
    return out;
}

struct CyclicComparison {
    int hc = 0;
    int hh_sum = 0;
    bool stable = false;
};

// HC_k against the sum formula sum_{j>=0} HH_{k-2j}; a mismatch means the
// connecting map B fails to vanish on homology for this model and is raised,
// not patched.
inline CyclicComparison hc_and_hp_check(const HochschildComplex& hoch, int k, std::optional<long> w,
                                        int depth, int class_id = kPlainClass) {
    CyclicComparison out;
    StabilizedCount hc = hc_filtered(hoch, k, w, depth, class_id);
    out.hc = hc.value;
    out.stable = hc.stable;
    for (int d = k; d >= 0; d -= 2) {
        StabilizedCount hh = hh_filtered(hoch, d, w, depth, class_id);
        out.hh_sum += hh.value;
        out.stable = out.stable && hh.stable;
    }
    if (out.hc != out.hh_sum)
        throw SBIViolation("HC_" + std::to_string(k) + " != sum of HH_{k-2j} (" +
                           std::to_string(out.hc) + " vs " + std::to_string(out.hh_sum) + ")");
    return out;
}

}  // namespace homalg

#endif
