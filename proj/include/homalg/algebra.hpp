#ifndef HOMALG_ALGEBRA_HPP
#define HOMALG_ALGEBRA_HPP

#include <limits>
#include <memory>
#include <mutex>
#include <string>

#include "homalg/group.hpp"

namespace homalg {

struct ActionInvalid : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadWindow : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotElliptic : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Mono = std::vector<int>;         // exponent vector over the algebra's variables
using Element = std::map<Mono, Rat>;   // finite rational combination of basis monomials

constexpr long kNoFloor = std::numeric_limits<long>::min() / 4;

inline void elem_add_to(Element& dst, const Mono& m, const Rat& c) {
    if (c == 0) return;
    Rat& slot = dst[m];
    slot += c;
    if (slot == 0) dst.erase(m);
}

inline void elem_axpy(Element& dst, const Rat& c, const Element& src) {
    for (const auto& [m, v] : src) elem_add_to(dst, m, c * v);
}

inline Int factorial(int k) {
    Int f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

inline Int binom(long n, int k) {
    if (k < 0) return 0;
    Int num = 1;
    for (int i = 0; i < k; ++i) num *= Int(n - i);
    return num / factorial(k);
}

// Falling factorial j(j-1)...(j-k+1); valid for negative j too.
inline Int falling(long j, int k) {
    Int f = 1;
    for (int i = 0; i < k; ++i) f *= Int(j - i);
    return f;
}

// An algebra with a labeled monomial basis, an exact weight grading and
// (possibly coarser) integer filtration. Products may drop terms below a
// filtration floor; graded algebras ignore the floor.
class Algebra {
public:
    virtual ~Algebra() = default;

    int vars() const { return nvars_; }
    Mono unit() const { return Mono(nvars_, 0); }

    virtual Element mono_mul(const Mono& a, const Mono& b, long floor = kNoFloor) const = 0;
    virtual long weight(const Mono& m) const = 0;
    virtual long fildeg(const Mono& m) const { return weight(m); }
    // true when fildeg == weight and products are weight-additive term counts
    virtual bool filtered() const { return false; }
    // filtration drop of any product term is a multiple of this
    virtual int filtration_step() const { return 1; }
    // every basis monomial with fildeg <= filcap (finite by construction)
    virtual std::vector<Mono> monos_up_to(long filcap) const = 0;
    virtual std::string name() const = 0;

    Element elem_mul(const Element& a, const Element& b, long floor = kNoFloor) const {
        Element out;
        for (const auto& [ma, ca] : a)
            for (const auto& [mb, cb] : b) elem_axpy(out, ca * cb, mono_mul(ma, mb, floor));
        return out;
    }

    Element elem_pow(const Element& a, int e, long floor = kNoFloor) const {
        Element out{{unit(), Rat(1)}};
        for (int i = 0; i < e; ++i) out = elem_mul(out, a, floor);
        return out;
    }

protected:
    explicit Algebra(int nvars) : nvars_(nvars) {}
    int nvars_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Q[X_1..X_n], weight = total degree.
class PolynomialAlgebra : public Algebra {
public:
    explicit PolynomialAlgebra(int n) : Algebra(n) {}

    Element mono_mul(const Mono& a, const Mono& b, long = kNoFloor) const override {
        Mono m(nvars_);
        for (int i = 0; i < nvars_; ++i) m[i] = a[i] + b[i];
        return {{m, Rat(1)}};
    }
    long weight(const Mono& m) const override {
        long w = 0;
        for (int e : m) w += e;
        return w;
    }
    std::vector<Mono> monos_up_to(long filcap) const override {
        std::vector<Mono> out;
        Mono cur(nvars_, 0);
        enumerate(0, filcap, cur, out);
        return out;
    }
    std::string name() const override { return "polynomial(" + std::to_string(nvars_) + ")"; }

private:
    void enumerate(int var, long budget, Mono& cur, std::vector<Mono>& out) const {
        if (var == nvars_) {
            out.push_back(cur);
            return;
        }
        for (long e = 0; e <= budget; ++e) {
            cur[var] = static_cast<int>(e);
            enumerate(var + 1, budget - e, cur, out);
        }
        cur[var] = 0;
    }
};

// Q[X_1..X_n]/(X_i^order), weight = total degree.
class TruncatedPolynomialAlgebra : public Algebra {
public:
    TruncatedPolynomialAlgebra(int n, int order) : Algebra(n), order_(order) {
        if (order < 1) throw std::logic_error("truncation order must be >= 1");
    }

    Element mono_mul(const Mono& a, const Mono& b, long = kNoFloor) const override {
        Mono m(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            m[i] = a[i] + b[i];
            if (m[i] >= order_) return {};
        }
        return {{m, Rat(1)}};
    }
    long weight(const Mono& m) const override {
        long w = 0;
        for (int e : m) w += e;
        return w;
    }
    std::vector<Mono> monos_up_to(long filcap) const override {
        std::vector<Mono> out;
        Mono cur(nvars_, 0);
        enumerate(0, filcap, cur, out);
        return out;
    }
    int truncation_order() const { return order_; }
    std::string name() const override {
        return "truncated_polynomial(" + std::to_string(nvars_) + "," + std::to_string(order_) + ")";
    }

private:
    void enumerate(int var, long budget, Mono& cur, std::vector<Mono>& out) const {
        if (var == nvars_) {
            out.push_back(cur);
            return;
        }
        for (long e = 0; e <= std::min<long>(budget, order_ - 1); ++e) {
            cur[var] = static_cast<int>(e);
            enumerate(var + 1, budget - e, cur, out);
        }
        cur[var] = 0;
    }

    int order_;
};

// Weyl algebra A_n: variables x_1..x_n, xi_1..xi_n with xi_i x_i - x_i xi_i = 1,
// normal-ordered basis x^a xi^b. Exact weight |b|-|a| (preserved by products),
// Bernstein filtration |a|+|b| (products drop it by even amounts).
class WeylAlgebra : public Algebra {
public:
    explicit WeylAlgebra(int n) : Algebra(2 * n), half_(n) {
        if (n < 1) throw std::logic_error("weyl_algebra needs n >= 1");
    }

    int half_dim() const { return half_; }

    // (x^a xi^b)(x^c xi^d) = sum_k prod_i k_i! C(b_i,k_i) C(c_i,k_i) x^{a+c-k} xi^{b+d-k}
    Element mono_mul(const Mono& a, const Mono& b, long floor = kNoFloor) const override {
        Element out;
        Mono k(half_, 0);
        contract(0, Rat(1), a, b, k, floor, out);
        return out;
    }

    long weight(const Mono& m) const override {
        long w = 0;
        for (int i = 0; i < half_; ++i) w += m[half_ + i] - m[i];
        return w;
    }
    long fildeg(const Mono& m) const override {
        long d = 0;
        for (int e : m) d += e;
        return d;
    }
    bool filtered() const override { return true; }
    int filtration_step() const override { return 2; }
    std::vector<Mono> monos_up_to(long filcap) const override {
        std::vector<Mono> out;
        Mono cur(nvars_, 0);
        enumerate(0, filcap, cur, out);
        return out;
    }
    std::string name() const override { return "weyl(" + std::to_string(half_) + ")"; }

private:
    void contract(int i, Rat coeff, const Mono& a, const Mono& b, Mono& k, long floor, Element& out) const {
        if (i == half_) {
            Mono m(nvars_);
            long fd = 0;
            for (int v = 0; v < half_; ++v) {
                m[v] = a[v] + b[v] - k[v];
                m[half_ + v] = a[half_ + v] + b[half_ + v] - k[v];
                fd += m[v] + m[half_ + v];
            }
            if (fd >= floor) elem_add_to(out, m, coeff);
            return;
        }
        int kmax = std::min(a[half_ + i], b[i]);
        for (int ki = 0; ki <= kmax; ++ki) {
            k[i] = ki;
            Rat c = coeff * Rat(factorial(ki) * binom(a[half_ + i], ki) * binom(b[i], ki));
            contract(i + 1, c, a, b, k, floor, out);
        }
        k[i] = 0;
    }

    void enumerate(int var, long budget, Mono& cur, std::vector<Mono>& out) const {
        if (var == nvars_) {
            out.push_back(cur);
            return;
        }
        for (long e = 0; e <= budget; ++e) {
            cur[var] = static_cast<int>(e);
            enumerate(var + 1, budget - e, cur, out);
        }
        cur[var] = 0;
    }

    int half_;
};

// Laurent-truncated symbol model on the circle: basis t^m xi^j (m the Fourier
// index, j the symbol order), star product sum_k (1/k!) d_xi^k a . D^k b with
// the invariant derivative D = t d/dt, so D^k(t^m) = m^k t^m. Terms below the
// floor (default: the window's low edge) are dropped; the series is infinite
// downward otherwise. The Fourier index is an exact grading; filtration is the
// xi-degree. The cutoff bounds |m| in slice enumeration only, never in
// products.
class SymbolAlgebra : public Algebra {
public:
    SymbolAlgebra(int fourier_cutoff, long low, long high)
        : Algebra(2), cutoff_(fourier_cutoff), low_(low), high_(high) {
        if (low > high) throw BadWindow("symbol_model window low > high");
        if (low > 0 || high < 0) throw BadWindow("symbol_model window must contain 0");
    }

    long low() const { return low_; }
    long high() const { return high_; }
    int fourier_cutoff() const { return cutoff_; }

    Element mono_mul(const Mono& a, const Mono& b, long floor = kNoFloor) const override {
        long m = a[0], j = a[1], m2 = b[0], j2 = b[1];
        long effective_floor = (floor <= kNoFloor) ? low_ : floor;
        Element out;
        Rat coeff(1);
        for (int k = 0;; ++k) {
            long jr = j + j2 - k;
            if (jr < effective_floor) break;
            if (k > 0) {
                coeff *= Rat(Int(j - (k - 1)) * Int(m2), k);
                if (coeff == 0) break;  // series terminated exactly
            }
            Mono mono{static_cast<int>(m + m2), static_cast<int>(jr)};
            elem_add_to(out, mono, coeff);
        }
        return out;
    }

    long weight(const Mono& m) const override { return m[0]; }
    long fildeg(const Mono& m) const override { return m[1]; }
    bool filtered() const override { return true; }
    std::vector<Mono> monos_up_to(long filcap) const override {
        std::vector<Mono> out;
        for (long j = low_; j <= filcap; ++j)
            for (long m = -cutoff_; m <= cutoff_; ++m) out.push_back({static_cast<int>(m), static_cast<int>(j)});
        return out;
    }
    std::string name() const override {
        return "symbol_model(" + std::to_string(cutoff_) + ",[" + std::to_string(low_) + "," +
               std::to_string(high_) + "])";
    }

private:
    int cutoff_;
    long low_, high_;
};

// Group acting on an algebra's monomial basis by automorphisms.
class GroupAction {
public:
    GroupAction(AlgebraPtr alg, FiniteMatrixGroup grp) : alg_(std::move(alg)), grp_(std::move(grp)) {}
    virtual ~GroupAction() = default;

    const FiniteMatrixGroup& group() const { return grp_; }
    const AlgebraPtr& algebra() const { return alg_; }

    const Element& act(int g, const Mono& m) const {
        std::scoped_lock lk(memo_mutex_);
        auto key = std::make_pair(g, m);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        return memo_.emplace(key, compute(g, m)).first->second;
    }

    Element act_elem(int g, const Element& e) const {
        Element out;
        for (const auto& [m, c] : e) elem_axpy(out, c, act(g, m));
        return out;
    }

protected:
    virtual Element compute(int g, const Mono& m) const = 0;

    AlgebraPtr alg_;
    FiniteMatrixGroup grp_;

private:
    mutable std::mutex memo_mutex_;
    mutable std::map<std::pair<int, Mono>, Element> memo_;
};

using ActionPtr = std::shared_ptr<const GroupAction>;

// Variables transform by the group matrix itself: X_i -> sum_j M_ji X_j.
// For Laurent variables the matrices must be signed monomial maps.
class LinearAction : public GroupAction {
public:
    LinearAction(AlgebraPtr alg, FiniteMatrixGroup grp) : GroupAction(std::move(alg), std::move(grp)) {
        if (grp_.dim() != alg_->vars())
            throw ActionInvalid("group dimension does not match algebra variable count");
        bool laurent = dynamic_cast<const SymbolAlgebra*>(alg_.get()) != nullptr;
        for (int g = 0; g < grp_.order(); ++g) {
            const DenseMat& mat = grp_.matrix(g);
            for (int i = 0; i < alg_->vars(); ++i) {
                Element img;
                for (int j = 0; j < alg_->vars(); ++j) {
                    if (mat[j][i] == 0) continue;
                    Mono var(alg_->vars(), 0);
                    var[j] = 1;
                    img[var] = mat[j][i];
                }
                if (laurent && (img.size() != 1 || abs(img.begin()->second) != 1))
                    throw ActionInvalid("Laurent algebra needs signed monomial group matrices");
                var_images_.push_back(std::move(img));
            }
        }
    }

protected:
    Element compute(int g, const Mono& m) const override {
        bool laurent = dynamic_cast<const SymbolAlgebra*>(alg_.get()) != nullptr;
        Element out{{alg_->unit(), Rat(1)}};
        for (int i = 0; i < alg_->vars(); ++i) {
            if (m[i] == 0) continue;
            const Element& img = var_images_[static_cast<size_t>(g) * alg_->vars() + i];
            if (laurent) {
                // signed monomial image, exponent may be negative
                const auto& [var, coeff] = *img.begin();
                Element powed;
                Mono pm(alg_->vars(), 0);
                for (int v = 0; v < alg_->vars(); ++v) pm[v] = var[v] * m[i];
                // coeff is +-1, so coeff^e only depends on the parity of e
                powed[pm] = (coeff == -1 && (m[i] % 2 != 0)) ? Rat(-1) : Rat(1);
                out = alg_->elem_mul(out, powed);
            } else {
                out = alg_->elem_mul(out, alg_->elem_pow(img, m[i]));
            }
        }
        return out;
    }

private:
    std::vector<Element> var_images_;  // [g * vars + i]
};

// Basis label of a crossed product: base monomial decorated with a group element.
struct CPMono {
    Mono m;
    int g = 0;
    auto operator<=>(const CPMono&) const = default;
};
using CPElement = std::map<CPMono, Rat>;

inline void cp_add_to(CPElement& dst, const CPMono& m, const Rat& c) {
    if (c == 0) return;
    Rat& slot = dst[m];
    slot += c;
    if (slot == 0) dst.erase(m);
}

// A (possibly trivially) crossed product B = A x| Gamma with basis (m, g) and
// product (a g)(b h) = a g(b) gh. Plain algebras are the trivial-group case.
class CrossedAlgebra {
public:
    // trivial group wrapper
    explicit CrossedAlgebra(AlgebraPtr base)
        : base_(std::move(base)), grp_(FiniteMatrixGroup::trivial(base_->vars())), action_(nullptr) {
        classes_ = grp_.conjugacy_classes();
    }

    CrossedAlgebra(AlgebraPtr base, ActionPtr action)
        : base_(std::move(base)), grp_(action->group()), action_(std::move(action)) {
        validate();
        classes_ = grp_.conjugacy_classes();
    }

    const AlgebraPtr& base() const { return base_; }
    const FiniteMatrixGroup& group() const { return grp_; }
    bool has_action() const { return action_ != nullptr; }
    const std::vector<ConjugacyClass>& classes() const { return classes_; }

    Element act(int g, const Mono& m) const {
        if (!action_) return {{m, Rat(1)}};
        return action_->act(g, m);
    }
    Element act_elem(int g, const Element& e) const {
        if (!action_) return e;
        return action_->act_elem(g, e);
    }

    CPMono unit() const { return {base_->unit(), grp_.identity()}; }

    CPElement mul(const CPMono& a, const CPMono& b, long floor = kNoFloor) const {
        CPElement out;
        Element gb = act(a.g, b.m);
        int gh = grp_.mul(a.g, b.g);
        for (const auto& [mb, cb] : gb)
            for (const auto& [m, c] : base_->mono_mul(a.m, mb, floor)) cp_add_to(out, {m, gh}, cb * c);
        return out;
    }

    long weight(const CPMono& a) const { return base_->weight(a.m); }
    long fildeg(const CPMono& a) const { return base_->fildeg(a.m); }

    int class_of_product(const std::vector<int>& gs) const {
        // class of g_1 g_2 ... g_k g_0 for decorations (g_0, ..., g_k)
        int p = grp_.identity();
        for (size_t i = 1; i < gs.size(); ++i) p = grp_.mul(p, gs[i]);
        p = grp_.mul(p, gs[0]);
        return grp_.class_of(p, classes_);
    }

    std::string name() const {
        if (!action_ || grp_.order() == 1) return base_->name();
        return base_->name() + " x| G" + std::to_string(grp_.order());
    }

private:
    void validate() const {
        if (grp_.dim() < 0) throw ActionInvalid("bad group");
        int n = base_->vars();
        std::vector<Mono> gens;
        for (int i = 0; i < n; ++i) {
            Mono v(n, 0);
            v[i] = 1;
            gens.push_back(v);
        }
        for (int g = 0; g < grp_.order(); ++g) {
            for (const auto& vi : gens) {
                // weight and filtration preserved on generators
                for (const auto& [m, c] : action_->act(g, vi)) {
                    if (base_->weight(m) != base_->weight(vi) && !base_->filtered())
                        throw ActionInvalid("action does not preserve weight");
                    if (base_->fildeg(m) > base_->fildeg(vi))
                        throw ActionInvalid("action raises filtration");
                }
                // homomorphism on all pairs
                for (int h = 0; h < grp_.order(); ++h) {
                    Element lhs = action_->act_elem(g, action_->act(h, vi));
                    Element rhs = action_->act(grp_.mul(g, h), vi);
                    if (lhs != rhs) throw ActionInvalid("action is not a group homomorphism");
                }
                // automorphism on generator pairs
                for (const auto& vj : gens) {
                    Element lhs = action_->act_elem(g, base_->mono_mul(vi, vj));
                    Element rhs = base_->elem_mul(action_->act(g, vi), action_->act(g, vj));
                    if (lhs != rhs) throw ActionInvalid("action is not by algebra automorphisms");
                }
            }
        }
    }

    AlgebraPtr base_;
    FiniteMatrixGroup grp_;
    ActionPtr action_;
    std::vector<ConjugacyClass> classes_;
};

using CrossedPtr = std::shared_ptr<const CrossedAlgebra>;

// Associated graded of a filtered algebra: same basis, product keeps only the
// terms of top filtration degree; the filtration degree becomes the weight.
class AssociatedGraded : public Algebra {
public:
    explicit AssociatedGraded(AlgebraPtr base) : Algebra(base->vars()), base_(std::move(base)) {
        if (!base_->filtered()) throw std::logic_error("associated_graded of a graded algebra is itself");
    }

    const AlgebraPtr& filtered_base() const { return base_; }

    Element mono_mul(const Mono& a, const Mono& b, long floor = kNoFloor) const override {
        long top = base_->fildeg(a) + base_->fildeg(b);
        Element full = base_->mono_mul(a, b, std::max(floor, top));
        Element out;
        for (const auto& [m, c] : full)
            if (base_->fildeg(m) == top) elem_add_to(out, m, c);
        return out;
    }
    long weight(const Mono& m) const override { return base_->fildeg(m); }
    long fildeg(const Mono& m) const override { return base_->fildeg(m); }
    std::vector<Mono> monos_up_to(long filcap) const override { return base_->monos_up_to(filcap); }
    // the finer exact grading of the base survives on Gr and is used for slicing
    long rotation_weight(const Mono& m) const { return base_->weight(m); }
    std::string name() const override { return "gr(" + base_->name() + ")"; }

private:
    AlgebraPtr base_;
};

// Axiom-style elliptic splitting data: a monomial elliptic element p of
// filtration degree exactly 1, invertible in the working window; the induced
// splitting Gr_n -> F_n is the monomial section determined by powers of p.
struct EllipticSplitting {
    Mono p;
    Mono lift(const Mono& gr_mono) const { return gr_mono; }
};

inline EllipticSplitting declare_elliptic(const AlgebraPtr& alg, const Mono& p) {
    if (!alg->filtered()) throw NotElliptic("algebra is not filtered");
    if (alg->fildeg(p) != 1)
        throw NotElliptic("elliptic element must have filtration degree exactly 1 (nondegeneracy)");
    // invertibility in the working quotient: solve p * q = 1 over the window
    auto monos = alg->monos_up_to(1);
    SparseMatrix sys(0, 0);
    std::vector<Mono> domain = monos;
    std::map<Mono, int> row_index;
    std::vector<std::map<int, Rat>> rows;
    auto row_of = [&](const Mono& m) {
        auto it = row_index.find(m);
        if (it != row_index.end()) return it->second;
        int idx = static_cast<int>(row_index.size());
        row_index[m] = idx;
        rows.emplace_back();
        return idx;
    };
    for (int j = 0; j < static_cast<int>(domain.size()); ++j)
        for (const auto& [m, c] : alg->mono_mul(p, domain[j])) rows[static_cast<size_t>(row_of(m))][j] = c;
    SparseMatrix mat(static_cast<int>(rows.size()), static_cast<int>(domain.size()));
    for (int i = 0; i < mat.rows(); ++i)
        for (const auto& [j, c] : rows[static_cast<size_t>(i)]) mat.set(i, j, c);
    std::vector<Rat> rhs(static_cast<size_t>(mat.rows()), Rat(0));
    auto uit = row_index.find(alg->unit());
    if (uit == row_index.end()) throw NotElliptic("unit not reachable from p * window");
    rhs[static_cast<size_t>(uit->second)] = 1;
    if (!solve(mat, rhs)) throw NotElliptic("element is not invertible in the working quotient");
    // power condition p^n in F_n over a small window
    Element pw{{p, Rat(1)}};
    for (int n = 2; n <= 3; ++n) {
        pw = alg->elem_mul(pw, Element{{p, Rat(1)}});
        for (const auto& [m, c] : pw)
            if (alg->fildeg(m) > n) throw NotElliptic("power p^n escapes F_n");
    }
    return EllipticSplitting{p};
}

}  // namespace homalg

#endif
