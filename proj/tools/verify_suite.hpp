#ifndef HOMALG_VERIFY_SUITE_HPP
#define HOMALG_VERIFY_SUITE_HPP

#include <sstream>
#include <string>
#include <vector>

#include "homalg/identities.hpp"
#include "homalg/koszul.hpp"
#include "homalg/models.hpp"
#include "homalg/spectral.hpp"
#include "homalg/symplectic.hpp"

// Shared verification battery: each check returns a deterministic pass/fail
// result with a summary that is byte-identical across reruns (no wall-clock
// data in here; timing goes to stderr in the callers).
namespace homalg::verify {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct Window {
    // simplicial/cyclic operator identities
    int c1_kmax = 4;
    long c1_wmax = 6;
    long long c1_cap = 3000;  // largest slice enumerated directly
    // comparison maps F and G
    int c2_kmax = 3;
    long c2_wmax = 4;
    long long c2_cap = 2000;
    // HKR dimensions
    int c3_nmax = 2;
    int c3_kmax = 3;
    long c3_wmax = 5;
    // twisted pipelines
    int c4_kmax = 2;
    long c4_wmax = 4;
    // Koszul acyclicity
    int c5_nmax = 3;
    long c5_wmax = 5;
    // star / delta relations
    int c6_nmax = 2;
    long c6_wmax = 5;
    // first page vs delta
    long c8_wmax = 4;
    int c8_form_mass = 3;
    // degeneration and abutment
    long c9_wmax = 4;
    int c9_kmax = 3;
    // Weyl homology totals
    int c10_kmax = 3;
    int c10_plain_depth = 2;
    int c10_crossed_depth = 1;
    // cyclic sum formula
    int c11_kmax_graded = 3;
    long c11_wmax_graded = 5;
    long c11_wmax_crossed = 4;
    bool c11_deep = true;  // include the degree-4 periodicity probes

    static Window acceptance() { return Window{}; }

    static Window quick() {
        Window w;
        w.c1_kmax = 3;
        w.c1_wmax = 3;
        w.c1_cap = 600;
        w.c2_kmax = 2;
        w.c2_wmax = 3;
        w.c2_cap = 600;
        w.c3_wmax = 4;
        w.c4_wmax = 3;
        w.c5_nmax = 2;
        w.c5_wmax = 4;
        w.c6_wmax = 4;
        w.c8_wmax = 2;
        w.c8_form_mass = 2;
        w.c9_wmax = 1;
        w.c9_kmax = 2;
        w.c10_kmax = 2;
        w.c10_plain_depth = 1;
        w.c11_kmax_graded = 2;
        w.c11_wmax_graded = 4;
        w.c11_wmax_crossed = 3;
        w.c11_deep = false;
        return w;
    }
};

namespace detail {

inline long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

inline long poly_dim(int m, long d) {
    if (d < 0) return 0;
    if (m == 0) return d == 0 ? 1 : 0;
    return binomial(m + static_cast<int>(d) - 1, m - 1);
}

inline PolyForm key_form(const FormKey& key) { return {{key, Rat(1)}}; }

inline std::vector<FormKey> mass_slice(int n, int k, long a, long s) {
    std::vector<FormKey> out;
    if (a < 0 || s < 0 || k < 0) return out;
    for (const auto& key : form_basis(2 * n, k, a + s))
        if (x_mass(n, key) == a && xi_mass(n, key) == s) out.push_back(key);
    return out;
}

struct NamedModel {
    std::string name;
    CrossedPtr alg;
};

inline std::vector<NamedModel> commutative_models() {
    return {{"Q[x]", models::poly_plain(1)},
            {"Q[x] x| Z/2", models::poly_sign()},
            {"Q[x,y]", models::poly_plain(2)},
            {"Q[x,y] x| Z/2", models::poly2_sign()},
            {"Q[x,y,z] x| S3", models::poly3_s3()},
            {"Q[x]/x^4", models::trunc_plain()},
            {"Q[x]/x^4 x| Z/2", models::trunc_sign()}};
}

inline std::vector<NamedModel> crossed_models() {
    return {{"Q[x] x| Z/2", models::poly_sign()},
            {"Q[x,y] x| Z/2", models::poly2_sign()},
            {"Q[x,y,z] x| S3", models::poly3_s3()},
            {"Q[x]/x^4 x| Z/2", models::trunc_sign()}};
}

// graded slice dimension bound when available, otherwise the true dimension
inline long long cell_bound(const CrossedAlgebra& alg, const HochschildComplex& hoch, int k,
                            long w) {
    if (!alg.base()->filtered()) return slice_size_bound(alg, k, w);
    return hoch.slice(k, w).dim();
}

// does B vanish on homology in degrees <= k at this weight (and class)?
inline bool b_vanishes_on_homology(const HochschildComplex& hoch, int k, long w, int class_id) {
    for (int d = 0; d <= k; ++d) {
        ChainSlice here = hoch.slice(d, w, kNoCap, class_id);
        ChainSlice up = hoch.slice(d + 1, w, kNoCap, class_id);
        Subspace cycles = d == 0 ? Subspace::span(SparseMatrix::identity(here.dim()))
                                 : kernel_basis(hoch.b_matrix(here, hoch.slice(d - 1, w, kNoCap,
                                                                               class_id)));
        Subspace bnd = image(hoch.b_matrix(up, here));
        // bB = -Bb, so B carries boundaries to boundaries and only homology
        // classes can obstruct; an acyclic slice needs no check at all, and
        // the degree d+2 slice is only built when homology is present
        if (cycles.dim() == bnd.dim()) continue;
        ChainSlice up2 = hoch.slice(d + 2, w, kNoCap, class_id);
        SparseMatrix B = hoch.B_matrix(here, up);
        Subspace bd2 = image(hoch.b_matrix(up2, up));
        for (int i = 0; i < cycles.dim(); ++i) {
            if (bnd.contains(cycles.basis().row(i))) continue;
            if (!bd2.contains(B.apply(cycles.basis().row(i)))) return false;
        }
    }
    return true;
}

}  // namespace detail

// 1. Chain-level operator identities on every model of the matrix, with the
//    universal pattern kernel standing in for slices too large to enumerate.
inline CheckResult check_simplicial(const Window& win) {
    CheckResult res{"simplicial and cyclic operator identities", true, ""};
    long long direct_cols = 0, twisted_cols = 0, pattern_cols = 0;
    int direct_cells = 0, deferred_cells = 0;
    try {
        for (const auto& model : detail::commutative_models()) {
            HochschildComplex hoch(model.alg);
            std::vector<int> deferred_k;
            for (int k = 0; k <= win.c1_kmax; ++k) {
                bool defer = false;
                for (long w = 0; w <= win.c1_wmax; ++w) {
                    long long bound = detail::cell_bound(*model.alg, hoch, k, w);
                    if (bound > win.c1_cap) {
                        defer = true;
                        continue;
                    }
                    for (const Tensor& t : hoch.slice(k, w).basis) {
                        check_simplicial_column(hoch, t);
                        ++direct_cols;
                    }
                    ++direct_cells;
                }
                if (defer) deferred_k.push_back(k);
            }
            // twisted differentials for every twisting element
            for (int h = 0; h < model.alg->group().order(); ++h) {
                TwistedComplex tw(model.alg, h);
                for (int k = 0; k <= win.c1_kmax; ++k)
                    for (long w = 0; w <= win.c1_wmax; ++w)
                        for (const TwTensor& t : tw.slice(k, w).basis) {
                            check_twisted_column(tw, t);
                            ++twisted_cols;
                        }
            }
            if (!deferred_k.empty()) {
                UniversalKernel uk(model.alg->group());
                for (int k : deferred_k) {
                    pattern_cols += uk.check_simplicial(k);
                    ++deferred_cells;
                }
            }
        }
        std::ostringstream os;
        os << direct_cols << " columns in " << direct_cells << " cells checked directly, "
           << twisted_cols << " twisted columns, " << deferred_cells
           << " oversized degree blocks covered by " << pattern_cols << " pattern columns";
        res.detail = os.str();
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 2. F and G are chain maps and G F is the invariant projector, on every
//    conjugacy class of the crossed models.
inline CheckResult check_comparison(const Window& win) {
    CheckResult res{"comparison maps between class components and twisted complexes", true, ""};
    long long f_cols = 0, g_cols = 0, inv_cols = 0, pattern_cols = 0;
    int deferred_blocks = 0;
    try {
        for (const auto& model : detail::crossed_models()) {
            HochschildComplex hoch(model.alg);
            const auto& classes = model.alg->classes();
            std::vector<int> deferred_k;
            for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
                int h = classes[cls].representative;
                TwistedComplex tw(model.alg, h);
                for (int k = 0; k <= win.c2_kmax; ++k)
                    for (long w = 0; w <= win.c2_wmax; ++w) {
                        // twisted side: F chain map and G F = projector
                        TwistedSlice tk = tw.slice(k, w);
                        if (tk.dim() > 0) {
                            SparseMatrix P = tw.invariant_projector(tk, classes[cls].centralizer);
                            for (int j = 0; j < tk.dim(); ++j) {
                                const TwTensor& t = tk.basis[j];
                                Tensor ft = F_of(*model.alg, h, t);
                                // b F = F b_h on this column
                                TensorComb lhs = hoch.b_of(ft);
                                TensorComb rhs;
                                for (const auto& [r, c] : tw.bh_of(t))
                                    comb_add_to(rhs, F_of(*model.alg, h, r), c);
                                if (lhs != rhs) throw IdentityFailure("b F != F b_h");
                                ++f_cols;
                                // G F equals the projector column
                                TwTensorComb gf = G_of(*model.alg, h, classes[cls].centralizer,
                                                       cls, ft);
                                for (int i = 0; i < tk.dim(); ++i) {
                                    auto it = gf.find(tk.basis[i]);
                                    Rat got = it == gf.end() ? Rat(0) : it->second;
                                    if (got != P.get(i, j))
                                        throw IdentityFailure("G F != invariant projector");
                                }
                                ++inv_cols;
                            }
                        }
                    }
            }
            // crossed side: G chain map, columnwise where the class slice is
            // small, by pattern columns otherwise
            for (int k = 0; k <= win.c2_kmax; ++k) {
                bool defer = false;
                for (long w = 0; w <= win.c2_wmax; ++w) {
                    long long bound = detail::cell_bound(*model.alg, hoch, k, w);
                    if (bound > win.c2_cap) {
                        defer = true;
                        continue;
                    }
                    for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
                        int h = classes[cls].representative;
                        TwistedComplex tw(model.alg, h);
                        for (const Tensor& t : hoch.slice(k, w, kNoCap, cls).basis) {
                            check_g_chain_column(*model.alg, tw, h, classes[cls].centralizer,
                                                 cls, hoch, t);
                            ++g_cols;
                        }
                    }
                }
                if (defer) deferred_k.push_back(k);
            }
            if (!deferred_k.empty()) {
                UniversalKernel uk(model.alg->group());
                for (int k : deferred_k) {
                    pattern_cols += uk.check_g_chain(k);
                    ++deferred_blocks;
                }
            }
        }
        std::ostringstream os;
        os << f_cols << " F columns, " << inv_cols << " G F projector columns, " << g_cols
           << " direct G chain-map columns, " << deferred_blocks << " oversized degree blocks via "
           << pattern_cols << " pattern columns";
        res.detail = os.str();
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 3. HKR dimension law and the chi E = id retraction.
inline CheckResult check_hkr(const Window& win) {
    CheckResult res{"HKR dimensions and the form retraction", true, ""};
    long checks = 0;
    try {
        for (int n = 1; n <= win.c3_nmax; ++n) {
            HochschildComplex hoch(models::poly_plain(n));
            PolynomialAlgebra base(n);
            for (int k = 0; k <= win.c3_kmax; ++k)
                for (long w = 0; w <= win.c3_wmax; ++w) {
                    long expect = detail::binomial(n, k) * detail::poly_dim(n, w - k);
                    int got = hoch.hh(k, w);
                    if (got != expect)
                        throw std::logic_error("HH_" + std::to_string(k) + " weight " +
                                               std::to_string(w) + " of Q[x^" + std::to_string(n) +
                                               "] is " + std::to_string(got) + ", expected " +
                                               std::to_string(expect));
                    ++checks;
                    for (const auto& key : form_basis(n, k, w)) {
                        if (hkr_chi_comb(base, hkr_E(n, key)) != detail::key_form(key))
                            throw std::logic_error("chi E != id on a form");
                        ++checks;
                    }
                }
        }
        res.detail = std::to_string(checks) + " dimension and retraction checks";
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 4. Twisted homology through three independent pipelines.
inline CheckResult check_twisted_pipelines(const Window& win) {
    CheckResult res{"twisted homology pipelines agree", true, ""};
    long checks = 0;
    try {
        std::vector<detail::NamedModel> cases = {
            {"Q[x] x| Z/2", models::poly_sign()},
            {"Q[x,y] x| Z/2(diag)", models::crossed(std::make_shared<PolynomialAlgebra>(2),
                                                    {models::imat({{1, 0}, {0, -1}})})},
            {"Q[x,y] x| Z/4(rot)", models::crossed(std::make_shared<PolynomialAlgebra>(2),
                                                   {models::imat({{0, -1}, {1, 0}})})},
            {"Q[x,y] x| Z/2(swap)", models::crossed(std::make_shared<PolynomialAlgebra>(2),
                                                    {models::imat({{0, 1}, {1, 0}})})}};
        for (const auto& model : cases) {
            const FiniteMatrixGroup& grp = model.alg->group();
            int n = grp.dim();
            for (int g = 0; g < grp.order(); ++g) {
                TwistedComplex tw(model.alg, g);
                int m = grp.fixed_decomposition(g).fixed.dim();
                for (int k = 0; k <= win.c4_kmax; ++k)
                    for (long w = 0; w <= win.c4_wmax; ++w) {
                        int bar = tw.hh(k, w);
                        int kos = twisted_via_koszul(n, grp.matrix(g), k, w);
                        long fix = detail::binomial(m, k) * detail::poly_dim(m, w - k);
                        if (bar != kos || bar != fix)
                            throw std::logic_error(
                                model.name + " twist " + std::to_string(g) + " (k=" +
                                std::to_string(k) + ", w=" + std::to_string(w) + "): bar " +
                                std::to_string(bar) + ", koszul " + std::to_string(kos) +
                                ", fixed-space forms " + std::to_string(fix));
                        ++checks;
                    }
            }
        }
        res.detail = std::to_string(checks) + " three-way dimension comparisons";
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 5. Koszul acyclicity on regular sequences and Kunneth multiplicativity.
inline CheckResult check_koszul(const Window& win) {
    CheckResult res{"Koszul acyclicity and Kunneth products", true, ""};
    long checks = 0;
    try {
        auto var = [](int n, int i) {
            Mono m(n, 0);
            m[i] = 1;
            return Element{{m, Rat(1)}};
        };
        std::vector<KoszulComplex> singles;
        for (int n = 1; n <= win.c5_nmax; ++n) {
            auto ring = std::make_shared<PolynomialAlgebra>(n);
            std::vector<Element> elems;
            for (int i = 0; i < n; ++i) elems.push_back(var(n, i));
            KoszulComplex K(ring, elems);
            for (int l = 0; l <= n; ++l)
                for (long w = 0; w <= win.c5_wmax; ++w) {
                    int expect = (l == 0 && w == 0) ? 1 : 0;
                    if (K.homology(l, w) != expect)
                        throw std::logic_error("Koszul homology of a regular sequence is not " +
                                               std::to_string(expect));
                    ++checks;
                }
        }
        // Kunneth: dims of a product complex multiply slice by slice
        auto ring1 = std::make_shared<PolynomialAlgebra>(1);
        KoszulComplex kx(ring1, {var(1, 0)});
        KoszulComplex kfree(ring1, {Element{}});  // zero element: full exterior algebra
        KoszulComplex prod = koszul_product(kx, kfree);
        for (int l = 0; l <= 2; ++l)
            for (long w = 0; w <= std::min<long>(win.c5_wmax, 4); ++w) {
                long expect = 0;
                for (int l1 = 0; l1 <= l; ++l1)
                    for (long w1 = 0; w1 <= w; ++w1)
                        expect += static_cast<long>(kx.homology(l1, w1)) *
                                  kfree.homology(l - l1, w - w1);
                if (prod.homology(l, w) != expect)
                    throw std::logic_error("Kunneth dimensions do not multiply");
                ++checks;
            }
        res.detail = std::to_string(checks) + " homology slices";
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 6. Star involution and the delta = (-1)^{k+1} * d * identity.
inline CheckResult check_star(const Window& win) {
    CheckResult res{"symplectic star and delta relations", true, ""};
    long checks = 0;
    try {
        for (int n = 1; n <= win.c6_nmax; ++n) {
            SymplecticStar st(n);
            for (int k = 0; k <= 2 * n; ++k)
                for (long w = k; w <= win.c6_wmax; ++w)
                    for (const auto& key : form_basis(2 * n, k, w)) {
                        PolyForm phi = detail::key_form(key);
                        if (st.apply(st.apply(phi)) != phi)
                            throw std::logic_error("star is not an involution");
                        PolyForm conj = st.apply(exterior_d(st.apply(phi)));
                        PolyForm rhs;
                        form_axpy(rhs, Rat((k % 2 == 0) ? -1 : 1), conj);
                        if (brylinski_delta(n, phi) != rhs)
                            throw std::logic_error("delta != (-1)^{k+1} * d *");
                        // d delta + delta d = 0 and delta^2 = 0
                        PolyForm mix = exterior_d(brylinski_delta(n, phi));
                        form_axpy(mix, Rat(1), brylinski_delta(n, exterior_d(phi)));
                        if (!mix.empty()) throw std::logic_error("d delta + delta d != 0");
                        if (!brylinski_delta(n, brylinski_delta(n, phi)).empty())
                            throw std::logic_error("delta^2 != 0");
                        ++checks;
                    }
        }
        res.detail = std::to_string(checks) + " basis forms";
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 7. Euler homotopy identity and localization of delta-homology.
inline CheckResult check_euler(const Window& win) {
    CheckResult res{"Euler homotopy identity and critical-line localization", true, ""};
    long checks = 0;
    try {
        for (int n = 1; n <= win.c6_nmax; ++n) {
            PolyForm alpha = euler_alpha(n);
            for (int k = 0; k <= 2 * n; ++k)
                for (long w = k; w <= win.c6_wmax; ++w)
                    for (const auto& key : form_basis(2 * n, k, w)) {
                        PolyForm phi = detail::key_form(key);
                        PolyForm lhs = brylinski_delta(n, form_wedge(alpha, phi));
                        form_axpy(lhs, Rat(1), form_wedge(alpha, brylinski_delta(n, phi)));
                        PolyForm rhs = lie_euler(n, phi);
                        form_axpy(rhs, Rat(n - k), phi);
                        if (lhs != rhs) throw std::logic_error("Euler homotopy identity fails");
                        ++checks;
                    }
        }
        // localization: homology vanishes off the critical diagonal s - k = -n
        for (int n = 1; n <= std::min(win.c6_nmax, 1); ++n)
            for (int k = 0; k <= 2 * n; ++k)
                for (long a = 0; a <= 3; ++a)
                    for (long s = 0; s <= 3; ++s) {
                        if (s - k == -n) continue;
                        auto up = detail::mass_slice(n, k + 1, a + 1, s + 1);
                        auto mid = detail::mass_slice(n, k, a, s);
                        auto dn = detail::mass_slice(n, k - 1, a - 1, s - 1);
                        auto op = [&](const FormKey& key) {
                            return brylinski_delta(n, detail::key_form(key));
                        };
                        if (homology_dim(form_operator_matrix(op, up, mid),
                                         form_operator_matrix(op, mid, dn)) != 0)
                            throw std::logic_error("delta homology off the critical line");
                        ++checks;
                    }
        res.detail = std::to_string(checks) + " identity and localization checks";
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 8. First page of the Weyl spectral sequence: d^1 = delta and entry
//    dimensions match centralizer-invariant forms.
inline CheckResult check_first_page(const Window& win) {
    CheckResult res{"first-page differential is delta and entry dims match forms", true, ""};
    long form_checks = 0, entry_checks = 0;
    try {
        std::vector<detail::NamedModel> cases = {{"Weyl(1)", models::weyl_plain(1)},
                                                 {"Weyl(1) x| Z/2", models::weyl_sign()}};
        for (const auto& model : cases) {
            HochschildComplex hoch(model.alg);
            const auto& classes = model.alg->classes();
            for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
                WeylFormBridge bridge(model.alg, cls);
                int n = bridge.n();
                bool full = bridge.chi().fixed_dim() == 2 * n;
                // d^1 = delta entrywise on monomial invariant forms; a point
                // fixed space has no forms beyond the constant and both sides
                // vanish there, which the entry-dimension check covers
                long mass = win.c8_form_mass;
                if (full)
                    for (int k = 0; k <= 2; ++k)
                        for (long a = 0; a <= mass; ++a)
                            for (long s = 0; s <= mass; ++s)
                                for (const auto& key : detail::mass_slice(n, k, a, s)) {
                                    PolyForm phi = detail::key_form(key);
                                    // only centralizer-invariant forms live on E^1
                                    bool inv = true;
                                    for (int g : classes[cls].centralizer)
                                        if (form_act(model.alg->group().matrix(g), phi) != phi)
                                            inv = false;
                                    if (!inv) continue;
                                    if (bridge.d1_of_form(hoch, phi) != bridge.delta_form(phi))
                                        throw std::logic_error(model.name + " class " +
                                                               std::to_string(cls) +
                                                               ": d^1 != delta on a form");
                                    ++form_checks;
                                }
                // E^1 entry dimensions across the weight window
                bool crossed = classes.size() > 1;
                for (long w = -win.c8_wmax; w <= win.c8_wmax; ++w) {
                    long lmin = std::max<long>(0, -w);
                    long cap = lmin + (crossed ? 1 : 2);
                    FilteredSS ss(model.alg, 2, w, cap, crossed ? cls : kPlainClass);
                    for (int k = 0; k <= 2; ++k)
                        for (long l = lmin; l <= cap; ++l) {
                            if (!ss.entry_is_exact(1, l)) continue;
                            verify_e1_dims(ss, bridge, k, l);
                            ++entry_checks;
                        }
                }
            }
        }
        std::ostringstream os;
        os << form_checks << " d^1 = delta form checks, " << entry_checks
           << " first-page entries matched against invariant forms";
        res.detail = os.str();
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 9. d^2 = 0 where exact, E^2 localization, and abutment of the capped
//    spectral sequence against the capped homology.
inline CheckResult check_degeneration(const Window& win) {
    CheckResult res{"second-page vanishing, localization and abutment", true, ""};
    long d2_checks = 0, loc_checks = 0, abut_checks = 0;
    try {
        std::vector<detail::NamedModel> cases = {{"Weyl(1)", models::weyl_plain(1)},
                                                 {"Weyl(1) x| Z/2", models::weyl_sign()}};
        for (const auto& model : cases) {
            const auto& classes = model.alg->classes();
            bool crossed = classes.size() > 1;
            int n = model.alg->base()->vars() / 2;
            HochschildComplex hoch(model.alg);
            for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
                int fixdim = model.alg->group()
                                 .fixed_decomposition(classes[cls].representative)
                                 .fixed.dim();
                for (long w = -win.c9_wmax; w <= win.c9_wmax; ++w) {
                    long lmin = std::max<long>(0, -w);
                    long cap = lmin + (crossed ? 1 : 2);
                    FilteredSS ss(model.alg, win.c9_kmax, w, cap, crossed ? cls : kPlainClass);
                    for (int k = 0; k <= win.c9_kmax; ++k) {
                        for (long l = lmin; l <= cap; ++l) {
                            if (ss.entry_is_exact(2, l)) {
                                if (!ss.page_differential(2, k, l).is_zero())
                                    throw std::logic_error(model.name + ": d^2 != 0 at (k=" +
                                                           std::to_string(k) + ", l=" +
                                                           std::to_string(l) + ", w=" +
                                                           std::to_string(w) + ")");
                                ++d2_checks;
                                // localization of the second page
                                bool critical = (fixdim == 2 * n) ? (l + w == k - n)
                                                                  : (k == 0 && l == 0 && w == 0);
                                if (!critical && ss.page_dim(2, k, l) != 0)
                                    throw std::logic_error(model.name +
                                                           ": E^2 off the critical line at (k=" +
                                                           std::to_string(k) + ", l=" +
                                                           std::to_string(l) + ", w=" +
                                                           std::to_string(w) + ")");
                                ++loc_checks;
                            }
                        }
                        // abutment of the capped complex, valid at any cap
                        int total = 0;
                        bool stable = true;
                        for (long l = lmin; l <= cap; ++l) {
                            auto [d, st] = ss.einf_dim(k, l, static_cast<int>(cap) + 2);
                            total += d;
                            stable = stable && st;
                        }
                        long filcap = ss.base_degree() + ss.step() * cap;
                        int hh = hoch.hh(k, w, filcap, crossed ? cls : kPlainClass);
                        if (!stable || total != hh)
                            throw std::logic_error(model.name + ": abutment mismatch at k=" +
                                                   std::to_string(k) + ", w=" + std::to_string(w) +
                                                   " (" + std::to_string(total) + " vs " +
                                                   std::to_string(hh) + ")");
                        ++abut_checks;
                    }
                }
            }
        }
        std::ostringstream os;
        os << d2_checks << " d^2 entries, " << loc_checks << " localization entries, "
           << abut_checks << " abutment sums";
        res.detail = os.str();
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 10. Stabilized homology totals for the Weyl models.
inline CheckResult check_weyl_homology(const Window& win) {
    CheckResult res{"Weyl algebra homology totals", true, ""};
    try {
        std::ostringstream os;
        {
            HochschildComplex hoch(models::weyl_plain(1));
            std::vector<int> expect = {0, 0, 1, 0};
            os << "Weyl(1):";
            for (int k = 0; k <= win.c10_kmax; ++k) {
                StabilizedCount c = hh_filtered(hoch, k, 0, win.c10_plain_depth);
                os << " " << c.value;
                if (!c.stable || c.value != expect[k])
                    throw std::logic_error("HH_" + std::to_string(k) + "(Weyl(1)) = " +
                                           std::to_string(c.value) +
                                           (c.stable ? "" : " (unstable)") + ", expected " +
                                           std::to_string(expect[k]));
            }
        }
        {
            CrossedPtr cp = models::weyl_sign();
            HochschildComplex hoch(cp);
            const auto& classes = cp->classes();
            int e_cls = -1, g_cls = -1;
            for (int c = 0; c < static_cast<int>(classes.size()); ++c)
                (classes[c].representative == cp->group().identity() ? e_cls : g_cls) = c;
            std::vector<int> expect = {1, 0, 1, 0};
            os << "; Weyl(1) x| Z/2:";
            for (int k = 0; k <= win.c10_kmax; ++k) {
                int total = 0;
                bool stable = true;
                for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
                    StabilizedCount c = hh_filtered(hoch, k, 0, win.c10_crossed_depth, cls);
                    total += c.value;
                    stable = stable && c.stable;
                }
                os << " " << total;
                if (!stable || total != expect[k])
                    throw std::logic_error("HH_" + std::to_string(k) + "(Weyl(1) x| Z/2) = " +
                                           std::to_string(total) + (stable ? "" : " (unstable)") +
                                           ", expected " + std::to_string(expect[k]));
            }
            // the nontrivial class contributes the point fixed space in degree 0
            StabilizedCount point = hh_filtered(hoch, 0, 0, win.c10_crossed_depth, g_cls);
            if (!point.stable || point.value != 1)
                throw std::logic_error("the reflection class does not contribute Q in degree 0");
            os << "; reflection class degree 0: " << point.value;
        }
        res.detail = os.str();
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

// 11. Cyclic sum formula where the connecting map vanishes on homology, with
//     machine-certified exclusions where it provably does not.
inline CheckResult check_cyclic_sums(const Window& win) {
    CheckResult res{"cyclic homology sum formula with certified exclusions", true, ""};
    long verified = 0, excluded = 0;
    try {
        // graded models: the hypothesis (B zero on homology below degree k)
        // is decidable slice by slice; where it fails the formula is not
        // claimed, and the failure itself is machine-checked below
        std::vector<detail::NamedModel> graded = {{"Q[x]", models::poly_plain(1)},
                                                  {"Q[x,y]", models::poly_plain(2)}};
        for (const auto& model : graded) {
            HochschildComplex hoch(model.alg);
            for (int k = 0; k <= win.c11_kmax_graded; ++k)
                for (long w = 0; w <= win.c11_wmax_graded; ++w) {
                    int hc = hoch.hc(k, w);
                    int sum = 0;
                    for (int d = k; d >= 0; d -= 2) sum += hoch.hh(d, w);
                    if (detail::b_vanishes_on_homology(hoch, k, w, kPlainClass)) {
                        if (hc != sum)
                            throw std::logic_error(model.name + ": HC_" + std::to_string(k) +
                                                   " weight " + std::to_string(w) + " is " +
                                                   std::to_string(hc) + " but the HH sum is " +
                                                   std::to_string(sum));
                        ++verified;
                    } else {
                        ++excluded;
                    }
                }
        }
        // canonical counterexample: weight-1 slices of Q[x], where B carries
        // the generator of HH_1 onto a homology class and the formula fails
        {
            HochschildComplex hoch(models::poly_plain(1));
            if (detail::b_vanishes_on_homology(hoch, 1, 1, kPlainClass))
                throw std::logic_error("expected B to act nontrivially on weight-1 homology");
            if (hoch.hc(1, 1) != 0 || hoch.hh(1, 1) != 1)
                throw std::logic_error("the canonical excluded slice changed its dimensions");
        }
        // class components of the twisted models
        std::vector<detail::NamedModel> crossed = {
            {"Q[x] x| Z/2", models::poly_sign()},
            {"Q[x,y] x| Z/2(diag)", models::crossed(std::make_shared<PolynomialAlgebra>(2),
                                                    {models::imat({{1, 0}, {0, -1}})})},
            {"Q[x,y] x| Z/4(rot)", models::crossed(std::make_shared<PolynomialAlgebra>(2),
                                                   {models::imat({{0, -1}, {1, 0}})})},
            {"Q[x,y] x| Z/2(swap)", models::crossed(std::make_shared<PolynomialAlgebra>(2),
                                                    {models::imat({{0, 1}, {1, 0}})})}};
        for (const auto& model : crossed) {
            HochschildComplex hoch(model.alg);
            int ncls = static_cast<int>(model.alg->classes().size());
            for (int cls = 0; cls < ncls; ++cls)
                for (int k = 0; k <= 2; ++k)
                    for (long w = 0; w <= win.c11_wmax_crossed; ++w) {
                        int hc = hoch.hc(k, w, kNoCap, cls);
                        int sum = 0;
                        for (int d = k; d >= 0; d -= 2) sum += hoch.hh(d, w, kNoCap, cls);
                        if (detail::b_vanishes_on_homology(hoch, k, w, cls)) {
                            if (hc != sum)
                                throw std::logic_error(model.name + " class " +
                                                       std::to_string(cls) + ": HC_" +
                                                       std::to_string(k) + " weight " +
                                                       std::to_string(w) + " is " +
                                                       std::to_string(hc) + " but the HH sum is " +
                                                       std::to_string(sum));
                            ++verified;
                        } else {
                            ++excluded;
                        }
                    }
        }
        // stabilized Weyl slices: the formula holds on the nose, and the
        // periodic parity sums close up once HC is periodic in the degree;
        // window depth 1 suffices (the homology already stabilizes there)
        {
            HochschildComplex hoch(models::weyl_plain(1));
            int kmax = win.c11_deep ? 3 : 2;
            for (int k = 0; k <= kmax; ++k) {
                CyclicComparison c = hc_and_hp_check(hoch, k, 0, 1);
                if (!c.stable) throw std::logic_error("unstable Weyl cyclic slice");
                ++verified;
            }
            if (win.c11_deep) {
                // periodicity: HC_4 already equals HC_2 = the full even sum
                int hc4 = hc_image_rank(hoch, 4, 0, 2, 6);
                StabilizedCount hc2 = hc_filtered(hoch, 2, 0, 1);
                if (hc4 != hc2.value)
                    throw std::logic_error("HC_4(Weyl(1)) != HC_2, periodicity fails");
                ++verified;
            }
        }
        {
            CrossedPtr cp = models::weyl_sign();
            HochschildComplex hoch(cp);
            int ncls = static_cast<int>(cp->classes().size());
            for (int cls = 0; cls < ncls; ++cls) {
                for (int k = 0; k <= 2; ++k) {
                    CyclicComparison c = hc_and_hp_check(hoch, k, 0, 1, cls);
                    if (!c.stable) throw std::logic_error("unstable crossed cyclic slice");
                    ++verified;
                }
                if (win.c11_deep) {
                    // degree 3 at the stabilized window of the homology run;
                    // deepening the ambient cap here re-runs a multi-minute
                    // elimination per class, so the stability of these slices
                    // is the one certified by the homology totals check
                    int hc3 = hc_image_rank(hoch, 3, 0, 2, 4, cls);
                    int sum3 = hh_image_rank(hoch, 3, 0, 2, 4, cls) +
                               hh_image_rank(hoch, 1, 0, 2, 4, cls);
                    if (hc3 != sum3)
                        throw std::logic_error("crossed HC_3 != HH_3 + HH_1 at the stable window");
                    ++verified;
                    int hc4 = hc_image_rank(hoch, 4, 0, 2, 4, cls);
                    StabilizedCount hc2 = hc_filtered(hoch, 2, 0, 1, cls);
                    if (hc4 != hc2.value)
                        throw std::logic_error("crossed HC_4 != HC_2, periodicity fails");
                    ++verified;
                }
            }
        }
        std::ostringstream os;
        os << verified << " slices verified against the sum formula, " << excluded
           << " slices excluded with a machine-checked nonvanishing connecting map "
              "(canonical witness: HC_1 of Q[x] at weight 1 is 0 while HH_1 is 1)";
        res.detail = os.str();
    } catch (const std::exception& e) {
        res.pass = false;
        res.detail = e.what();
    }
    return res;
}

inline std::vector<CheckResult> run_all(const Window& win) {
    return {check_simplicial(win),  check_comparison(win), check_hkr(win),
            check_twisted_pipelines(win), check_koszul(win), check_star(win),
            check_euler(win),       check_first_page(win), check_degeneration(win),
            check_weyl_homology(win), check_cyclic_sums(win)};
}

}  // namespace homalg::verify

#endif
