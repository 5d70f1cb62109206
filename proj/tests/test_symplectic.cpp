#include <catch2/catch_amalgamated.hpp>

#include "homalg/symplectic.hpp"

using namespace homalg;

namespace {

PolyForm f1(const Mono& m, const IndexSet& I) { return {{{m, I}, Rat(1)}}; }

Element mono(const Mono& m) { return {{m, Rat(1)}}; }

// basis keys with the given form degree and both coordinate masses fixed
std::vector<FormKey> mass_slice(int n, int k, long a, long s) {
    std::vector<FormKey> out;
    for (const auto& key : form_basis(2 * n, k, a + s))
        if (x_mass(n, key) == a && xi_mass(n, key) == s) out.push_back(key);
    return out;
}

}  // namespace

TEST_CASE("poisson bracket on the symplectic plane") {
    // vars: 0 = x, 1 = xi
    Element x = mono({1, 0}), xi = mono({0, 1});
    // matches the commutator of leading symbols in the Weyl algebra
    CHECK(poisson_bracket(1, xi, x) == mono({0, 0}));
    CHECK(poisson_bracket(1, x, xi) == Element{{{0, 0}, Rat(-1)}});
    CHECK(poisson_bracket(1, x, x).empty());

    // Leibniz: {f, gh} = {f,g}h + g{f,h}
    PolynomialAlgebra ring(2);
    Element f = mono({2, 1}), g = mono({1, 1}), h = mono({0, 2});
    Element lhs = poisson_bracket(1, f, ring.elem_mul(g, h));
    Element rhs = ring.elem_mul(poisson_bracket(1, f, g), h);
    elem_axpy(rhs, Rat(1), ring.elem_mul(g, poisson_bracket(1, f, h)));
    CHECK(lhs == rhs);

    // Jacobi: {f,{g,h}} + {g,{h,f}} + {h,{f,g}} = 0
    Element jac = poisson_bracket(1, f, poisson_bracket(1, g, h));
    elem_axpy(jac, Rat(1), poisson_bracket(1, g, poisson_bracket(1, h, f)));
    elem_axpy(jac, Rat(1), poisson_bracket(1, h, poisson_bracket(1, f, g)));
    CHECK(jac.empty());
}

TEST_CASE("poisson bracket in two symplectic pairs") {
    // vars: x1 x2 xi1 xi2
    Element x1 = mono({1, 0, 0, 0}), xi2 = mono({0, 0, 0, 1});
    CHECK(poisson_bracket(2, x1, xi2).empty());
    Element x2 = mono({0, 1, 0, 0});
    CHECK(poisson_bracket(2, xi2, x2) == mono({0, 0, 0, 0}));
}

TEST_CASE("brylinski delta basics") {
    // delta(xi dx) = {xi, x} = 1
    PolyForm a = f1({0, 1}, {0});
    CHECK(brylinski_delta(1, a) == PolyForm{{{Mono{0, 0}, {}}, Rat(1)}});
    // delta drops the weight by two and the degree by one
    for (int k = 1; k <= 2; ++k)
        for (long w = k; w <= 4; ++w)
            for (const auto& key : form_basis(2, k, w))
                for (const auto& [rk, c] : brylinski_delta(1, f1(key.m, key.I))) {
                    CHECK(static_cast<int>(rk.I.size()) == k - 1);
                    CHECK(form_weight(rk) == w - 2);
                }
}

TEST_CASE("delta squares to zero and anticommutes with d") {
    for (int n = 1; n <= 2; ++n)
        for (int k = 0; k <= 2 * n; ++k)
            for (long w = k; w <= 5; ++w)
                for (const auto& key : form_basis(2 * n, k, w)) {
                    PolyForm phi = f1(key.m, key.I);
                    CHECK(brylinski_delta(n, brylinski_delta(n, phi)).empty());
                    PolyForm anti = brylinski_delta(n, exterior_d(phi));
                    form_axpy(anti, Rat(1), exterior_d(brylinski_delta(n, phi)));
                    CHECK(anti.empty());
                }
}

TEST_CASE("symplectic star involution and volume") {
    for (int n = 1; n <= 2; ++n) {
        SymplecticStar st(n);
        Mono one(2 * n, 0);
        CHECK(st.apply(f1(one, {})) == symplectic_volume(n));
        CHECK(st.apply(symplectic_volume(n)) == f1(one, {}));
        for (int k = 0; k <= 2 * n; ++k)
            for (long w = k; w <= 4; ++w)
                for (const auto& key : form_basis(2 * n, k, w)) {
                    PolyForm phi = f1(key.m, key.I);
                    CHECK(st.apply(st.apply(phi)) == phi);
                }
    }
}

TEST_CASE("delta equals the conjugated de rham differential") {
    for (int n = 1; n <= 2; ++n) {
        SymplecticStar st(n);
        for (int k = 0; k <= 2 * n; ++k)
            for (long w = k; w <= 4; ++w)
                for (const auto& key : form_basis(2 * n, k, w)) {
                    PolyForm phi = f1(key.m, key.I);
                    PolyForm conj = st.apply(exterior_d(st.apply(phi)));
                    Rat sign((k % 2 == 0) ? -1 : 1);  // (-1)^{k+1}
                    PolyForm rhs;
                    form_axpy(rhs, sign, conj);
                    CHECK(brylinski_delta(n, phi) == rhs);
                }
    }
}

TEST_CASE("euler contraction form and the homotopy identity") {
    // alpha = xi dx on the plane
    CHECK(euler_alpha(1) == PolyForm{{{Mono{0, 1}, {0}}, Rat(1)}});
    // delta(eps(alpha)phi) + eps(alpha)(delta phi) = (L_Xi + n - k) phi
    for (int n = 1; n <= 2; ++n) {
        PolyForm alpha = euler_alpha(n);
        for (int k = 0; k <= 2 * n; ++k)
            for (long w = k; w <= 4; ++w)
                for (const auto& key : form_basis(2 * n, k, w)) {
                    PolyForm phi = f1(key.m, key.I);
                    PolyForm lhs = brylinski_delta(n, form_wedge(alpha, phi));
                    form_axpy(lhs, Rat(1), form_wedge(alpha, brylinski_delta(n, phi)));
                    PolyForm rhs = lie_euler(n, phi);
                    form_axpy(rhs, Rat(n - k), phi);
                    CHECK(lhs == rhs);
                }
    }
}

TEST_CASE("delta homology concentrates on the critical diagonal") {
    // grading by (k, x-mass, xi-mass): delta lowers every component by one, so
    // s - k is preserved; away from s - k = -n the homotopy contracts everything
    int n = 1;
    for (int k = 0; k <= 2; ++k)
        for (long a = 0; a <= 3; ++a)
            for (long s = 0; s <= 3; ++s) {
                auto up = mass_slice(n, k + 1, a + 1, s + 1);
                auto mid = mass_slice(n, k, a, s);
                auto dn = mass_slice(n, k - 1, a - 1, s - 1);
                auto op = [&](const FormKey& key) { return brylinski_delta(n, f1(key.m, key.I)); };
                int h = homology_dim(form_operator_matrix(op, up, mid),
                                     form_operator_matrix(op, mid, dn));
                if (s - k != -n) {
                    CHECK(h == 0);
                } else if (k == 2 && a == 1 && s == 1) {
                    CHECK(h == 1);  // the volume class
                }
            }
}

TEST_CASE("delta homology matches de rham cohomology through the star") {
    int n = 1;
    // the whole delta homology is one copy of Q carried by the volume form
    for (int k = 0; k <= 2; ++k)
        for (long w = 0; w <= 5; ++w) {
            auto up = form_basis(2, k + 1, w + 2);
            auto mid = form_basis(2, k, w);
            auto dn = form_basis(2, k - 1, w - 2);
            auto op = [&](const FormKey& key) { return brylinski_delta(n, f1(key.m, key.I)); };
            int h = homology_dim(form_operator_matrix(op, up, mid),
                                 form_operator_matrix(op, mid, dn));
            CHECK(h == ((k == 2 && w == 2) ? 1 : 0));
        }
    // de rham cohomology of the plane: Q in degree zero
    for (int k = 0; k <= 2; ++k)
        for (long w = 0; w <= 5; ++w) {
            auto up = form_basis(2, k - 1, w);
            auto mid = form_basis(2, k, w);
            auto dn = form_basis(2, k + 1, w);
            auto op = [&](const FormKey& key) { return exterior_d(f1(key.m, key.I)); };
            int h = homology_dim(form_operator_matrix(op, up, mid),
                                 form_operator_matrix(op, mid, dn));
            CHECK(h == ((k == 0 && w == 0) ? 1 : 0));
        }
}

TEST_CASE("symplectic extension of fixed-space forms") {
    // gamma = -1 on the first symplectic pair, +1 on the second
    DenseMat gm(4, std::vector<Rat>(4, Rat(0)));
    gm[0][0] = -1;
    gm[1][1] = 1;
    gm[2][2] = -1;
    gm[3][3] = 1;
    FiniteMatrixGroup grp = FiniteMatrixGroup::close({gm});
    int g = 1 - grp.identity();
    Subspace fixed = grp.fixed_decomposition(g).fixed;
    REQUIRE(fixed.dim() == 2);
    DenseMat ext = symplectic_extension_substitution(2, fixed);
    DenseMat restr = fixed_space_substitution(fixed, 4);

    // restriction after extension is the identity on fixed-space forms
    for (const auto& key : form_basis(2, 1, 2)) {
        PolyForm phi = f1(key.m, key.I);
        PolyForm back = substitute_linear(substitute_linear(phi, ext), restr);
        CHECK(back == phi);
    }

    // the extension is invariant under gamma itself (which acts trivially on
    // its fixed space)
    for (const auto& key : form_basis(2, 1, 3)) {
        PolyForm up = substitute_linear(f1(key.m, key.I), ext);
        CHECK(form_act(grp.matrix(g), up) == up);
    }

    // a lagrangian line is rejected
    SparseMatrix lag(1, 2);
    lag.set(0, 0, Rat(1));
    CHECK_THROWS_AS(symplectic_extension_substitution(1, Subspace::span(lag)),
                    NotSymplecticFixedSpace);
}
