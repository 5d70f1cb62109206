#include <catch2/catch_amalgamated.hpp>

#include "homalg/hochschild.hpp"

using namespace homalg;

namespace {

DenseMat mat(const std::vector<std::vector<int>>& rows) {
    DenseMat m(rows.size(), std::vector<Rat>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[0].size(); ++j) m[i][j] = rows[i][j];
    return m;
}

CrossedPtr poly_plain(int n) {
    return std::make_shared<CrossedAlgebra>(std::make_shared<PolynomialAlgebra>(n));
}

CrossedPtr poly_sign() {
    auto p = std::make_shared<PolynomialAlgebra>(1);
    FiniteMatrixGroup z2 = FiniteMatrixGroup::close({mat({{-1}})});
    return std::make_shared<CrossedAlgebra>(p, std::make_shared<LinearAction>(p, z2));
}

}  // namespace

TEST_CASE("b vanishes on commutative degree-1 chains") {
    HochschildComplex hc(poly_plain(1));
    TensorComb r = hc.b_of({{{1}, 0}, {{2}, 0}});
    CHECK(r.empty());
}

TEST_CASE("b squared is zero on polynomial slices") {
    for (int n : {1, 2}) {
        HochschildComplex hc(poly_plain(n));
        for (int k = 1; k <= 3; ++k)
            for (long w = 0; w <= 4; ++w) {
                ChainSlice up = hc.slice(k + 1, w);
                ChainSlice mid = hc.slice(k, w);
                ChainSlice dn = hc.slice(k - 1, w);
                CHECK((hc.b_matrix(mid, dn) * hc.b_matrix(up, mid)).is_zero());
            }
    }
}

TEST_CASE("b squared is zero on truncated and crossed slices") {
    auto t = std::make_shared<TruncatedPolynomialAlgebra>(1, 4);
    HochschildComplex htrunc(std::make_shared<CrossedAlgebra>(t));
    HochschildComplex hsign(poly_sign());
    for (const HochschildComplex* hc : {&htrunc, &hsign})
        for (int k = 1; k <= 3; ++k)
            for (long w = 0; w <= 4; ++w) {
                ChainSlice up = hc->slice(k + 1, w);
                ChainSlice mid = hc->slice(k, w);
                ChainSlice dn = hc->slice(k - 1, w);
                CHECK((hc->b_matrix(mid, dn) * hc->b_matrix(up, mid)).is_zero());
            }
}

TEST_CASE("crossed product b matches a hand expansion") {
    CrossedPtr cp = poly_sign();
    HochschildComplex hc(*&cp);
    int g = 1 - cp->group().identity();
    // b(x gamma (x) x gamma) = (x gamma)(x gamma) - (x gamma)(x gamma) = 0 is
    // wrong for the twisted product: both terms give -x^2 e and they cancel
    // only if the signs differ; expand by hand:
    //   term0 = (x gamma)(x gamma) = -x^2 e, sign +
    //   wrap  = (x gamma)(x gamma) = -x^2 e, sign -
    TensorComb r = hc.b_of({{{1}, g}, {{1}, g}});
    CHECK(r.empty());
    // b(x gamma (x) x e) = x gamma(x) gamma - x x gamma = -2 x^2 gamma
    TensorComb r2 = hc.b_of({{{1}, g}, {{1}, 0 + cp->group().identity()}});
    Tensor expect{{{2}, g}};
    REQUIRE(r2.size() == 1);
    CHECK(r2.at(expect) == Rat(-2));
}

TEST_CASE("conjugacy decomposition is a direct sum") {
    CrossedPtr cp = poly_sign();
    HochschildComplex hc(cp);
    auto classes = cp->classes();
    REQUIRE(classes.size() == 2);
    for (int k = 0; k <= 3; ++k)
        for (long w = 0; w <= 3; ++w) {
            int total = hc.slice(k, w).dim();
            int sum = 0;
            for (int c = 0; c < static_cast<int>(classes.size()); ++c)
                sum += hc.slice(k, w, kNoCap, c).dim();
            CHECK(total == sum);
        }
}

TEST_CASE("twisted differential example and identities") {
    CrossedPtr cp = poly_sign();
    int g = 1 - cp->group().identity();
    TwistedComplex tw(cp, g);
    // b_h(1 (x) x) = 1 h(x) - x 1 = -2x
    TwTensorComb r = tw.bh_of({{0}, {1}});
    REQUIRE(r.size() == 1);
    CHECK(r.at({{1}}) == Rat(-2));
    // h = identity recovers the plain differential
    TwistedComplex twid(cp, cp->group().identity());
    HochschildComplex plain(poly_plain(1));
    for (int k = 1; k <= 3; ++k) {
        TwistedSlice a = twid.slice(k, 3), b = twid.slice(k - 1, 3);
        ChainSlice pa = plain.slice(k, 3), pb = plain.slice(k - 1, 3);
        REQUIRE(a.dim() == pa.dim());
        CHECK(twid.bh_matrix(a, b) == plain.b_matrix(pa, pb));
    }
    // b_h^2 = 0
    for (int k = 1; k <= 3; ++k)
        for (long w = 0; w <= 4; ++w) {
            TwistedSlice up = tw.slice(k + 1, w), mid = tw.slice(k, w), dn = tw.slice(k - 1, w);
            CHECK((tw.bh_matrix(mid, dn) * tw.bh_matrix(up, mid)).is_zero());
        }
}

TEST_CASE("connes B basics") {
    HochschildComplex hc(poly_plain(1));
    // B(a0) = 1 (x) a0 for non-unit a0
    TensorComb r = hc.connes_B_of({{{2}, 0}});
    REQUIRE(r.size() == 1);
    CHECK(r.at({{{0}, 0}, {{2}, 0}}) == Rat(1));
    // B(1) = 0 in the normalized complex
    CHECK(hc.connes_B_of({{{0}, 0}}).empty());
}

TEST_CASE("B squared and mixed identity on slices") {
    for (CrossedPtr cp : {poly_plain(1), poly_sign()}) {
        HochschildComplex hc(cp);
        for (int k = 0; k <= 3; ++k)
            for (long w = 0; w <= 4; ++w) {
                ChainSlice s0 = hc.slice(k, w);
                ChainSlice s1 = hc.slice(k + 1, w);
                ChainSlice s2 = hc.slice(k + 2, w);
                CHECK((hc.B_matrix(s1, s2) * hc.B_matrix(s0, s1)).is_zero());
                if (k >= 1) {
                    ChainSlice sm = hc.slice(k - 1, w);
                    SparseMatrix bB = hc.b_matrix(s1, s0) * hc.B_matrix(s0, s1);
                    SparseMatrix Bb = hc.B_matrix(sm, s0) * hc.b_matrix(s0, sm);
                    CHECK((bB + Bb).is_zero());
                }
            }
    }
}

TEST_CASE("F and G are chain maps with G F = id on invariants") {
    CrossedPtr cp = poly_sign();
    const FiniteMatrixGroup& grp = cp->group();
    auto classes = cp->classes();
    HochschildComplex hc(cp);
    for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
        int h = classes[cls].representative;
        TwistedComplex tw(cp, h);
        for (int k = 0; k <= 2; ++k)
            for (long w = 0; w <= 3; ++w) {
                TwistedSlice tk = tw.slice(k, w), tkm = tw.slice(k - 1, w);
                ChainSlice ck = hc.slice(k, w, kNoCap, cls), ckm = hc.slice(k - 1, w, kNoCap, cls);
                SparseMatrix F = map_F(*cp, h, tk, ck);
                SparseMatrix G = map_G(*cp, h, classes[cls].centralizer, cls, ck, tk);
                if (k >= 1) {
                    SparseMatrix Fm = map_F(*cp, h, tkm, ckm);
                    SparseMatrix Gm = map_G(*cp, h, classes[cls].centralizer, cls, ckm, tkm);
                    // b F = F b_h and b_h G = G b
                    CHECK(hc.b_matrix(ck, ckm) * F == Fm * tw.bh_matrix(tk, tkm));
                    CHECK(tw.bh_matrix(tk, tkm) * G == Gm * hc.b_matrix(ck, ckm));
                }
                // G F equals the invariant averaging projector
                SparseMatrix P = tw.invariant_projector(tk, classes[cls].centralizer);
                CHECK(G * F == P);
            }
    }
}

TEST_CASE("G is a chain map on nonabelian class components") {
    // classes with more than one member force the transporter average in G;
    // the centralizer-only version fails exactly here
    auto p = std::make_shared<PolynomialAlgebra>(3);
    FiniteMatrixGroup s3 = FiniteMatrixGroup::close(
        {mat({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}), mat({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}})});
    CrossedPtr cp = std::make_shared<CrossedAlgebra>(p, std::make_shared<LinearAction>(p, s3));
    auto classes = cp->classes();
    HochschildComplex hc(cp);
    for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
        int h = classes[cls].representative;
        TwistedComplex tw(cp, h);
        for (int k = 1; k <= 2; ++k)
            for (long w = 0; w <= 2; ++w) {
                TwistedSlice tk = tw.slice(k, w), tkm = tw.slice(k - 1, w);
                ChainSlice ck = hc.slice(k, w, kNoCap, cls), ckm = hc.slice(k - 1, w, kNoCap, cls);
                SparseMatrix F = map_F(*cp, h, tk, ck);
                SparseMatrix G = map_G(*cp, h, classes[cls].centralizer, cls, ck, tk);
                SparseMatrix Fm = map_F(*cp, h, tkm, ckm);
                SparseMatrix Gm = map_G(*cp, h, classes[cls].centralizer, cls, ckm, tkm);
                CHECK(hc.b_matrix(ck, ckm) * F == Fm * tw.bh_matrix(tk, tkm));
                CHECK(tw.bh_matrix(tk, tkm) * G == Gm * hc.b_matrix(ck, ckm));
                CHECK(G * F == tw.invariant_projector(tk, classes[cls].centralizer));
            }
    }
}

TEST_CASE("map_G rejects chains from the wrong component") {
    CrossedPtr cp = poly_sign();
    auto classes = cp->classes();
    HochschildComplex hc(cp);
    int id_cls = cp->group().identity() == classes[0].representative ? 0 : 1;
    int other = 1 - id_cls;
    ChainSlice wrong = hc.slice(1, 2, kNoCap, id_cls);
    TwistedComplex tw(cp, classes[other].representative);
    if (wrong.dim() > 0)
        CHECK_THROWS_AS(
            map_G(*cp, classes[other].representative, classes[other].centralizer, other, wrong,
                  tw.slice(1, 2)),
            WrongComponent);
}

TEST_CASE("hh dimension targets") {
    HochschildComplex hx(poly_plain(1));
    CHECK(hx.hh(1, 3) == 1);  // x^2 dx under the forms identification
    CHECK(hx.hh(0, 3) == 1);
    CHECK(hx.hh(2, 3) == 0);

    HochschildComplex hq(poly_plain(0));
    CHECK(hq.hh(1, 0) == 0);
    CHECK(hq.hh(2, 0) == 0);

    // crossed product with the sign action at (k=0, w=0): both classes contribute 1
    CrossedPtr cp = poly_sign();
    HochschildComplex hs(cp);
    CHECK(hs.hh(0, 0) == 2);
    CHECK(hs.hh(0, 0, kNoCap, 0) + hs.hh(0, 0, kNoCap, 1) == 2);
}

TEST_CASE("hh of crossed product equals invariant twisted homology per class") {
    CrossedPtr cp = poly_sign();
    auto classes = cp->classes();
    HochschildComplex hc(cp);
    for (int cls = 0; cls < static_cast<int>(classes.size()); ++cls) {
        TwistedComplex tw(cp, classes[cls].representative);
        for (int k = 0; k <= 2; ++k)
            for (long w = 0; w <= 3; ++w)
                CHECK(hc.hh(k, w, kNoCap, cls) ==
                      tw.invariant_hh(k, w, classes[cls].centralizer));
    }
}

TEST_CASE("normalized and unnormalized homology agree on small slices") {
    for (CrossedPtr cp : {poly_plain(1), poly_sign()}) {
        HochschildComplex norm(cp, true), full(cp, false);
        for (int k = 0; k <= 2; ++k)
            for (long w = 0; w <= 3; ++w) CHECK(norm.hh(k, w) == full.hh(k, w));
    }
}

TEST_CASE("hc dimension targets") {
    HochschildComplex hx(poly_plain(1));
    CHECK(hx.hc(0, 2) == 1);  // HC_0 = HH_0
    CHECK(hx.hc(2, 0) == 1);  // ground-field summand
    // HKR + SBI for Q[x]: HC_1 at w=2 is Omega^1/dOmega^0: x dx spans, d(x^2/2)
    CHECK(hx.hc(1, 2) == 0);
}

TEST_CASE("group conjugation action commutes with b") {
    CrossedPtr cp = poly_sign();
    HochschildComplex hc(cp);
    for (int g = 0; g < cp->group().order(); ++g)
        for (int k = 1; k <= 2; ++k)
            for (long w = 0; w <= 3; ++w) {
                ChainSlice sk = hc.slice(k, w), skm = hc.slice(k - 1, w);
                CHECK(hc.b_matrix(sk, skm) * hc.rep_matrix(g, sk) ==
                      hc.rep_matrix(g, skm) * hc.b_matrix(sk, skm));
            }
}

TEST_CASE("weyl algebra filtered slices") {
    auto w = std::make_shared<WeylAlgebra>(1);
    auto cp = std::make_shared<CrossedAlgebra>(w);
    HochschildComplex hc(cp);
    // at fixed rotation weight and filtration cap the slices are finite and
    // b^2 = 0 holds exactly (no truncation in the Weyl algebra)
    for (int k = 1; k <= 3; ++k)
        for (long rw : {-2L, 0L, 2L}) {
            ChainSlice up = hc.slice(k + 1, rw, 6);
            ChainSlice mid = hc.slice(k, rw, 6);
            ChainSlice dn = hc.slice(k - 1, rw, 6);
            CHECK((hc.b_matrix(mid, dn) * hc.b_matrix(up, mid)).is_zero());
        }
    // parity: every tensor's total filtration degree matches the rotation
    // weight mod 2
    ChainSlice s = hc.slice(2, 0, 6);
    for (const auto& t : s.basis) {
        long fd = 0;
        for (const auto& f : t) fd += w->fildeg(f.m);
        CHECK(fd % 2 == 0);
    }
}

TEST_CASE("symbol model slices stay inside their declared bounds") {
    auto s = std::make_shared<SymbolAlgebra>(2, -2, 2);
    auto cp = std::make_shared<CrossedAlgebra>(s);
    HochschildComplex hc(cp);
    ChainSlice s1 = hc.slice(1, 0, 1);
    ChainSlice s0 = hc.slice(0, 0, 1);
    CHECK(s1.dim() > 0);
    // the differential lands in the codomain slice (Fourier mass and
    // filtration both non-increasing)
    CHECK_NOTHROW(hc.b_matrix(s1, s0));
}
