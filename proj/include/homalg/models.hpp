#ifndef HOMALG_MODELS_HPP
#define HOMALG_MODELS_HPP

#include "homalg/algebra.hpp"

// Shared constructors for the desk-scale models used by the test suite, the
// acceptance run and the command-line tool.
namespace homalg::models {

inline DenseMat imat(const std::vector<std::vector<int>>& rows) {
    DenseMat m(rows.size(), std::vector<Rat>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[0].size(); ++j) m[i][j] = rows[i][j];
    return m;
}

inline CrossedPtr crossed(AlgebraPtr base, const std::vector<DenseMat>& gens) {
    FiniteMatrixGroup grp = FiniteMatrixGroup::close(gens);
    return std::make_shared<CrossedAlgebra>(base, std::make_shared<LinearAction>(base, grp));
}

inline CrossedPtr poly_plain(int n) {
    return std::make_shared<CrossedAlgebra>(std::make_shared<PolynomialAlgebra>(n));
}

// Q[x] x| Z/2 by x -> -x
inline CrossedPtr poly_sign() {
    return crossed(std::make_shared<PolynomialAlgebra>(1), {imat({{-1}})});
}

// Q[x,y] x| Z/2 by -I
inline CrossedPtr poly2_sign() {
    return crossed(std::make_shared<PolynomialAlgebra>(2), {imat({{-1, 0}, {0, -1}})});
}

// Q[x,y,z] x| S3 permuting the variables
inline CrossedPtr poly3_s3() {
    return crossed(std::make_shared<PolynomialAlgebra>(3),
                   {imat({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}),
                    imat({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}})});
}

inline CrossedPtr trunc_plain(int order = 4) {
    return std::make_shared<CrossedAlgebra>(std::make_shared<TruncatedPolynomialAlgebra>(1, order));
}

// (Q[x]/x^order) x| Z/2 by x -> -x
inline CrossedPtr trunc_sign(int order = 4) {
    return crossed(std::make_shared<TruncatedPolynomialAlgebra>(1, order), {imat({{-1}})});
}

inline CrossedPtr weyl_plain(int n) {
    return std::make_shared<CrossedAlgebra>(std::make_shared<WeylAlgebra>(n));
}

// Weyl(1) x| Z/2 by (x, xi) -> (-x, -xi)
inline CrossedPtr weyl_sign() {
    return crossed(std::make_shared<WeylAlgebra>(1), {imat({{-1, 0}, {0, -1}})});
}

// Weyl(1) x| Z/4 by the symplectic quarter rotation
inline CrossedPtr weyl_rot4() {
    return crossed(std::make_shared<WeylAlgebra>(1), {imat({{0, -1}, {1, 0}})});
}

}  // namespace homalg::models

#endif
