#ifndef HOMALG_GROUP_HPP
#define HOMALG_GROUP_HPP

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "homalg/sparse.hpp"

namespace homalg {

struct NotFinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotHomomorphism : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using DenseMat = std::vector<std::vector<Rat>>;

inline DenseMat dense_identity(int n) {
    DenseMat m(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline DenseMat dense_mul(const DenseMat& a, const DenseMat& b) {
    int n = static_cast<int>(a.size());
    int p = b.empty() ? 0 : static_cast<int>(b[0].size());
    int k = static_cast<int>(b.size());
    DenseMat c(n, std::vector<Rat>(p, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (int j = 0; j < p; ++j)
                if (b[l][j] != 0) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

inline SparseMatrix to_sparse(const DenseMat& a) {
    SparseMatrix m(static_cast<int>(a.size()), a.empty() ? 0 : static_cast<int>(a[0].size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (a[i][j] != 0) m.set(i, j, a[i][j]);
    return m;
}

inline std::optional<DenseMat> dense_inverse(const DenseMat& a) {
    int n = static_cast<int>(a.size());
    if (n == 0) return DenseMat{};
    SparseMatrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (a[i][j] != 0) aug.set(i, j, a[i][j]);
        aug.set(i, n + i, 1);
    }
    auto pivots = rref_in_place(aug);
    if (static_cast<int>(pivots.size()) != n || pivots[n - 1] != n - 1) return std::nullopt;
    DenseMat inv(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = aug.get(i, n + j);
    return inv;
}

struct ConjugacyClass {
    int representative = 0;            // element index, lexicographically smallest member
    std::vector<int> members;          // sorted element indices
    std::vector<int> centralizer;      // sorted element indices of the centralizer of the representative
};

struct FixedDecomposition {
    int gamma = 0;
    Subspace fixed;       // ker(gamma - I)
    Subspace complement;  // im(gamma - I)
};

class FiniteMatrixGroup {
public:
    // Closure of the generators under products; elements end up sorted
    // lexicographically on matrix entries so reports are deterministic.
    static FiniteMatrixGroup close(const std::vector<DenseMat>& generators, size_t cap = 10000) {
        if (generators.empty()) throw std::logic_error("need at least one generator (use identity)");
        int n = static_cast<int>(generators[0].size());
        for (const auto& g : generators) {
            if (static_cast<int>(g.size()) != n) throw std::logic_error("generator dimension mismatch");
            if (!dense_inverse(g)) throw std::logic_error("generator not invertible");
        }
        std::set<DenseMat> seen;
        std::vector<DenseMat> queue{dense_identity(n)};
        seen.insert(queue[0]);
        for (size_t head = 0; head < queue.size(); ++head) {
            for (const auto& g : generators) {
                DenseMat prod = dense_mul(queue[head], g);
                if (seen.insert(prod).second) {
                    if (seen.size() > cap)
                        throw NotFinite("group closure exceeds cap of " + std::to_string(cap));
                    queue.push_back(std::move(prod));
                }
            }
        }
        FiniteMatrixGroup grp;
        grp.dim_ = n;
        grp.elements_.assign(seen.begin(), seen.end());
        grp.index_.clear();
        for (int i = 0; i < grp.order(); ++i) grp.index_[grp.elements_[i]] = i;
        grp.identity_ = grp.index_.at(dense_identity(n));
        grp.mult_.assign(grp.order(), std::vector<int>(grp.order()));
        for (int i = 0; i < grp.order(); ++i)
            for (int j = 0; j < grp.order(); ++j)
                grp.mult_[i][j] = grp.index_.at(dense_mul(grp.elements_[i], grp.elements_[j]));
        grp.inv_.assign(grp.order(), 0);
        for (int i = 0; i < grp.order(); ++i)
            for (int j = 0; j < grp.order(); ++j)
                if (grp.mult_[i][j] == grp.identity_) grp.inv_[i] = j;
        return grp;
    }

    static FiniteMatrixGroup trivial(int dim) { return close({dense_identity(dim)}); }

    int dim() const { return dim_; }
    int order() const { return static_cast<int>(elements_.size()); }
    int identity() const { return identity_; }
    const DenseMat& matrix(int i) const { return elements_[i]; }
    int mul(int i, int j) const { return mult_[i][j]; }
    int inv(int i) const { return inv_[i]; }

    std::vector<ConjugacyClass> conjugacy_classes() const {
        std::vector<ConjugacyClass> classes;
        std::vector<bool> placed(order(), false);
        for (int g = 0; g < order(); ++g) {
            if (placed[g]) continue;
            ConjugacyClass cls;
            std::set<int> members;
            for (int k = 0; k < order(); ++k) members.insert(mul(mul(k, g), inv(k)));
            cls.members.assign(members.begin(), members.end());
            cls.representative = cls.members.front();  // smallest index = lex smallest matrix
            for (int m : cls.members) placed[m] = true;
            for (int k = 0; k < order(); ++k)
                if (mul(k, cls.representative) == mul(cls.representative, k)) cls.centralizer.push_back(k);
            classes.push_back(std::move(cls));
        }
        return classes;
    }

    int class_of(int g, const std::vector<ConjugacyClass>& classes) const {
        for (int c = 0; c < static_cast<int>(classes.size()); ++c)
            if (std::binary_search(classes[c].members.begin(), classes[c].members.end(), g)) return c;
        throw std::logic_error("element not in any class");
    }

    FixedDecomposition fixed_decomposition(int gamma) const {
        SparseMatrix shifted = to_sparse(elements_[gamma]) - SparseMatrix::identity(dim_);
        FixedDecomposition fd;
        fd.gamma = gamma;
        fd.fixed = kernel_basis(shifted);
        fd.complement = image(shifted);
        if (fd.fixed.dim() + fd.complement.dim() != dim_ ||
            fd.fixed.intersect(fd.complement).dim() != 0)
            throw std::logic_error("fixed decomposition is not a direct sum");
        return fd;
    }

    // (1/|S|) sum of rep(g) over the subgroup S; rep(g) acts on some space W.
    // Throws NotHomomorphism when rep fails the product law on S.
    static SparseMatrix average_projector(const FiniteMatrixGroup& grp, const std::vector<int>& subgroup,
                                          const std::map<int, SparseMatrix>& rep) {
        if (subgroup.empty()) throw std::logic_error("empty subgroup");
        for (int g : subgroup)
            for (int h : subgroup) {
                int gh = grp.mul(g, h);
                if (!(rep.at(g) * rep.at(h) == rep.at(gh)))
                    throw NotHomomorphism("representation violates rep(g)rep(h) = rep(gh)");
            }
        int w = rep.begin()->second.rows();
        SparseMatrix acc(w, w);
        for (int g : subgroup) acc = acc + rep.at(g);
        SparseMatrix out(w, w);
        Rat scale(1, static_cast<long>(subgroup.size()));
        for (int i = 0; i < w; ++i)
            for (const auto& [j, v] : acc.row(i)) out.set(i, j, v * scale);
        return out;
    }

private:
    int dim_ = 0;
    int identity_ = 0;
    std::vector<DenseMat> elements_;
    std::map<DenseMat, int> index_;
    std::vector<std::vector<int>> mult_;
    std::vector<int> inv_;
};

}  // namespace homalg

#endif
