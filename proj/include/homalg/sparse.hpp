#ifndef HOMALG_SPARSE_HPP
#define HOMALG_SPARSE_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "homalg/rational.hpp"

namespace homalg {

struct CompositionNonzero : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using SparseVec = std::map<int, Rat>;  // index -> nonzero coefficient

inline void vec_axpy(SparseVec& dst, const Rat& c, const SparseVec& src) {
    if (c == 0) return;
    for (const auto& [j, v] : src) {
        Rat& slot = dst[j];
        slot += c * v;
        if (slot == 0) dst.erase(j);
    }
}

// Row-major exact rational sparse matrix.
class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    void set(int i, int j, const Rat& v) {
        check(i, j);
        if (v == 0)
            data_[i].erase(j);
        else
            data_[i][j] = v;
    }
    void add(int i, int j, const Rat& v) {
        check(i, j);
        Rat& slot = data_[i][j];
        slot += v;
        if (slot == 0) data_[i].erase(j);
    }
    Rat get(int i, int j) const {
        check(i, j);
        auto it = data_[i].find(j);
        return it == data_[i].end() ? Rat(0) : it->second;
    }
    const SparseVec& row(int i) const { return data_[i]; }
    SparseVec& row_mut(int i) { return data_[i]; }

    bool is_zero() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }

    bool operator==(const SparseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    SparseMatrix operator*(const SparseMatrix& o) const {
        if (cols_ != o.rows_) throw std::logic_error("matmul shape mismatch");
        SparseMatrix out(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [k, v] : data_[i]) vec_axpy(out.data_[i], v, o.data_[k]);
        return out;
    }

    SparseMatrix operator+(const SparseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::logic_error("matadd shape mismatch");
        SparseMatrix out = *this;
        for (int i = 0; i < rows_; ++i) vec_axpy(out.data_[i], Rat(1), o.data_[i]);
        return out;
    }

    SparseMatrix operator-(const SparseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::logic_error("matsub shape mismatch");
        SparseMatrix out = *this;
        for (int i = 0; i < rows_; ++i) vec_axpy(out.data_[i], Rat(-1), o.data_[i]);
        return out;
    }

    SparseVec apply(const SparseVec& x) const {
        SparseVec y;
        for (int i = 0; i < rows_; ++i) {
            Rat acc(0);
            for (const auto& [j, v] : data_[i]) {
                auto it = x.find(j);
                if (it != x.end()) acc += v * it->second;
            }
            if (acc != 0) y[i] = acc;
        }
        return y;
    }

    SparseMatrix transpose() const {
        SparseMatrix out(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) out.data_[j][i] = v;
        return out;
    }

    static SparseMatrix identity(int n) {
        SparseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1);
        return m;
    }

private:
    void check(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::logic_error("index out of range");
    }
    int rows_, cols_;
    std::vector<SparseVec> data_;
};

// In-place reduced row echelon form. Returns pivot columns (ascending).
// Pivot row within a column is chosen by fewest nonzeros, ties by value; the
// result is the unique RREF either way.
inline std::vector<int> rref_in_place(SparseMatrix& m) {
    std::vector<int> pivots;
    int next_row = 0;
    for (int col = 0; col < m.cols() && next_row < m.rows(); ++col) {
        // Rows at or below next_row have all columns < col cleared already,
        // so a row meets this column iff its first entry sits exactly there.
        int best = -1;
        size_t best_fill = 0;
        for (int i = next_row; i < m.rows(); ++i) {
            const auto& r = m.row(i);
            if (r.empty() || r.begin()->first != col) continue;
            if (best == -1 || r.size() < best_fill) {
                best = i;
                best_fill = r.size();
            }
        }
        if (best == -1) continue;
        std::swap(m.row_mut(best), m.row_mut(next_row));
        Rat inv = Rat(1) / m.row(next_row).at(col);
        if (inv != 1)
            for (auto& [j, v] : m.row_mut(next_row)) v *= inv;
        for (int i = 0; i < m.rows(); ++i) {
            if (i == next_row) continue;
            auto it = m.row(i).find(col);
            if (it == m.row(i).end()) continue;
            Rat f = -it->second;
            vec_axpy(m.row_mut(i), f, m.row(next_row));
        }
        pivots.push_back(col);
        ++next_row;
    }
    return pivots;
}

inline int rank(SparseMatrix m) { return static_cast<int>(rref_in_place(m).size()); }

// A subspace of Q^ambient stored as a canonical RREF row basis.
class Subspace {
public:
    Subspace() : ambient_(0), basis_(0, 0) {}
    explicit Subspace(int ambient) : ambient_(ambient), basis_(0, ambient) {}

    // Rows of `vectors` span the subspace; reduced on construction.
    static Subspace span(SparseMatrix vectors) {
        auto pivots = rref_in_place(vectors);
        Subspace s(vectors.cols());
        s.basis_ = SparseMatrix(static_cast<int>(pivots.size()), vectors.cols());
        for (int i = 0; i < static_cast<int>(pivots.size()); ++i)
            s.basis_.row_mut(i) = vectors.row(i);
        s.pivots_ = std::move(pivots);
        return s;
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const SparseMatrix& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }

    bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }

    bool contains(const SparseVec& v) const {
        SparseVec r = v;
        for (int i = 0; i < basis_.rows(); ++i) {
            auto it = r.find(pivots_[i]);
            if (it != r.end()) vec_axpy(r, -it->second, basis_.row(i));
        }
        return r.empty();
    }

    bool contains(const Subspace& o) const {
        for (int i = 0; i < o.basis_.rows(); ++i)
            if (!contains(o.basis_.row(i))) return false;
        return true;
    }

    Subspace sum(const Subspace& o) const {
        if (ambient_ != o.ambient_) throw std::logic_error("subspace ambient mismatch");
        SparseMatrix stacked(dim() + o.dim(), ambient_);
        for (int i = 0; i < dim(); ++i) stacked.row_mut(i) = basis_.row(i);
        for (int i = 0; i < o.dim(); ++i) stacked.row_mut(dim() + i) = o.basis_.row(i);
        return span(stacked);
    }

    Subspace intersect(const Subspace& o) const {
        if (ambient_ != o.ambient_) throw std::logic_error("subspace ambient mismatch");
        // Kernel trick on [A^T | B^T]: combinations of A rows equal to B rows.
        int a = dim(), b = o.dim();
        SparseMatrix sys(ambient_, a + b);
        for (int i = 0; i < a; ++i)
            for (const auto& [j, v] : basis_.row(i)) sys.add(j, i, v);
        for (int i = 0; i < b; ++i)
            for (const auto& [j, v] : o.basis_.row(i)) sys.add(j, a + i, -v);
        Subspace null = kernel(sys);
        SparseMatrix vecs(null.dim(), ambient_);
        for (int i = 0; i < null.dim(); ++i)
            for (const auto& [j, c] : null.basis().row(i))
                if (j < a) vec_axpy(vecs.row_mut(i), c, basis_.row(j));
        return span(vecs);
    }

    // {x : m x in this}, a subspace of the column space domain of m.
    Subspace preimage(const SparseMatrix& m) const {
        if (m.rows() != ambient_) throw std::logic_error("preimage shape mismatch");
        // x maps into the subspace iff reducing m x against the basis leaves 0,
        // so take the kernel of the residual map.
        SparseMatrix residual(ambient_, m.cols());
        std::vector<SparseVec> cols(m.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (const auto& [j, v] : m.row(i)) cols[j][i] = v;
        for (int j = 0; j < m.cols(); ++j) {
            SparseVec r = cols[j];
            for (int i = 0; i < basis_.rows(); ++i) {
                auto it = r.find(pivots_[i]);
                if (it != r.end()) vec_axpy(r, -it->second, basis_.row(i));
            }
            for (const auto& [i, v] : r) residual.add(i, j, v);
        }
        return kernel(residual);
    }

    static Subspace kernel(const SparseMatrix& m);

private:
    int ambient_;
    SparseMatrix basis_;
    std::vector<int> pivots_;
};

// Canonical echelon basis of the null space.
inline Subspace Subspace::kernel(const SparseMatrix& m) {
    SparseMatrix r = m;
    std::vector<int> pivots = rref_in_place(r);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int p : pivots) is_pivot[p] = true;
    int nfree = m.cols() - static_cast<int>(pivots.size());
    SparseMatrix vecs(nfree, m.cols());
    int idx = 0;
    for (int j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        vecs.set(idx, j, 1);
        for (int i = 0; i < static_cast<int>(pivots.size()); ++i) {
            Rat v = r.get(i, j);
            if (v != 0) vecs.set(idx, pivots[i], -v);
        }
        ++idx;
    }
    return span(vecs);
}

inline Subspace kernel_basis(const SparseMatrix& m) { return Subspace::kernel(m); }

inline Subspace image(const SparseMatrix& m) { return Subspace::span(m.transpose()); }

// dim ker(d_out) - rank(d_in); d_in: C_{k+1} -> C_k, d_out: C_k -> C_{k-1}.
inline int homology_dim(const SparseMatrix& d_in, const SparseMatrix& d_out) {
    if (d_out.cols() != d_in.rows()) throw std::logic_error("homology_dim shape mismatch");
    if (!(d_out * d_in).is_zero()) throw CompositionNonzero("d_out . d_in != 0");
    int ker = d_out.cols() - rank(d_out);
    return ker - rank(d_in);
}

// Any exact solution of m x = rhs (as a dense vector), or nullopt.
inline std::optional<std::vector<Rat>> solve(const SparseMatrix& m, const std::vector<Rat>& rhs) {
    if (static_cast<int>(rhs.size()) != m.rows()) throw std::logic_error("solve shape mismatch");
    SparseMatrix aug(m.rows(), m.cols() + 1);
    for (int i = 0; i < m.rows(); ++i) {
        aug.row_mut(i) = m.row(i);
        if (rhs[i] != 0) aug.set(i, m.cols(), rhs[i]);
    }
    auto pivots = rref_in_place(aug);
    std::vector<Rat> x(m.cols(), Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] == m.cols()) return std::nullopt;  // row [0 ... 0 | 1]
        x[pivots[i]] = aug.get(static_cast<int>(i), m.cols());
    }
    return x;
}

}  // namespace homalg

#endif
