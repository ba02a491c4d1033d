// Small dense complex matrices: enough linear algebra for operators on
// V tensor V and V tensor V tensor V with V of dimension <= 4.  Row-major
// storage, partial-pivot inversion with a condition guard, partial
// transposes, and the slot embeddings used by the Yang-Baxter checks.

#pragma once

#include <functional>
#include <vector>

#include "qkzr/core.hpp"

namespace qkzr {

class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {}

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }
    cplx& at(int r, int c) { return a_[static_cast<size_t>(r) * dim_ + c]; }
    cplx at(int r, int c) const { return a_[static_cast<size_t>(r) * dim_ + c]; }

    ComplexMatrix operator*(const ComplexMatrix& o) const {
        ComplexMatrix out(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int k = 0; k < dim_; ++k) {
                const cplx aik = at(i, k);
                if (aik == cplx{0.0, 0.0}) continue;
                for (int j = 0; j < dim_; ++j) out.at(i, j) += aik * o.at(k, j);
            }
        return out;
    }

    ComplexMatrix operator-(const ComplexMatrix& o) const {
        ComplexMatrix out(dim_);
        for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = a_[i] - o.a_[i];
        return out;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (auto& x : a_) x *= s;
        return *this;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        std::vector<cplx> out(static_cast<size_t>(dim_));
        for (int i = 0; i < dim_; ++i) {
            cplx s{0.0, 0.0};
            for (int j = 0; j < dim_; ++j) s += at(i, j) * v[static_cast<size_t>(j)];
            out[static_cast<size_t>(i)] = s;
        }
        return out;
    }

    // Largest entry magnitude.
    double sup_norm() const {
        double m = 0.0;
        for (const auto& x : a_) m = std::max(m, std::abs(x));
        return m;
    }

    // Gaussian elimination with partial pivoting; pivots falling below
    // max_entry / cond_guard abort with IllConditioned.
    ComplexMatrix inverse(double cond_guard = 1e12) const {
        const int d = dim_;
        ComplexMatrix aug = *this;
        ComplexMatrix inv = identity(d);
        const double scale = std::max(sup_norm(), 1e-300);
        for (int col = 0; col < d; ++col) {
            int piv = col;
            double best = std::abs(aug.at(col, col));
            for (int r = col + 1; r < d; ++r) {
                const double v = std::abs(aug.at(r, col));
                if (v > best) { best = v; piv = r; }
            }
            if (best < scale / cond_guard)
                throw IllConditioned("ComplexMatrix::inverse: pivot below condition guard");
            if (piv != col) {
                for (int j = 0; j < d; ++j) {
                    std::swap(aug.at(piv, j), aug.at(col, j));
                    std::swap(inv.at(piv, j), inv.at(col, j));
                }
            }
            const cplx pval = aug.at(col, col);
            for (int j = 0; j < d; ++j) {
                aug.at(col, j) /= pval;
                inv.at(col, j) /= pval;
            }
            for (int r = 0; r < d; ++r) {
                if (r == col) continue;
                const cplx f = aug.at(r, col);
                if (f == cplx{0.0, 0.0}) continue;
                for (int j = 0; j < d; ++j) {
                    aug.at(r, j) -= f * aug.at(col, j);
                    inv.at(r, j) -= f * inv.at(col, j);
                }
            }
        }
        return inv;
    }

    cplx determinant() const {
        const int d = dim_;
        ComplexMatrix m = *this;
        cplx det = 1.0;
        for (int col = 0; col < d; ++col) {
            int piv = col;
            double best = std::abs(m.at(col, col));
            for (int r = col + 1; r < d; ++r) {
                const double v = std::abs(m.at(r, col));
                if (v > best) { best = v; piv = r; }
            }
            if (best == 0.0) return {0.0, 0.0};
            if (piv != col) {
                for (int j = 0; j < d; ++j) std::swap(m.at(piv, j), m.at(col, j));
                det = -det;
            }
            det *= m.at(col, col);
            for (int r = col + 1; r < d; ++r) {
                const cplx f = m.at(r, col) / m.at(col, col);
                for (int j = col; j < d; ++j) m.at(r, j) -= f * m.at(col, j);
            }
        }
        return det;
    }

  private:
    int dim_ = 0;
    std::vector<cplx> a_;
};

// Dense operator on V tensor V with the fixed basis order
// v_i tensor v_j  ->  index i*(n+1) + j.
class OperatorVV {
  public:
    OperatorVV() = default;
    explicit OperatorVV(int rank) : n_(rank), mat_((rank + 1) * (rank + 1)) {}

    static OperatorVV identity(int rank) {
        OperatorVV op(rank);
        op.mat_ = ComplexMatrix::identity((rank + 1) * (rank + 1));
        return op;
    }

    int rank() const { return n_; }
    int dim_v() const { return n_ + 1; }
    int dim() const { return (n_ + 1) * (n_ + 1); }

    int idx(int i, int j) const { return i * (n_ + 1) + j; }

    // Entry mapping v_k tensor v_l to v_i tensor v_j.
    cplx& at(int i, int j, int k, int l) { return mat_.at(idx(i, j), idx(k, l)); }
    cplx at(int i, int j, int k, int l) const { return mat_.at(idx(i, j), idx(k, l)); }

    ComplexMatrix& matrix() { return mat_; }
    const ComplexMatrix& matrix() const { return mat_; }

    OperatorVV operator*(const OperatorVV& o) const {
        OperatorVV out(n_);
        out.mat_ = mat_ * o.mat_;
        return out;
    }
    OperatorVV operator-(const OperatorVV& o) const {
        OperatorVV out(n_);
        out.mat_ = mat_ - o.mat_;
        return out;
    }
    OperatorVV& operator*=(cplx s) {
        mat_ *= s;
        return *this;
    }
    double sup_norm() const { return mat_.sup_norm(); }

    // Partial transpose on the first tensor factor:
    // (T^{t1})_{(i,j),(k,l)} = T_{(k,j),(i,l)}.
    OperatorVV partial_transpose_1() const {
        OperatorVV out(n_);
        const int d = dim_v();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) out.at(i, j, k, l) = at(k, j, i, l);
        return out;
    }

    OperatorVV inverse(double cond_guard = 1e12) const {
        OperatorVV out(n_);
        out.mat_ = mat_.inverse(cond_guard);
        return out;
    }

    // Conjugation by the flip map: T^{21} = P T P.
    OperatorVV flip_conjugate() const {
        OperatorVV out(n_);
        const int d = dim_v();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) out.at(i, j, k, l) = at(j, i, l, k);
        return out;
    }

    // Left-multiplication by the flip map: (P T)_{(i,j),(k,l)} = T_{(j,i),(k,l)}.
    OperatorVV flip_left() const {
        OperatorVV out(n_);
        const int d = dim_v();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) out.at(i, j, k, l) = at(j, i, k, l);
        return out;
    }

    // Largest entry outside the weight blocks: nonzero entries are only
    // allowed where {i,j} = {k,l} as multisets.
    double weight_zero_violation() const {
        double worst = 0.0;
        const int d = dim_v();
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k)
                    for (int l = 0; l < d; ++l) {
                        const bool same = (i == k && j == l) || (i == l && j == k);
                        if (!same) worst = std::max(worst, std::abs(at(i, j, k, l)));
                    }
        return worst;
    }

  private:
    int n_ = 0;
    ComplexMatrix mat_;
};

// Embed a two-site operator family into End(V^{otimes 3}) on tensor slots
// (s1, s2) in {(1,2),(1,3),(2,3)}.  op_for(c) supplies the operator when the
// spectator slot carries v_c; families with no spectator dependence are
// evaluated once.
inline ComplexMatrix embed_two_site(int rank, int s1, int s2,
                                    const std::function<OperatorVV(int)>& op_for,
                                    bool spectator_dependent) {
    const int d = rank + 1;
    ComplexMatrix out(d * d * d);
    OperatorVV cached;
    bool have = false;
    for (int c = 0; c < d; ++c) {
        if (spectator_dependent || !have) {
            cached = op_for(spectator_dependent ? c : 0);
            have = true;
        }
        const OperatorVV& op = cached;
        for (int a1 = 0; a1 < d; ++a1)
            for (int b1 = 0; b1 < d; ++b1)
                for (int a0 = 0; a0 < d; ++a0)
                    for (int b0 = 0; b0 < d; ++b0) {
                        const cplx v = op.at(a1, b1, a0, b0);
                        if (v == cplx{0.0, 0.0}) continue;
                        int row, col;
                        if (s1 == 1 && s2 == 2) {
                            row = (a1 * d + b1) * d + c;
                            col = (a0 * d + b0) * d + c;
                        } else if (s1 == 1 && s2 == 3) {
                            row = (a1 * d + c) * d + b1;
                            col = (a0 * d + c) * d + b0;
                        } else {  // (2,3)
                            row = (c * d + a1) * d + b1;
                            col = (c * d + a0) * d + b0;
                        }
                        out.at(row, col) += v;
                    }
    }
    return out;
}

}  // namespace qkzr
