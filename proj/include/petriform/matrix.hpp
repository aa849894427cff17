#pragma once

// Exact rational matrices.  Rank uses fraction-free Bareiss elimination over
// GMP integers after clearing denominators; linear solves use rational
// Gaussian elimination with a fixed pivot order (first nonzero per column)
// and free variables pinned to zero, so results are fully deterministic.

#include <cassert>
#include <optional>
#include <vector>

#include "petriform/errors.hpp"
#include "petriform/rational.hpp"

namespace petriform {

class RationalMatrix {
  public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rat& at(int r, int c) { return data_[r * cols_ + c]; }
    const Rat& at(int r, int c) const { return data_[r * cols_ + c]; }

    bool operator==(const RationalMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }

    RationalMatrix transposed() const {
        RationalMatrix t(cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    RationalMatrix operator*(const RationalMatrix& other) const {
        assert(cols_ == other.rows_);
        RationalMatrix out(rows_, other.cols_);
        for (int r = 0; r < rows_; ++r)
            for (int k = 0; k < cols_; ++k) {
                if (at(r, k) == 0) continue;
                for (int c = 0; c < other.cols_; ++c)
                    out.at(r, c) += at(r, k) * other.at(k, c);
            }
        return out;
    }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rat> data_;
};

inline int rank(const RationalMatrix& m) {
    int rows = m.rows(), cols = m.cols();
    if (rows == 0 || cols == 0) return 0;
    // Clear denominators per row; row scaling leaves the rank unchanged.
    std::vector<std::vector<Int>> a(rows, std::vector<Int>(cols));
    for (int r = 0; r < rows; ++r) {
        Int lcm = 1;
        for (int c = 0; c < cols; ++c) {
            Int den = m.at(r, c).get_den();
            lcm = lcm / gcd(lcm, den) * den;
        }
        for (int c = 0; c < cols; ++c) {
            const Rat& q = m.at(r, c);
            a[r][c] = q.get_num() * (lcm / q.get_den());
        }
    }
    Int prev = 1;
    int rk = 0;
    for (int col = 0; col < cols && rk < rows; ++col) {
        int pivot = -1;
        for (int r = rk; r < rows; ++r)
            if (a[r][col] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(a[rk], a[pivot]);
        for (int r = rk + 1; r < rows; ++r) {
            for (int c = col + 1; c < cols; ++c) {
                Int num = a[rk][col] * a[r][c] - a[r][col] * a[rk][c];
                mpz_divexact(num.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                a[r][c] = num;
            }
            a[r][col] = 0;
        }
        prev = a[rk][col];
        ++rk;
    }
    return rk;
}

// Solves A X = B exactly for all right-hand-side columns at once.  Returns
// nullopt when any column is inconsistent.  Underdetermined systems pin the
// non-pivot variables to zero.
inline std::optional<RationalMatrix> solve_exact(const RationalMatrix& a_in,
                                                 const RationalMatrix& b_in) {
    assert(a_in.rows() == b_in.rows());
    int rows = a_in.rows(), cols = a_in.cols(), nrhs = b_in.cols();
    RationalMatrix a = a_in, b = b_in;

    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a.at(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < cols; ++j) std::swap(a.at(p, j), a.at(r, j));
        if (p != r)
            for (int j = 0; j < nrhs; ++j) std::swap(b.at(p, j), b.at(r, j));
        Rat inv = a.at(r, c);
        for (int j = c; j < cols; ++j) a.at(r, j) /= inv;
        for (int j = 0; j < nrhs; ++j) b.at(r, j) /= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a.at(i, c) == 0) continue;
            Rat f = a.at(i, c);
            for (int j = c; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
            for (int j = 0; j < nrhs; ++j) b.at(i, j) -= f * b.at(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (int i = r; i < rows; ++i)
        for (int j = 0; j < nrhs; ++j)
            if (b.at(i, j) != 0) return std::nullopt;

    RationalMatrix x(cols, nrhs);
    for (int k = 0; k < static_cast<int>(pivot_col.size()); ++k) {
        int pc = pivot_col[k];
        for (int j = 0; j < nrhs; ++j) {
            Rat v = b.at(k, j);
            // subtract contributions of free columns (all zero by choice)
            x.at(pc, j) = v;
        }
    }
    return x;
}

inline std::optional<std::vector<Rat>> solve_exact(const RationalMatrix& a,
                                                   const std::vector<Rat>& rhs) {
    RationalMatrix b(a.rows(), 1);
    for (int i = 0; i < a.rows(); ++i) b.at(i, 0) = rhs[i];
    auto x = solve_exact(a, b);
    if (!x) return std::nullopt;
    std::vector<Rat> out(a.cols());
    for (int i = 0; i < a.cols(); ++i) out[i] = x->at(i, 0);
    return out;
}

// Basis of the right kernel {x : A x = 0}, one column vector per free
// variable of the reduced system.
inline std::vector<std::vector<Rat>> kernel_basis(const RationalMatrix& a_in) {
    RationalMatrix a = a_in;
    int rows = a.rows(), cols = a.cols();
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (a.at(i, c) != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        if (p != r)
            for (int j = 0; j < cols; ++j) std::swap(a.at(p, j), a.at(r, j));
        Rat inv = a.at(r, c);
        for (int j = c; j < cols; ++j) a.at(r, j) /= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || a.at(i, c) == 0) continue;
            Rat f = a.at(i, c);
            for (int j = c; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<Rat>> basis;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rat> v(cols, Rat(0));
        v[free] = 1;
        for (int k = 0; k < static_cast<int>(pivot_col.size()); ++k)
            v[pivot_col[k]] = -a.at(k, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace petriform
