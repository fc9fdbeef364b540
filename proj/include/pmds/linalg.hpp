// Dense matrices of packed field elements and exact Gaussian elimination.
// Pivoting picks the first nonzero entry; columns are processed left to
// right, so results are deterministic.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pmds/field.hpp"

namespace pmds {

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), v_(size_t(rows) * cols, 0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    u64& at(int r, int c) { return v_[size_t(r) * cols_ + c]; }
    u64 at(int r, int c) const { return v_[size_t(r) * cols_ + c]; }
    std::span<const u64> row(int r) const { return {v_.data() + size_t(r) * cols_, size_t(cols_)}; }
    std::span<u64> row(int r) { return {v_.data() + size_t(r) * cols_, size_t(cols_)}; }

    Matrix columns(std::span<const int> idx) const {
        Matrix out(rows_, (int)idx.size());
        for (int r = 0; r < rows_; ++r)
            for (size_t k = 0; k < idx.size(); ++k) out.at(r, (int)k) = at(r, idx[k]);
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<u64> v_;
};

inline int rank(const Field& f, Matrix m) {
    int rk = 0;
    for (int col = 0; col < m.cols() && rk < m.rows(); ++col) {
        int pivot = -1;
        for (int r = rk; r < m.rows(); ++r) {
            if (m.at(r, col)) { pivot = r; break; }
        }
        if (pivot < 0) continue;
        for (int c = 0; c < m.cols(); ++c) std::swap(m.at(rk, c), m.at(pivot, c));
        u64 pi = f.inv(m.at(rk, col));
        for (int c = col; c < m.cols(); ++c) m.at(rk, c) = f.mul(m.at(rk, c), pi);
        for (int r = rk + 1; r < m.rows(); ++r) {
            u64 x = m.at(r, col);
            if (!x) continue;
            for (int c = col; c < m.cols(); ++c) m.at(r, c) = f.sub(m.at(r, c), f.mul(x, m.at(rk, c)));
        }
        ++rk;
    }
    return rk;
}

// True iff every column gets a pivot; exits at the first deficient column.
inline bool has_full_column_rank(const Field& f, Matrix m) {
    int rk = 0;
    for (int col = 0; col < m.cols(); ++col) {
        int pivot = -1;
        for (int r = rk; r < m.rows(); ++r) {
            if (m.at(r, col)) { pivot = r; break; }
        }
        if (pivot < 0) return false;
        for (int c = col; c < m.cols(); ++c) std::swap(m.at(rk, c), m.at(pivot, c));
        u64 pi = f.inv(m.at(rk, col));
        for (int c = col; c < m.cols(); ++c) m.at(rk, c) = f.mul(m.at(rk, c), pi);
        for (int r = rk + 1; r < m.rows(); ++r) {
            u64 x = m.at(r, col);
            if (!x) continue;
            for (int c = col; c < m.cols(); ++c) m.at(r, c) = f.sub(m.at(r, c), f.mul(x, m.at(rk, c)));
        }
        ++rk;
    }
    return true;
}

// Solve A x = b where A has at least as many rows as columns. Returns
// nullopt when some unknown cannot be pivoted (rank deficiency).
inline std::optional<std::vector<u64>> solve(const Field& f, Matrix a, std::vector<u64> b) {
    const int m = a.rows(), k = a.cols();
    if ((int)b.size() != m || k > m) throw std::invalid_argument("solve: bad system shape");
    int rk = 0;
    for (int col = 0; col < k; ++col) {
        int pivot = -1;
        for (int r = rk; r < m; ++r) {
            if (a.at(r, col)) { pivot = r; break; }
        }
        if (pivot < 0) return std::nullopt;
        for (int c = 0; c < k; ++c) std::swap(a.at(rk, c), a.at(pivot, c));
        std::swap(b[rk], b[pivot]);
        u64 pi = f.inv(a.at(rk, col));
        for (int c = col; c < k; ++c) a.at(rk, c) = f.mul(a.at(rk, c), pi);
        b[rk] = f.mul(b[rk], pi);
        for (int r = 0; r < m; ++r) {
            if (r == rk) continue;
            u64 x = a.at(r, col);
            if (!x) continue;
            for (int c = col; c < k; ++c) a.at(r, c) = f.sub(a.at(r, c), f.mul(x, a.at(rk, c)));
            b[r] = f.sub(b[r], f.mul(x, b[rk]));
        }
        ++rk;
    }
    return std::vector<u64>(b.begin(), b.begin() + k);
}

}  // namespace pmds
