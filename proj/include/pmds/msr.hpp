// Local array code with row-indexed Vandermonde parity checks and
// bandwidth-optimal single-node repair.
//
// Rows are indexed by a = sum a_i * b^i with digits a_i in [0, b-1]; column
// i of the parity check for row a is (beta_{i,a_i}^t) for t = 0..r-1. Repair
// of node i aggregates, per base row (a_i = 0), the b parity equations that
// differ only in digit i: every helper contributes one sum per base row, and
// the failed symbols come out of an r x r Vandermonde solve.

#pragma once

#include <span>
#include <vector>

#include "pmds/enumeration.hpp"
#include "pmds/field.hpp"
#include "pmds/linalg.hpp"

namespace pmds {

struct MsrParams {
    int n = 0;        // nodes per group
    int r = 0;        // local parities
    int d = 0;        // repair degree, n-r <= d <= n-1
    int b = 0;        // d+1-n+r
    i64 ell = 0;      // b^n rows
    FieldPtr field;
    std::vector<u64> betas;  // n*b locators, beta(i,u) at i*b+u

    u64 beta(int i, int u) const { return betas[size_t(i) * b + u]; }

    static MsrParams create(int n, int r, int d, FieldPtr field, std::vector<u64> betas) {
        if (r < 1 || r > n) throw std::invalid_argument("need 1 <= r <= n");
        if (d < n - r || d > n - 1) throw std::invalid_argument("need n-r <= d <= n-1");
        MsrParams p;
        p.n = n;
        p.r = r;
        p.d = d;
        p.b = d + 1 - n + r;
        p.ell = ipow(p.b, n);
        p.field = std::move(field);
        p.betas = std::move(betas);
        if ((int)p.betas.size() != n * p.b) throw std::invalid_argument("need n*b locators");
        if (p.field->size_minus1() < u64(p.b) * n - 1) throw std::invalid_argument("field too small for bn distinct locators");
        auto sorted = p.betas;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("locators must be pairwise distinct");
        for (u64 v : p.betas)
            if (!p.field->contains(v)) throw std::invalid_argument("locator outside field");
        return p;
    }

    // Skips the distinctness invariant. Exists so verifiers can be pointed
    // at a deliberately broken instance; never use for real parameters.
    static MsrParams create_unchecked(int n, int r, int d, FieldPtr field, std::vector<u64> betas) {
        MsrParams p;
        p.n = n;
        p.r = r;
        p.d = d;
        p.b = d + 1 - n + r;
        p.ell = ipow(p.b, n);
        p.field = std::move(field);
        p.betas = std::move(betas);
        return p;
    }
};

inline std::vector<int> row_digits(i64 a, int b, int n) {
    if (a < 0 || a >= ipow(b, n)) throw std::out_of_range("row index out of range");
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
        d[i] = int(a % b);
        a /= b;
    }
    return d;
}

inline i64 digits_to_row(std::span<const int> digits, int b) {
    i64 a = 0;
    for (int i = (int)digits.size() - 1; i >= 0; --i) {
        if (digits[i] < 0 || digits[i] >= b) throw std::out_of_range("digit out of range");
        a = a * b + digits[i];
    }
    return a;
}

// r x n matrix with column i = (beta_{i,a_i}^t), t = 0..r-1
inline Matrix local_parity_matrix(const MsrParams& p, i64 a) {
    auto digits = row_digits(a, p.b, p.n);
    const Field& f = *p.field;
    Matrix h(p.r, p.n);
    for (int i = 0; i < p.n; ++i) {
        u64 v = p.beta(i, digits[i]);
        u64 acc = 1;
        for (int t = 0; t < p.r; ++t) {
            h.at(t, i) = acc;
            acc = f.mul(acc, v);
        }
    }
    return h;
}

struct RepairPlan {
    int failed = -1;
    std::vector<int> helpers;                       // |helpers| = d
    std::vector<std::vector<u64>> transmissions;    // per helper, b^(n-1) sums
    i64 download_total = 0;                         // d * b^(n-1)
};

inline i64 base_row_count(const MsrParams& p) { return ipow(p.b, p.n - 1); }

// base row index t -> full row index with digit `pos` forced to zero
inline i64 base_row_to_row(const MsrParams& p, i64 t, int pos) {
    i64 step = ipow(p.b, pos);
    i64 low = t % step;
    i64 high = t / step;
    return low + high * step * p.b;
}

// Solve sum_k loc_k^t x_k = rhs_t, t = 0..r-1, via Lagrange coefficients.
inline std::vector<u64> vandermonde_dual_solve(const Field& f, std::span<const u64> loc, std::span<const u64> rhs) {
    const int r = (int)loc.size();
    if ((int)rhs.size() != r) throw std::invalid_argument("rhs size mismatch");
    // master polynomial prod_j (X - loc_j), ascending coefficients
    std::vector<u64> master(r + 1, 0);
    master[0] = 1;
    for (int j = 0; j < r; ++j) {
        for (int k = j + 1; k >= 1; --k) master[k] = f.sub(k > 0 ? master[k - 1] : 0, f.mul(loc[j], master[k]));
        master[0] = f.neg(f.mul(loc[j], master[0]));
    }
    std::vector<u64> x(r), ncoef(r);
    for (int k = 0; k < r; ++k) {
        // divide out (X - loc_k)
        ncoef[r - 1] = master[r];
        for (int t = r - 1; t >= 1; --t) ncoef[t - 1] = f.add(master[t], f.mul(loc[k], ncoef[t]));
        u64 denom = ncoef[r - 1];
        for (int t = r - 2; t >= 0; --t) denom = f.add(f.mul(denom, loc[k]), ncoef[t]);
        u64 dot = 0;
        for (int t = 0; t < r; ++t) dot = f.add(dot, f.mul(ncoef[t], rhs[t]));
        x[k] = f.mul(dot, f.inv(denom));
    }
    return x;
}

// helper_columns[k] is the full column of helpers[k], ell symbols
inline RepairPlan make_repair_plan(const MsrParams& p, int failed, std::vector<int> helpers,
                                   const std::vector<std::vector<u64>>& helper_columns) {
    if ((int)helpers.size() != p.d) throw std::invalid_argument("need exactly d helpers");
    if (helper_columns.size() != helpers.size()) throw std::invalid_argument("helper column count mismatch");
    std::vector<bool> seen(p.n, false);
    if (failed < 0 || failed >= p.n) throw std::invalid_argument("failed node out of range");
    seen[failed] = true;
    for (int h : helpers) {
        if (h < 0 || h >= p.n || seen[h]) throw std::invalid_argument("helpers must be distinct nodes other than the failed one");
        seen[h] = true;
    }
    const Field& f = *p.field;
    const i64 brc = base_row_count(p);
    const i64 step = ipow(p.b, failed);
    RepairPlan plan;
    plan.failed = failed;
    plan.helpers = std::move(helpers);
    plan.transmissions.resize(plan.helpers.size());
    for (size_t k = 0; k < plan.helpers.size(); ++k) {
        const auto& col = helper_columns[k];
        if ((i64)col.size() != p.ell) throw std::invalid_argument("helper column has wrong length");
        auto& out = plan.transmissions[k];
        out.resize(brc);
        for (i64 t = 0; t < brc; ++t) {
            i64 a = base_row_to_row(p, t, failed);
            u64 sum = 0;
            for (int u = 0; u < p.b; ++u) sum = f.add(sum, col[a + u * step]);
            out[t] = sum;
        }
    }
    plan.download_total = i64(p.d) * brc;
    return plan;
}

// Recover the failed column exactly from a plan built on a valid codeword.
inline std::vector<u64> repair_node(const MsrParams& p, const RepairPlan& plan) {
    const Field& f = *p.field;
    const int i = plan.failed;
    const i64 brc = base_row_count(p);
    const i64 step = ipow(p.b, i);

    std::vector<int> others;  // nodes that are neither failed nor helpers
    {
        std::vector<bool> is_helper(p.n, false);
        for (int h : plan.helpers) is_helper[h] = true;
        for (int m = 0; m < p.n; ++m)
            if (m != i && !is_helper[m]) others.push_back(m);
    }

    std::vector<u64> column(p.ell, 0);
    std::vector<u64> loc(p.r), rhs(p.r);
    for (i64 t = 0; t < brc; ++t) {
        i64 a = base_row_to_row(p, t, i);
        auto digits = row_digits(a, p.b, p.n);
        std::fill(rhs.begin(), rhs.end(), 0);
        for (size_t k = 0; k < plan.helpers.size(); ++k) {
            int j = plan.helpers[k];
            u64 sigma = plan.transmissions[k][t];
            u64 acc = sigma;
            u64 v = p.beta(j, digits[j]);
            for (int tr = 0; tr < p.r; ++tr) {
                rhs[tr] = f.sub(rhs[tr], acc);
                acc = f.mul(acc, v);
            }
        }
        for (int u = 0; u < p.b; ++u) loc[u] = p.beta(i, u);
        for (size_t k = 0; k < others.size(); ++k) loc[p.b + k] = p.beta(others[k], digits[others[k]]);
        {
            auto check = loc;
            std::sort(check.begin(), check.end());
            if (std::adjacent_find(check.begin(), check.end()) != check.end())
                throw std::logic_error("repair locators collide; construction invariant violated");
        }
        auto x = vandermonde_dual_solve(f, loc, rhs);
        for (int u = 0; u < p.b; ++u) column[a + u * step] = x[u];
    }
    return column;
}

// The bare local code viewed as a one-group array code.
class MsrCode {
public:
    explicit MsrCode(MsrParams p) : p_(std::move(p)) {}
    const Field& field() const { return *p_.field; }
    FieldPtr field_ptr() const { return p_.field; }
    int groups() const { return 1; }
    int group_size() const { return p_.n; }
    int local_parities() const { return p_.r; }
    int global_parities() const { return 0; }
    int repair_degree() const { return p_.d; }
    i64 rows() const { return p_.ell; }
    const MsrParams& local_msr() const { return p_; }
    Matrix parity_check(i64 a) const { return local_parity_matrix(p_, a); }

private:
    MsrParams p_;
};

}  // namespace pmds
