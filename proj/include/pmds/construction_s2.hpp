// Locally repairable PMDS / SD array codes with two global parities over
// characteristic-2 fields, plus the generalized scalar code family used to
// test the stride bounds on arbitrary locator exponent sets.
//
// Per-row parity check (rmu+2) x (mu n):
//   - mu diagonal local blocks, each the Vandermonde block in beta_{i,a_i}
//     with beta_{i,u} = beta^(i + u n) (zero-based i, u);
//   - one global row of r-th locator powers, shared by all groups;
//   - one global row of beta^(-jN) * beta_{i,a_i}^(-1) per group j.

#pragma once

#include <span>
#include <vector>

#include "pmds/msr.hpp"

namespace pmds {

enum class S2Variant { pmds, sd };

inline i64 min_n_pmds(std::span<const i64> L, int r) {
    i64 mx = *std::max_element(L.begin(), L.end());
    return (i64(r) + 1) * (mx - r) + 1;
}

inline i64 min_n_sd(std::span<const i64> L) {
    return *std::max_element(L.begin(), L.end()) + 1;
}

class S2Code {
public:
    S2Code(int mu, S2Variant variant, i64 N, u64 beta, MsrParams msr)
        : mu_(mu), variant_(variant), n_stride_(N), beta_(beta), msr_(std::move(msr)) {
        beta_inv_ = field().inv(beta_);
        beta_order_ = field().element_order(beta_);
    }

    const Field& field() const { return *msr_.field; }
    FieldPtr field_ptr() const { return msr_.field; }
    int groups() const { return mu_; }
    int group_size() const { return msr_.n; }
    int local_parities() const { return msr_.r; }
    int global_parities() const { return 2; }
    int repair_degree() const { return msr_.d; }
    i64 rows() const { return msr_.ell; }
    const MsrParams& local_msr() const { return msr_; }
    S2Variant variant() const { return variant_; }
    i64 stride() const { return n_stride_; }
    u64 beta() const { return beta_; }

    // exponent set of row a: { i + a_i * n }
    std::vector<i64> locator_exponents(i64 a) const {
        auto digits = row_digits(a, msr_.b, msr_.n);
        std::vector<i64> L(msr_.n);
        for (int i = 0; i < msr_.n; ++i) L[i] = i + i64(digits[i]) * msr_.n;
        return L;
    }

    Matrix parity_check(i64 a) const {
        const Field& f = field();
        const int n = msr_.n, r = msr_.r;
        auto digits = row_digits(a, msr_.b, n);
        Matrix h(r * mu_ + 2, mu_ * n);
        Matrix local = local_parity_matrix(msr_, a);
        for (int g = 0; g < mu_; ++g)
            for (int t = 0; t < r; ++t)
                for (int k = 0; k < n; ++k) h.at(g * r + t, g * n + k) = local.at(t, k);
        for (int g = 0; g < mu_; ++g) {
            for (int k = 0; k < n; ++k) {
                i64 e = k + i64(digits[k]) * n;
                u64 v = msr_.beta(k, digits[k]);
                h.at(r * mu_, g * n + k) = f.pow(v, r);
                h.at(r * mu_ + 1, g * n + k) = f.pow(beta_inv_, u64(i64(g) * n_stride_ + e) % beta_order_);
            }
        }
        return h;
    }

private:
    int mu_;
    S2Variant variant_;
    i64 n_stride_;
    u64 beta_, beta_inv_;
    u64 beta_order_;
    MsrParams msr_;
};

namespace detail {

inline void require_char2(const Field& f) {
    if (f.characteristic() != 2) throw std::invalid_argument("construction requires characteristic 2");
}

inline S2Code make_s2(int mu, int n, int r, int d, FieldPtr field, i64 N, u64 size_floor, S2Variant variant) {
    require_char2(*field);
    if (mu < 1) throw std::invalid_argument("need at least one local group");
    int b = d + 1 - n + r;
    u64 need_order = std::max<u64>(u64(mu) * u64(N), u64(n) * u64(b));
    if (field->size_minus1() + 1 < size_floor) throw std::invalid_argument("field too small for this construction");
    u64 beta = field->find_element_of_order_at_least(need_order);  // primitive; throws if impossible
    std::vector<u64> betas(size_t(n) * b);
    for (int i = 0; i < n; ++i)
        for (int u = 0; u < b; ++u) betas[size_t(i) * b + u] = field->pow(beta, u64(i) + u64(u) * n);
    auto msr = MsrParams::create(n, r, d, std::move(field), std::move(betas));
    return S2Code(mu, variant, N, beta, std::move(msr));
}

}  // namespace detail

inline S2Code construct_pmds_s2(int mu, int n, int r, int d, FieldPtr field) {
    i64 N = (i64(r) + 1) * (i64(r) * n - 1 - r) + 1;
    int b = d + 1 - n + r;
    u64 floor = std::max<u64>(u64(mu) * N, u64(b) * n);
    return detail::make_s2(mu, n, r, d, std::move(field), N, floor, S2Variant::pmds);
}

inline S2Code construct_sd_s2(int mu, int n, int r, int d, FieldPtr field) {
    i64 N = i64(r) * n;
    int b = d + 1 - n + r;
    u64 floor = std::max<u64>(u64(r) * n * mu, u64(b) * n);
    return detail::make_s2(mu, n, r, d, std::move(field), N, floor, S2Variant::sd);
}

// Scalar (single-row) code over arbitrary locator exponents L.
class ScalarS2Code {
public:
    ScalarS2Code(int mu, int n, int r, std::vector<i64> L, i64 N, FieldPtr field)
        : mu_(mu), L_(std::move(L)), n_stride_(N) {
        detail::require_char2(*field);
        if ((int)L_.size() != n) throw std::invalid_argument("need n locator exponents");
        {
            auto s = L_;
            std::sort(s.begin(), s.end());
            if (s.front() < 0 || std::adjacent_find(s.begin(), s.end()) != s.end())
                throw std::invalid_argument("locator exponents must be distinct non-negative integers");
        }
        i64 mx = *std::max_element(L_.begin(), L_.end());
        u64 need = std::max<u64>({u64(mu_) * u64(N), u64(mx) + 1, u64(n)});
        beta_ = field->find_element_of_order_at_least(need);
        beta_inv_ = field->inv(beta_);
        beta_order_ = field->element_order(beta_);
        std::vector<u64> betas(n);
        for (int i = 0; i < n; ++i) betas[i] = field->pow(beta_, u64(L_[i]) % beta_order_);
        msr_ = MsrParams::create(n, r, n - r, std::move(field), std::move(betas));
    }

    const Field& field() const { return *msr_.field; }
    FieldPtr field_ptr() const { return msr_.field; }
    int groups() const { return mu_; }
    int group_size() const { return msr_.n; }
    int local_parities() const { return msr_.r; }
    int global_parities() const { return 2; }
    int repair_degree() const { return msr_.d; }
    i64 rows() const { return 1; }
    const MsrParams& local_msr() const { return msr_; }
    const std::vector<i64>& exponents() const { return L_; }
    i64 stride() const { return n_stride_; }
    u64 beta() const { return beta_; }

    Matrix parity_check(i64 a) const {
        if (a != 0) throw std::out_of_range("scalar code has a single row");
        const Field& f = field();
        const int n = msr_.n, r = msr_.r;
        Matrix h(r * mu_ + 2, mu_ * n);
        for (int g = 0; g < mu_; ++g) {
            for (int k = 0; k < n; ++k) {
                u64 v = msr_.beta(k, 0);
                u64 acc = 1;
                for (int t = 0; t < r; ++t) {
                    h.at(g * r + t, g * n + k) = acc;
                    acc = f.mul(acc, v);
                }
                h.at(r * mu_, g * n + k) = acc;  // beta^(r * i_k)
                h.at(r * mu_ + 1, g * n + k) = f.pow(beta_inv_, u64(i64(g) * n_stride_ + L_[k]) % beta_order_);
            }
        }
        return h;
    }

private:
    int mu_;
    std::vector<i64> L_;
    i64 n_stride_;
    u64 beta_ = 0, beta_inv_ = 0, beta_order_ = 0;
    MsrParams msr_;
};

inline Matrix build_scalar_parity_check(const ScalarS2Code& c) { return c.parity_check(0); }

}  // namespace pmds
