// PMDS array codes with any number of global parities over GF(q^M).
//
// The per-row parity check keeps the diagonal Vandermonde local blocks in
// GF(q) locators and adds s global rows whose entries are successive
// Frobenius powers of the alpha sequence (a Moore structure, independent of
// the row index). Validity rests on a certified independence property: any
// min(s(r+1), mu n) of the alphas must be linearly independent over GF(q),
// checked exhaustively rather than assumed from the generation recipe.

#pragma once

#include <optional>
#include <random>
#include <vector>

#include "pmds/enumeration.hpp"
#include "pmds/msr.hpp"

namespace pmds {

enum class AlphaMode { basis, bch };

struct AlphaRecipe {
    AlphaMode mode = AlphaMode::basis;
    int a = 0;        // bch: extension degree of the generator field
    u64 gamma = 0;    // bch: primitive element of GF(q^a)
    int delta = 0;    // bch: designed distance s(r+1)+1
};

struct IndependenceResult {
    bool pass = false;
    std::vector<int> witness;  // indices of a dependent subset, empty when pass
    u64 subsets_checked = 0;
    double coverage = 1.0;
};

// Exhaustively test all t-subsets of the alphas for independence over the
// base field. Refuses spaces over the budget unless a sample size is given.
inline IndependenceResult check_independence(const Field& fqm, std::span<const u64> alphas, int t,
                                             u64 budget = 10'000'000, u64 sample = 0, u64 seed = 1) {
    const int n = (int)alphas.size();
    if (t > n) throw std::invalid_argument("subset size exceeds alpha count");
    u64 total = binomial(n, t);
    IndependenceResult res;
    std::vector<int> idx;
    std::vector<u64> subset(t);
    auto check_one = [&](const std::vector<int>& sel) {
        for (int i = 0; i < t; ++i) subset[i] = alphas[sel[i]];
        return fqm.rank_over_base(subset) == t;
    };
    if (total <= budget) {
        unrank_combination(0, n, t, idx);
        do {
            ++res.subsets_checked;
            if (!check_one(idx)) {
                res.witness = idx;
                return res;
            }
        } while (next_combination(idx, n));
        res.pass = true;
        res.coverage = 1.0;
        return res;
    }
    if (sample == 0) throw std::runtime_error("independence subset space exceeds budget; use sampling mode");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> dist(0, total - 1);
    for (u64 k = 0; k < sample; ++k) {
        unrank_combination(dist(rng), n, t, idx);
        ++res.subsets_checked;
        if (!check_one(idx)) {
            res.witness = idx;
            return res;
        }
    }
    res.pass = true;
    res.coverage = double(sample) / double(total);
    return res;
}

inline int basis_ext_degree(int mu, int n) { return mu * n; }

// alphas = polynomial basis 1, y, ..., y^(mu n - 1), row-major over (i, j)
inline std::vector<u64> gen_alphas_basis(const Field& fqm, int mu, int n) {
    if (fqm.ext_degree() != mu * n) throw std::invalid_argument("basis mode needs ext degree mu*n");
    std::vector<u64> alphas(size_t(mu) * n);
    std::vector<u64> coeffs(fqm.ext_degree(), 0);
    for (int j = 0; j < mu * n; ++j) {
        std::fill(coeffs.begin(), coeffs.end(), 0);
        coeffs[j] = 1;
        alphas[j] = fqm.pack_from_base(coeffs);
    }
    return alphas;
}

struct BchPlan {
    int a = 0;
    int M = 0;
    int delta = 0;
};

inline BchPlan bch_plan(int mu, int n, int r, int s, u64 q) {
    int rows = s * (r + 1);
    if (rows >= mu * n) throw std::invalid_argument("s(r+1) >= mu*n; use basis mode");
    BchPlan plan;
    plan.delta = rows + 1;
    u128 qa = 1;
    for (plan.a = 1;; ++plan.a) {
        qa *= q;
        if (qa - 1 >= u128(mu) * n) break;
        if (plan.a > 64) throw std::overflow_error("no admissible generator field");
    }
    plan.M = plan.a * rows;
    if (plan.M > 64) throw std::overflow_error("parameter overflow: extension degree M > 64");
    return plan;
}

// Column j stacks gamma^(t j) for t = 1..s(r+1) over GF(q^a), expanded to
// base coordinates; any s(r+1) columns are independent by the distance of
// the underlying code with designed distance s(r+1)+1.
inline std::pair<std::vector<u64>, u64> gen_alphas_bch(const Field& fqa, const Field& fqm, int mu, int n, int r, int s) {
    const int rows = s * (r + 1);
    const int a = fqa.ext_degree();
    if (fqm.ext_degree() != a * rows) throw std::invalid_argument("bch mode needs ext degree a*s(r+1)");
    u64 gamma = fqa.find_element_of_order_at_least(fqa.size_minus1());
    std::vector<u64> alphas(size_t(mu) * n);
    std::vector<u64> coords(size_t(a) * rows);
    for (int j = 0; j < mu * n; ++j) {
        for (int t = 1; t <= rows; ++t) {
            u64 g = fqa.pow(gamma, u64(t) * j % fqa.size_minus1());
            auto exp = fqa.expand_to_base(g);
            std::copy(exp.begin(), exp.end(), coords.begin() + size_t(t - 1) * a);
        }
        alphas[j] = fqm.pack_from_base(coords);
    }
    return {alphas, gamma};
}

class GeneralCode {
public:
    GeneralCode(int mu, int s, FieldPtr fq, FieldPtr fqm, AlphaRecipe recipe,
                std::vector<u64> alphas, std::vector<u64> betas_q, MsrParams msr, IndependenceResult cert)
        : mu_(mu), s_(s), fq_(std::move(fq)), fqm_(std::move(fqm)), recipe_(recipe),
          alphas_(std::move(alphas)), betas_q_(std::move(betas_q)), msr_(std::move(msr)), cert_(std::move(cert)) {
        global_ = Matrix(s_, mu_ * msr_.n);
        for (int g = 0; g < mu_; ++g)
            for (int k = 0; k < msr_.n; ++k) {
                u64 al = alphas_[size_t(g) * msr_.n + k];
                for (int t = 0; t < s_; ++t) global_.at(t, g * msr_.n + k) = fqm_->frobenius(al, t);
            }
    }

    const Field& field() const { return *fqm_; }
    FieldPtr field_ptr() const { return fqm_; }
    const Field& base_code_field() const { return *fq_; }
    FieldPtr base_code_field_ptr() const { return fq_; }
    int groups() const { return mu_; }
    int group_size() const { return msr_.n; }
    int local_parities() const { return msr_.r; }
    int global_parities() const { return s_; }
    int repair_degree() const { return msr_.d; }
    i64 rows() const { return msr_.ell; }
    const MsrParams& local_msr() const { return msr_; }
    const std::vector<u64>& alphas() const { return alphas_; }
    const std::vector<u64>& betas_base() const { return betas_q_; }
    const AlphaRecipe& recipe() const { return recipe_; }
    const IndependenceResult& certificate() const { return cert_; }
    int ext_degree() const { return fqm_->ext_degree(); }

    Matrix parity_check(i64 a) const {
        const int n = msr_.n, r = msr_.r;
        Matrix h(r * mu_ + s_, mu_ * n);
        Matrix local = local_parity_matrix(msr_, a);
        for (int g = 0; g < mu_; ++g)
            for (int t = 0; t < r; ++t)
                for (int k = 0; k < n; ++k) h.at(g * r + t, g * n + k) = local.at(t, k);
        for (int t = 0; t < s_; ++t)
            for (int c = 0; c < mu_ * n; ++c) h.at(r * mu_ + t, c) = global_.at(t, c);
        return h;
    }

private:
    int mu_, s_;
    FieldPtr fq_, fqm_;
    AlphaRecipe recipe_;
    std::vector<u64> alphas_;
    std::vector<u64> betas_q_;
    MsrParams msr_;
    IndependenceResult cert_;
    Matrix global_;
};

struct GeneralOptions {
    AlphaMode mode = AlphaMode::basis;
    u64 independence_budget = 10'000'000;
    u64 independence_sample = 0;  // 0 = exhaustive only
};

// Build and certify. The alpha sequence is never trusted by provenance:
// construction fails unless the independence check passes.
inline GeneralCode construct_general_pmds(int mu, int n, int r, int s, int d, FieldPtr fq, GeneralOptions opt = {}) {
    if (s < 1) throw std::invalid_argument("need s >= 1");
    if (s > (n - r) * mu) throw std::invalid_argument("need s <= (n-r)*mu");
    if (fq->ext_degree() != 1) throw std::invalid_argument("code base field must not itself be an extension");
    int b = d + 1 - n + r;
    if (b < 1) throw std::invalid_argument("need d >= n-r");
    u64 q = fq->size_minus1() + 1;
    if (q < u64(b) * n) throw std::invalid_argument("need q >= b*n");

    AlphaRecipe recipe;
    FieldPtr fqm;
    std::vector<u64> alphas;
    if (opt.mode == AlphaMode::basis) {
        recipe.mode = AlphaMode::basis;
        int M = basis_ext_degree(mu, n);
        fqm = Field::extension(fq->characteristic(), fq->base_degree(), M);
        alphas = gen_alphas_basis(*fqm, mu, n);
    } else {
        recipe.mode = AlphaMode::bch;
        auto plan = bch_plan(mu, n, r, s, q);
        recipe.a = plan.a;
        recipe.delta = plan.delta;
        auto fqa = Field::extension(fq->characteristic(), fq->base_degree(), plan.a);
        fqm = Field::extension(fq->characteristic(), fq->base_degree(), plan.M);
        auto [al, gamma] = gen_alphas_bch(*fqa, *fqm, mu, n, r, s);
        alphas = std::move(al);
        recipe.gamma = gamma;
    }

    int t = std::min(s * (r + 1), mu * n);
    auto cert = check_independence(*fqm, alphas, t, opt.independence_budget, opt.independence_sample);
    if (!cert.pass) throw std::runtime_error("alpha sequence failed the independence certificate");

    // locators: the first b*n field elements, embedded into GF(q^M)
    std::vector<u64> betas_q(size_t(b) * n);
    for (size_t i = 0; i < betas_q.size(); ++i) betas_q[i] = i;
    std::vector<u64> betas_emb(betas_q.size());
    for (size_t i = 0; i < betas_q.size(); ++i) betas_emb[i] = fqm->embed_base(betas_q[i]);
    auto msr = MsrParams::create(n, r, d, fqm, std::move(betas_emb));
    return GeneralCode(mu, s, std::move(fq), std::move(fqm), recipe, std::move(alphas), std::move(betas_q), std::move(msr), std::move(cert));
}

struct FieldSizeReport {
    u64 q = 0;
    int M = 0;
    u64 achieved = 0;     // q^M
    i64 ell = 0;
    i64 ell_expected = 0; // (d+1-(n-r))^n
    bool ell_ok = false;
    u64 design_bound = 0;  // 2n(d+1-(n-r)) (2 n mu)^(s(r+1)-1)
    bool bound_overflow = false;
    bool achieved_le_bound = false;
};

inline FieldSizeReport field_size_report(const GeneralCode& c) {
    FieldSizeReport rep;
    const auto& m = c.local_msr();
    rep.q = c.base_code_field().size_minus1() + 1;
    rep.M = c.ext_degree();
    rep.achieved = c.field().size_minus1() + 1;  // wraps only at 2^64, outside desk scale
    rep.ell = c.rows();
    rep.ell_expected = ipow(m.d + 1 - (m.n - m.r), m.n);
    rep.ell_ok = rep.ell == rep.ell_expected;
    u128 bound = u128(2) * m.n * u64(m.d + 1 - (m.n - m.r));
    int e = c.global_parities() * (m.r + 1) - 1;
    for (int i = 0; i < e; ++i) {
        bound *= u128(2) * m.n * c.groups();
        if (bound > ~0ull) {
            rep.bound_overflow = true;
            break;
        }
    }
    if (!rep.bound_overflow) {
        rep.design_bound = static_cast<u64>(bound);
        rep.achieved_le_bound = rep.achieved <= rep.design_bound;
    } else {
        rep.achieved_le_bound = true;
    }
    return rep;
}

}  // namespace pmds
