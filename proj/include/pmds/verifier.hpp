// Brute-force certification: local MDS sweeps, exhaustive erasure-pattern
// enumeration for the PMDS and SD properties, and a repair bandwidth audit
// against the cut-set bound. Failures carry a witness that re-checks both
// as an explicit singular submatrix and as a RANK_DEFICIENT decode.
//
// Enumeration is lexicographic and unrankable, so the pattern space is
// statically partitioned across workers (round robin by pattern index) and
// merged deterministically: the lexicographically smallest witness wins.

#pragma once

#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "pmds/codec.hpp"
#include "pmds/enumeration.hpp"

namespace pmds {

enum class Property { local_mds, pmds, sd, msr_bandwidth };

inline const char* to_string(Property p) {
    switch (p) {
        case Property::local_mds: return "LOCAL_MDS";
        case Property::pmds: return "PMDS";
        case Property::sd: return "SD";
        default: return "MSR_BANDWIDTH";
    }
}

struct Witness {
    std::vector<int> columns;  // global column indices of the deficient set
    i64 row = -1;
    int group = -1;            // local-MDS witnesses only
};

struct VerificationReport {
    Property property = Property::pmds;
    u64 patterns_checked = 0;
    i64 rows_checked = 0;
    bool pass = false;
    std::optional<Witness> witness;
    double coverage = 1.0;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifyOptions {
    u64 budget = 10'000'000;  // pattern x row rank checks
    bool allow_large = false;
    u64 sample = 0;           // 0 = exhaustive
    int workers = 1;
    u64 seed = 0x5eed5eed5eedULL;
};

inline u64 pattern_count_pmds(int mu, int n, int r, int s) {
    u128 total = binomial(mu * (n - r), s);
    u64 per_group = binomial(n, r);
    for (int g = 0; g < mu; ++g) {
        total *= per_group;
        if (total > ~0ull) throw std::overflow_error("pattern space exceeds 2^64");
    }
    return static_cast<u64>(total);
}

inline u64 pattern_count_sd(int mu, int n, int r, int s) {
    u128 total = u128(binomial(n, r)) * binomial(mu * (n - r), s);
    if (total > ~0ull) throw std::overflow_error("pattern space exceeds 2^64");
    return static_cast<u64>(total);
}

namespace detail {

// Expand pattern index -> global erased columns, lexicographic in
// (E_1, ..., E_mu, extras). SD patterns reuse one disk subset everywhere.
struct PatternSpace {
    int mu, n, r, s;
    bool sd;
    u64 per_group;   // C(n, r), or 1 in sd mode past the first block
    u64 extra_count; // C(mu(n-r), s)
    u64 total;

    PatternSpace(int mu_, int n_, int r_, int s_, bool sd_) : mu(mu_), n(n_), r(r_), s(s_), sd(sd_) {
        per_group = binomial(n, r);
        extra_count = binomial(mu * (n - r), s);
        total = sd ? pattern_count_sd(mu, n, r, s) : pattern_count_pmds(mu, n, r, s);
    }

    void expand(u64 idx, std::vector<int>& cols, std::vector<int>& scratch) const {
        cols.clear();
        u64 extra_idx = idx % extra_count;
        u64 rest = idx / extra_count;
        std::vector<bool> erased(size_t(mu) * n, false);
        if (sd) {
            unrank_combination(rest, n, r, scratch);
            for (int g = 0; g < mu; ++g)
                for (int k : scratch) erased[size_t(g) * n + k] = true;
        } else {
            for (int g = mu - 1; g >= 0; --g) {
                u64 gi = rest % per_group;
                rest /= per_group;
                unrank_combination(gi, n, r, scratch);
                for (int k : scratch) erased[size_t(g) * n + k] = true;
            }
        }
        std::vector<int> survivors;
        survivors.reserve(size_t(mu) * (n - r));
        for (int c = 0; c < mu * n; ++c)
            if (!erased[c]) survivors.push_back(c);
        unrank_combination(extra_idx, (int)survivors.size(), s, scratch);
        for (int pos : scratch) erased[survivors[pos]] = true;
        for (int c = 0; c < mu * n; ++c)
            if (erased[c]) cols.push_back(c);
    }
};

struct WorkerHit {
    u64 order = ~0ull;  // pattern index (exhaustive) or sample position
    Witness witness;
};

template <ArrayCode C>
VerificationReport sweep_patterns(const C& code, Property prop, const PatternSpace& space, const VerifyOptions& opt) {
    const Field& f = code.field();
    const i64 ell = code.rows();
    const int hrows = code.local_parities() * code.groups() + code.global_parities();
    const int hcols = code.groups() * code.group_size();
    // row matrices are reused across every pattern; cache them unless the
    // subpacketization makes that unreasonable
    const bool cache = ell * i64(hrows) * hcols <= (i64(1) << 24);
    std::vector<Matrix> checks;
    if (cache) {
        checks.resize(ell);
        for (i64 a = 0; a < ell; ++a) checks[a] = code.parity_check(a);
    }
    auto row_check = [&](i64 a) { return cache ? checks[a] : code.parity_check(a); };

    u128 work = u128(space.total) * u64(ell);
    bool exhaustive = work <= opt.budget || opt.allow_large;
    if (!exhaustive && opt.sample == 0)
        throw BudgetError("pattern sweep of " + std::to_string(space.total) + " patterns x " + std::to_string(ell) +
                          " rows exceeds the budget; pass allow_large or a sample size");

    std::vector<u64> sample_indices;
    if (!exhaustive) {
        sample_indices.resize(opt.sample);
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<u64> dist(0, space.total - 1);
        for (auto& v : sample_indices) v = dist(rng);
    }
    const u64 count = exhaustive ? space.total : opt.sample;
    const int workers = std::max(1, opt.workers);

    std::vector<WorkerHit> hits(workers);
    std::vector<u64> visited(workers, 0);
    auto run = [&](int w) {
        std::vector<int> cols, scratch;
        for (u64 k = w; k < count; k += workers) {
            u64 idx = exhaustive ? k : sample_indices[k];
            space.expand(idx, cols, scratch);
            ++visited[w];
            for (i64 a = 0; a < ell; ++a) {
                if (!has_full_column_rank(f, row_check(a).columns(cols))) {
                    hits[w] = {k, {cols, a, -1}};
                    return;
                }
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }

    VerificationReport rep;
    rep.property = prop;
    rep.rows_checked = ell;
    rep.coverage = exhaustive ? 1.0 : double(count) / double(space.total);
    const WorkerHit* best = nullptr;
    for (const auto& h : hits)
        if (h.order != ~0ull && (!best || h.order < best->order)) best = &h;
    if (best) {
        rep.pass = false;
        rep.witness = best->witness;
        rep.patterns_checked = best->order + 1;
        return rep;
    }
    u64 enumerated = std::accumulate(visited.begin(), visited.end(), u64(0));
    if (enumerated != count) throw std::logic_error("enumerator self-check failed");
    rep.pass = true;
    rep.patterns_checked = count;
    return rep;
}

}  // namespace detail

// Every group, every row, every r-subset of the group's columns: the local
// r x r submatrix must be nonsingular.
template <ArrayCode C>
VerificationReport verify_local_mds(const C& code) {
    const MsrParams& msr = code.local_msr();
    const Field& f = *msr.field;
    const int n = code.group_size(), r = code.local_parities();
    VerificationReport rep;
    rep.property = Property::local_mds;
    rep.rows_checked = code.rows();
    rep.patterns_checked = u64(code.groups()) * binomial(n, r);
    for (i64 a = 0; a < code.rows(); ++a) {
        Matrix local = local_parity_matrix(msr, a);
        std::vector<int> sel;
        unrank_combination(0, n, r, sel);
        do {
            if (!has_full_column_rank(f, local.columns(sel))) {
                // the local block is shared by every group; report group 0's copy
                Witness w;
                w.group = 0;
                w.row = a;
                for (int k : sel) w.columns.push_back(k);
                rep.witness = w;
                rep.pass = false;
                return rep;
            }
        } while (next_combination(sel, n));
    }
    rep.pass = true;
    return rep;
}

template <ArrayCode C>
VerificationReport verify_pmds(const C& code, const VerifyOptions& opt = {}) {
    detail::PatternSpace space(code.groups(), code.group_size(), code.local_parities(), code.global_parities(), false);
    return detail::sweep_patterns(code, Property::pmds, space, opt);
}

template <ArrayCode C>
VerificationReport verify_sd(const C& code, const VerifyOptions& opt = {}) {
    detail::PatternSpace space(code.groups(), code.group_size(), code.local_parities(), code.global_parities(), true);
    return detail::sweep_patterns(code, Property::sd, space, opt);
}

struct Rational {
    i64 num = 0;
    i64 den = 1;

    friend bool operator==(const Rational&, const Rational&) = default;
};

// Exact cut-set lower bound h * d * ell / (h + d - n + r) on the symbols
// downloaded to repair h nodes from d helpers.
inline Rational msr_bound(int h, int d, int n, int r, i64 ell) {
    if (h + d > n) throw std::invalid_argument("need h + d <= n");
    i64 den = i64(h) + d - n + r;
    if (den <= 0) throw std::invalid_argument("nonpositive denominator");
    i64 num = i64(h) * d * ell;
    i64 g = std::gcd(num, den);
    return {num / g, den / g};
}

// For every group, failed node, and admissible helper subset: repair on
// random codewords must reproduce the column exactly and download exactly
// the bound.
template <ArrayCode C>
VerificationReport audit_repair_bandwidth(const C& code, const SystematicLayout& lay, int codewords = 3,
                                          u64 seed = 0x5eed5eed5eedULL) {
    const MsrParams& msr = code.local_msr();
    const int n = code.group_size(), d = code.repair_degree();
    Rational bound = msr_bound(1, d, n, code.local_parities(), code.rows());

    VerificationReport rep;
    rep.property = Property::msr_bandwidth;
    rep.rows_checked = code.rows();
    std::mt19937_64 rng(seed);
    for (int cw_i = 0; cw_i < codewords; ++cw_i) {
        CodewordArray cw = random_codeword(code, lay, rng);
        for (int g = 0; g < code.groups(); ++g) {
            for (int i = 0; i < n; ++i) {
                std::vector<int> pool;
                for (int k = 0; k < n; ++k)
                    if (k != i) pool.push_back(k);
                std::vector<int> sel;
                unrank_combination(0, n - 1, d, sel);
                do {
                    std::vector<int> helpers;
                    std::vector<std::vector<u64>> cols;
                    for (int pos : sel) {
                        helpers.push_back(pool[pos]);
                        cols.push_back(cw.column(g * n + pool[pos]));
                    }
                    auto plan = make_repair_plan(msr, i, helpers, cols);
                    auto rec = repair_node(msr, plan);
                    bool count_ok = plan.download_total * bound.den == bound.num;
                    bool exact = rec == cw.column(g * n + i);
                    ++rep.patterns_checked;
                    if (!count_ok || !exact) {
                        Witness w;
                        w.group = g;
                        w.columns = {g * n + i};
                        w.row = -1;
                        rep.witness = w;
                        rep.pass = false;
                        return rep;
                    }
                } while (next_combination(sel, n - 1));
            }
        }
    }
    rep.pass = true;
    return rep;
}

// A failure witness must re-check two independent ways: the selected
// columns form a singular submatrix, and decoding that pattern reports
// RANK_DEFICIENT.
template <ArrayCode C>
bool recheck_witness(const C& code, const VerificationReport& rep) {
    if (!rep.witness) return false;
    const Witness& w = *rep.witness;
    bool singular = false;
    if (rep.property == Property::local_mds) {
        Matrix local = local_parity_matrix(code.local_msr(), w.row);
        singular = !has_full_column_rank(code.field(), local.columns(w.columns));
    } else {
        Matrix h = code.parity_check(w.row);
        singular = !has_full_column_rank(code.field(), h.columns(w.columns));
    }
    if (!singular) return false;

    std::vector<int> cols = w.columns;
    if (rep.property == Property::local_mds && w.group >= 0) {
        for (auto& c : cols) c += w.group * code.group_size();
    }
    auto pattern = ErasurePattern::classify(cols, code.groups(), code.group_size(), code.local_parities(), code.global_parities());
    CodewordArray zero(code.rows(), code.groups() * code.group_size());
    auto dec = decode_erasures(code, zero, pattern);
    return dec.status == DecodeStatus::rank_deficient;
}

}  // namespace pmds
