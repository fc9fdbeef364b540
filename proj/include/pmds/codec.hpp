// Row-oriented encode / decode engine. All parity structure is per-row, so
// every operation reduces to exact linear algebra over the code's field,
// row by row. Rows are independent; outputs are freshly allocated.

#pragma once

#include <concepts>
#include <random>
#include <span>
#include <vector>

#include "pmds/linalg.hpp"
#include "pmds/msr.hpp"

namespace pmds {

template <typename C>
concept ArrayCode = requires(const C& c, i64 a) {
    { c.field() } -> std::convertible_to<const Field&>;
    { c.groups() } -> std::convertible_to<int>;
    { c.group_size() } -> std::convertible_to<int>;
    { c.local_parities() } -> std::convertible_to<int>;
    { c.global_parities() } -> std::convertible_to<int>;
    { c.repair_degree() } -> std::convertible_to<int>;
    { c.rows() } -> std::convertible_to<i64>;
    { c.parity_check(a) } -> std::convertible_to<Matrix>;
    { c.local_msr() } -> std::convertible_to<const MsrParams&>;
};

struct CodewordArray {
    i64 ell = 0;
    int cols = 0;
    std::vector<u64> v;

    CodewordArray() = default;
    CodewordArray(i64 ell_, int cols_) : ell(ell_), cols(cols_), v(size_t(ell_) * cols_, 0) {}

    u64& at(i64 a, int c) { return v[size_t(a) * cols + c]; }
    u64 at(i64 a, int c) const { return v[size_t(a) * cols + c]; }

    std::vector<u64> column(int c) const {
        std::vector<u64> out(ell);
        for (i64 a = 0; a < ell; ++a) out[a] = at(a, c);
        return out;
    }
    void set_column(int c, std::span<const u64> col) {
        for (i64 a = 0; a < ell; ++a) at(a, c) = col[a];
    }

    friend bool operator==(const CodewordArray&, const CodewordArray&) = default;
};

enum class PatternClass { local_only, sd_compatible, pmds, uncorrectable };

inline const char* to_string(PatternClass c) {
    switch (c) {
        case PatternClass::local_only: return "LOCAL";
        case PatternClass::sd_compatible: return "SD-COMPATIBLE";
        case PatternClass::pmds: return "PMDS";
        default: return "UNCORRECTABLE-CLASS";
    }
}

// Failure classes form a ladder of guarantees: per-group local decoding,
// same-positions-plus-s (covered by SD codes), r-per-group-plus-s (PMDS
// only), or outside every guarantee. SD-compatible patterns are always
// PMDS-coverable, so the ladder is checked in that order.
struct ErasurePattern {
    std::vector<int> erased;         // sorted, unique, global column indices
    std::vector<int> group_counts;   // per group
    PatternClass cls = PatternClass::uncorrectable;

    static ErasurePattern classify(std::span<const int> cols, int mu, int n, int r, int s) {
        ErasurePattern p;
        p.erased.assign(cols.begin(), cols.end());
        std::sort(p.erased.begin(), p.erased.end());
        p.erased.erase(std::unique(p.erased.begin(), p.erased.end()), p.erased.end());
        if (!p.erased.empty() && (p.erased.front() < 0 || p.erased.back() >= mu * n))
            throw std::invalid_argument("erased column out of range");
        p.group_counts.assign(mu, 0);
        for (int c : p.erased) ++p.group_counts[c / n];

        bool local = true;
        int overflow = 0;
        for (int g = 0; g < mu; ++g) {
            if (p.group_counts[g] > r) local = false;
            overflow += std::max(p.group_counts[g] - r, 0);
        }
        if (local) {
            p.cls = PatternClass::local_only;
            return p;
        }
        // best shared-disk cover: the r in-group positions hit most often
        std::vector<int> pos_counts(n, 0);
        for (int c : p.erased) ++pos_counts[c % n];
        std::vector<int> sorted_counts(pos_counts);
        std::sort(sorted_counts.rbegin(), sorted_counts.rend());
        int covered = 0;
        for (int k = 0; k < r && k < n; ++k) covered += sorted_counts[k];
        if ((int)p.erased.size() - covered <= s) {
            p.cls = PatternClass::sd_compatible;
            return p;
        }
        if (overflow <= s) {
            p.cls = PatternClass::pmds;
            return p;
        }
        p.cls = PatternClass::uncorrectable;
        return p;
    }
};

// Info columns are everything except the last r columns of each group plus
// s extra columns packed backwards from the last group (at most n-r extras
// per group). That parity set is itself a correctable pattern, so the
// parity submatrix of a verified construction is invertible.
struct SystematicLayout {
    std::vector<int> info;
    std::vector<int> parity;

    static SystematicLayout make(int mu, int n, int r, int s) {
        if (s > (n - r) * mu) throw std::invalid_argument("need s <= (n-r)*mu");
        std::vector<bool> is_parity(size_t(mu) * n, false);
        for (int g = 0; g < mu; ++g)
            for (int k = n - r; k < n; ++k) is_parity[size_t(g) * n + k] = true;
        int extras = s;
        for (int g = mu - 1; g >= 0 && extras > 0; --g) {
            for (int k = n - r - 1; k >= 0 && extras > 0; --k) {
                is_parity[size_t(g) * n + k] = true;
                --extras;
            }
        }
        SystematicLayout lay;
        for (int c = 0; c < mu * n; ++c) (is_parity[c] ? lay.parity : lay.info).push_back(c);
        return lay;
    }
};

// data[k][a] lands verbatim in info column k, row a; parities solve
// H_P x = -H_I d per row.
template <ArrayCode C>
CodewordArray encode_systematic(const C& code, const SystematicLayout& lay, const std::vector<std::vector<u64>>& data) {
    const Field& f = code.field();
    const i64 ell = code.rows();
    const int cols = code.groups() * code.group_size();
    if (data.size() != lay.info.size()) throw std::invalid_argument("data row count must match info positions");
    for (const auto& d : data)
        if ((i64)d.size() != ell) throw std::invalid_argument("data column length must match subpacketization");

    CodewordArray cw(ell, cols);
    const int m = (int)lay.parity.size();
    for (i64 a = 0; a < ell; ++a) {
        Matrix h = code.parity_check(a);
        if (h.rows() != m) throw std::invalid_argument("parity row count mismatch");
        Matrix hp = h.columns(lay.parity);
        std::vector<u64> rhs(m, 0);
        for (size_t k = 0; k < lay.info.size(); ++k) {
            u64 v = data[k][a];
            if (!f.contains(v)) throw std::invalid_argument("data symbol outside field");
            cw.at(a, lay.info[k]) = v;
            if (!v) continue;
            for (int t = 0; t < m; ++t) rhs[t] = f.sub(rhs[t], f.mul(h.at(t, lay.info[k]), v));
        }
        auto sol = solve(f, hp, rhs);
        if (!sol) throw std::runtime_error("singular parity submatrix; construction is invalid");
        for (int k = 0; k < m; ++k) cw.at(a, lay.parity[k]) = (*sol)[k];
    }
    return cw;
}

enum class DecodeStatus { ok, rank_deficient };

struct DecodeResult {
    DecodeStatus status = DecodeStatus::ok;
    CodewordArray array;
};

// Fill erased symbols of one group, reading only that group's columns.
// group_block is the ell x n sub-array of the group; local_erased holds
// in-group indices. Returns false when the local system is deficient.
inline bool decode_group_local(const MsrParams& msr, CodewordArray& group_block, std::span<const int> local_erased) {
    const Field& f = *msr.field;
    std::vector<int> unknowns(local_erased.begin(), local_erased.end());
    std::vector<bool> is_unknown(msr.n, false);
    for (int k : unknowns) is_unknown[k] = true;
    for (i64 a = 0; a < msr.ell; ++a) {
        Matrix h = local_parity_matrix(msr, a);
        Matrix sub = h.columns(unknowns);
        std::vector<u64> rhs(msr.r, 0);
        for (int k = 0; k < msr.n; ++k) {
            if (is_unknown[k]) continue;
            u64 v = group_block.at(a, k);
            if (!v) continue;
            for (int t = 0; t < msr.r; ++t) rhs[t] = f.sub(rhs[t], f.mul(h.at(t, k), v));
        }
        auto sol = solve(f, sub, rhs);
        if (!sol) return false;
        for (size_t k = 0; k < unknowns.size(); ++k) group_block.at(a, unknowns[k]) = (*sol)[k];
    }
    return true;
}

// Two phases: groups with at most r erasures are solved from their local
// block alone; whatever remains is solved per row against the full parity
// check. RANK_DEFICIENT certifies the pattern exceeds the guarantee of a
// verified code.
template <ArrayCode C>
DecodeResult decode_erasures(const C& code, CodewordArray damaged, const ErasurePattern& pattern) {
    const Field& f = code.field();
    const int n = code.group_size();
    const int mu = code.groups();
    const int r = code.local_parities();
    const i64 ell = code.rows();
    if (damaged.ell != ell || damaged.cols != mu * n) throw std::invalid_argument("array shape mismatch");

    std::vector<int> remaining;
    for (int g = 0; g < mu; ++g) {
        std::vector<int> local;
        for (int c : pattern.erased)
            if (c / n == g) local.push_back(c % n);
        if (local.empty()) continue;
        if ((int)local.size() <= r) {
            CodewordArray block(ell, n);
            for (i64 a = 0; a < ell; ++a)
                for (int k = 0; k < n; ++k) block.at(a, k) = damaged.at(a, g * n + k);
            for (int k : local)
                for (i64 a = 0; a < ell; ++a) block.at(a, k) = 0;
            if (!decode_group_local(code.local_msr(), block, local)) return {DecodeStatus::rank_deficient, {}};
            for (int k : local)
                for (i64 a = 0; a < ell; ++a) damaged.at(a, g * n + k) = block.at(a, k);
        } else {
            for (int k : local) remaining.push_back(g * n + k);
        }
    }

    if (!remaining.empty()) {
        std::sort(remaining.begin(), remaining.end());
        std::vector<bool> is_unknown(size_t(mu) * n, false);
        for (int c : remaining) is_unknown[c] = true;
        for (i64 a = 0; a < ell; ++a) {
            Matrix h = code.parity_check(a);
            Matrix sub = h.columns(remaining);
            std::vector<u64> rhs(h.rows(), 0);
            for (int c = 0; c < mu * n; ++c) {
                if (is_unknown[c]) continue;
                u64 v = damaged.at(a, c);
                if (!v) continue;
                for (int t = 0; t < h.rows(); ++t) rhs[t] = f.sub(rhs[t], f.mul(h.at(t, c), v));
            }
            auto sol = solve(f, sub, rhs);
            if (!sol) return {DecodeStatus::rank_deficient, {}};
            for (size_t k = 0; k < remaining.size(); ++k) damaged.at(a, remaining[k]) = (*sol)[k];
        }
    }
    return {DecodeStatus::ok, std::move(damaged)};
}

struct RepairOutcome {
    std::vector<u64> column;
    i64 downloaded = 0;
    i64 naive = 0;      // (n-r) * ell, the plain MDS-decode download
    bool regenerated = false;  // false = NO_REGEN fallback through full decode
};

// Regenerate one erased node from d in-group helpers when enough survive;
// otherwise fall back to a full decode of the pattern.
template <ArrayCode C>
RepairOutcome repair_single(const C& code, const CodewordArray& damaged, const ErasurePattern& pattern, int node) {
    const int n = code.group_size();
    const MsrParams& msr = code.local_msr();
    const int g = node / n;
    if (std::find(pattern.erased.begin(), pattern.erased.end(), node) == pattern.erased.end())
        throw std::invalid_argument("node is not erased");

    RepairOutcome out;
    out.naive = i64(n - code.local_parities()) * code.rows();

    std::vector<int> group_erased;
    for (int c : pattern.erased)
        if (c / n == g) group_erased.push_back(c % n);
    const int survivors = n - (int)group_erased.size();

    if (survivors >= code.repair_degree()) {
        std::vector<int> helpers;
        for (int k = 0; k < n && (int)helpers.size() < code.repair_degree(); ++k) {
            if (std::find(group_erased.begin(), group_erased.end(), k) == group_erased.end()) helpers.push_back(k);
        }
        std::vector<std::vector<u64>> cols;
        cols.reserve(helpers.size());
        for (int k : helpers) cols.push_back(damaged.column(g * n + k));
        auto plan = make_repair_plan(msr, node % n, helpers, cols);
        out.column = repair_node(msr, plan);
        out.downloaded = plan.download_total;
        out.regenerated = true;
        return out;
    }

    auto dec = decode_erasures(code, damaged, pattern);
    if (dec.status != DecodeStatus::ok) throw std::runtime_error("fallback decode failed; pattern not correctable");
    out.column = dec.array.column(node);
    out.downloaded = i64(code.groups() * n - (int)pattern.erased.size()) * code.rows();
    out.regenerated = false;
    return out;
}

inline CodewordArray restrict_columns(const CodewordArray& arr, std::span<const int> cols) {
    CodewordArray out(arr.ell, (int)cols.size());
    for (i64 a = 0; a < arr.ell; ++a)
        for (size_t k = 0; k < cols.size(); ++k) out.at(a, (int)k) = arr.at(a, cols[k]);
    return out;
}

template <ArrayCode C>
bool validate(const C& code, const CodewordArray& cw) {
    const Field& f = code.field();
    const int cols = code.groups() * code.group_size();
    if (cw.ell != code.rows() || cw.cols != cols) return false;
    for (i64 a = 0; a < code.rows(); ++a) {
        Matrix h = code.parity_check(a);
        for (int t = 0; t < h.rows(); ++t) {
            u64 acc = 0;
            for (int c = 0; c < cols; ++c) acc = f.add(acc, f.mul(h.at(t, c), cw.at(a, c)));
            if (acc != 0) return false;
        }
    }
    return true;
}

// Random codeword through the systematic encoder; deterministic in the seed.
template <ArrayCode C>
CodewordArray random_codeword(const C& code, const SystematicLayout& lay, std::mt19937_64& rng) {
    std::uniform_int_distribution<u64> dist(0, code.field().size_minus1());
    std::vector<std::vector<u64>> data(lay.info.size(), std::vector<u64>(code.rows()));
    for (auto& col : data)
        for (auto& v : col) v = dist(rng);
    return encode_systematic(code, lay, data);
}

}  // namespace pmds
