// Finite field arithmetic for GF(2^w), prime fields GF(p), and extensions
// GF(q^M) over either kind of base field.
//
// Elements are packed into a single uint64_t:
//   - GF(2^w): the w-bit polynomial representation.
//   - GF(p):   the residue.
//   - GF(q^M): M base-field coefficients in mixed radix q (bit-packed when
//     the characteristic is 2), coefficient 0 least significant.
// The total field size must fit in 64 bits; construction rejects anything
// larger. Moduli are explicit in the spec so runs reproduce bit-for-bit.
// Base fields up to 2^16 get log/antilog tables; larger binary fields use
// shift-and-xor carry-less multiplication.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmds {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline u64 pollard_rho(u64 n) {
    if ((n & 1) == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
        ++c;
    }
}

// Distinct prime factors, ascending.
inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    std::vector<u64> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (m == 1) continue;
        if (is_prime_u64(m)) {
            out.push_back(m);
            continue;
        }
        u64 d = pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---- polynomials over GF(2), bit-packed, used for the base modulus ----

inline u128 clmul(u64 a, u64 b) {
    u128 acc = 0;
    while (b) {
        int i = std::countr_zero(b);
        acc ^= u128(a) << i;
        b &= b - 1;
    }
    return acc;
}

// Reduce a product of degree < 2w modulo x^w + mod_low (monic term implicit).
inline u64 gf2_reduce(u128 x, u64 mod_low, int w) {
    for (int k = 2 * w - 2; k >= w; --k) {
        if ((x >> k) & 1) x ^= (u128(mod_low) << (k - w)) | (u128(1) << k);
    }
    return static_cast<u64>(x);
}

inline u64 gf2_mul_raw(u64 a, u64 b, u64 mod_low, int w) {
    return gf2_reduce(clmul(a, b), mod_low, w);
}

// Remainder of num (explicit leading bit, degree ndeg) by div (explicit
// leading bit, degree ddeg). Both fit u128/u64 for the degrees we certify.
inline u64 gf2_poly_rem(u128 num, int ndeg, u64 div, int ddeg) {
    for (int k = ndeg; k >= ddeg; --k) {
        if ((num >> k) & 1) num ^= u128(div) << (k - ddeg);
    }
    return static_cast<u64>(num);
}

inline bool gf2_irreducible(u64 mod_low, int w) {
    if (w == 1) return true;
    if ((mod_low & 1) == 0) return false;  // divisible by x
    if (w > 42) throw std::invalid_argument("gf2 modulus degree too large to certify by trial factorization");
    u128 full = (u128(1) << w) | mod_low;
    for (int k = 1; 2 * k <= w; ++k) {
        for (u64 lo = 0; lo < (1ull << k); ++lo) {
            u64 div = (1ull << k) | lo;
            if (gf2_poly_rem(full, w, div, k) == 0) return false;
        }
    }
    return true;
}

}  // namespace detail

// JSON-facing description of a field. base_degree is w for GF(2^w) and 1
// for GF(p); ext_degree M > 1 selects an extension GF(q^M) with q = p^w.
struct FieldSpec {
    u64 characteristic = 2;
    int base_degree = 1;
    int ext_degree = 1;
    std::vector<u64> base_modulus;               // degree base_degree over GF(p)
    std::vector<std::vector<u64>> ext_modulus;   // degree ext_degree over the base field

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// Canonical irreducible (primitive) polynomials over GF(2), degrees 1..16.
inline u64 gf2_default_modulus_bits(int w) {
    static constexpr u64 kTable[17] = {
        0,      0x3,    0x7,    0xB,    0x13,   0x25,   0x43,   0x89,
        0x11D,  0x211,  0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003,
        0x1100B,
    };
    if (w < 1 || w > 16) throw std::invalid_argument("no default modulus for GF(2^" + std::to_string(w) + ")");
    return kTable[w];
}

// Base layer: GF(2^w) with bit-packed polynomials, or a prime field GF(p).
class BaseField {
public:
    BaseField(u64 characteristic, int degree, std::vector<u64> modulus)
        : p_(characteristic), w_(degree), mod_coeffs_(std::move(modulus)) {
        if (!detail::is_prime_u64(p_)) throw std::invalid_argument("characteristic must be prime");
        if (w_ < 1) throw std::invalid_argument("base degree must be >= 1");
        if (p_ != 2 && w_ != 1) throw std::invalid_argument("non-binary base fields must be prime fields (degree 1)");
        if (p_ == 2) {
            if (w_ > 64) throw std::invalid_argument("GF(2^w) supported up to w = 64");
            if (mod_coeffs_.empty()) {
                mod_bits_ = gf2_default_modulus_bits(w_);
            } else {
                if ((int)mod_coeffs_.size() != w_ + 1) throw std::invalid_argument("base modulus degree mismatch");
                mod_bits_ = 0;
                for (int i = 0; i <= w_; ++i) {
                    if (mod_coeffs_[i] > 1) throw std::invalid_argument("base modulus coefficients must be in GF(2)");
                    if (mod_coeffs_[i] && i < 64) mod_bits_ |= 1ull << i;
                }
                if (!mod_coeffs_[w_]) throw std::invalid_argument("base modulus must have full degree");
            }
            mod_low_ = (w_ < 64) ? (mod_bits_ & ((1ull << w_) - 1)) : mod_bits_;
            if (!detail::gf2_irreducible(mod_low_, w_)) throw std::invalid_argument("base modulus is reducible");
            qm1_ = (w_ == 64) ? ~0ull : (1ull << w_) - 1;
        } else {
            qm1_ = p_ - 1;
            mod_low_ = 0;
            if (mod_coeffs_.empty()) mod_coeffs_ = {0, 1};  // GF(p) = GF(p)[x]/(x)
        }
        if (p_ == 2 && qm1_ > 1 && qm1_ <= 65535) build_tables();
        order_factors_ = detail::prime_factors(qm1_);
    }

    u64 characteristic() const { return p_; }
    int degree() const { return w_; }
    u64 size_minus1() const { return qm1_; }
    bool binary() const { return p_ == 2; }
    u64 modulus_bits() const { return mod_low_; }

    std::vector<u64> modulus_coeffs() const {
        if (p_ != 2) return mod_coeffs_;
        std::vector<u64> c(w_ + 1, 0);
        for (int i = 0; i < w_ && i < 64; ++i) c[i] = (mod_low_ >> i) & 1;
        c[w_] = 1;
        return c;
    }

    u64 add(u64 a, u64 b) const {
        if (p_ == 2) return a ^ b;
        u64 s = a + b;  // a, b < p <= 2^63 for odd p in practice; keep exact anyway
        if (s >= p_ || s < a) s -= p_;
        return s;
    }
    u64 sub(u64 a, u64 b) const {
        if (p_ == 2) return a ^ b;
        return a >= b ? a - b : a + (p_ - b);
    }
    u64 neg(u64 a) const { return p_ == 2 ? a : (a ? p_ - a : 0); }

    u64 mul(u64 a, u64 b) const {
        if (p_ != 2) return detail::mulmod(a, b, p_);
        if (a == 0 || b == 0) return 0;
        if (tables_) {
            u64 s = log_[a] + log_[b];
            return alog_[s];
        }
        return detail::gf2_mul_raw(a, b, mod_low_, w_);
    }

    u64 inv(u64 a) const {
        if (a == 0) throw std::invalid_argument("inverse of zero");
        if (p_ != 2) return detail::powmod(a, p_ - 2, p_);
        if (tables_) return alog_[qm1_ - log_[a]];
        // a^(2^w - 2)
        return pow(a, qm1_ - 1);
    }

    u64 pow(u64 a, u64 e) const {
        u64 r = 1, b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    const std::vector<u64>& order_prime_factors() const { return order_factors_; }

private:
    void build_tables() {
        u64 q = qm1_ + 1;
        auto factors = detail::prime_factors(qm1_);
        // generator: first element (by packed value) of order q-1
        u64 g = 0;
        for (u64 cand = 2; cand < q; ++cand) {
            bool prim = true;
            for (u64 f : factors) {
                u64 x = 1, b = cand, e = qm1_ / f;
                while (e) {
                    if (e & 1) x = detail::gf2_mul_raw(x, b, mod_low_, w_);
                    b = detail::gf2_mul_raw(b, b, mod_low_, w_);
                    e >>= 1;
                }
                if (x == 1) { prim = false; break; }
            }
            if (prim) { g = cand; break; }
        }
        if (!g) throw std::logic_error("no generator found");
        log_.assign(q, 0);
        alog_.assign(2 * qm1_, 0);
        u64 v = 1;
        for (u64 k = 0; k < qm1_; ++k) {
            alog_[k] = v;
            alog_[k + qm1_] = v;
            log_[v] = static_cast<uint32_t>(k);
            v = detail::gf2_mul_raw(v, g, mod_low_, w_);
        }
        if (v != 1) throw std::logic_error("generator order mismatch");
        tables_ = true;
    }

    u64 p_;
    int w_;
    u64 qm1_ = 0;
    u64 mod_bits_ = 0;
    u64 mod_low_ = 0;
    std::vector<u64> mod_coeffs_;
    std::vector<uint32_t> log_;
    std::vector<u64> alog_;
    bool tables_ = false;
    std::vector<u64> order_factors_;
};

namespace detail {

// Small dense polynomials over a BaseField, ascending coefficients.
// Used to certify the extension modulus and to search for one.

inline int poly_deg(std::span<const u64> c) {
    for (int i = (int)c.size() - 1; i >= 0; --i)
        if (c[i]) return i;
    return -1;
}

// remainder of num by monic div (in place on a copy)
inline std::vector<u64> poly_rem(const BaseField& bf, std::vector<u64> num, std::span<const u64> div) {
    int dd = poly_deg(div);
    u64 lead_inv = bf.inv(div[dd]);
    for (int k = (int)num.size() - 1; k >= dd; --k) {
        if (!num[k]) continue;
        u64 c = bf.mul(num[k], lead_inv);
        for (int t = 0; t <= dd; ++t) num[k - dd + t] = bf.sub(num[k - dd + t], bf.mul(c, div[t]));
    }
    num.resize(dd);
    return num;
}

// Trial factorization; divisor space must stay desk-scale.
inline bool poly_irreducible(const BaseField& bf, std::span<const u64> f) {
    int deg = poly_deg(f);
    if (deg < 1) return false;
    if (deg == 1) return true;
    if (f[0] == 0) return false;
    u64 q = bf.size_minus1() + 1;
    u128 divisors = 0;
    for (int k = 1; 2 * k <= deg; ++k) {
        u128 qq = 1;
        for (int i = 0; i < k; ++i) qq *= q;
        divisors += qq;
        if (divisors > (1u << 21)) throw std::invalid_argument("extension modulus degree too large to certify by trial factorization");
    }
    std::vector<u64> fv(f.begin(), f.end());
    std::vector<u64> div;
    for (int k = 1; 2 * k <= deg; ++k) {
        u64 count = 1;
        for (int i = 0; i < k; ++i) count *= q;
        div.assign(k + 1, 0);
        div[k] = 1;
        for (u64 idx = 0; idx < count; ++idx) {
            u64 t = idx;
            for (int i = 0; i < k; ++i) { div[i] = t % q; t /= q; }
            auto rem = poly_rem(bf, fv, div);
            if (poly_deg(rem) < 0) return false;
        }
    }
    return true;
}

inline std::vector<u64> find_irreducible(const BaseField& bf, int deg) {
    u64 q = bf.size_minus1() + 1;
    std::vector<u64> f(deg + 1, 0);
    f[deg] = 1;
    u128 limit = 1;
    for (int i = 0; i < deg; ++i) {
        limit *= q;
        if (limit > (u128(1) << 40)) { limit = u128(1) << 40; break; }
    }
    for (u128 idx = 1; idx < limit; ++idx) {
        u128 t = idx;
        for (int i = 0; i < deg; ++i) { f[i] = static_cast<u64>(t % q); t /= q; }
        if (f[0] == 0) continue;
        if (poly_irreducible(bf, f)) return f;
    }
    throw std::runtime_error("no irreducible extension modulus found");
}

}  // namespace detail

/// A concrete finite field. Immutable after construction and shareable
/// across threads; every operation is a pure function on packed values.
class Field {
public:
    explicit Field(FieldSpec spec) : base_(spec.characteristic, spec.base_degree, spec.base_modulus), m_(spec.ext_degree) {
        if (m_ < 1) throw std::invalid_argument("ext_degree must be >= 1");
        u64 q = base_.size_minus1() + 1;  // wraps to 0 only for GF(2^64), handled below
        if (m_ > 1) {
            if (base_.size_minus1() == ~0ull) throw std::invalid_argument("extension over GF(2^64) exceeds the 64-bit element limit");
            u128 total = 1;
            for (int i = 0; i < m_; ++i) {
                total *= q;
                if (total > (u128(1) << 64)) throw std::invalid_argument("field size exceeds 2^64; not desk scale");
            }
            qm1_ = static_cast<u64>(total - 1);
            if (spec.ext_modulus.empty()) {
                ext_mod_ = detail::find_irreducible(base_, m_);
            } else {
                if ((int)spec.ext_modulus.size() != m_ + 1) throw std::invalid_argument("ext modulus degree mismatch");
                ext_mod_.resize(m_ + 1);
                for (int i = 0; i <= m_; ++i) ext_mod_[i] = pack_base_coeffs(spec.ext_modulus[i]);
                if (ext_mod_[m_] == 0) throw std::invalid_argument("ext modulus must have full degree");
                if (ext_mod_[m_] != 1) {  // normalize monic
                    u64 li = base_.inv(ext_mod_[m_]);
                    for (auto& c : ext_mod_) c = base_.mul(c, li);
                }
                if (!detail::poly_irreducible(base_, ext_mod_)) throw std::invalid_argument("ext modulus is reducible");
            }
        } else {
            qm1_ = base_.size_minus1();
        }
        spec_ = canonical_spec(spec);
        order_factors_ = detail::prime_factors(qm1_);
        if (base_.characteristic() == 2) {
            data_bits_ = base_.degree() * m_;
        } else {
            data_bits_ = 0;
            u128 v = 1;
            while (v * 2 <= u128(qm1_) + 1) { v *= 2; ++data_bits_; }
        }
    }

    static std::shared_ptr<const Field> make(FieldSpec spec) { return std::make_shared<const Field>(std::move(spec)); }
    static std::shared_ptr<const Field> gf2w(int w) { return make(FieldSpec{2, w, 1, {}, {}}); }
    static std::shared_ptr<const Field> prime(u64 p) { return make(FieldSpec{p, 1, 1, {}, {}}); }
    // GF(q^M) over GF(2^w) or GF(p); modulus found deterministically when absent
    static std::shared_ptr<const Field> extension(u64 characteristic, int base_degree, int ext_degree) {
        return make(FieldSpec{characteristic, base_degree, ext_degree, {}, {}});
    }

    const FieldSpec& spec() const { return spec_; }
    const BaseField& base() const { return base_; }
    u64 characteristic() const { return base_.characteristic(); }
    int base_degree() const { return base_.degree(); }
    int ext_degree() const { return m_; }
    u64 size_minus1() const { return qm1_; }
    u64 base_size() const { return base_.size_minus1() + 1; }
    bool contains(u64 v) const { return v <= qm1_; }

    u64 zero() const { return 0; }
    u64 one() const { return 1; }

    u64 add(u64 a, u64 b) const {
        if (base_.characteristic() == 2) return a ^ b;
        if (m_ == 1) return base_.add(a, b);
        std::array<u64, 64> x{}, y{};
        unpack(a, x);
        unpack(b, y);
        for (int i = 0; i < m_; ++i) x[i] = base_.add(x[i], y[i]);
        return pack(x);
    }

    u64 sub(u64 a, u64 b) const {
        if (base_.characteristic() == 2) return a ^ b;
        if (m_ == 1) return base_.sub(a, b);
        std::array<u64, 64> x{}, y{};
        unpack(a, x);
        unpack(b, y);
        for (int i = 0; i < m_; ++i) x[i] = base_.sub(x[i], y[i]);
        return pack(x);
    }

    u64 neg(u64 a) const { return sub(0, a); }

    u64 mul(u64 a, u64 b) const {
        if (m_ == 1) return base_.mul(a, b);
        if (a == 0 || b == 0) return 0;
        std::array<u64, 64> x{}, y{};
        std::array<u64, 127> prod{};
        unpack(a, x);
        unpack(b, y);
        for (int i = 0; i < m_; ++i) {
            if (!x[i]) continue;
            for (int j = 0; j < m_; ++j) {
                if (!y[j]) continue;
                prod[i + j] = base_.add(prod[i + j], base_.mul(x[i], y[j]));
            }
        }
        // fold by the monic modulus
        for (int k = 2 * m_ - 2; k >= m_; --k) {
            u64 c = prod[k];
            if (!c) continue;
            prod[k] = 0;
            for (int t = 0; t < m_; ++t) prod[k - m_ + t] = base_.sub(prod[k - m_ + t], base_.mul(c, ext_mod_[t]));
        }
        std::array<u64, 64> low{};
        for (int i = 0; i < m_; ++i) low[i] = prod[i];
        return pack(low);
    }

    u64 inv(u64 a) const {
        if (a == 0) throw std::invalid_argument("inverse of zero");
        if (m_ == 1) return base_.inv(a);
        return pow(a, qm1_ - 1);  // a^(|F|-2)
    }

    u64 pow(u64 a, u64 e) const {
        u64 r = 1, b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    // a^(q^j) with q the base field size; an automorphism fixing the base.
    u64 frobenius(u64 a, u64 j) const {
        if (m_ == 1) return a;
        j %= static_cast<u64>(m_);
        u64 q = base_.size_minus1() + 1;
        u64 r = a;
        for (u64 k = 0; k < j; ++k) r = pow(r, q);
        return r;
    }

    // Smallest t >= 1 with a^t = 1; divides |F|-1.
    u64 element_order(u64 a) const {
        if (a == 0) throw std::invalid_argument("order of zero");
        u64 t = qm1_;
        for (u64 f : order_factors_) {
            while (t % f == 0 && pow(a, t / f) == 1) t /= f;
        }
        return t;
    }

    bool is_primitive(u64 a) const {
        if (a == 0) return false;
        for (u64 f : order_factors_) {
            if (pow(a, qm1_ / f) == 1) return false;
        }
        return true;
    }

    // Deterministic scan for a primitive element (order |F|-1 >= t).
    u64 find_element_of_order_at_least(u64 t) const {
        if (t > qm1_) throw std::invalid_argument("no element of order >= " + std::to_string(t) + " in a field of size " + std::to_string(qm1_) + "+1");
        for (u64 v = 2; v <= qm1_; ++v) {
            if (is_primitive(v)) return v;
        }
        if (qm1_ == 1 && t <= 1) return 1;  // GF(2)
        throw std::logic_error("no primitive element found");
    }

    // Coordinates w.r.t. the polynomial basis {1, y, ..., y^(M-1)}.
    std::vector<u64> expand_to_base(u64 a) const {
        std::array<u64, 64> x{};
        unpack(a, x);
        return std::vector<u64>(x.begin(), x.begin() + m_);
    }

    u64 pack_from_base(std::span<const u64> coeffs) const {
        if ((int)coeffs.size() != m_) throw std::invalid_argument("coefficient count mismatch");
        std::array<u64, 64> x{};
        for (int i = 0; i < m_; ++i) {
            if (coeffs[i] > base_.size_minus1()) throw std::invalid_argument("coefficient outside base field");
            x[i] = coeffs[i];
        }
        return pack(x);
    }

    // Rank over the base field of the expanded coordinate vectors.
    int rank_over_base(std::span<const u64> elems) const {
        std::vector<std::array<u64, 64>> rows(elems.size());
        for (size_t i = 0; i < elems.size(); ++i) unpack(elems[i], rows[i]);
        int rank = 0;
        for (int col = 0; col < m_ && rank < (int)rows.size(); ++col) {
            int pivot = -1;
            for (int r = rank; r < (int)rows.size(); ++r) {
                if (rows[r][col]) { pivot = r; break; }
            }
            if (pivot < 0) continue;
            std::swap(rows[rank], rows[pivot]);
            u64 pi = base_.inv(rows[rank][col]);
            for (int c = col; c < m_; ++c) rows[rank][c] = base_.mul(rows[rank][c], pi);
            for (int r = 0; r < (int)rows.size(); ++r) {
                if (r == rank || !rows[r][col]) continue;
                u64 f = rows[r][col];
                for (int c = col; c < m_; ++c) rows[r][c] = base_.sub(rows[r][c], base_.mul(f, rows[rank][c]));
            }
            ++rank;
        }
        return rank;
    }

    // Injection of a base-field value; packed representations coincide.
    u64 embed_base(u64 v) const {
        if (v > base_.size_minus1()) throw std::invalid_argument("value outside base field");
        return v;
    }

    // ---- fixed-width little-endian element bytes ----

    int element_bytes() const { return (std::bit_width(qm1_) + 7) / 8; }
    int data_bits_per_symbol() const { return data_bits_; }

    void to_bytes(u64 v, std::span<uint8_t> out) const {
        for (int i = 0; i < element_bytes(); ++i) out[i] = static_cast<uint8_t>(v >> (8 * i));
    }
    u64 from_bytes(std::span<const uint8_t> in) const {
        u64 v = 0;
        for (int i = 0; i < element_bytes(); ++i) v |= u64(in[i]) << (8 * i);
        if (v > qm1_) throw std::runtime_error("serialized element outside field");
        return v;
    }

    bool same(const Field& other) const { return spec_ == other.spec_; }

private:
    u64 pack_base_coeffs(const std::vector<u64>& coeffs) const {
        // a base element given as a coefficient list over GF(p)
        if (base_.characteristic() == 2) {
            u64 v = 0;
            if ((int)coeffs.size() > base_.degree()) throw std::invalid_argument("base element coefficient list too long");
            for (size_t i = 0; i < coeffs.size(); ++i) {
                if (coeffs[i] > 1) throw std::invalid_argument("coefficient must be in GF(2)");
                if (coeffs[i]) v |= 1ull << i;
            }
            return v;
        }
        if (coeffs.size() > 1) throw std::invalid_argument("prime base elements take a single coefficient");
        u64 v = coeffs.empty() ? 0 : coeffs[0];
        if (v > base_.size_minus1()) throw std::invalid_argument("coefficient outside prime field");
        return v;
    }

    std::vector<u64> unpack_base_coeffs(u64 v) const {
        if (base_.characteristic() == 2) {
            std::vector<u64> c(base_.degree(), 0);
            for (int i = 0; i < base_.degree(); ++i) c[i] = (v >> i) & 1;
            return c;
        }
        return {v};
    }

    FieldSpec canonical_spec(const FieldSpec& in) const {
        FieldSpec s;
        s.characteristic = in.characteristic;
        s.base_degree = base_.degree();
        s.ext_degree = m_;
        s.base_modulus = base_.modulus_coeffs();
        if (m_ > 1) {
            s.ext_modulus.resize(m_ + 1);
            for (int i = 0; i <= m_; ++i) s.ext_modulus[i] = unpack_base_coeffs(ext_mod_[i]);
        }
        return s;
    }

    void unpack(u64 v, std::array<u64, 64>& out) const {
        if (base_.characteristic() == 2) {
            int w = base_.degree();
            u64 mask = (w == 64) ? ~0ull : (1ull << w) - 1;
            for (int i = 0; i < m_; ++i) out[i] = (v >> (w * i)) & mask;
        } else {
            u64 p = base_.characteristic();
            for (int i = 0; i < m_; ++i) { out[i] = v % p; v /= p; }
        }
    }

    u64 pack(const std::array<u64, 64>& c) const {
        if (base_.characteristic() == 2) {
            int w = base_.degree();
            u64 v = 0;
            for (int i = 0; i < m_; ++i) v |= c[i] << (w * i);
            return v;
        }
        u64 p = base_.characteristic(), v = 0;
        for (int i = m_ - 1; i >= 0; --i) v = v * p + c[i];
        return v;
    }

    BaseField base_;
    int m_;
    u64 qm1_;
    std::vector<u64> ext_mod_;
    FieldSpec spec_;
    std::vector<u64> order_factors_;
    int data_bits_ = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

}  // namespace pmds
