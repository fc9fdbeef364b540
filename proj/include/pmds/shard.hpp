// Shard file format (version 1) and the byte <-> symbol packing used by
// the CLI. Headers are self-describing: everything needed to rebuild the
// code and decode is in the shard directory.
//
// Layout, all integers little-endian:
//   "PMDS" magic, version u8 = 1, construction u8, alpha_mode u8, pad u8,
//   mu u32, n u32, r u32, s u32, d u32, stride_or_ext u32 (N or M),
//   node u32, ell u32, payload_bytes u32, data_length u64,
//   field spec: characteristic u32, base_degree u32, ext_degree u32,
//     base_modulus (base_degree+1) x u32,
//     ext_modulus (ext_degree+1) x u32 packed base elements, only when
//     ext_degree > 1 (packed values require q <= 2^32).
//   payload: ell * stripes elements, element_bytes() each, little-endian.
//
// Data packing: symbols carry floor(log2 |F|) payload bits each, filled
// little-endian from the byte stream [len u64 LE | data | zero pad].

#pragma once

#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "pmds/codec.hpp"

namespace pmds {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- bit-level packing ----

inline u64 read_bits(const std::vector<uint8_t>& buf, size_t bitpos, int nbits) {
    size_t byte = bitpos >> 3;
    int shift = int(bitpos & 7);
    u128 acc = 0;
    for (int i = 0; i < 9; ++i) {
        uint8_t b = byte + i < buf.size() ? buf[byte + i] : 0;
        acc |= u128(b) << (8 * i);
    }
    acc >>= shift;
    u64 mask = nbits >= 64 ? ~0ull : (1ull << nbits) - 1;
    return static_cast<u64>(acc) & mask;
}

inline void write_bits(std::vector<uint8_t>& buf, size_t bitpos, int nbits, u64 v) {
    size_t need = (bitpos + nbits + 7) / 8;
    if (buf.size() < need) buf.resize(need, 0);
    size_t byte = bitpos >> 3;
    int shift = int(bitpos & 7);
    u128 acc = u128(v) << shift;
    for (int i = 0; i < 9 && byte + i < buf.size(); ++i) buf[byte + i] |= uint8_t(acc >> (8 * i));
}

inline std::vector<u64> pack_symbols(const Field& f, const std::vector<uint8_t>& bytes, size_t symbol_count) {
    const int db = f.data_bits_per_symbol();
    std::vector<u64> out(symbol_count);
    for (size_t k = 0; k < symbol_count; ++k) out[k] = read_bits(bytes, k * size_t(db), db);
    return out;
}

inline std::vector<uint8_t> unpack_symbols(const Field& f, std::span<const u64> symbols, size_t byte_count) {
    const int db = f.data_bits_per_symbol();
    std::vector<uint8_t> out((symbols.size() * size_t(db) + 7) / 8, 0);
    for (size_t k = 0; k < symbols.size(); ++k) write_bits(out, k * size_t(db), db, symbols[k]);
    out.resize(byte_count, 0);
    return out;
}

// ---- header ----

enum class ConstructionId : uint8_t { s2_pmds = 1, s2_sd = 2, general_pmds = 3 };

inline const char* to_string(ConstructionId c) {
    switch (c) {
        case ConstructionId::s2_pmds: return "s2-pmds";
        case ConstructionId::s2_sd: return "s2-sd";
        default: return "general-pmds";
    }
}

struct ShardHeader {
    ConstructionId construction = ConstructionId::s2_pmds;
    uint8_t alpha_mode = 0;  // 0 none, 1 basis, 2 bch
    uint32_t mu = 0, n = 0, r = 0, s = 0, d = 0;
    uint32_t stride_or_ext = 0;  // N for s2, M for general
    uint32_t node = 0;
    uint32_t ell = 0;
    uint32_t payload_bytes = 0;
    u64 data_length = 0;
    FieldSpec field;
};

namespace detail {

inline void put_u32(std::vector<uint8_t>& v, uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(uint8_t(x >> (8 * i)));
}
inline void put_u64(std::vector<uint8_t>& v, u64 x) {
    for (int i = 0; i < 8; ++i) v.push_back(uint8_t(x >> (8 * i)));
}

struct ByteReader {
    const std::vector<uint8_t>& v;
    size_t pos = 0;
    uint8_t u8() {
        if (pos + 1 > v.size()) throw IoError("truncated shard header");
        return v[pos++];
    }
    uint32_t u32() {
        if (pos + 4 > v.size()) throw IoError("truncated shard header");
        uint32_t x = 0;
        for (int i = 0; i < 4; ++i) x |= uint32_t(v[pos + i]) << (8 * i);
        pos += 4;
        return x;
    }
    u64 u64v() {
        if (pos + 8 > v.size()) throw IoError("truncated shard header");
        u64 x = 0;
        for (int i = 0; i < 8; ++i) x |= u64(v[pos + i]) << (8 * i);
        pos += 8;
        return x;
    }
};

}  // namespace detail

inline std::vector<uint8_t> serialize_header(const ShardHeader& h) {
    std::vector<uint8_t> v;
    v.insert(v.end(), {'P', 'M', 'D', 'S'});
    v.push_back(1);  // version
    v.push_back(uint8_t(h.construction));
    v.push_back(h.alpha_mode);
    v.push_back(0);
    detail::put_u32(v, h.mu);
    detail::put_u32(v, h.n);
    detail::put_u32(v, h.r);
    detail::put_u32(v, h.s);
    detail::put_u32(v, h.d);
    detail::put_u32(v, h.stride_or_ext);
    detail::put_u32(v, h.node);
    detail::put_u32(v, h.ell);
    detail::put_u32(v, h.payload_bytes);
    detail::put_u64(v, h.data_length);
    if (h.field.characteristic > 0xFFFFFFFFull) throw IoError("shard header restricts the characteristic to 32 bits");
    detail::put_u32(v, uint32_t(h.field.characteristic));
    detail::put_u32(v, uint32_t(h.field.base_degree));
    detail::put_u32(v, uint32_t(h.field.ext_degree));
    if ((int)h.field.base_modulus.size() != h.field.base_degree + 1) throw IoError("bad base modulus in header");
    for (u64 c : h.field.base_modulus) detail::put_u32(v, uint32_t(c));
    if (h.field.ext_degree > 1) {
        if ((int)h.field.ext_modulus.size() != h.field.ext_degree + 1) throw IoError("bad ext modulus in header");
        for (const auto& coeff : h.field.ext_modulus) {
            // pack the base element; headers cap the base field at 2^32
            u64 packed = 0;
            if (h.field.characteristic == 2) {
                for (size_t i = 0; i < coeff.size(); ++i)
                    if (coeff[i]) packed |= 1ull << i;
            } else {
                packed = coeff.empty() ? 0 : coeff[0];
            }
            if (packed > 0xFFFFFFFFull) throw IoError("shard header restricts base elements to 32 bits");
            detail::put_u32(v, uint32_t(packed));
        }
    }
    return v;
}

inline ShardHeader parse_header(const std::vector<uint8_t>& bytes, size_t* header_size = nullptr) {
    detail::ByteReader rd{bytes};
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "PMDS", 4) != 0) throw IoError("bad shard magic");
    rd.pos = 4;
    if (rd.u8() != 1) throw IoError("unsupported shard version");
    ShardHeader h;
    uint8_t cid = rd.u8();
    if (cid < 1 || cid > 3) throw IoError("unknown construction id");
    h.construction = ConstructionId(cid);
    h.alpha_mode = rd.u8();
    rd.u8();
    h.mu = rd.u32();
    h.n = rd.u32();
    h.r = rd.u32();
    h.s = rd.u32();
    h.d = rd.u32();
    h.stride_or_ext = rd.u32();
    h.node = rd.u32();
    h.ell = rd.u32();
    h.payload_bytes = rd.u32();
    h.data_length = rd.u64v();
    h.field.characteristic = rd.u32();
    h.field.base_degree = int(rd.u32());
    h.field.ext_degree = int(rd.u32());
    if (h.field.base_degree < 1 || h.field.base_degree > 64 || h.field.ext_degree < 1 || h.field.ext_degree > 64)
        throw IoError("implausible field degrees in header");
    h.field.base_modulus.resize(h.field.base_degree + 1);
    for (auto& c : h.field.base_modulus) c = rd.u32();
    if (h.field.ext_degree > 1) {
        h.field.ext_modulus.resize(h.field.ext_degree + 1);
        for (auto& coeff : h.field.ext_modulus) {
            u64 packed = rd.u32();
            if (h.field.characteristic == 2) {
                coeff.assign(h.field.base_degree, 0);
                for (int i = 0; i < h.field.base_degree; ++i) coeff[i] = (packed >> i) & 1;
            } else {
                coeff = {packed};
            }
        }
    }
    if (header_size) *header_size = rd.pos;
    return h;
}

// ---- stream framing ----

struct EncodedShards {
    std::vector<std::vector<u64>> node_payload;  // one column stream per node
    i64 stripes = 0;
    u64 data_length = 0;
};

template <ArrayCode C>
EncodedShards encode_stream(const C& code, const SystematicLayout& lay, const std::vector<uint8_t>& input) {
    const Field& f = code.field();
    const i64 ell = code.rows();
    const int k = (int)lay.info.size();
    const int cols = code.groups() * code.group_size();
    const int db = f.data_bits_per_symbol();

    std::vector<uint8_t> stream;
    stream.reserve(input.size() + 8);
    detail::put_u64(stream, input.size());
    stream.insert(stream.end(), input.begin(), input.end());

    const u64 stream_bits = u64(stream.size()) * 8;
    const i64 stripe_syms = i64(k) * ell;
    i64 nsym = i64((stream_bits + db - 1) / db);
    i64 stripes = std::max<i64>(1, (nsym + stripe_syms - 1) / stripe_syms);
    auto symbols = pack_symbols(f, stream, size_t(stripes * stripe_syms));

    EncodedShards out;
    out.stripes = stripes;
    out.data_length = input.size();
    out.node_payload.assign(cols, {});
    for (auto& p : out.node_payload) p.reserve(size_t(stripes) * ell);

    std::vector<std::vector<u64>> data(k, std::vector<u64>(ell));
    for (i64 t = 0; t < stripes; ++t) {
        const u64* base = symbols.data() + t * stripe_syms;
        for (int ki = 0; ki < k; ++ki)
            for (i64 a = 0; a < ell; ++a) data[ki][a] = base[i64(ki) * ell + a];  // column-major fill
        CodewordArray cw = encode_systematic(code, lay, data);
        for (int c = 0; c < cols; ++c)
            for (i64 a = 0; a < ell; ++a) out.node_payload[c].push_back(cw.at(a, c));
    }
    return out;
}

// node_payload[c] empty = node missing. Missing nodes are decoded per
// stripe; info symbols unpack back to bytes and the length prefix must
// agree with the header's data length.
template <ArrayCode C>
std::vector<uint8_t> decode_stream(const C& code, const SystematicLayout& lay,
                                   const std::vector<std::vector<u64>>& node_payload, u64 data_length) {
    const Field& f = code.field();
    const i64 ell = code.rows();
    const int cols = code.groups() * code.group_size();
    const int k = (int)lay.info.size();
    if ((int)node_payload.size() != cols) throw std::invalid_argument("node payload count mismatch");

    std::vector<int> missing;
    i64 stripes = -1;
    for (int c = 0; c < cols; ++c) {
        if (node_payload[c].empty()) {
            missing.push_back(c);
            continue;
        }
        if ((i64)node_payload[c].size() % ell != 0) throw IoError("payload length not a stripe multiple");
        i64 st = (i64)node_payload[c].size() / ell;
        if (stripes >= 0 && st != stripes) throw IoError("inconsistent stripe counts across shards");
        stripes = st;
    }
    if (stripes < 0) throw IoError("no shards available");

    auto pattern = ErasurePattern::classify(missing, code.groups(), code.group_size(),
                                            code.local_parities(), code.global_parities());

    std::vector<u64> symbols;
    symbols.reserve(size_t(stripes) * k * ell);
    for (i64 t = 0; t < stripes; ++t) {
        CodewordArray arr(ell, cols);
        for (int c = 0; c < cols; ++c) {
            if (node_payload[c].empty()) continue;
            for (i64 a = 0; a < ell; ++a) arr.at(a, c) = node_payload[c][t * ell + a];
        }
        CodewordArray full = std::move(arr);
        if (!missing.empty()) {
            auto dec = decode_erasures(code, std::move(full), pattern);
            if (dec.status != DecodeStatus::ok) throw std::runtime_error("erasure pattern is not correctable");
            full = std::move(dec.array);
        }
        for (int ki = 0; ki < k; ++ki)
            for (i64 a = 0; a < ell; ++a) symbols.push_back(full.at(a, lay.info[ki]));
    }

    auto bytes = unpack_symbols(f, symbols, size_t(8 + data_length));
    u64 prefix = 0;
    for (int i = 0; i < 8; ++i) prefix |= u64(bytes[i]) << (8 * i);
    if (prefix != data_length) throw IoError("length prefix disagrees with shard header");
    return std::vector<uint8_t>(bytes.begin() + 8, bytes.end());
}

// Regenerate a single node's payload. Stats accumulate across stripes.
struct StreamRepair {
    std::vector<u64> payload;
    i64 downloaded = 0;
    i64 naive = 0;
    bool regenerated = true;
};

template <ArrayCode C>
StreamRepair repair_stream(const C& code, const std::vector<std::vector<u64>>& node_payload, int node) {
    const i64 ell = code.rows();
    const int cols = code.groups() * code.group_size();
    std::vector<int> missing;
    i64 stripes = -1;
    for (int c = 0; c < cols; ++c) {
        if (node_payload[c].empty()) {
            missing.push_back(c);
        } else {
            stripes = (i64)node_payload[c].size() / ell;
        }
    }
    if (stripes < 0) throw IoError("no shards available");
    auto pattern = ErasurePattern::classify(missing, code.groups(), code.group_size(),
                                            code.local_parities(), code.global_parities());
    StreamRepair out;
    out.payload.reserve(size_t(stripes) * ell);
    for (i64 t = 0; t < stripes; ++t) {
        CodewordArray arr(ell, cols);
        for (int c = 0; c < cols; ++c) {
            if (node_payload[c].empty()) continue;
            for (i64 a = 0; a < ell; ++a) arr.at(a, c) = node_payload[c][t * ell + a];
        }
        auto rep = repair_single(code, arr, pattern, node);
        out.payload.insert(out.payload.end(), rep.column.begin(), rep.column.end());
        out.downloaded += rep.downloaded;
        out.naive += rep.naive;
        out.regenerated = out.regenerated && rep.regenerated;
    }
    return out;
}

// ---- file helpers ----

inline void write_file(const std::filesystem::path& p, const std::vector<uint8_t>& bytes) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open for writing: " + p.string());
    os.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!os) throw IoError("write failed: " + p.string());
}

inline std::vector<uint8_t> read_file(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary | std::ios::ate);
    if (!is) throw IoError("cannot open: " + p.string());
    auto size = is.tellg();
    is.seekg(0);
    std::vector<uint8_t> bytes(static_cast<size_t>(size), 0);
    is.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!is) throw IoError("read failed: " + p.string());
    return bytes;
}

inline std::string shard_file_name(int node) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "node_%03d.shard", node);
    return buf;
}

inline std::vector<uint8_t> payload_to_bytes(const Field& f, std::span<const u64> payload) {
    const int eb = f.element_bytes();
    std::vector<uint8_t> out(payload.size() * size_t(eb));
    for (size_t i = 0; i < payload.size(); ++i) f.to_bytes(payload[i], {out.data() + i * eb, size_t(eb)});
    return out;
}

inline std::vector<u64> payload_from_bytes(const Field& f, std::span<const uint8_t> bytes) {
    const int eb = f.element_bytes();
    if (bytes.size() % eb != 0) throw IoError("payload size is not a whole number of elements");
    std::vector<u64> out(bytes.size() / eb);
    for (size_t i = 0; i < out.size(); ++i) out[i] = f.from_bytes({bytes.data() + i * eb, size_t(eb)});
    return out;
}

}  // namespace pmds
