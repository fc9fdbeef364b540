// JSON interfaces: field specs, code configuration, resolved parameter
// files, and verification reports. Also the automatic field selection used
// by gen-params.

#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "pmds/construction_general.hpp"
#include "pmds/construction_s2.hpp"
#include "pmds/shard.hpp"
#include "pmds/verifier.hpp"

namespace pmds {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// {characteristic, base_degree, ext_degree, base_modulus: [ints],
//  ext_modulus: [[ints]]}; ext_modulus only for extensions.
inline json field_spec_to_json(const FieldSpec& s) {
    json j{{"characteristic", s.characteristic},
           {"base_degree", s.base_degree},
           {"ext_degree", s.ext_degree},
           {"base_modulus", s.base_modulus}};
    if (s.ext_degree > 1) j["ext_modulus"] = s.ext_modulus;
    return j;
}

inline FieldSpec field_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("field spec must be an object");
    FieldSpec s;
    try {
        s.characteristic = j.at("characteristic").get<u64>();
        s.base_degree = j.at("base_degree").get<int>();
        s.ext_degree = j.value("ext_degree", 1);
        if (j.contains("base_modulus")) s.base_modulus = j.at("base_modulus").get<std::vector<u64>>();
        if (j.contains("ext_modulus")) s.ext_modulus = j.at("ext_modulus").get<std::vector<std::vector<u64>>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad field spec: ") + e.what());
    }
    return s;
}

struct CodeConfig {
    std::string construction;  // "s2-pmds" | "s2-sd" | "general-pmds"
    int mu = 0, n = 0, r = 0, s = 2, d = 0;
    std::string alpha_mode = "auto";  // general only: "auto" | "basis" | "bch"
    std::optional<FieldSpec> field;
};

inline CodeConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    CodeConfig c;
    try {
        c.construction = j.at("construction").get<std::string>();
        c.mu = j.at("mu").get<int>();
        c.n = j.at("n").get<int>();
        c.r = j.at("r").get<int>();
        c.d = j.at("d").get<int>();
        c.s = j.value("s", 2);
        c.alpha_mode = j.value("alpha_mode", std::string("auto"));
        if (j.contains("field")) c.field = field_spec_from_json(j.at("field"));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    if (c.construction != "s2-pmds" && c.construction != "s2-sd" && c.construction != "general-pmds")
        throw ConfigError("construction must be one of s2-pmds, s2-sd, general-pmds");
    if (c.mu < 1 || c.n < 1 || c.r < 1 || c.r > c.n) throw ConfigError("need mu >= 1 and 1 <= r <= n");
    if (c.d < c.n - c.r || c.d > c.n - 1) throw ConfigError("need n-r <= d <= n-1");
    if (c.construction.starts_with("s2") && c.s != 2) throw ConfigError("s2 constructions fix s = 2");
    if (c.s < 1 || c.s > (c.n - c.r) * c.mu) throw ConfigError("need 1 <= s <= (n-r)*mu");
    if (c.alpha_mode != "auto" && c.alpha_mode != "basis" && c.alpha_mode != "bch")
        throw ConfigError("alpha_mode must be auto, basis, or bch");
    return c;
}

// Smallest GF(2^w) containing an element of the required order.
inline FieldPtr smallest_gf2w_with_order(u64 need) {
    for (int w = 1; w <= 63; ++w) {
        u64 qm1 = (1ull << w) - 1;
        if (qm1 >= need) return Field::gf2w(w);
    }
    throw ConfigError("required element order exceeds desk-scale binary fields");
}

// Smallest representable prime power >= lo: a power of two or a prime.
inline FieldPtr smallest_base_field_at_least(u64 lo) {
    for (u64 q = std::max<u64>(lo, 2);; ++q) {
        if ((q & (q - 1)) == 0) {
            int w = std::countr_zero(q);
            if (w > 63) break;
            return Field::gf2w(w);
        }
        if (detail::is_prime_u64(q)) return Field::prime(q);
    }
    throw ConfigError("no admissible base field at desk scale");
}

struct BuiltCode {
    std::variant<S2Code, GeneralCode> code;
    SystematicLayout layout;

    template <typename F>
    decltype(auto) visit(F&& fn) const {
        return std::visit(std::forward<F>(fn), code);
    }
    int total_nodes() const {
        return visit([](const auto& c) { return c.groups() * c.group_size(); });
    }
    i64 rows() const {
        return visit([](const auto& c) { return c.rows(); });
    }
};

inline BuiltCode build_from_config(const CodeConfig& c, const GeneralOptions& gopt_in = {}) {
    const int b = c.d + 1 - c.n + c.r;
    if (c.construction == "s2-pmds" || c.construction == "s2-sd") {
        bool pmds = c.construction == "s2-pmds";
        i64 N = pmds ? (i64(c.r) + 1) * (i64(c.r) * c.n - 1 - c.r) + 1 : i64(c.r) * c.n;
        u64 need = std::max<u64>(u64(c.mu) * u64(N), u64(b) * c.n);
        FieldPtr f = c.field ? Field::make(*c.field) : smallest_gf2w_with_order(need);
        S2Code code = pmds ? construct_pmds_s2(c.mu, c.n, c.r, c.d, f) : construct_sd_s2(c.mu, c.n, c.r, c.d, f);
        auto layout = SystematicLayout::make(c.mu, c.n, c.r, 2);
        return BuiltCode{std::move(code), std::move(layout)};
    }
    GeneralOptions gopt = gopt_in;
    if (c.alpha_mode == "basis") gopt.mode = AlphaMode::basis;
    else if (c.alpha_mode == "bch") gopt.mode = AlphaMode::bch;
    else gopt.mode = (c.s * (c.r + 1) < c.mu * c.n) ? AlphaMode::bch : AlphaMode::basis;
    FieldPtr fq = c.field ? Field::make(*c.field) : smallest_base_field_at_least(u64(b) * c.n);
    GeneralCode code = construct_general_pmds(c.mu, c.n, c.r, c.s, c.d, std::move(fq), gopt);
    auto layout = SystematicLayout::make(c.mu, c.n, c.r, c.s);
    return BuiltCode{std::move(code), std::move(layout)};
}

inline json field_size_report_to_json(const FieldSizeReport& r) {
    json j{{"q", r.q},
           {"M", r.M},
           {"achieved_field_size", r.achieved},
           {"ell", r.ell},
           {"ell_expected", r.ell_expected},
           {"ell_ok", r.ell_ok},
           {"achieved_le_bound", r.achieved_le_bound}};
    if (r.bound_overflow) j["design_bound"] = "overflow";
    else j["design_bound"] = r.design_bound;
    return j;
}

inline json params_to_json(const BuiltCode& built, const CodeConfig& cfg) {
    json j;
    j["construction"] = cfg.construction;
    j["mu"] = cfg.mu;
    j["n"] = cfg.n;
    j["r"] = cfg.r;
    j["s"] = cfg.s;
    j["d"] = cfg.d;
    built.visit([&](const auto& code) {
        using T = std::decay_t<decltype(code)>;
        j["ell"] = code.rows();
        j["field"] = field_spec_to_json(code.field().spec());
        if constexpr (std::is_same_v<T, S2Code>) {
            j["N"] = code.stride();
            j["beta"] = code.beta();
        } else {
            j["M"] = code.ext_degree();
            j["alpha_mode"] = code.recipe().mode == AlphaMode::basis ? "basis" : "bch";
            j["alphas"] = code.alphas();
            j["independence_subsets_checked"] = code.certificate().subsets_checked;
            j["field_size_report"] = field_size_report_to_json(field_size_report(code));
        }
    });
    return j;
}

// Rebuild a code from a parameter file; recomputes everything and
// cross-checks the stored derived values.
inline BuiltCode build_from_params_json(const json& j) {
    CodeConfig cfg;
    try {
        cfg.construction = j.at("construction").get<std::string>();
        cfg.mu = j.at("mu").get<int>();
        cfg.n = j.at("n").get<int>();
        cfg.r = j.at("r").get<int>();
        cfg.s = j.at("s").get<int>();
        cfg.d = j.at("d").get<int>();
        if (j.contains("alpha_mode")) cfg.alpha_mode = j.at("alpha_mode").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad params file: ") + e.what());
    }
    FieldSpec fs = field_spec_from_json(j.at("field"));
    if (cfg.construction == "general-pmds") {
        // params carry the codeword field GF(q^M); the builder wants GF(q)
        cfg.field = FieldSpec{fs.characteristic, fs.base_degree, 1, fs.base_modulus, {}};
    } else {
        cfg.field = fs;
    }
    auto built = build_from_config(cfg);
    if (j.contains("beta")) {
        built.visit([&](const auto& code) {
            if constexpr (std::is_same_v<std::decay_t<decltype(code)>, S2Code>) {
                if (code.beta() != j.at("beta").get<u64>()) throw ConfigError("params file beta does not reproduce");
            }
        });
    }
    if (j.contains("alphas")) {
        built.visit([&](const auto& code) {
            if constexpr (std::is_same_v<std::decay_t<decltype(code)>, GeneralCode>) {
                if (code.alphas() != j.at("alphas").get<std::vector<u64>>())
                    throw ConfigError("params file alphas do not reproduce");
            }
        });
    }
    return built;
}

inline ShardHeader make_header(const BuiltCode& built, const CodeConfig& cfg, int node, u64 payload_bytes, u64 data_length) {
    ShardHeader h;
    if (cfg.construction == "s2-pmds") h.construction = ConstructionId::s2_pmds;
    else if (cfg.construction == "s2-sd") h.construction = ConstructionId::s2_sd;
    else h.construction = ConstructionId::general_pmds;
    h.mu = cfg.mu;
    h.n = cfg.n;
    h.r = cfg.r;
    h.s = cfg.s;
    h.d = cfg.d;
    h.node = node;
    h.ell = uint32_t(built.rows());
    h.payload_bytes = uint32_t(payload_bytes);
    h.data_length = data_length;
    built.visit([&](const auto& code) {
        using T = std::decay_t<decltype(code)>;
        h.field = code.field().spec();
        if constexpr (std::is_same_v<T, S2Code>) {
            h.stride_or_ext = uint32_t(code.stride());
            h.alpha_mode = 0;
        } else {
            h.stride_or_ext = uint32_t(code.ext_degree());
            h.alpha_mode = code.recipe().mode == AlphaMode::basis ? 1 : 2;
        }
    });
    return h;
}

inline BuiltCode build_from_header(const ShardHeader& h) {
    CodeConfig cfg;
    cfg.construction = to_string(h.construction);
    cfg.mu = int(h.mu);
    cfg.n = int(h.n);
    cfg.r = int(h.r);
    cfg.s = int(h.s);
    cfg.d = int(h.d);
    if (h.construction == ConstructionId::general_pmds) {
        cfg.alpha_mode = h.alpha_mode == 1 ? "basis" : "bch";
        cfg.field = FieldSpec{h.field.characteristic, h.field.base_degree, 1, h.field.base_modulus, {}};
    } else {
        cfg.field = h.field;
    }
    auto built = build_from_config(cfg);
    // the header's explicit moduli must match what deterministic
    // reconstruction produced, or payload values would be reinterpreted
    bool same = built.visit([&](const auto& code) { return code.field().spec() == h.field; });
    if (!same) throw IoError("shard header field does not match deterministic reconstruction");
    return built;
}

inline json witness_to_json(const Witness& w) {
    return json{{"columns", w.columns}, {"row", w.row}, {"group", w.group}};
}

inline json report_to_json(const VerificationReport& r) {
    json j{{"property", to_string(r.property)},
           {"patterns_checked", r.patterns_checked},
           {"rows_checked", r.rows_checked},
           {"result", r.pass ? "pass" : "fail"},
           {"coverage", r.coverage},
           {"witness", nullptr}};
    if (r.witness) j["witness"] = witness_to_json(*r.witness);
    return j;
}

}  // namespace pmds
