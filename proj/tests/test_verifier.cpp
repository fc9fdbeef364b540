#include <catch2/catch_amalgamated.hpp>

#include "pmds/construction_general.hpp"
#include "pmds/construction_s2.hpp"
#include "pmds/verifier.hpp"

using namespace pmds;

TEST_CASE("pattern counts match the closed forms") {
    CHECK(pattern_count_pmds(3, 4, 2, 2) == 3240);  // 6^3 * 15
    CHECK(pattern_count_sd(3, 4, 2, 2) == 90);      // 6 * 15
    CHECK(pattern_count_pmds(2, 4, 2, 3) == 144);   // 36 * 4
    CHECK(pattern_count_pmds(2, 4, 1, 2) == 240);   // 16 * 15
}

TEST_CASE("constructed instances verify exhaustively") {
    S2Code pmds = construct_pmds_s2(3, 4, 2, 3, Field::gf2w(6));
    auto rl = verify_local_mds(pmds);
    CHECK(rl.pass);
    CHECK(rl.patterns_checked == 18);
    CHECK(rl.rows_checked == 16);

    auto rp = verify_pmds(pmds);
    CHECK(rp.pass);
    CHECK(rp.patterns_checked == 3240);
    CHECK(rp.coverage == 1.0);

    S2Code sd = construct_sd_s2(3, 4, 2, 3, Field::gf2w(5));
    auto rs = verify_sd(sd);
    CHECK(rs.pass);
    CHECK(rs.patterns_checked == 90);

    // every SD pattern is also a PMDS pattern on the same shape
    auto rsp = verify_pmds(sd);
    CHECK(rsp.pass);
}

TEST_CASE("sd enumeration is a sub-enumeration of the pmds one") {
    detail::PatternSpace sd(2, 3, 1, 1, true);
    detail::PatternSpace pm(2, 3, 1, 1, false);
    std::vector<int> cols, scratch;
    std::vector<std::vector<int>> pmds_sets;
    for (u64 i = 0; i < pm.total; ++i) {
        pm.expand(i, cols, scratch);
        pmds_sets.push_back(cols);
    }
    for (u64 i = 0; i < sd.total; ++i) {
        sd.expand(i, cols, scratch);
        CHECK(std::find(pmds_sets.begin(), pmds_sets.end(), cols) != pmds_sets.end());
    }
}

TEST_CASE("worker partitioning is deterministic") {
    S2Code pmds = construct_pmds_s2(3, 4, 2, 3, Field::gf2w(6));
    VerifyOptions one;
    VerifyOptions four;
    four.workers = 4;
    auto a = verify_pmds(pmds, one);
    auto b = verify_pmds(pmds, four);
    CHECK(a.pass == b.pass);
    CHECK(a.patterns_checked == b.patterns_checked);
}

TEST_CASE("duplicated locators fail local MDS with a re-checkable witness") {
    auto f = Field::gf2w(6);
    // beta_{1,0} duplicated into beta_{2,0}
    std::vector<u64> betas(8);
    u64 beta = f->find_element_of_order_at_least(8);
    for (int i = 0; i < 4; ++i)
        for (int u = 0; u < 2; ++u) betas[size_t(i) * 2 + u] = f->pow(beta, u64(i) + u64(u) * 4);
    betas[1 * 2 + 0] = betas[0];
    auto sab = MsrParams::create_unchecked(4, 2, 3, f, betas);
    MsrCode code(sab);

    auto rep = verify_local_mds(code);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->columns == std::vector<int>{0, 1});
    CHECK(recheck_witness(code, rep));
}

TEST_CASE("msr_bound") {
    CHECK(msr_bound(1, 3, 4, 2, 16) == Rational{24, 1});
    // h = r, d = n-r collapses to full download
    CHECK(msr_bound(2, 2, 4, 2, 16) == Rational{32, 1});
    // denominator b: d * b^(n-1)
    for (int d = 2; d <= 3; ++d) {
        int n = 4, r = 2;
        i64 b = d + 1 - n + r;
        i64 ell = ipow(b, n);
        auto bd = msr_bound(1, d, n, r, ell);
        CHECK(bd.den == 1);
        CHECK(bd.num == d * ipow(b, n - 1));
    }
    CHECK_THROWS_AS(msr_bound(3, 2, 4, 2, 16), std::invalid_argument);
    CHECK_THROWS_AS(msr_bound(1, 1, 4, 2, 16), std::invalid_argument);
}

TEST_CASE("repair bandwidth audit") {
    S2Code pmds = construct_pmds_s2(3, 4, 2, 3, Field::gf2w(6));
    auto lay = SystematicLayout::make(3, 4, 2, 2);
    auto rep = audit_repair_bandwidth(pmds, lay, 2);
    CHECK(rep.pass);
    // 3 groups x 4 nodes x C(3,3) helper sets x 2 codewords
    CHECK(rep.patterns_checked == 24);
}

TEST_CASE("budget gate and sampling mode") {
    S2Code pmds = construct_pmds_s2(3, 4, 2, 3, Field::gf2w(6));
    VerifyOptions tiny;
    tiny.budget = 100;
    CHECK_THROWS_AS(verify_pmds(pmds, tiny), BudgetError);

    tiny.allow_large = true;
    auto full = verify_pmds(pmds, tiny);
    CHECK(full.pass);
    CHECK(full.coverage == 1.0);

    VerifyOptions sampled;
    sampled.budget = 100;
    sampled.sample = 50;
    auto part = verify_pmds(pmds, sampled);
    CHECK(part.pass);
    CHECK(part.patterns_checked == 50);
    CHECK(part.coverage == Catch::Approx(50.0 / 3240.0));
}

TEST_CASE("a stride below the guarantee either passes or yields a sound witness") {
    // N = 1 violates both stride floors for L = {0,1,2,3}; the sweep may
    // only fail with a witness that re-checks, never silently
    auto f = Field::gf2w(7);
    ScalarS2Code code(2, 4, 2, {0, 1, 2, 3}, 1, f);
    auto rep = verify_pmds(code);
    if (!rep.pass) {
        REQUIRE(rep.witness.has_value());
        CHECK(recheck_witness(code, rep));
    }
    // with the floor respected the same shape passes
    ScalarS2Code good(2, 4, 2, {0, 1, 2, 3}, min_n_pmds(std::vector<i64>{0, 1, 2, 3}, 2), f);
    CHECK(verify_pmds(good).pass);
}

TEST_CASE("corrupted alpha sequences") {
    auto fq = Field::gf2w(2);
    auto fqa = Field::extension(2, 2, 2);
    auto fqm = Field::extension(2, 2, 8);
    auto [alphas, gamma] = gen_alphas_bch(*fqa, *fqm, 2, 4, 1, 2);
    std::vector<u64> betas_q{0, 1, 2, 3};

    auto build = [&](std::vector<u64> bad) {
        auto cert = check_independence(*fqm, bad, 4);
        auto msr = MsrParams::create(4, 1, 3, fqm, betas_q);
        return std::pair{GeneralCode(2, 2, fq, fqm, AlphaRecipe{AlphaMode::bch, 2, gamma, 5}, std::move(bad), betas_q,
                                     std::move(msr), cert),
                         cert.pass};
    };

    // zeroing two alphas of one group kills the property; the witness
    // must re-check as a singular submatrix and a RANK_DEFICIENT decode
    {
        auto bad = alphas;
        bad[0] = bad[1] = 0;
        auto [code, cert_pass] = build(bad);
        CHECK_FALSE(cert_pass);
        auto rep = verify_pmds(code);
        REQUIRE_FALSE(rep.pass);
        REQUIRE(rep.witness.has_value());
        CHECK(recheck_witness(code, rep));
    }

    // a duplicated alpha breaks the certificate but not necessarily the
    // property: the condition is sufficient, not necessary, so the sweep
    // is allowed to pass; a failure would still need a sound witness
    {
        auto bad = alphas;
        bad[5] = bad[1];
        auto [code, cert_pass] = build(bad);
        CHECK_FALSE(cert_pass);
        auto rep = verify_pmds(code);
        if (!rep.pass) CHECK(recheck_witness(code, rep));
    }

    // construction will not proceed without running the certificate
    CHECK_THROWS_AS(construct_general_pmds(2, 4, 1, 2, 3, fq, GeneralOptions{AlphaMode::bch, 10, 0}), std::runtime_error);
}

TEST_CASE("general construction passes the pmds sweep") {
    GeneralOptions basis;
    basis.mode = AlphaMode::basis;
    GeneralCode c5 = construct_general_pmds(2, 4, 2, 3, 3, Field::gf2w(3), basis);
    auto rep = verify_pmds(c5);
    CHECK(rep.pass);
    CHECK(rep.patterns_checked == 144);

    GeneralOptions bch;
    bch.mode = AlphaMode::bch;
    GeneralCode c6 = construct_general_pmds(2, 4, 1, 2, 3, Field::gf2w(2), bch);
    auto rep6 = verify_pmds(c6);
    CHECK(rep6.pass);
    CHECK(rep6.patterns_checked == 240);
}
