#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pmds/field.hpp"

using namespace pmds;

TEST_CASE("GF(8) arithmetic against hand-reduced values") {
    auto f = Field::gf2w(3);  // x^3 + x + 1
    REQUIRE(f->size_minus1() == 7);

    // x * x^2 = x^3 = x + 1
    CHECK(f->mul(0b010, 0b100) == 0b011);
    // x + (x+1) = 1 in characteristic 2
    CHECK(f->add(0b010, 0b011) == 0b001);
    // x * (x^2+1) = x^3 + x = 1, so inv(x) = x^2 + 1
    CHECK(f->inv(0b010) == 0b101);
    CHECK(f->mul(0b010, 0b101) == 1);
}

TEST_CASE("identities and involution laws") {
    auto f = Field::gf2w(4);
    for (u64 a = 0; a <= f->size_minus1(); ++a) {
        CHECK(f->add(a, 0) == a);
        CHECK(f->mul(a, 1) == a);
        CHECK(f->add(a, a) == 0);  // characteristic 2
        if (a) {
            CHECK(f->mul(a, f->inv(a)) == 1);
            CHECK(f->inv(f->inv(a)) == a);
        }
    }
}

static void exhaustive_axioms(const Field& f) {
    const u64 q = f.size_minus1() + 1;
    for (u64 a = 0; a < q; ++a) {
        for (u64 b = 0; b < q; ++b) {
            CHECK(f.add(a, b) == f.add(b, a));
            CHECK(f.mul(a, b) == f.mul(b, a));
            for (u64 c = 0; c < q; ++c) {
                REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            }
        }
    }
}

TEST_CASE("exhaustive field axioms on GF(8) and GF(16)") {
    exhaustive_axioms(*Field::gf2w(3));
    exhaustive_axioms(*Field::gf2w(4));
}

TEST_CASE("GF(256) with the usual storage polynomial") {
    // frozen against an independent shift-and-reduce model of x^8+x^4+x^3+x^2+1
    auto f = Field::gf2w(8);
    CHECK(f->mul(0x02, 0x80) == 0x1D);
    CHECK(f->mul(0x80, 0x80) == 0x13);
    CHECK(f->mul(0x53, 0xCA) == 0x8F);
    CHECK(f->inv(0x53) == 0x8C);
    CHECK(f->element_order(0x02) == 255);
}

TEST_CASE("prime fields") {
    auto f = Field::prime(7);
    REQUIRE(f->size_minus1() == 6);
    CHECK(f->add(5, 4) == 2);
    CHECK(f->mul(5, 4) == 6);
    CHECK(f->neg(3) == 4);
    for (u64 a = 1; a < 7; ++a) CHECK(f->mul(a, f->inv(a)) == 1);
    CHECK_THROWS_AS(Field::prime(9), std::invalid_argument);
}

TEST_CASE("odd-characteristic extension GF(7^2)") {
    auto f = Field::extension(7, 1, 2);
    REQUIRE(f->size_minus1() == 48);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<u64> dist(0, 48);
    for (int i = 0; i < 200; ++i) {
        u64 a = dist(rng), b = dist(rng), c = dist(rng);
        CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
        if (a) CHECK(f->mul(a, f->inv(a)) == 1);
    }
}

TEST_CASE("element order") {
    auto f = Field::gf2w(4);
    CHECK(f->element_order(1) == 1);
    // order divides q-1 for every nonzero element of GF(16)
    for (u64 a = 1; a <= 15; ++a) {
        u64 t = f->element_order(a);
        CHECK(15 % t == 0);
        CHECK(f->pow(a, t) == 1);
        for (u64 div = 1; div < t; ++div) {
            if (t % div == 0) CHECK(f->pow(a, div) != 1);
        }
    }
    CHECK_THROWS_AS(f->element_order(0), std::invalid_argument);

    auto f64 = Field::gf2w(6);
    u64 prim = f64->find_element_of_order_at_least(48);
    CHECK(f64->element_order(prim) == 63);
}

TEST_CASE("find_element_of_order_at_least") {
    auto f32 = Field::gf2w(5);
    // 31 is prime, so any element past the unit qualifies
    u64 b = f32->find_element_of_order_at_least(24);
    CHECK(f32->element_order(b) == 31);

    auto f4 = Field::gf2w(2);
    CHECK_THROWS_AS(f4->find_element_of_order_at_least(4), std::invalid_argument);
    CHECK(f4->find_element_of_order_at_least(3) == 2);

    // deterministic: same field spec, same element
    CHECK(Field::gf2w(6)->find_element_of_order_at_least(48) == Field::gf2w(6)->find_element_of_order_at_least(10));
}

TEST_CASE("frobenius is an automorphism of GF(4^8)") {
    auto f = Field::extension(2, 2, 8);
    REQUIRE(f->size_minus1() == 65535);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<u64> dist(0, f->size_minus1());
    for (int i = 0; i < 2000; ++i) {
        u64 a = dist(rng), b = dist(rng);
        CHECK(f->frobenius(f->add(a, b), 1) == f->add(f->frobenius(a, 1), f->frobenius(b, 1)));
        CHECK(f->frobenius(f->mul(a, b), 1) == f->mul(f->frobenius(a, 1), f->frobenius(b, 1)));
    }
    u64 a = dist(rng);
    CHECK(f->frobenius(a, 0) == a);
    CHECK(f->frobenius(a, 8) == a);
    // fixes the base field GF(4)
    for (u64 v = 0; v < 4; ++v) CHECK(f->frobenius(v, 1) == v);
    // and equals a^4 elementwise
    CHECK(f->frobenius(a, 1) == f->pow(a, 4));
}

TEST_CASE("expand_to_base is a base-linear bijection") {
    auto f = Field::extension(2, 3, 4);  // GF(8^4)
    CHECK(f->expand_to_base(0) == std::vector<u64>{0, 0, 0, 0});
    CHECK(f->expand_to_base(1) == std::vector<u64>{1, 0, 0, 0});
    // y is the packed value with coefficient 1 in slot 1
    u64 y = f->pack_from_base(std::vector<u64>{0, 1, 0, 0});
    CHECK(f->expand_to_base(y) == std::vector<u64>{0, 1, 0, 0});

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<u64> dist(0, f->size_minus1());
    for (int i = 0; i < 200; ++i) {
        u64 a = dist(rng), b = dist(rng);
        auto ea = f->expand_to_base(a), eb = f->expand_to_base(b), es = f->expand_to_base(f->add(a, b));
        for (int k = 0; k < 4; ++k) CHECK(es[k] == f->base().add(ea[k], eb[k]));
        CHECK(f->pack_from_base(ea) == a);
    }
}

TEST_CASE("rank over the base field") {
    auto f = Field::extension(2, 2, 3);  // GF(4^3)
    u64 one = 1;
    u64 y = f->pack_from_base(std::vector<u64>{0, 1, 0});
    u64 y2 = f->pack_from_base(std::vector<u64>{0, 0, 1});
    CHECK(f->rank_over_base(std::vector<u64>{one, y, y2}) == 3);

    // base-scalar multiples collapse to rank 1
    u64 a = f->pack_from_base(std::vector<u64>{2, 1, 3});
    u64 c = 3;  // in GF(4)
    u64 ca = f->mul(f->embed_base(c), a);
    CHECK(f->rank_over_base(std::vector<u64>{a, ca}) == 1);

    // rank of any list is bounded by M
    auto f24 = Field::extension(2, 1, 4);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<u64> dist(0, f24->size_minus1());
    for (int i = 0; i < 50; ++i) {
        std::vector<u64> vs(5);
        for (auto& v : vs) v = dist(rng);
        CHECK(f24->rank_over_base(vs) <= 4);
    }
}

TEST_CASE("construction validation") {
    // x^2 + 1 = (x+1)^2 is reducible over GF(2)
    CHECK_THROWS_AS(Field::make(FieldSpec{2, 2, 1, {1, 0, 1}, {}}), std::invalid_argument);
    // oversized fields are refused
    CHECK_THROWS_AS(Field::extension(2, 16, 8), std::invalid_argument);
    // zero inverse
    CHECK_THROWS_AS(Field::gf2w(8)->inv(0), std::invalid_argument);
}

TEST_CASE("element byte serialization") {
    auto f = Field::extension(2, 2, 8);
    REQUIRE(f->element_bytes() == 2);
    std::vector<uint8_t> buf(2);
    f->to_bytes(0xBEEF, buf);
    CHECK(buf[0] == 0xEF);
    CHECK(buf[1] == 0xBE);
    CHECK(f->from_bytes(buf) == 0xBEEF);

    auto f7 = Field::prime(7);
    REQUIRE(f7->element_bytes() == 1);
    CHECK(f7->data_bits_per_symbol() == 2);
    std::vector<uint8_t> b7{9};
    CHECK_THROWS(f7->from_bytes(b7));
}
