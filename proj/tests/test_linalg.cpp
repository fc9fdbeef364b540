#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pmds/linalg.hpp"

using namespace pmds;

TEST_CASE("rank of simple matrices") {
    auto f = Field::gf2w(4);
    Matrix m(2, 3);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(0, 2) = 3;
    m.at(1, 0) = 2;
    m.at(1, 1) = 4;
    m.at(1, 2) = 6;  // 2 * row0 in GF(16): 2*3 = 6
    CHECK(f->mul(2, 3) == 6);
    CHECK(rank(*f, m) == 1);
    m.at(1, 2) = 7;
    CHECK(rank(*f, m) == 2);
}

TEST_CASE("solve recovers planted solutions") {
    auto f = Field::gf2w(6);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<u64> dist(0, 63);
    for (int trial = 0; trial < 100; ++trial) {
        int k = 1 + int(rng() % 5);
        int m = k + int(rng() % 3);
        Matrix a(m, k);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < k; ++j) a.at(i, j) = dist(rng);
        std::vector<u64> x(k);
        for (auto& v : x) v = dist(rng);
        std::vector<u64> b(m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < k; ++j) b[i] = f->add(b[i], f->mul(a.at(i, j), x[j]));
        auto sol = solve(*f, a, b);
        if (rank(*f, a) == k) {
            REQUIRE(sol.has_value());
            CHECK(*sol == x);
        } else {
            CHECK_FALSE(sol.has_value());
        }
    }
}

TEST_CASE("full column rank early exit agrees with rank") {
    auto f = Field::gf2w(4);
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<u64> dist(0, 15);
    for (int trial = 0; trial < 200; ++trial) {
        int rows = 2 + int(rng() % 4);
        int cols = 1 + int(rng() % rows);
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = dist(rng);
        CHECK(has_full_column_rank(*f, m) == (rank(*f, m) == cols));
    }
}

TEST_CASE("column selection") {
    Matrix m(2, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 4; ++j) m.at(i, j) = u64(10 * i + j);
    std::vector<int> idx{3, 1};
    Matrix s = m.columns(idx);
    CHECK(s.at(0, 0) == 3);
    CHECK(s.at(0, 1) == 1);
    CHECK(s.at(1, 0) == 13);
    CHECK(s.at(1, 1) == 11);
}
