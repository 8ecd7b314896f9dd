#include <doctest.h>

#include <stdexcept>

#include "gpolar/rng.hpp"
#include "gpolar/transform.hpp"

using namespace gpolar;

TEST_CASE("power-of-two helpers") {
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(64));
    CHECK(!is_power_of_two(0));
    CHECK(!is_power_of_two(12));
    CHECK(log2_exact(8) == 3);
    CHECK(log2_exact(1) == 0);
}

TEST_CASE("bit reversal is an involution with the known order-4 pattern") {
    CHECK(bit_reversal(1) == std::vector<int>{0, 1});
    CHECK(bit_reversal(2) == std::vector<int>{0, 2, 1, 3});
    auto perm = bit_reversal(16);
    for (int i = 0; i < 16; ++i) CHECK(perm[perm[i]] == i);
}

TEST_CASE("length-2 butterfly over the binary group") {
    AbelianGroup g({2});
    Block a{&g, {1, 1}};
    Block s = transform(a);
    CHECK(s.data == std::vector<int>{0, 1});
    Block b{&g, {1, 0}};
    CHECK(transform(b).data == std::vector<int>{1, 0});
}

TEST_CASE("inverse transform undoes transform on random blocks") {
    for (auto factors : {std::vector<int>{2}, {4}, {2, 3}}) {
        AbelianGroup g(factors);
        Rng rng = derive_rng(7, "test.invert");
        for (int n : {2, 8, 32}) {
            Block a{&g, {}};
            a.data.resize(n);
            for (int& v : a.data) v = rng.uniform_int(g.order());
            Block s = transform(a);
            CHECK(inverse_transform(s).data == a.data);
            CHECK(transform(inverse_transform(a)).data == a.data);
        }
    }
}

TEST_CASE("transform is a group homomorphism blockwise") {
    AbelianGroup g({2, 3});
    Rng rng = derive_rng(11, "test.linear");
    for (int rep = 0; rep < 20; ++rep) {
        Block a{&g, {}}, b{&g, {}};
        a.data.resize(16);
        b.data.resize(16);
        for (int i = 0; i < 16; ++i) {
            a.data[i] = rng.uniform_int(g.order());
            b.data[i] = rng.uniform_int(g.order());
        }
        Block sum{&g, {}};
        sum.data.resize(16);
        for (int i = 0; i < 16; ++i) sum.data[i] = g.add(a.data[i], b.data[i]);
        Block ta = transform(a), tb = transform(b), tsum = transform(sum);
        for (int i = 0; i < 16; ++i) CHECK(tsum.data[i] == g.add(ta.data[i], tb.data[i]));
    }
}

TEST_CASE("dense generator matrix agrees with the butterfly network") {
    AbelianGroup g({2});
    for (int n : {1, 2, 3}) {
        int size = 1 << n;
        auto mat = generator_matrix(n);
        REQUIRE(static_cast<int>(mat.size()) == size);
        for (int u = 0; u < (1 << size); ++u) {
            Block a{&g, {}};
            a.data.resize(size);
            for (int i = 0; i < size; ++i) a.data[i] = (u >> i) & 1;
            Block s = transform(a);
            for (int j = 0; j < size; ++j) {
                int acc = 0;
                for (int i = 0; i < size; ++i)
                    if (a.data[i]) acc = g.add(acc, mat[i][j]);
                CHECK(s.data[j] == acc);
            }
        }
    }
}

TEST_CASE("transform rejects malformed blocks") {
    AbelianGroup g({2});
    Block empty_group{nullptr, {0, 1}};
    CHECK_THROWS_AS(transform(empty_group), std::invalid_argument);
    Block bad_len{&g, {0, 1, 0}};
    CHECK_THROWS_AS(transform(bad_len), std::invalid_argument);
    Block bad_elem{&g, {0, 2}};
    CHECK_THROWS_AS(transform(bad_elem), std::invalid_argument);
}
