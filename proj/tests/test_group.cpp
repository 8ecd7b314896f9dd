#include <doctest.h>

#include <stdexcept>

#include <set>

#include "gpolar/group.hpp"

using namespace gpolar;

TEST_CASE("group law holds on every product of cyclic factors up to order 16") {
    for (auto factors : {std::vector<int>{2}, {3}, {4}, {2, 2}, {2, 3}, {4, 2}, {2, 2, 2}}) {
        AbelianGroup g(factors);
        int q = g.order();
        for (int a = 0; a < q; ++a) {
            CHECK(g.add(a, 0) == a);
            CHECK(g.add(a, g.neg(a)) == 0);
            for (int b = 0; b < q; ++b) {
                CHECK(g.add(a, b) == g.add(b, a));
                CHECK(g.sub(g.add(a, b), b) == a);
                for (int c = 0; c < q; ++c)
                    CHECK(g.add(g.add(a, b), c) == g.add(a, g.add(b, c)));
            }
        }
    }
}

TEST_CASE("element tuples are mixed-radix over the factors") {
    AbelianGroup g({2, 3});
    CHECK(g.order() == 6);
    CHECK(g.element_tuple(5) == std::vector<int>{1, 2});
    CHECK(g.element_tuple(0) == std::vector<int>{0, 0});
    // componentwise addition: (1,2) + (1,2) = (0,1) -> index 1
    CHECK(g.add(5, 5) == 1);
}

TEST_CASE("subgroup lattices have the textbook counts") {
    CHECK(AbelianGroup({2}).num_subgroups() == 2);
    CHECK(AbelianGroup({4}).num_subgroups() == 3);
    CHECK(AbelianGroup({6}).num_subgroups() == 4);
    CHECK(AbelianGroup({2, 2}).num_subgroups() == 5);
    CHECK(AbelianGroup({8}).num_subgroups() == 4);
}

TEST_CASE("every listed subgroup is closed and contains the identity") {
    for (auto factors : {std::vector<int>{4}, {2, 2}, {2, 3}, {4, 2}}) {
        AbelianGroup g(factors);
        for (const Subgroup& h : g.subgroups()) {
            CHECK(h.members.front() == 0);
            for (int a : h.members)
                for (int b : h.members) {
                    int s = g.add(a, b);
                    CHECK(((h.mask >> s) & 1) == 1);
                }
        }
    }
}

TEST_CASE("lattice order and bounds") {
    AbelianGroup g({4, 2});
    CHECK(g.subgroups()[g.trivial_subgroup()].order() == 1);
    CHECK(g.subgroups()[g.full_subgroup()].order() == 8);
    for (int i = 0; i + 1 < g.num_subgroups(); ++i)
        CHECK(g.subgroups()[i].order() <= g.subgroups()[i + 1].order());
    for (int i = 0; i < g.num_subgroups(); ++i) {
        CHECK(g.subgroup_leq(g.trivial_subgroup(), i));
        CHECK(g.subgroup_leq(i, g.full_subgroup()));
        CHECK(g.subgroup_index(g.subgroups()[i].mask) == i);
    }
}

TEST_CASE("intersection matches the member-set intersection") {
    AbelianGroup g({2, 2});
    for (int a = 0; a < g.num_subgroups(); ++a)
        for (int b = 0; b < g.num_subgroups(); ++b) {
            int c = g.subgroup_intersect(a, b);
            CHECK(g.subgroups()[c].mask == (g.subgroups()[a].mask & g.subgroups()[b].mask));
        }
    // two distinct order-2 subgroups of the Klein group meet trivially
    int first = -1, second = -1;
    for (int i = 0; i < g.num_subgroups(); ++i)
        if (g.subgroups()[i].order() == 2) (first < 0 ? first : second) = i;
    REQUIRE(second >= 0);
    CHECK(g.subgroup_intersect(first, second) == g.trivial_subgroup());
}

TEST_CASE("transversals tile the big subgroup exactly once") {
    for (auto factors : {std::vector<int>{4}, {2, 2}, {2, 3}, {4, 2}}) {
        AbelianGroup g(factors);
        for (int k = 0; k < g.num_subgroups(); ++k)
            for (int h = 0; h < g.num_subgroups(); ++h) {
                if (!g.subgroup_leq(k, h)) continue;
                const auto& t = g.transversal(k, h);
                CHECK(static_cast<int>(t.size()) ==
                      g.subgroups()[h].order() / g.subgroups()[k].order());
                std::set<int> covered;
                for (int rep : t) {
                    CHECK(g.subgroup_contains(h, rep));
                    for (int e : g.subgroups()[k].members) covered.insert(g.add(rep, e));
                }
                CHECK(static_cast<int>(covered.size()) == g.subgroups()[h].order());
            }
    }
}

TEST_CASE("known transversals of Z4") {
    AbelianGroup g({4});
    int triv = g.trivial_subgroup(), full = g.full_subgroup();
    int mid = g.subgroup_index(0b0101);  // {0, 2}
    REQUIRE(mid >= 0);
    CHECK(g.transversal(triv, mid) == std::vector<int>{0, 2});
    CHECK(g.transversal(mid, full) == std::vector<int>{0, 1});
    CHECK(g.transversal(triv, full) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("coset decomposition is the unique in_k + mid + top split") {
    AbelianGroup g({4});
    int triv = g.trivial_subgroup();
    int mid = g.subgroup_index(0b0101);
    auto d = g.coset_decompose(3, triv, mid);
    CHECK(d.in_k == 0);
    CHECK(d.mid == 2);
    CHECK(d.top == 1);

    for (auto factors : {std::vector<int>{4}, {2, 2}, {2, 3}, {4, 2}}) {
        AbelianGroup gg(factors);
        for (int k = 0; k < gg.num_subgroups(); ++k)
            for (int h = 0; h < gg.num_subgroups(); ++h) {
                if (!gg.subgroup_leq(k, h)) continue;
                const auto& tkh = gg.transversal(k, h);
                const auto& th = gg.transversal(h, gg.full_subgroup());
                for (int a = 0; a < gg.order(); ++a) {
                    auto dd = gg.coset_decompose(a, k, h);
                    CHECK(gg.subgroup_contains(k, dd.in_k));
                    CHECK(std::count(tkh.begin(), tkh.end(), dd.mid) == 1);
                    CHECK(std::count(th.begin(), th.end(), dd.top) == 1);
                    CHECK(gg.add(gg.add(dd.in_k, dd.mid), dd.top) == a);
                }
            }
    }
}

TEST_CASE("coset representatives are constant on cosets and members of them") {
    AbelianGroup g({2, 3});
    for (int h = 0; h < g.num_subgroups(); ++h)
        for (int a = 0; a < g.order(); ++a) {
            int r = g.coset_rep(a, h);
            CHECK(g.subgroup_contains(h, g.sub(a, r)));
            for (int e : g.subgroups()[h].members) CHECK(g.coset_rep(g.add(a, e), h) == r);
        }
}

TEST_CASE("construction rejects bad factor lists") {
    CHECK_THROWS_AS(AbelianGroup({}), std::invalid_argument);
    CHECK_THROWS_AS(AbelianGroup({0}), std::invalid_argument);
    CHECK_THROWS_AS(AbelianGroup({8, 16}), std::invalid_argument);
    CHECK_NOTHROW(AbelianGroup({8, 8}));
}
