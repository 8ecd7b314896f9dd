#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "gpolar/dmc.hpp"

using namespace gpolar;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

Dmc bsc(const AbelianGroup& g, double p) {
    return Dmc(&g, OutputAlphabet::single("y", 2), {1 - p, p, p, 1 - p});
}

}  // namespace

TEST_CASE("pairwise fidelity of the BSC matches the closed form") {
    AbelianGroup g({2});
    Dmc w = bsc(g, 0.25);
    ZParams z = z_params(w);
    CHECK(z.zd[0] == doctest::Approx(1.0).epsilon(1e-12));
    // 2 sqrt(p (1-p)) at p = 1/4 is sqrt(3)/2
    CHECK(z.zd[1] == doctest::Approx(0.8660254037844386).epsilon(1e-9));
    CHECK(z.zh[g.trivial_subgroup()] == doctest::Approx(0.8660254037844386).epsilon(1e-9));
    CHECK(z.zh[g.full_subgroup()] == doctest::Approx(0.0));
}

TEST_CASE("mod-2 projection of Z4 is perfect across {0,2} and blind within it") {
    AbelianGroup g({4});
    // y = x mod 2, noiseless
    Dmc w(&g, OutputAlphabet::single("y", 2), {1, 0, 0, 1, 1, 0, 0, 1});
    ZParams z = z_params(w);
    CHECK(z.zd[0] == doctest::Approx(1.0));
    CHECK(z.zd[1] == doctest::Approx(0.0));
    CHECK(z.zd[2] == doctest::Approx(1.0));
    CHECK(z.zd[3] == doctest::Approx(0.0));
    int mid = g.subgroup_index(0b0101);
    CHECK(z.zh[mid] == doctest::Approx(0.0));
    CHECK(z.zh[g.trivial_subgroup()] == doctest::Approx(1.0));
    CHECK(symmetric_capacity(w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric capacity endpoints and the BSC closed form") {
    AbelianGroup g({2});
    CHECK(symmetric_capacity(bsc(g, 0.11)) == doctest::Approx(1.0 - h2(0.11)).epsilon(1e-12));
    CHECK(symmetric_capacity(bsc(g, 0.5)) == doctest::Approx(0.0));
    CHECK(symmetric_capacity(bsc(g, 0.0)) == doctest::Approx(1.0));
    AbelianGroup g4({4});
    Dmc id(&g4, OutputAlphabet::single("y", 4),
           {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
    CHECK(symmetric_capacity(id) == doctest::Approx(2.0));
}

TEST_CASE("channel rows must be distributions") {
    AbelianGroup g({2});
    CHECK_THROWS_AS(Dmc(&g, OutputAlphabet::single("y", 2), {0.6, 0.6, 0.5, 0.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(Dmc(&g, OutputAlphabet::single("y", 2), {1.2, -0.2, 0.5, 0.5}),
                    std::invalid_argument);
}

TEST_CASE("output alphabet flatten and unflatten are inverse bijections") {
    OutputAlphabet out{{"a", "b", "c"}, {2, 3, 2}};
    CHECK(out.size() == 12);
    for (int i = 0; i < out.size(); ++i) {
        auto sym = out.unflatten(i);
        CHECK(out.flatten(sym) == i);
    }
    CHECK(out.flatten({1, 2, 1}) == 11);
    CHECK(out.component_index("b") == 1);
}

TEST_CASE("joint distribution information identities") {
    // X uniform bit, Y = X through a 0.2 flip
    JointDist j({"X", "Y"}, {2, 2}, {0.4, 0.1, 0.1, 0.4});
    CHECK(j.entropy({"X"}) == doctest::Approx(1.0));
    CHECK(j.entropy({"X", "Y"}) == doctest::Approx(1.0 + h2(0.2)).epsilon(1e-12));
    CHECK(j.cond_entropy({"Y"}, {"X"}) == doctest::Approx(h2(0.2)).epsilon(1e-12));
    CHECK(j.mutual_information({"X"}, {"Y"}) == doctest::Approx(1.0 - h2(0.2)).epsilon(1e-12));

    JointDist ind({"A", "B"}, {2, 3},
                  {0.5 * 0.2, 0.5 * 0.3, 0.5 * 0.5, 0.5 * 0.2, 0.5 * 0.3, 0.5 * 0.5});
    CHECK(ind.mutual_information({"A"}, {"B"}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("marginalization sums out the dropped variables") {
    JointDist j({"X", "Y", "Z"}, {2, 2, 2}, {0.1, 0.1, 0.05, 0.05, 0.2, 0.1, 0.25, 0.15});
    JointDist m = j.marginal({"X", "Z"});
    CHECK(m.p({0, 0}) == doctest::Approx(0.15));
    CHECK(m.p({0, 1}) == doctest::Approx(0.15));
    CHECK(m.p({1, 0}) == doctest::Approx(0.45));
    CHECK(m.p({1, 1}) == doctest::Approx(0.25));
    // order of keep controls the output variable order
    JointDist r = j.marginal({"Z", "X"});
    CHECK(r.p({0, 1}) == doctest::Approx(0.45));
}

TEST_CASE("markov violation separates chains from non-chains") {
    // U -> X -> Y chain: U uniform, X = U flip 0.1, Y = X flip 0.2
    std::vector<double> probs(8);
    for (int u = 0; u < 2; ++u)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                probs[(u * 2 + x) * 2 + y] =
                    0.5 * (u == x ? 0.9 : 0.1) * (x == y ? 0.8 : 0.2);
    JointDist chain({"U", "X", "Y"}, {2, 2, 2}, probs);
    CHECK(chain.markov_violation({"U"}, {"X"}, {"Y"}) == doctest::Approx(0.0).epsilon(1e-12));

    // Y = U xor X with U, X independent: U depends on Y given nothing passes
    // through X alone
    std::vector<double> xo(8, 0.0);
    for (int u = 0; u < 2; ++u)
        for (int x = 0; x < 2; ++x) xo[(u * 2 + x) * 2 + (u ^ x)] = 0.25;
    JointDist parity({"U", "X", "Y"}, {2, 2, 2}, xo);
    CHECK(parity.markov_violation({"U"}, {"X"}, {"Y"}) > 0.05);
}

TEST_CASE("joint constructor rejects non-distributions") {
    CHECK_THROWS_AS(JointDist({"X"}, {2}, {0.7, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(JointDist({"X"}, {2}, {1.2, -0.2}), std::invalid_argument);
    CHECK_THROWS_AS(JointDist({"X", "Y"}, {2, 2}, {0.5, 0.5}), std::invalid_argument);
}
