#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "gpolar/channels.hpp"
#include "gpolar/rng.hpp"

using namespace gpolar;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

// doubly symmetric pair with lossless test channels: U = X, V = Y
JointDist dsbs(double crossover) {
    std::vector<double> probs(16, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            probs[((x * 2 + y) * 2 + x) * 2 + y] = 0.5 * (x == y ? 1 - crossover : crossover);
    return JointDist({"X", "Y", "U", "V"}, {2, 2, 2, 2}, probs);
}

JointDist adder_mac() {
    // Z = X + Y over the integers, uniform ternary replacement w.p. 0.15
    std::vector<double> probs(12);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 3; ++z)
                probs[(x * 2 + y) * 3 + z] = 0.25 * (z == x + y ? 0.85 + 0.05 : 0.05);
    return JointDist({"X", "Y", "Z"}, {2, 2, 3}, probs);
}

}  // namespace

TEST_CASE("group-sum extension convolves the summands") {
    AbelianGroup g({2});
    JointDist j = dsbs(0.1);
    JointDist ext = joint_with_sum(g, j, "U", "V", "S");
    JointDist s = ext.marginal({"S"});
    CHECK(s.p({0}) == doctest::Approx(0.9));
    CHECK(s.p({1}) == doctest::Approx(0.1));
    CHECK(ext.nvars() == 5);
}

TEST_CASE("distributed-compression pairs verify and expose the right capacities") {
    AbelianGroup g({2});
    ScenarioChannels sc = build_scenario_channels(Scenario::berger_tung, dsbs(0.1), g);
    REQUIRE(sc.pairs.size() == 2);

    const ChannelPair& x = sc.pair("x");
    CHECK(x.orientation == Orientation::source);
    // encoder sees X = U exactly, decoder side info is V with P(V != U) = 0.1
    CHECK(x.cap_ws_expected == doctest::Approx(1.0));
    CHECK(x.cap_wc_expected == doctest::Approx(1.0 - h2(0.1)).epsilon(1e-12));
    CHECK(x.rate_target() == doctest::Approx(h2(0.1)).epsilon(1e-12));

    const ChannelPair& y = sc.pair("y");
    CHECK(y.cap_ws_expected == doctest::Approx(1.0));
    CHECK(y.cap_wc_expected == doctest::Approx(0.0).epsilon(1e-12));

    for (const auto& p : sc.pairs) {
        DegradationResult r = verify_degradation(p);
        CHECK(r.ok);
        CHECK(r.max_error <= 1e-12);
    }
    CHECK_THROWS_AS(sc.pair("nope"), std::invalid_argument);
}

TEST_CASE("sum-decoding pairs use the convolved channel on the decode side") {
    AbelianGroup g({2});
    ScenarioChannels sc = build_scenario_channels(Scenario::km_sum, dsbs(0.05), g);
    REQUIRE(sc.pairs.size() == 2);
    for (const auto& p : sc.pairs) {
        // both helpers close the gap between lossless description and the
        // entropy of the sum
        CHECK(p.cap_ws_expected == doctest::Approx(1.0));
        CHECK(p.cap_wc_expected == doctest::Approx(1.0 - h2(0.05)).epsilon(1e-12));
        CHECK(p.rate_target() == doctest::Approx(h2(0.05)).epsilon(1e-12));
        DegradationResult r = verify_degradation(p);
        CHECK(r.ok);
    }
}

TEST_CASE("multiple-access pairs encode the corner point decode order") {
    AbelianGroup g({2});
    ScenarioChannels sc = build_scenario_channels(Scenario::mac, adder_mac(), g);
    const ChannelPair& x = sc.pair("x");
    const ChannelPair& y = sc.pair("y");
    CHECK(x.orientation == Orientation::channel);
    // x is decoded with y known, y from the channel output alone
    CHECK(x.wc.out().names.front() == "Y");
    CHECK(y.wc.out().names.front() == "Z");
    CHECK(x.rate_target() > y.rate_target());
    CHECK(y.rate_target() > 0.2);
    for (const auto& p : sc.pairs) CHECK(verify_degradation(p).ok);
}

TEST_CASE("computation pairs claim degradation through the sum channel") {
    AbelianGroup g({2});
    ScenarioChannels sc = build_scenario_channels(Scenario::comp_mac, adder_mac(), g);
    REQUIRE(sc.pairs.size() == 2);
    for (const auto& p : sc.pairs) {
        CHECK(p.degraded.out_size() == 2);
        CHECK(verify_degradation(p).ok);
        CHECK(p.cap_ws_expected == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("structural validation rejects malformed joints") {
    AbelianGroup g({2});
    // correlated X, Y breaks the independence requirement
    std::vector<double> corr(12, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 3; ++z) corr[(x * 2 + x) * 3 + z] = 0.5 / 3;
    CHECK_THROWS_AS(
        build_scenario_channels(Scenario::mac, JointDist({"X", "Y", "Z"}, {2, 2, 3}, corr), g),
        std::invalid_argument);

    // X = U xor V has no U-X-V chain
    std::vector<double> bc(32, 0.0);
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 2; ++z) {
                    int x = u ^ v;
                    bc[((((u * 2 + v) * 2 + x) * 2 + y) * 2 + z)] =
                        0.25 * (y == x ? 0.9 : 0.1) * (z == y ? 0.8 : 0.2);
                }
    CHECK_THROWS_AS(build_scenario_channels(
                        Scenario::broadcast, JointDist({"U", "V", "X", "Y", "Z"}, {2, 2, 2, 2, 2}, bc), g),
                    std::invalid_argument);

    CHECK_THROWS_AS(
        build_scenario_channels(Scenario::berger_tung, JointDist({"X", "Y"}, {2, 2}, {0.5, 0, 0, 0.5}), g),
        std::invalid_argument);
}

TEST_CASE("kernel solver finds feasible factorizations and rejects impossible ones") {
    // p_uy from a BSC(0.05), p_uv from a BSC(0.2): feasible since 0.2 lies
    // between 0.05 and 0.95
    auto joint_prob = [](double flip) {
        return std::vector<double>{0.5 * (1 - flip), 0.5 * flip, 0.5 * flip, 0.5 * (1 - flip)};
    };
    auto k = solve_degradation_kernel(joint_prob(0.05), joint_prob(0.2), 2, 2, 2);
    REQUIRE(k.has_value());
    for (int y = 0; y < 2; ++y) {
        double row = (*k)[y * 2] + (*k)[y * 2 + 1];
        CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
    }
    // composition reproduces the target
    for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v) {
            double s = 0.0;
            for (int y = 0; y < 2; ++y) s += joint_prob(0.05)[u * 2 + y] * (*k)[y * 2 + v];
            CHECK(s == doctest::Approx(joint_prob(0.2)[u * 2 + v]).epsilon(1e-9));
        }

    // the reverse direction asks a kernel to sharpen a channel
    CHECK(!solve_degradation_kernel(joint_prob(0.2), joint_prob(0.05), 2, 2, 2).has_value());
}

TEST_CASE("perturbed certificates fail verification") {
    AbelianGroup g({2});
    ScenarioChannels sc = build_scenario_channels(Scenario::berger_tung, dsbs(0.1), g);
    ChannelPair p = sc.pair("x");
    REQUIRE(verify_degradation(p).ok);
    p.lambda[0] += 1e-6;
    DegradationResult r = verify_degradation(p);
    CHECK(!r.ok);
    CHECK(r.max_error > 1e-12);

    ChannelPair q = sc.pair("y");
    q.lambda.clear();
    CHECK(!verify_degradation(q).ok);
}

TEST_CASE("pair hashes separate roles and track table content") {
    AbelianGroup g({2});
    ScenarioChannels a = build_scenario_channels(Scenario::berger_tung, dsbs(0.1), g);
    ScenarioChannels b = build_scenario_channels(Scenario::berger_tung, dsbs(0.1), g);
    ScenarioChannels c = build_scenario_channels(Scenario::berger_tung, dsbs(0.11), g);
    CHECK(pair_content_hash(a.pair("x")) == pair_content_hash(b.pair("x")));
    CHECK(pair_content_hash(a.pair("x")) != pair_content_hash(a.pair("y")));
    CHECK(pair_content_hash(a.pair("x")) != pair_content_hash(c.pair("x")));
}
