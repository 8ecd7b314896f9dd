#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <set>
#include <vector>

#include "gpolar/scenarios.hpp"

using namespace gpolar;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

ScenarioConfig dsbs_config(double crossover, int n, long trials) {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::berger_tung;
    cfg.group_factors = {2};
    cfg.joint_names = {"X", "Y", "U", "V"};
    cfg.joint_sizes = {2, 2, 2, 2};
    cfg.joint_probs.assign(16, 0.0);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            cfg.joint_probs[((x * 2 + y) * 2 + x) * 2 + y] =
                0.5 * (x == y ? 1 - crossover : crossover);
    cfg.n = n;
    cfg.trials = trials;
    cfg.seed = 9;
    cfg.design_mode = EstimationMode::exact;
    cfg.design_trials = 0;
    return cfg;
}

std::set<std::string> metric_names(const SimReport& rep) {
    std::set<std::string> s;
    for (const auto& m : rep.metrics) s.insert(m.name);
    return s;
}

}  // namespace

TEST_CASE("config to joint carries names, sizes and the tensor") {
    ScenarioConfig cfg = dsbs_config(0.1, 3, 10);
    JointDist j = joint_from_config(cfg);
    CHECK(j.nvars() == 4);
    CHECK(j.size_of("X") == 2);
    CHECK(j.p({0, 0, 0, 0}) == doctest::Approx(0.45));
    cfg.joint_probs[0] = 2.0;
    CHECK_THROWS_AS(joint_from_config(cfg), std::invalid_argument);
}

TEST_CASE("session validates the config bounds") {
    ScenarioConfig cfg = dsbs_config(0.1, 0, 10);
    CHECK_THROWS_AS(ScenarioSession{cfg}, std::invalid_argument);
    cfg.n = 21;
    CHECK_THROWS_AS(ScenarioSession{cfg}, std::invalid_argument);
    cfg.n = 3;
    cfg.trials = 0;
    CHECK_THROWS_AS(ScenarioSession{cfg}, std::invalid_argument);
}

TEST_CASE("run before design is refused") {
    ScenarioSession s(dsbs_config(0.1, 3, 10));
    CHECK_THROWS_AS(s.run(), std::logic_error);
}

TEST_CASE("distributed compression session designs, runs and reports") {
    ScenarioSession s(dsbs_config(0.1, 3, 200));
    s.design();
    REQUIRE(s.specs().size() == 2);
    for (const auto& spec : s.specs()) {
        CHECK(spec.n == 3);
        CHECK(spec.block_length() == 8);
        CHECK(!spec.pair_hash.empty());
    }
    for (const auto& d : s.degradation()) CHECK(d.ok);

    SimReport rep = s.run();
    CHECK(rep.scenario == "berger_tung");
    CHECK(rep.trials == 200);
    CHECK(metric_names(rep) ==
          std::set<std::string>{"y_block", "x_block", "d1", "d2", "d1_y_ok"});
    for (const auto& m : rep.metrics) {
        CHECK(m.lo <= m.value + 1e-12);
        CHECK(m.value <= m.hi + 1e-12);
    }
    REQUIRE(rep.branches.size() == 2);
    for (const auto& b : rep.branches) {
        CHECK(b.designed_rate >= 0.0);
        CHECK(b.designed_rate <= 1.0);
    }
}

TEST_CASE("identical configs give identical designs and identical runs") {
    ScenarioConfig cfg = dsbs_config(0.1, 3, 100);
    ScenarioSession a(cfg), b(cfg);
    a.design();
    b.design();
    for (size_t i = 0; i < a.specs().size(); ++i)
        CHECK(codespec_to_json(a.group(), a.specs()[i]) ==
              codespec_to_json(b.group(), b.specs()[i]));
    SimReport ra = a.run(), rb = b.run();
    REQUIRE(ra.metrics.size() == rb.metrics.size());
    for (size_t i = 0; i < ra.metrics.size(); ++i) {
        CHECK(ra.metrics[i].name == rb.metrics[i].name);
        CHECK(ra.metrics[i].value == rb.metrics[i].value);
        CHECK(ra.metrics[i].lo == rb.metrics[i].lo);
    }
    CHECK(ra.decode_failures == rb.decode_failures);
    CHECK(ra.degenerate_events == rb.degenerate_events);
}

TEST_CASE("cached specs are reused verbatim") {
    ScenarioConfig cfg = dsbs_config(0.1, 3, 50);
    ScenarioSession a(cfg);
    a.design();
    std::map<std::string, CodeSpec> cached;
    for (const auto& spec : a.specs()) cached[spec.role] = spec;
    ScenarioSession b(cfg);
    b.design(cached);
    for (size_t i = 0; i < a.specs().size(); ++i)
        CHECK(codespec_to_json(a.group(), a.specs()[i]) ==
              codespec_to_json(b.group(), b.specs()[i]));
    SimReport ra = a.run(), rb = b.run();
    for (size_t i = 0; i < ra.metrics.size(); ++i)
        CHECK(ra.metrics[i].value == rb.metrics[i].value);
}

TEST_CASE("cache keys separate roles, sizes and seeds") {
    ScenarioConfig cfg = dsbs_config(0.1, 3, 50);
    ScenarioSession s(cfg);
    CHECK(s.cache_key("x") != s.cache_key("y"));
    ScenarioConfig big = cfg;
    big.n = 4;
    big.design_mode = EstimationMode::monte_carlo;
    big.design_trials = 1000;
    ScenarioSession sb(big);
    CHECK(s.cache_key("x") != sb.cache_key("x"));
    ScenarioConfig other = cfg;
    other.seed = 10;
    ScenarioSession so(other);
    CHECK(s.cache_key("x") != so.cache_key("x"));
    ScenarioSession same{dsbs_config(0.1, 3, 50)};
    CHECK(s.cache_key("x") == same.cache_key("x"));
}

TEST_CASE("closed-form rates for the doubly symmetric pair") {
    ScenarioConfig cfg = dsbs_config(0.1, 3, 10);
    ScenarioSession s(cfg);
    auto r = theoretical_rates(Scenario::berger_tung, s.joint(), s.group());
    CHECK(r.at("R1") == doctest::Approx(h2(0.1)).epsilon(1e-12));
    CHECK(r.at("R2") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("every scenario runs end to end at toy scale") {
    struct Case {
        Scenario scenario;
        std::vector<std::string> names;
        std::vector<int> sizes;
        std::vector<double> probs;
        std::set<std::string> expected;
        EstimationMode mode;
    };
    std::vector<Case> cases;

    {
        ScenarioConfig bt = dsbs_config(0.05, 3, 0);
        cases.push_back({Scenario::km_sum, bt.joint_names, bt.joint_sizes, bt.joint_probs,
                         {"sum_block", "w_symbol", "d_w"}, EstimationMode::exact});
    }
    {
        std::vector<double> probs(12);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                for (int z = 0; z < 3; ++z)
                    probs[(x * 2 + y) * 3 + z] = 0.25 * (z == x + y ? 0.9 : 0.05);
        cases.push_back({Scenario::mac, {"X", "Y", "Z"}, {2, 2, 3}, probs,
                         {"x_message", "y_message"}, EstimationMode::monte_carlo});
        cases.push_back({Scenario::comp_mac, {"X", "Y", "Z"}, {2, 2, 3}, probs,
                         {"sum_block", "sum_symbol"}, EstimationMode::monte_carlo});
    }
    {
        double a = 0.2, p1 = 0.05, p2 = 0.15;
        std::vector<double> probs(32, 0.0);
        for (int v = 0; v < 2; ++v)
            for (int u = 0; u < 2; ++u)
                for (int y = 0; y < 2; ++y)
                    for (int z = 0; z < 2; ++z)
                        probs[((((u * 2 + v) * 2 + u) * 2 + y) * 2 + z)] +=
                            0.5 * (u == v ? 1 - a : a) * (y == u ? 1 - p1 : p1) *
                            (z == y ? 1 - p2 : p2);
        cases.push_back({Scenario::broadcast, {"U", "V", "X", "Y", "Z"}, {2, 2, 2, 2, 2}, probs,
                         {"main_message", "v_message"}, EstimationMode::exact});
    }
    {
        std::vector<double> probs(16, 0.0);
        for (int x = 0; x < 2; ++x)
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v)
                    probs[((x * 2 + u) * 2 + v) * 2 + x] +=
                        0.5 * (u == x ? 0.9 : 0.1) * (v == x ? 0.9 : 0.1);
        cases.push_back({Scenario::multiple_description, {"X", "U", "V", "W"}, {2, 2, 2, 2},
                         probs, {"u_block", "v_block", "w_block", "d1", "d2", "d3"},
                         EstimationMode::monte_carlo});
    }

    for (const auto& c : cases) {
        CAPTURE(to_string(c.scenario));
        ScenarioConfig cfg;
        cfg.scenario = c.scenario;
        cfg.group_factors = {2};
        cfg.joint_names = c.names;
        cfg.joint_sizes = c.sizes;
        cfg.joint_probs = c.probs;
        cfg.n = 3;
        cfg.trials = 60;
        cfg.seed = 4;
        cfg.design_mode = c.mode;
        cfg.design_trials = c.mode == EstimationMode::exact ? 0 : 1500;
        ScenarioSession s(cfg);
        s.design();
        SimReport rep = s.run();
        CHECK(rep.trials == 60);
        CHECK(metric_names(rep) == c.expected);
        CHECK(rep.scenario == to_string(c.scenario));
    }
}

TEST_CASE("expected distortion under exact match and custom tables") {
    ScenarioConfig cfg = dsbs_config(0.1, 3, 10);
    ScenarioSession s(cfg);
    CHECK(expected_distortion(s.joint(), "U", "V", nullptr, 2) == doctest::Approx(0.1));
    // weighting mismatches double counts them
    std::vector<double> table{0.0, 2.0, 2.0, 0.0};
    CHECK(expected_distortion(s.joint(), "U", "V", &table, 2) == doctest::Approx(0.2));
}
