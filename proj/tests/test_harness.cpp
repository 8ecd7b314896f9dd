#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpolar/experiment.hpp"
#include "gpolar/toml_lite.hpp"

using namespace gpolar;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dsbs_toml(const std::string& extra = "") {
    return "scenario = \"berger_tung\"\n"
           "group = [2]\n"
           "seed = 3\n"
           "n = 3\n"
           "delta_c = 0.01\n"
           "delta_s = 0.1\n"
           "trials = 30\n"
           "design_mode = \"exact\"\n"
           "design_trials = 0\n" +
           extra +
           "[joint]\n"
           "vars = [\"X\", \"Y\", \"U\", \"V\"]\n"
           "sizes = [2, 2, 2, 2]\n"
           "probs = [\n"
           "  0.45, 0.0, 0.0, 0.0,\n"
           "  0.0, 0.05, 0.0, 0.0,\n"
           "  0.0, 0.0, 0.05, 0.0,\n"
           "  0.0, 0.0, 0.0, 0.45,\n"
           "]\n";
}

struct TempDir {
    fs::path path;
    TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("gpolar_test_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config text parses scalars, arrays and sections") {
    TomlTable t = parse_toml(
        "title = \"run one\"  # trailing comment\n"
        "count = 1_000\n"
        "rate = 0.25\n"
        "flag = true\n"
        "axis = [1, 2, 3]\n"
        "mixed = [0.5, 1.5,]\n"
        "\n"
        "[joint]\n"
        "vars = [\"A\", \"B\"]\n");
    CHECK(t.get_string("title") == "run one");
    CHECK(t.get_int("count") == 1000);
    CHECK(t.get_real("rate") == doctest::Approx(0.25));
    CHECK(t.get_bool("flag", false));
    CHECK(t.get_int_array("axis") == std::vector<long long>{1, 2, 3});
    CHECK(t.get_real_array("mixed") == std::vector<double>{0.5, 1.5});
    CHECK(t.get_string_array("joint.vars") == std::vector<std::string>{"A", "B"});
}

TEST_CASE("multiline arrays accumulate until the bracket closes") {
    TomlTable t = parse_toml(
        "probs = [\n"
        "  0.25, 0.25,  # first row\n"
        "  0.25, 0.25,\n"
        "]\n");
    CHECK(t.get_real_array("probs").size() == 4);
}

TEST_CASE("parse errors carry the line number, duplicates are rejected") {
    CHECK_THROWS_WITH_AS(parse_toml("a = 1\nb ~ 2\n"), doctest::Contains("line 2"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), std::invalid_argument);
}

TEST_CASE("axis accessors lift scalars and reject empty arrays") {
    TomlTable t = parse_toml("n = 4\nempty = []\n");
    CHECK(t.axis_int("n", 7) == std::vector<long long>{4});
    CHECK(t.axis_int("missing", 7) == std::vector<long long>{7});
    CHECK_THROWS_AS(t.axis_int("empty", 7), std::invalid_argument);
}

TEST_CASE("experiment config rejects unknown keys by name") {
    TomlTable t = parse_toml(dsbs_toml("desing_trials = 5\n"));
    CHECK_THROWS_WITH_AS(experiment_from_toml(t), doctest::Contains("desing_trials"),
                         std::invalid_argument);
}

TEST_CASE("experiment config validates ranges and the joint block") {
    CHECK_NOTHROW(experiment_from_toml(parse_toml(dsbs_toml())));
    {
        TomlTable t = parse_toml(dsbs_toml());
        t.set("n", parse_toml_value("0"));
        CHECK_THROWS_AS(experiment_from_toml(t), std::invalid_argument);
    }
    {
        TomlTable t = parse_toml(dsbs_toml());
        t.set("group", parse_toml_value("[65]"));
        CHECK_THROWS_AS(experiment_from_toml(t), std::invalid_argument);
    }
    {
        TomlTable t = parse_toml(dsbs_toml());
        t.set("joint.sizes", parse_toml_value("[2, 2, 2]"));
        CHECK_THROWS_AS(experiment_from_toml(t), std::invalid_argument);
    }
    {
        TomlTable t = parse_toml(dsbs_toml());
        t.set("delta_c", parse_toml_value("1.5"));
        CHECK_THROWS_AS(experiment_from_toml(t), std::invalid_argument);
    }
}

TEST_CASE("sweep axes expand in row-major order") {
    TomlTable t = parse_toml(dsbs_toml());
    t.set("n", parse_toml_value("[3, 4]"));
    t.set("delta_c", parse_toml_value("[0.01, 0.02]"));
    ExperimentConfig cfg = experiment_from_toml(t);
    auto grid = grid_points(cfg);
    REQUIRE(grid.size() == 4);
    CHECK(grid[0].n == 3);
    CHECK(grid[0].delta_c == 0.01);
    CHECK(grid[1].n == 3);
    CHECK(grid[1].delta_c == 0.02);
    CHECK(grid[3].n == 4);
    ScenarioConfig at = config_at(cfg, grid[1]);
    CHECK(at.n == 3);
    CHECK(at.delta_c == 0.02);
    CHECK(at.scenario == Scenario::berger_tung);
}

TEST_CASE("the results schema is frozen") {
    CHECK(csv_header() ==
          "csv_schema,scenario,group,n,delta_c,delta_s,seed,trials,design_mode,design_trials,"
          "rate_1,rate_2,rate_3,theory_1,theory_2,theory_3,rate_gap_max,"
          "err_1,err_2,err_3,dist_1,dist_2,dist_3,"
          "degenerate_events,decode_failures,promotions");
    CHECK(timing_header() ==
          "csv_schema,scenario,group,n,delta_c,delta_s,seed,trials,design_mode,design_trials,"
          "wall_seconds");
    CHECK(kCsvSchema == 1);
}

TEST_CASE("rows have one value per column and omit wall time") {
    ExperimentConfig cfg = experiment_from_toml(parse_toml(dsbs_toml()));
    ScenarioConfig sc = config_at(cfg, grid_points(cfg)[0]);
    SimReport rep;
    rep.scenario = "berger_tung";
    rep.trials = 30;
    rep.branches = {{"x", 0.5, 0.469, 0}, {"y", 1.0, 1.0, 2}};
    rep.metrics = {{"x_block", 0.25, 0.1, 0.4, 5, 20}, {"d1", 0.125, 0.1, 0.15, 0, 0}};
    rep.wall_seconds = 123.456;
    std::string row = csv_row(sc, rep);
    std::string header = csv_header();
    size_t commas = std::count(row.begin(), row.end(), ',');
    size_t header_commas = std::count(header.begin(), header.end(), ',');
    CHECK(commas == header_commas);
    CHECK(row.find("123.456") == std::string::npos);
    CHECK(row.find("berger_tung") != std::string::npos);
    CHECK(row.find(",0.25,") != std::string::npos);
    // promotions summed across branches
    CHECK(row.rfind(",2") == row.size() - 2);
}

TEST_CASE("experiments write byte-identical artifacts on rerun") {
    ExperimentConfig cfg = experiment_from_toml(parse_toml(dsbs_toml()));
    TempDir d1("rerun_a"), d2("rerun_b");
    ExperimentResult r1 = run_experiment(cfg, d1.path.string(), 1, false);
    ExperimentResult r2 = run_experiment(cfg, d2.path.string(), 2, false);
    CHECK(r1.failed == 0);
    CHECK(r2.failed == 0);
    REQUIRE(fs::exists(d1.path / "results.csv"));
    CHECK(slurp(d1.path / "results.csv") == slurp(d2.path / "results.csv"));
    CHECK(slurp(d1.path / "reports" / "point_0000.json") ==
          slurp(d2.path / "reports" / "point_0000.json"));
    CHECK(!slurp(d1.path / "results.csv").empty());
    CHECK(fs::exists(d1.path / "timing.csv"));
    bool has_cache = false;
    for (auto& e : fs::directory_iterator(d1.path / "cache")) has_cache |= e.is_regular_file();
    CHECK(has_cache);
}

TEST_CASE("a failing grid point is recorded without stopping the sweep") {
    // delta thresholds that violate delta_c <= delta_s fail at design time
    TomlTable t = parse_toml(dsbs_toml());
    t.set("delta_c", parse_toml_value("[0.01, 0.5]"));
    t.set("delta_s", parse_toml_value("0.1"));
    ExperimentConfig cfg = experiment_from_toml(t);
    TempDir d("failpoint");
    ExperimentResult r = run_experiment(cfg, d.path.string(), 1, false);
    CHECK(r.failed == 1);
    REQUIRE(r.outcomes.size() == 2);
    CHECK(r.outcomes[0].error.empty());
    CHECK(!r.outcomes[1].error.empty());
    // the good row still lands in the csv
    std::string csv = slurp(d.path / "results.csv");
    CHECK(csv.find("berger_tung") != std::string::npos);
}

TEST_CASE("json report round-trips through the config identity") {
    ExperimentConfig cfg = experiment_from_toml(parse_toml(dsbs_toml()));
    ScenarioConfig sc = config_at(cfg, grid_points(cfg)[0]);
    SimReport rep;
    rep.scenario = "berger_tung";
    rep.trials = 30;
    std::string j = report_to_json(sc, rep, {{"R1", 0.469}});
    CHECK(j.find("\"berger_tung\"") != std::string::npos);
    CHECK(j.find("R1") != std::string::npos);
    CHECK(j.back() == '\n');
}
