#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpolar/channels.hpp"
#include "gpolar/dmc.hpp"
#include "gpolar/experiment.hpp"

namespace {

struct CommonOpts {
    std::string config;
    uint64_t seed = 0;
    int workers = 1;
    std::string out = "out";
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config, "experiment config file")->required();
    cmd->add_option("--seed", o.seed, "master seed override");
    cmd->add_option("--workers", o.workers, "concurrent grid points")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--override", o.overrides, "key=value config override (repeatable)");
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

gpolar::ExperimentConfig load_config(const CommonOpts& o, bool seed_given) {
    std::ifstream in(o.config, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config " + o.config);
    std::stringstream ss;
    ss << in.rdbuf();
    gpolar::TomlTable t = gpolar::parse_toml(ss.str());
    for (const std::string& ov : o.overrides) {
        size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override '" + ov + "' expects key=value");
        t.set(trim(ov.substr(0, eq)), gpolar::parse_toml_value(ov.substr(eq + 1)));
    }
    if (seed_given) {
        gpolar::TomlValue v;
        v.kind = gpolar::TomlValue::Kind::integer;
        v.int_v = static_cast<long long>(o.seed);
        t.set("seed", v);
    }
    return gpolar::experiment_from_toml(t);
}

void print_point_header(size_t idx, const gpolar::PointOutcome& out) {
    std::printf("point %zu: n=%d delta_c=%g delta_s=%g trials=%ld design_trials=%ld\n", idx,
                out.gp.n, out.gp.delta_c, out.gp.delta_s, out.gp.trials, out.gp.design_trials);
}

int cmd_design(const CommonOpts& o, bool seed_given) {
    gpolar::ExperimentConfig cfg = load_config(o, seed_given);
    gpolar::ExperimentResult res = gpolar::run_experiment(cfg, o.out, o.workers, true);
    for (size_t i = 0; i < res.outcomes.size(); ++i) {
        const gpolar::PointOutcome& out = res.outcomes[i];
        print_point_header(i, out);
        if (!out.error.empty()) {
            std::printf("  FAILED: %s\n", out.error.c_str());
            continue;
        }
        for (const std::string& line : out.design_lines) std::printf("  %s\n", line.c_str());
    }
    std::printf("cache: %s/cache\n", o.out.c_str());
    return res.failed > 0 ? 1 : 0;
}

int cmd_run(const CommonOpts& o, bool seed_given) {
    gpolar::ExperimentConfig cfg = load_config(o, seed_given);
    gpolar::ExperimentResult res = gpolar::run_experiment(cfg, o.out, o.workers, false);
    for (size_t i = 0; i < res.outcomes.size(); ++i) {
        const gpolar::PointOutcome& out = res.outcomes[i];
        print_point_header(i, out);
        if (!out.error.empty()) {
            std::printf("  FAILED: %s\n", out.error.c_str());
            continue;
        }
        for (const gpolar::BranchReport& b : out.report.branches)
            std::printf("  %s: rate %.6f target %.6f\n", b.role.c_str(), b.designed_rate,
                        b.theory_rate);
        for (const gpolar::MetricReport& m : out.report.metrics)
            if (m.den > 0)
                std::printf("  %s = %.6g  [%.6g, %.6g]\n", m.name.c_str(), m.value, m.lo, m.hi);
        std::printf("  failures %ld degenerate %ld wall %.2fs\n", out.report.decode_failures,
                    out.report.degenerate_events, out.wall_seconds);
    }
    std::printf("wrote %s/results.csv, %s/timing.csv, %s/reports\n", o.out.c_str(), o.out.c_str(),
                o.out.c_str());
    return res.failed > 0 ? 1 : 0;
}

int cmd_rates(const CommonOpts& o, bool seed_given) {
    gpolar::ExperimentConfig cfg = load_config(o, seed_given);
    gpolar::ScenarioConfig sc = gpolar::config_at(cfg, gpolar::grid_points(cfg)[0]);
    gpolar::ScenarioSession session(sc);
    for (const auto& [name, value] : gpolar::theoretical_rates(sc.scenario, session.joint(),
                                                               session.group()))
        std::printf("%s %.12g\n", name.c_str(), value);
    return 0;
}

int cmd_verify(const CommonOpts& o, bool seed_given) {
    gpolar::ExperimentConfig cfg = load_config(o, seed_given);
    gpolar::ScenarioConfig sc = gpolar::config_at(cfg, gpolar::grid_points(cfg)[0]);
    gpolar::ScenarioSession session(sc);
    bool all_ok = true;
    for (const gpolar::ChannelPair& p : session.channels().pairs) {
        gpolar::DegradationResult dr = gpolar::verify_degradation(p);
        double cap_c = gpolar::symmetric_capacity(p.wc);
        double cap_s = gpolar::symmetric_capacity(p.ws);
        bool cap_ok = std::abs(cap_c - p.cap_wc_expected) <= 1e-9 &&
                      std::abs(cap_s - p.cap_ws_expected) <= 1e-9;
        bool ok = dr.ok && cap_ok;
        all_ok = all_ok && ok;
        std::printf("[%s] %s: degradation max_err %.3g, cap_c %.9f (expect %.9f), cap_s %.9f "
                    "(expect %.9f)\n",
                    ok ? " OK " : "FAIL", p.role.c_str(), dr.max_error, cap_c, p.cap_wc_expected,
                    cap_s, p.cap_ws_expected);
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nested polar-code simulator over finite Abelian groups"};
    app.require_subcommand(1);
    CommonOpts o;
    CLI::App* c_design =
        app.add_subcommand("design", "build code specs and fill the design cache");
    CLI::App* c_run = app.add_subcommand("run", "design and simulate every grid point");
    CLI::App* c_rates = app.add_subcommand("rates", "print the scenario's theoretical rates");
    CLI::App* c_verify =
        app.add_subcommand("verify", "check degradation claims and channel capacities");
    for (CLI::App* cmd : {c_design, c_run, c_rates, c_verify}) add_common(cmd, o);
    CLI11_PARSE(app, argc, argv);

    CLI::App* chosen = app.get_subcommands().front();
    bool seed_given = chosen->count("--seed") > 0;
    try {
        if (chosen == c_design) return cmd_design(o, seed_given);
        if (chosen == c_run) return cmd_run(o, seed_given);
        if (chosen == c_rates) return cmd_rates(o, seed_given);
        return cmd_verify(o, seed_given);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
