#include "gpolar/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace gpolar {

namespace {

[[noreturn]] void field_fail(const std::string& key, const std::string& msg) {
    throw std::invalid_argument("config field '" + key + "': " + msg);
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string group_label(const std::vector<int>& factors) {
    std::string s;
    for (size_t i = 0; i < factors.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(factors[i]);
    }
    return s;
}

int checked_int(long long v, const std::string& key, long long lo, long long hi) {
    if (v < lo || v > hi)
        field_fail(key, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    return static_cast<int>(v);
}

// err_/dist_ CSV slots per scenario; names match the SimReport metrics.
void metric_slots(Scenario s, std::vector<std::string>& err, std::vector<std::string>& dist) {
    switch (s) {
        case Scenario::berger_tung:
            err = {"x_block", "y_block"};
            dist = {"d1", "d2", "d1_y_ok"};
            break;
        case Scenario::km_sum:
            err = {"sum_block", "w_symbol"};
            dist = {"d_w"};
            break;
        case Scenario::mac:
            err = {"x_message", "y_message"};
            dist = {};
            break;
        case Scenario::comp_mac:
            err = {"sum_block", "sum_symbol"};
            dist = {};
            break;
        case Scenario::broadcast:
            err = {"main_message", "v_message"};
            dist = {"input_cost"};
            break;
        case Scenario::multiple_description:
            err = {"u_block", "v_block", "w_block"};
            dist = {"d1", "d2", "d3"};
            break;
    }
}

const MetricReport* find_metric(const SimReport& rep, const std::string& name) {
    for (const MetricReport& m : rep.metrics)
        if (m.name == name) return &m;
    return nullptr;
}

std::string identity_prefix(const ScenarioConfig& cfg) {
    std::string s = std::to_string(kCsvSchema);
    s += "," + to_string(cfg.scenario);
    s += "," + group_label(cfg.group_factors);
    s += "," + std::to_string(cfg.n);
    s += "," + fmt_g(cfg.delta_c);
    s += "," + fmt_g(cfg.delta_s);
    s += "," + std::to_string(cfg.seed);
    s += "," + std::to_string(cfg.trials);
    s += "," + to_string(cfg.design_mode);
    s += "," + std::to_string(cfg.design_trials);
    return s;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace

ExperimentConfig experiment_from_toml(const TomlTable& t) {
    static const std::set<std::string> known = {
        "scenario",       "group",         "seed",          "design_mode",  "n",
        "delta_c",        "delta_s",       "trials",        "design_trials", "input_cost",
        "joint.vars",     "joint.sizes",   "joint.probs",   "distortion.d1", "distortion.d2",
        "distortion.d3",  "distortion.d_w"};
    for (const auto& [key, value] : t.entries())
        if (!known.count(key)) field_fail(key, "unknown key");

    ExperimentConfig e;
    e.base.scenario = scenario_from_string(t.get_string("scenario"));

    if (!t.has("group")) field_fail("group", "missing");
    for (long long f : t.axis_int("group", 0))
        e.base.group_factors.push_back(checked_int(f, "group", 2, 64));

    e.base.seed = static_cast<uint64_t>(t.get_int("seed", 1));
    e.base.design_mode = estimation_mode_from_string(t.get_string("design_mode", "monte_carlo"));

    e.base.joint_names = t.get_string_array("joint.vars");
    for (long long s : t.get_int_array("joint.sizes"))
        e.base.joint_sizes.push_back(checked_int(s, "joint.sizes", 1, 1 << 16));
    e.base.joint_probs = t.get_real_array("joint.probs");
    if (e.base.joint_names.size() != e.base.joint_sizes.size())
        field_fail("joint.sizes", "expected one entry per variable");
    long long cells = 1;
    for (int s : e.base.joint_sizes) cells *= s;
    if (cells != static_cast<long long>(e.base.joint_probs.size()))
        field_fail("joint.probs", "expected " + std::to_string(cells) + " entries");

    for (long long n : t.axis_int("n", 4)) e.n_axis.push_back(checked_int(n, "n", 1, 20));
    e.delta_c_axis = t.axis_real("delta_c", 0.01);
    e.delta_s_axis = t.axis_real("delta_s", 0.1);
    for (double d : e.delta_c_axis)
        if (!(d > 0.0 && d < 1.0)) field_fail("delta_c", "thresholds live in (0, 1)");
    for (double d : e.delta_s_axis)
        if (!(d > 0.0 && d < 1.0)) field_fail("delta_s", "thresholds live in (0, 1)");
    for (long long v : t.axis_int("trials", 1000))
        e.trials_axis.push_back(checked_int(v, "trials", 1, 1LL << 40));
    long long min_design = e.base.design_mode == EstimationMode::exact ? 0 : 1;
    for (long long v : t.axis_int("design_trials", 10000))
        e.design_trials_axis.push_back(checked_int(v, "design_trials", min_design, 1LL << 40));

    for (const char* key : {"d1", "d2", "d3", "d_w"}) {
        std::string full = std::string("distortion.") + key;
        if (t.has(full)) e.base.distortions[key] = t.get_real_array(full);
    }
    if (t.has("input_cost")) e.base.input_cost = t.get_real_array("input_cost");
    return e;
}

std::vector<GridPoint> grid_points(const ExperimentConfig& cfg) {
    std::vector<GridPoint> pts;
    for (int n : cfg.n_axis)
        for (double dc : cfg.delta_c_axis)
            for (double ds : cfg.delta_s_axis)
                for (long tr : cfg.trials_axis)
                    for (long dt : cfg.design_trials_axis)
                        pts.push_back({n, dc, ds, tr, dt});
    return pts;
}

ScenarioConfig config_at(const ExperimentConfig& cfg, const GridPoint& gp) {
    ScenarioConfig sc = cfg.base;
    sc.n = gp.n;
    sc.delta_c = gp.delta_c;
    sc.delta_s = gp.delta_s;
    sc.trials = gp.trials;
    sc.design_trials = gp.design_trials;
    return sc;
}

std::string csv_header() {
    return "csv_schema,scenario,group,n,delta_c,delta_s,seed,trials,design_mode,design_trials,"
           "rate_1,rate_2,rate_3,theory_1,theory_2,theory_3,rate_gap_max,"
           "err_1,err_2,err_3,dist_1,dist_2,dist_3,"
           "degenerate_events,decode_failures,promotions";
}

std::string csv_row(const ScenarioConfig& cfg, const SimReport& rep) {
    std::string row = identity_prefix(cfg);
    double gap = 0.0;
    for (int b = 0; b < 3; ++b) {
        row += ",";
        if (b < static_cast<int>(rep.branches.size())) row += fmt_g(rep.branches[b].designed_rate);
    }
    for (int b = 0; b < 3; ++b) {
        row += ",";
        if (b < static_cast<int>(rep.branches.size())) {
            row += fmt_g(rep.branches[b].theory_rate);
            gap = std::max(gap,
                           std::abs(rep.branches[b].designed_rate - rep.branches[b].theory_rate));
        }
    }
    row += "," + fmt_g(gap);

    std::vector<std::string> err, dist;
    metric_slots(cfg.scenario, err, dist);
    for (int b = 0; b < 3; ++b) {
        row += ",";
        if (b < static_cast<int>(err.size()))
            if (const MetricReport* m = find_metric(rep, err[b])) row += fmt_g(m->value);
    }
    for (int b = 0; b < 3; ++b) {
        row += ",";
        if (b < static_cast<int>(dist.size()))
            if (const MetricReport* m = find_metric(rep, dist[b]))
                if (m->den > 0) row += fmt_g(m->value);
    }
    long promotions = 0;
    for (const BranchReport& b : rep.branches) promotions += b.promotions;
    row += "," + std::to_string(rep.degenerate_events);
    row += "," + std::to_string(rep.decode_failures);
    row += "," + std::to_string(promotions);
    return row;
}

std::string timing_header() {
    return "csv_schema,scenario,group,n,delta_c,delta_s,seed,trials,design_mode,design_trials,"
           "wall_seconds";
}

std::string timing_row(const ScenarioConfig& cfg, double wall_seconds) {
    return identity_prefix(cfg) + "," + fmt_g(wall_seconds);
}

std::string report_to_json(const ScenarioConfig& cfg, const SimReport& rep,
                           const std::map<std::string, double>& rates) {
    nlohmann::json j;
    j["csv_schema"] = kCsvSchema;
    j["scenario"] = to_string(cfg.scenario);
    j["group"] = cfg.group_factors;
    j["n"] = cfg.n;
    j["delta_c"] = cfg.delta_c;
    j["delta_s"] = cfg.delta_s;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["design_mode"] = to_string(cfg.design_mode);
    j["design_trials"] = cfg.design_trials;
    j["branches"] = nlohmann::json::array();
    for (const BranchReport& b : rep.branches) {
        nlohmann::json jb;
        jb["role"] = b.role;
        jb["designed_rate"] = b.designed_rate;
        jb["theory_rate"] = b.theory_rate;
        jb["promotions"] = b.promotions;
        j["branches"].push_back(jb);
    }
    j["metrics"] = nlohmann::json::array();
    for (const MetricReport& m : rep.metrics) {
        nlohmann::json jm;
        jm["name"] = m.name;
        jm["value"] = m.value;
        jm["ci_lo"] = m.lo;
        jm["ci_hi"] = m.hi;
        jm["num"] = m.num;
        jm["den"] = m.den;
        j["metrics"].push_back(jm);
    }
    j["decode_failures"] = rep.decode_failures;
    j["degenerate_events"] = rep.degenerate_events;
    j["theoretical_rates"] = rates;
    return j.dump(2) + "\n";
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                                int workers, bool design_only) {
    std::vector<GridPoint> pts = grid_points(cfg);
    if (pts.empty()) throw std::invalid_argument("config: empty sweep grid");
    std::filesystem::create_directories(out_dir + "/reports");
    std::filesystem::create_directories(out_dir + "/cache");

    ExperimentResult result;
    result.outcomes.resize(pts.size());
    std::mutex mem_mu;
    std::map<std::string, CodeSpec> mem_cache;

    auto work = [&](size_t idx) {
        PointOutcome& out = result.outcomes[idx];
        out.gp = pts[idx];
        ScenarioConfig sc = config_at(cfg, pts[idx]);
        try {
            ScenarioSession session(sc);
            std::map<std::string, CodeSpec> cached;
            std::vector<std::string> keys;
            for (const ChannelPair& p : session.channels().pairs) {
                std::string key = session.cache_key(p.role);
                keys.push_back(key);
                {
                    std::lock_guard<std::mutex> lk(mem_mu);
                    auto it = mem_cache.find(key);
                    if (it != mem_cache.end()) {
                        cached[p.role] = it->second;
                        continue;
                    }
                }
                std::ifstream in(out_dir + "/cache/" + key + ".json", std::ios::binary);
                if (in) {
                    std::stringstream ss;
                    ss << in.rdbuf();
                    // an unreadable cache entry is redesigned, not fatal
                    try {
                        cached[p.role] = codespec_from_json(ss.str());
                    } catch (const std::exception&) {
                    }
                }
            }
            auto t0 = std::chrono::steady_clock::now();
            session.design(cached);
            for (size_t b = 0; b < session.specs().size(); ++b) {
                const CodeSpec& spec = session.specs()[b];
                {
                    std::lock_guard<std::mutex> lk(mem_mu);
                    mem_cache.emplace(keys[b], spec);
                }
                out.cache_entries.emplace_back(keys[b],
                                               codespec_to_json(session.group(), spec));
                char line[256];
                std::snprintf(line, sizeof line,
                              "n=%d %s rate %.6f target %.6f promotions %zu", sc.n,
                              spec.role.c_str(), code_rate(session.group(), spec),
                              session.channels().pairs[b].rate_target(),
                              spec.partition.promotions.size());
                out.design_lines.push_back(line);
            }
            if (!design_only) {
                SimReport rep = session.run();
                out.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                rep.wall_seconds = out.wall_seconds;
                out.report = rep;
                auto rates = theoretical_rates(sc.scenario, session.joint(), session.group());
                out.csv = csv_row(sc, rep);
                out.json = report_to_json(sc, rep, rates);
            } else {
                out.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            }
            out.timing = timing_row(sc, out.wall_seconds);
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    };

    int nworkers = std::max(1, std::min(workers, static_cast<int>(pts.size())));
    if (nworkers <= 1) {
        for (size_t i = 0; i < pts.size(); ++i) work(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < pts.size(); i = next.fetch_add(1)) work(i);
            });
        for (std::thread& th : pool) th.join();
    }

    if (!design_only) {
        std::string csv = csv_header() + "\n";
        for (const PointOutcome& o : result.outcomes)
            if (o.error.empty() && !o.csv.empty()) csv += o.csv + "\n";
        write_file(out_dir + "/results.csv", csv);
    }
    std::string timing = timing_header() + "\n";
    for (const PointOutcome& o : result.outcomes)
        if (o.error.empty() && !o.timing.empty()) timing += o.timing + "\n";
    write_file(out_dir + "/timing.csv", timing);

    for (size_t i = 0; i < result.outcomes.size(); ++i) {
        const PointOutcome& o = result.outcomes[i];
        if (o.json.empty()) continue;
        char name[48];
        std::snprintf(name, sizeof name, "point_%04zu.json", i);
        write_file(out_dir + "/reports/" + name, o.json);
    }

    std::map<std::string, std::string> cache_files;
    for (const PointOutcome& o : result.outcomes)
        for (const auto& [key, payload] : o.cache_entries) cache_files.emplace(key, payload);
    for (const auto& [key, payload] : cache_files)
        write_file(out_dir + "/cache/" + key + ".json", payload);

    for (const PointOutcome& o : result.outcomes)
        if (!o.error.empty()) ++result.failed;
    return result;
}

}  // namespace gpolar
