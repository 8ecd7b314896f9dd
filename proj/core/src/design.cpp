#include "gpolar/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "gpolar/rng.hpp"
#include "gpolar/sc.hpp"
#include "gpolar/transform.hpp"

namespace gpolar {

namespace {

constexpr long long kExactCostBound = 1LL << 26;

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void clip_params(const AbelianGroup& g, IndexParams& p) {
    int q = g.order();
    for (auto& row : p.zd)
        for (double& v : row) v = std::clamp(v, 0.0, 1.0);
    for (auto& row : p.zd) row[0] = 1.0;
    p.zh.assign(p.zd.size(), std::vector<double>(g.num_subgroups(), 0.0));
    for (size_t i = 0; i < p.zd.size(); ++i) {
        for (int h = 0; h < g.num_subgroups(); ++h) {
            double acc = 0.0;
            for (int d = 0; d < q; ++d)
                if (!g.subgroup_contains(h, d)) acc += p.zd[i][d];
            p.zh[i][h] = std::clamp(acc, 0.0, double(q - g.subgroups()[h].order()));
        }
    }
}

IndexParams estimate_exact(const Dmc& w, int n) {
    const AbelianGroup& g = w.group();
    int size = 1 << n;
    int q = g.order();
    int m = w.out_size();
    if (size > 8 || m > 4)
        throw std::invalid_argument("design: exact mode requires N <= 8 and |output| <= 4");
    long long qn = ipow(q, size);
    long long mn = ipow(m, size);
    if (qn * mn > kExactCostBound)
        throw std::invalid_argument("design: exact enumeration too large");

    // codewords for every transform input, input digits most-significant-first
    std::vector<int> codewords(qn * size);
    {
        Block u;
        u.group = &g;
        u.data.assign(size, 0);
        for (long long ui = 0; ui < qn; ++ui) {
            long long rem = ui;
            for (int j = size - 1; j >= 0; --j) {
                u.data[j] = static_cast<int>(rem % q);
                rem /= q;
            }
            Block x = transform(u);
            std::copy(x.data.begin(), x.data.end(), codewords.begin() + ui * size);
        }
    }

    IndexParams out;
    out.n = n;
    out.mode = EstimationMode::exact;
    out.zd.assign(size, std::vector<double>(q, 0.0));

    std::vector<double> py(qn);
    std::vector<double> agg;
    std::vector<int> y(size, 0);
    for (long long yi = 0; yi < mn; ++yi) {
        long long rem = yi;
        for (int j = size - 1; j >= 0; --j) {
            y[j] = static_cast<int>(rem % m);
            rem /= m;
        }
        for (long long ui = 0; ui < qn; ++ui) {
            double p = 1.0;
            const int* cw = &codewords[ui * size];
            for (int j = 0; j < size; ++j) p *= w.w(cw[j], y[j]);
            py[ui] = p;
        }
        long long div = qn;
        for (int i = 0; i < size; ++i) {
            div /= q;  // q^(N-1-i); (prefix, a_i) = ui / div
            long long groups = qn / div;
            agg.assign(groups, 0.0);
            for (long long ui = 0; ui < qn; ++ui) agg[ui / div] += py[ui];
            long long prefixes = groups / q;
            for (long long p = 0; p < prefixes; ++p) {
                const double* row = &agg[p * q];
                for (int d = 0; d < q; ++d) {
                    double acc = 0.0;
                    for (int a = 0; a < q; ++a) acc += std::sqrt(row[a] * row[g.add(a, d)]);
                    out.zd[i][d] += acc;
                }
            }
        }
    }

    double scale = 1.0 / (double(q) * double(ipow(q, size - 1)));
    for (int i = 0; i < size; ++i)
        for (int d = 0; d < q; ++d) out.zd[i][d] *= scale;
    clip_params(g, out);
    return out;
}

IndexParams estimate_monte_carlo(const Dmc& w, int n, long trials, uint64_t seed) {
    if (trials < 1000) throw std::invalid_argument("design: monte-carlo requires trials >= 1000");
    const AbelianGroup& g = w.group();
    int size = 1 << n;
    int q = g.order();

    IndexParams out;
    out.n = n;
    out.mode = EstimationMode::monte_carlo;
    out.trials = trials;
    out.zd.assign(size, std::vector<double>(q, 0.0));

    Block u;
    u.group = &g;
    u.data.assign(size, 0);
    std::vector<int> obs(size);
    std::vector<double> row(w.out_size());

    for (long t = 0; t < trials; ++t) {
        for (uint64_t attempt = 0;; ++attempt) {
            Rng rng = derive_rng(seed, "design.mc", static_cast<uint64_t>(t), attempt);
            for (int j = 0; j < size; ++j) u.data[j] = rng.uniform_int(q);
            Block x = transform(u);
            for (int j = 0; j < size; ++j) {
                for (int yv = 0; yv < w.out_size(); ++yv) row[yv] = w.w(x.data[j], yv);
                obs[j] = rng.weighted_pick(row, 1.0);
            }
            ScEngine engine(g, n, leaf_logliks(w, obs));
            bool redo = false;
            for (int i = 0; i < size && !redo; ++i) {
                const auto& ll = engine.index_loglik(i);
                double base = ll[u.data[i]];
                if (base == kNegInf) {
                    ++out.denominator_underflows;
                    redo = true;
                    break;
                }
                for (int d = 1; d < q; ++d) {
                    double num = ll[g.add(u.data[i], d)];
                    if (num != kNegInf) out.zd[i][d] += std::exp(0.5 * (num - base));
                }
                engine.commit(i, u.data[i]);
            }
            if (!redo) break;
        }
    }

    for (int i = 0; i < size; ++i)
        for (int d = 1; d < q; ++d) out.zd[i][d] /= double(trials);
    clip_params(g, out);
    return out;
}

}  // namespace

std::string to_string(EstimationMode m) {
    return m == EstimationMode::exact ? "exact" : "monte_carlo";
}

EstimationMode estimation_mode_from_string(const std::string& s) {
    if (s == "exact") return EstimationMode::exact;
    if (s == "monte_carlo") return EstimationMode::monte_carlo;
    throw std::invalid_argument("design: unknown estimation mode " + s);
}

std::string to_string(Orientation o) { return o == Orientation::source ? "source" : "channel"; }

IndexParams estimate_index_params(const Dmc& w, int n, EstimationMode mode, long trials,
                                  uint64_t seed) {
    if (n < 0) throw std::invalid_argument("design: negative n");
    return mode == EstimationMode::exact ? estimate_exact(w, n)
                                         : estimate_monte_carlo(w, n, trials, seed);
}

std::map<std::pair<int, int>, std::vector<int>> Partition::cell_sets() const {
    std::map<std::pair<int, int>, std::vector<int>> sets;
    for (size_t i = 0; i < cells.size(); ++i) sets[cells[i]].push_back(static_cast<int>(i));
    return sets;
}

// Minimal subgroup with Z^S below the threshold. The qualifying family is
// upward closed (Z^S is antitone in S), so minimal members exist; ties
// between incomparable minima break toward the canonical lattice order.
int minimal_qualifying_level(const AbelianGroup& g, const std::vector<double>& zh,
                             double threshold) {
    std::vector<int> qualifying;
    for (int s = 0; s < g.num_subgroups(); ++s)
        if (zh[s] < threshold) qualifying.push_back(s);
    for (int s : qualifying) {
        bool minimal = true;
        for (int t : qualifying) {
            if (t != s && g.subgroup_leq(t, s)) {
                minimal = false;
                break;
            }
        }
        if (minimal) return s;
    }
    return g.full_subgroup();
}

Partition partition_indices(const AbelianGroup& group, const IndexParams& params_c,
                            const IndexParams& params_s, double delta_c, double delta_s,
                            Orientation orientation) {
    if (params_c.n != params_s.n)
        throw std::invalid_argument("design: parameter block lengths differ");
    if (!(0.0 < delta_c && delta_c <= delta_s && delta_s < 1.0))
        throw std::invalid_argument("design: thresholds must satisfy 0 < delta_c <= delta_s < 1");
    int size = params_c.block_length();

    Partition part;
    part.cells.resize(size);
    for (int i = 0; i < size; ++i) {
        int level_c = minimal_qualifying_level(group, params_c.zh[i], delta_c);
        int level_s = minimal_qualifying_level(group, params_s.zh[i], 1.0 - delta_s);
        int h = orientation == Orientation::source ? level_c : level_s;
        int k = orientation == Orientation::source ? level_s : level_c;
        if (!group.subgroup_leq(k, h)) {
            int promoted = group.subgroup_intersect(k, h);
            part.promotions.push_back({i, k, h, promoted});
            k = promoted;
        }
        part.cells[i] = {h, k};
    }
    return part;
}

double code_rate(const AbelianGroup& group, const CodeSpec& spec) {
    double bits = 0.0;
    for (auto [h, k] : spec.partition.cells)
        bits += std::log2(double(group.subgroups()[h].order()) / group.subgroups()[k].order());
    return bits / spec.block_length();
}

uint64_t content_hash(const std::string& canonical) {
    uint64_t h = 1469598103934665603ULL;
    for (char c : canonical) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hash_hex(uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string codespec_to_json(const AbelianGroup& group, const CodeSpec& spec) {
    nlohmann::json j;
    j["version"] = 1;
    j["group"] = spec.group_factors;
    j["n"] = spec.n;
    j["scenario"] = spec.scenario;
    j["role"] = spec.role;
    j["orientation"] = to_string(spec.orientation);
    j["delta_c"] = spec.delta_c;
    j["delta_s"] = spec.delta_s;
    j["seed"] = spec.seed;
    j["mode"] = to_string(spec.mode);
    j["design_trials"] = spec.design_trials;
    j["pair_hash"] = spec.pair_hash;
    nlohmann::json lattice = nlohmann::json::array();
    for (const auto& s : group.subgroups()) lattice.push_back(s.members);
    j["subgroups"] = lattice;
    nlohmann::json cells = nlohmann::json::array();
    for (auto [h, k] : spec.partition.cells) cells.push_back({h, k});
    j["cells"] = cells;
    nlohmann::json promos = nlohmann::json::array();
    for (const auto& p : spec.partition.promotions)
        promos.push_back({p.index, p.from_k, p.h, p.to_k});
    j["promotions"] = promos;
    j["dither"] = spec.dither;
    j["shared_k"] = spec.shared_k;
    j["shaping_level"] = spec.shaping_level;
    j["shared_gap"] = spec.shared_gap;
    return j.dump(2);
}

CodeSpec codespec_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("version").get<int>() != 1)
        throw std::invalid_argument("codespec: unsupported version");
    CodeSpec spec;
    spec.group_factors = j.at("group").get<std::vector<int>>();
    spec.n = j.at("n").get<int>();
    spec.scenario = j.at("scenario").get<std::string>();
    spec.role = j.at("role").get<std::string>();
    spec.orientation = j.at("orientation").get<std::string>() == "source" ? Orientation::source
                                                                          : Orientation::channel;
    spec.delta_c = j.at("delta_c").get<double>();
    spec.delta_s = j.at("delta_s").get<double>();
    spec.seed = j.at("seed").get<uint64_t>();
    spec.mode = estimation_mode_from_string(j.at("mode").get<std::string>());
    spec.design_trials = j.at("design_trials").get<long>();
    spec.pair_hash = j.at("pair_hash").get<std::string>();

    AbelianGroup group = build_group(spec.group_factors);
    auto lattice = j.at("subgroups").get<std::vector<std::vector<int>>>();
    if (static_cast<int>(lattice.size()) != group.num_subgroups())
        throw std::invalid_argument("codespec: lattice mismatch");
    for (int s = 0; s < group.num_subgroups(); ++s)
        if (lattice[s] != group.subgroups()[s].members)
            throw std::invalid_argument("codespec: lattice mismatch");

    for (const auto& c : j.at("cells")) spec.partition.cells.push_back({c.at(0), c.at(1)});
    for (const auto& p : j.at("promotions"))
        spec.partition.promotions.push_back({p.at(0), p.at(1), p.at(2), p.at(3)});
    spec.dither = j.at("dither").get<std::vector<int>>();
    spec.shared_k = j.at("shared_k").get<std::vector<int>>();
    spec.shaping_level = j.at("shaping_level").get<std::vector<int>>();
    spec.shared_gap = j.at("shared_gap").get<std::vector<int>>();
    if (!spec.shaping_level.empty() &&
        (static_cast<int>(spec.shaping_level.size()) != spec.block_length() ||
         spec.shaping_level.size() != spec.shared_gap.size()))
        throw std::invalid_argument("codespec: shaping layer length mismatch");
    if (static_cast<int>(spec.dither.size()) != spec.block_length() ||
        static_cast<int>(spec.shared_k.size()) != spec.block_length() ||
        static_cast<int>(spec.partition.cells.size()) != spec.block_length())
        throw std::invalid_argument("codespec: block length mismatch");
    return spec;
}

}  // namespace gpolar
