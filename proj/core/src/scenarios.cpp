#include "gpolar/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "gpolar/sc.hpp"
#include "gpolar/transform.hpp"

namespace gpolar {

namespace {

constexpr double kZ95 = 1.959963984540054;

struct CountStat {
    long k = 0, n = 0;
    void add(bool hit) {
        k += hit ? 1 : 0;
        ++n;
    }
};

struct MeanStat {
    double sum = 0.0, sumsq = 0.0;
    long n = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
};

MetricReport proportion_metric(const std::string& name, const CountStat& c) {
    MetricReport m;
    m.name = name;
    m.num = c.k;
    m.den = c.n;
    if (c.n == 0) return m;
    double nn = static_cast<double>(c.n);
    double p = c.k / nn;
    double z2 = kZ95 * kZ95;
    double denom = 1.0 + z2 / nn;
    double center = (p + z2 / (2.0 * nn)) / denom;
    double half = kZ95 * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    m.value = p;
    m.lo = std::max(0.0, center - half);
    m.hi = std::min(1.0, center + half);
    return m;
}

MetricReport mean_metric(const std::string& name, const MeanStat& s) {
    MetricReport m;
    m.name = name;
    m.den = s.n;
    if (s.n == 0) return m;
    double mean = s.sum / s.n;
    double var = std::max(0.0, s.sumsq / s.n - mean * mean);
    double half = s.n > 1 ? kZ95 * std::sqrt(var / s.n) : 0.0;
    m.value = mean;
    m.lo = mean - half;
    m.hi = mean + half;
    return m;
}

// d(a, b) with b a group element; table rows are source symbols.
struct Distortion {
    const std::vector<double>* table = nullptr;
    int q = 0;
    double operator()(int a, int b) const {
        if (table) return (*table)[a * q + b];
        return a == b ? 0.0 : 1.0;
    }
};

Distortion make_distortion(const ScenarioConfig& cfg, const std::string& key, int q,
                           int src_size) {
    Distortion d;
    d.q = q;
    auto it = cfg.distortions.find(key);
    if (it != cfg.distortions.end()) {
        if (static_cast<int>(it->second.size()) != src_size * q)
            throw std::invalid_argument("distortion table " + key + " expects " +
                                        std::to_string(src_size) + "x" + std::to_string(q) +
                                        " entries");
        d.table = &it->second;
    }
    return d;
}

// Draws tuples of the listed variables from their marginal.
struct TupleSampler {
    JointDist m;
    std::vector<int> idx;

    TupleSampler(const JointDist& j, const std::vector<std::string>& vars)
        : m(j.marginal(vars)), idx(vars.size()) {}

    const std::vector<int>& sample(Rng& rng) {
        int flat = rng.weighted_pick(m.probs(), 1.0);
        for (int i = static_cast<int>(idx.size()) - 1; i >= 0; --i) {
            idx[i] = flat % m.sizes()[i];
            flat /= m.sizes()[i];
        }
        return idx;
    }
};

// p(rest | given) sampler; out-of-range or zero-mass conditions fall back to
// a uniform draw and are counted by the caller-supplied counter.
struct CondKernel {
    std::vector<std::vector<double>> rows;
    std::vector<char> zero_row;
    std::vector<int> given_sizes;
    int ncols = 1;

    int sample(std::initializer_list<int> given, Rng& rng, long& degenerate) const {
        int flat = 0;
        size_t i = 0;
        for (int v : given) {
            if (v < 0 || v >= given_sizes[i]) {
                ++degenerate;
                return rng.uniform_int(ncols);
            }
            flat = flat * given_sizes[i] + v;
            ++i;
        }
        if (zero_row[flat]) {
            ++degenerate;
            return rng.uniform_int(ncols);
        }
        return rng.weighted_pick(rows[flat], 1.0);
    }
};

CondKernel make_cond_kernel(const JointDist& j, const std::vector<std::string>& given,
                            const std::vector<std::string>& rest) {
    std::vector<std::string> all = given;
    all.insert(all.end(), rest.begin(), rest.end());
    JointDist m = j.marginal(all);
    CondKernel k;
    int nrows = 1;
    for (size_t i = 0; i < given.size(); ++i) {
        k.given_sizes.push_back(m.sizes()[i]);
        nrows *= m.sizes()[i];
    }
    k.ncols = static_cast<int>(m.probs().size()) / nrows;
    k.rows.assign(nrows, std::vector<double>(k.ncols));
    k.zero_row.assign(nrows, 0);
    for (int r = 0; r < nrows; ++r) {
        double total = 0.0;
        for (int c = 0; c < k.ncols; ++c) {
            k.rows[r][c] = m.probs()[r * k.ncols + c];
            total += k.rows[r][c];
        }
        if (total <= 0.0) {
            k.zero_row[r] = 1;
        } else {
            for (double& v : k.rows[r]) v /= total;
        }
    }
    return k;
}

// Flat observation index; any out-of-range component yields the impossible
// marker so model-mismatch symbols surface as zero-likelihood rows.
int obs_flat(const OutputAlphabet& out, std::initializer_list<int> sym) {
    int flat = 0;
    size_t i = 0;
    for (int v : sym) {
        if (v < 0 || v >= out.sizes[i]) return kImpossibleObs;
        flat = flat * out.sizes[i] + v;
        ++i;
    }
    return flat;
}

std::vector<int> random_mids(const AbelianGroup& g, const CodeSpec& spec, Rng& rng) {
    std::vector<int> m(spec.block_length());
    for (int i = 0; i < spec.block_length(); ++i) {
        auto [h, k] = spec.partition.cells[i];
        const std::vector<int>& tv = g.transversal(k, h);
        m[i] = tv[rng.uniform_int(static_cast<int>(tv.size()))];
    }
    return m;
}

std::vector<int> sumset(const AbelianGroup& g, const std::vector<int>& a,
                        const std::vector<int>& b) {
    std::vector<char> seen(g.order(), 0);
    for (int x : a)
        for (int y : b) seen[g.add(x, y)] = 1;
    std::vector<int> out;
    for (int e = 0; e < g.order(); ++e)
        if (seen[e]) out.push_back(e);
    return out;
}

std::vector<int> add_blocks(const AbelianGroup& g, const std::vector<int>& a,
                            const std::vector<int>& b) {
    std::vector<int> s(a.size());
    for (size_t i = 0; i < a.size(); ++i) s[i] = g.add(a[i], b[i]);
    return s;
}

std::vector<int> transform_block(const AbelianGroup& g, const std::vector<int>& a) {
    Block b{&g, a};
    return transform(b).data;
}

void require_identity(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("identity violated: ") + what);
}

// Values whose four-layer decomposition pins (bottom, mid, gap) and leaves
// the top free; the per-terminal encoder resolution set.
CandidateSets gap_encode_candidates(const AbelianGroup& g, const CodeSpec& spec,
                                    const std::vector<int>& mids) {
    CandidateSets out(spec.block_length());
    for (int i = 0; i < spec.block_length(); ++i) {
        auto [h, k] = spec.partition.cells[i];
        int s = spec.shaping_level[i];
        for (int a = 0; a < g.order(); ++a) {
            AbelianGroup::Decomp d1 = g.coset_decompose(a, h, s);
            if (d1.mid != spec.shared_gap[i]) continue;
            AbelianGroup::Decomp d2 = g.coset_decompose(d1.in_k, k, h);
            if (d2.in_k == spec.shared_k[i] && d2.mid == mids[i]) out[i].push_back(a);
        }
    }
    return out;
}

// Exact support of the codeword sum: known shared layers plus message and
// shaping sumsets.
CandidateSets sum_decode_candidates(const AbelianGroup& g, const CodeSpec& sx,
                                    const CodeSpec& sy) {
    CandidateSets out(sx.block_length());
    for (int i = 0; i < sx.block_length(); ++i) {
        auto [h, k] = sx.partition.cells[i];
        require_identity(sx.partition.cells[i] == sy.partition.cells[i],
                         "sum decoding needs matching cells");
        int base = g.add(g.add(sx.shared_k[i], sy.shared_k[i]),
                         g.add(sx.shared_gap[i], sy.shared_gap[i]));
        const std::vector<int>& tkh = g.transversal(k, h);
        std::vector<int> mids2 = sumset(g, tkh, tkh);
        std::vector<int> tops2 =
            sumset(g, g.transversal(sx.shaping_level[i], g.full_subgroup()),
                   g.transversal(sy.shaping_level[i], g.full_subgroup()));
        std::vector<char> seen(g.order(), 0);
        for (int mm : mids2)
            for (int tt : tops2) seen[g.add(base, g.add(mm, tt))] = 1;
        for (int e = 0; e < g.order(); ++e)
            if (seen[e]) out[i].push_back(e);
    }
    return out;
}

std::string dmc_canonical(const Dmc& d) {
    std::string s;
    char buf[32];
    for (int f : d.group().factors()) {
        std::snprintf(buf, sizeof buf, "%d,", f);
        s += buf;
    }
    s += "|";
    for (size_t i = 0; i < d.out().sizes.size(); ++i) {
        s += d.out().names[i];
        std::snprintf(buf, sizeof buf, ":%d,", d.out().sizes[i]);
        s += buf;
    }
    s += "|";
    for (double v : d.table()) {
        std::snprintf(buf, sizeof buf, "%.17g;", v);
        s += buf;
    }
    return s;
}

}  // namespace

JointDist joint_from_config(const ScenarioConfig& cfg) {
    return JointDist(cfg.joint_names, cfg.joint_sizes, cfg.joint_probs);
}

ScenarioSession::ScenarioSession(const ScenarioConfig& cfg) : cfg_(cfg) {
    if (cfg_.n < 1 || cfg_.n > 20)
        throw std::invalid_argument("config: n must be between 1 and 20");
    if (cfg_.trials < 1) throw std::invalid_argument("config: trials must be positive");
    group_ = std::make_unique<AbelianGroup>(build_group(cfg_.group_factors));
    joint_ = std::make_unique<JointDist>(joint_from_config(cfg_));
    channels_ = build_scenario_channels(cfg_.scenario, *joint_, *group_);
}

std::string ScenarioSession::cache_key(const std::string& role) const {
    std::string s = to_string(cfg_.scenario) + "|" + role + "|";
    for (const auto& p : channels_.pairs) s += pair_content_hash(p) + ",";
    char buf[160];
    std::snprintf(buf, sizeof buf, "|n=%d|dc=%.17g|ds=%.17g|seed=%llu|mode=%s|dt=%ld", cfg_.n,
                  cfg_.delta_c, cfg_.delta_s, static_cast<unsigned long long>(cfg_.seed),
                  to_string(cfg_.design_mode).c_str(), cfg_.design_trials);
    s += buf;
    return hash_hex(content_hash(s));
}

CodeSpec ScenarioSession::spec_skeleton(const ChannelPair& pair) const {
    CodeSpec spec;
    spec.group_factors = group_->factors();
    spec.n = cfg_.n;
    spec.scenario = to_string(cfg_.scenario);
    spec.role = pair.role;
    spec.orientation = pair.orientation;
    spec.delta_c = cfg_.delta_c;
    spec.delta_s = cfg_.delta_s;
    spec.seed = cfg_.seed;
    spec.mode = cfg_.design_mode;
    spec.design_trials = cfg_.design_trials;
    spec.pair_hash = pair_content_hash(pair);
    return spec;
}

void ScenarioSession::draw_shared_layers(CodeSpec& spec) const {
    int size = spec.block_length();
    spec.dither.resize(size);
    Rng dither_rng = derive_rng(cfg_.seed, "dither:" + spec.role);
    for (int j = 0; j < size; ++j) spec.dither[j] = dither_rng.uniform_int(group_->order());

    spec.shared_k.resize(size);
    Rng shared_rng = derive_rng(cfg_.seed, "shared:" + spec.role);
    for (int i = 0; i < size; ++i) {
        const auto& members = group_->subgroups()[spec.partition.cells[i].second].members;
        spec.shared_k[i] = members[shared_rng.uniform_int(static_cast<int>(members.size()))];
    }

    if (!spec.shaping_level.empty()) {
        spec.shared_gap.resize(size);
        Rng gap_rng = derive_rng(cfg_.seed, "gap:" + spec.role);
        for (int i = 0; i < size; ++i) {
            const auto& tv =
                group_->transversal(spec.partition.cells[i].first, spec.shaping_level[i]);
            spec.shared_gap[i] = tv[gap_rng.uniform_int(static_cast<int>(tv.size()))];
        }
    }
}

void ScenarioSession::design(const std::map<std::string, CodeSpec>& cached) {
    specs_.clear();
    degradation_.clear();
    for (const auto& p : channels_.pairs) {
        DegradationResult dr = verify_degradation(p);
        degradation_.push_back(dr);
        if (!dr.ok) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " (max error %.3g)", dr.max_error);
            throw std::runtime_error("degradation claim failed for role " + p.role + buf);
        }
    }
    if (cfg_.scenario == Scenario::comp_mac)
        design_comp_mac(cached);
    else
        design_generic(cached);
}

void ScenarioSession::design_generic(const std::map<std::string, CodeSpec>& cached) {
    std::map<std::string, IndexParams> memo;
    auto params_for = [&](const Dmc& w) -> const IndexParams& {
        std::string canon = dmc_canonical(w);
        auto it = memo.find(canon);
        if (it == memo.end()) {
            uint64_t est_seed = mix(mix(cfg_.seed, "design.est"), content_hash(canon));
            it = memo
                     .emplace(canon, estimate_index_params(w, cfg_.n, cfg_.design_mode,
                                                           cfg_.design_trials, est_seed))
                     .first;
        }
        return it->second;
    };

    for (const auto& p : channels_.pairs) {
        auto it = cached.find(p.role);
        if (it != cached.end() && it->second.pair_hash == pair_content_hash(p) &&
            it->second.n == cfg_.n && it->second.seed == cfg_.seed) {
            specs_.push_back(it->second);
            continue;
        }
        const IndexParams& pc = params_for(p.wc);
        const IndexParams& ps = params_for(p.ws);
        CodeSpec spec = spec_skeleton(p);
        spec.partition =
            partition_indices(*group_, pc, ps, cfg_.delta_c, cfg_.delta_s, p.orientation);
        draw_shared_layers(spec);
        specs_.push_back(std::move(spec));
    }
}

void ScenarioSession::design_comp_mac(const std::map<std::string, CodeSpec>& cached) {
    const ChannelPair& px = channels_.pair("x");
    const ChannelPair& py = channels_.pair("y");
    {
        auto ix = cached.find("x");
        auto iy = cached.find("y");
        if (ix != cached.end() && iy != cached.end() &&
            ix->second.pair_hash == pair_content_hash(px) &&
            iy->second.pair_hash == pair_content_hash(py) && ix->second.n == cfg_.n &&
            iy->second.n == cfg_.n && ix->second.seed == cfg_.seed) {
            specs_ = {ix->second, iy->second};
            return;
        }
    }
    if (!(0.0 < cfg_.delta_c && cfg_.delta_c <= cfg_.delta_s && cfg_.delta_s < 1.0))
        throw std::invalid_argument("design: thresholds must satisfy 0 < delta_c <= delta_s < 1");

    std::map<std::string, IndexParams> memo;
    auto params_for = [&](const Dmc& w) -> const IndexParams& {
        std::string canon = dmc_canonical(w);
        auto it = memo.find(canon);
        if (it == memo.end()) {
            uint64_t est_seed = mix(mix(cfg_.seed, "design.est"), content_hash(canon));
            it = memo
                     .emplace(canon, estimate_index_params(w, cfg_.n, cfg_.design_mode,
                                                           cfg_.design_trials, est_seed))
                     .first;
        }
        return it->second;
    };
    const IndexParams& pc = params_for(px.wc);
    const IndexParams& psx = params_for(px.ws);
    const IndexParams& psy = params_for(py.ws);

    int size = pc.block_length();
    Partition part;
    part.cells.resize(size);
    std::vector<int> shape_x(size), shape_y(size);
    for (int i = 0; i < size; ++i) {
        int k = minimal_qualifying_level(*group_, pc.zh[i], cfg_.delta_c);
        shape_x[i] = minimal_qualifying_level(*group_, psx.zh[i], 1.0 - cfg_.delta_s);
        shape_y[i] = minimal_qualifying_level(*group_, psy.zh[i], 1.0 - cfg_.delta_s);
        int h = group_->subgroup_intersect(shape_x[i], shape_y[i]);
        if (!group_->subgroup_leq(k, h)) {
            int promoted = group_->subgroup_intersect(k, h);
            part.promotions.push_back({i, k, h, promoted});
            k = promoted;
        }
        part.cells[i] = {h, k};
    }

    for (const ChannelPair* p : {&px, &py}) {
        CodeSpec spec = spec_skeleton(*p);
        spec.partition = part;
        spec.shaping_level = p->role == "x" ? shape_x : shape_y;
        draw_shared_layers(spec);
        specs_.push_back(std::move(spec));
    }
}

SimReport ScenarioSession::report_skeleton() const {
    SimReport rep;
    rep.scenario = to_string(cfg_.scenario);
    rep.trials = cfg_.trials;
    for (size_t i = 0; i < channels_.pairs.size(); ++i) {
        BranchReport br;
        br.role = channels_.pairs[i].role;
        br.designed_rate = code_rate(*group_, specs_[i]);
        br.theory_rate = channels_.pairs[i].rate_target();
        br.promotions = static_cast<long>(specs_[i].partition.promotions.size());
        rep.branches.push_back(std::move(br));
    }
    return rep;
}

SimReport ScenarioSession::run() const {
    if (specs_.size() != channels_.pairs.size())
        throw std::logic_error("run called before design");
    SimReport rep = report_skeleton();
    Rng rng = derive_rng(cfg_.seed, "run:" + to_string(cfg_.scenario));
    switch (cfg_.scenario) {
        case Scenario::berger_tung: run_berger_tung(rep, rng); break;
        case Scenario::km_sum: run_km_sum(rep, rng); break;
        case Scenario::mac: run_mac(rep, rng); break;
        case Scenario::comp_mac: run_comp_mac(rep, rng); break;
        case Scenario::broadcast: run_broadcast(rep, rng); break;
        case Scenario::multiple_description: run_multiple_description(rep, rng); break;
    }
    return rep;
}

void ScenarioSession::run_berger_tung(SimReport& rep, Rng& rng) const {
    const AbelianGroup& g = *group_;
    const ChannelPair& px = channels_.pair("x");
    const ChannelPair& py = channels_.pair("y");
    const CodeSpec& sx = specs_[0];
    const CodeSpec& sy = specs_[1];
    int size = sx.block_length();
    Distortion d1 = make_distortion(cfg_, "d1", g.order(), joint_->size_of("X"));
    Distortion d2 = make_distortion(cfg_, "d2", g.order(), joint_->size_of("Y"));
    TupleSampler src(*joint_, {"X", "Y"});

    CountStat yblk, xblk;
    MeanStat d1s, d2s, d1ok;
    std::vector<int> xs(size), ys(size), obs(size);
    for (long t = 0; t < cfg_.trials; ++t) {
        for (int j = 0; j < size; ++j) {
            const auto& tup = src.sample(rng);
            xs[j] = tup[0];
            ys[j] = tup[1];
        }
        for (int j = 0; j < size; ++j) obs[j] = obs_flat(py.ws.out(), {ys[j], sy.dither[j]});
        EncodeResult ey = source_encode(sy, g, py.ws, obs, rng);
        for (int j = 0; j < size; ++j) obs[j] = obs_flat(px.ws.out(), {xs[j], sx.dither[j]});
        EncodeResult ex = source_encode(sx, g, px.ws, obs, rng);

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(py.wc.out(), {sy.dither[j]});
        DecodeOutcome dy = source_decode(sy, g, py.wc, obs, ey.message);
        bool y_ok = dy.a_hat == ey.a;
        yblk.add(!y_ok);

        for (int j = 0; j < size; ++j)
            obs[j] = obs_flat(px.wc.out(), {dy.reconstruction[j], sx.dither[j]});
        DecodeOutcome dx = source_decode(sx, g, px.wc, obs, ex.message);
        xblk.add(dx.a_hat != ex.a);

        double a1 = 0.0, a2 = 0.0;
        for (int j = 0; j < size; ++j) {
            a1 += d1(xs[j], dx.reconstruction[j]);
            a2 += d2(ys[j], dy.reconstruction[j]);
        }
        d1s.add(a1 / size);
        d2s.add(a2 / size);
        if (y_ok) d1ok.add(a1 / size);
        rep.degenerate_events += ex.zero_mass_events + ey.zero_mass_events +
                                 dx.empty_mass_events + dy.empty_mass_events;
        rep.decode_failures += (dx.failed ? 1 : 0) + (dy.failed ? 1 : 0);
    }
    rep.metrics = {proportion_metric("y_block", yblk), proportion_metric("x_block", xblk),
                   mean_metric("d1", d1s), mean_metric("d2", d2s), mean_metric("d1_y_ok", d1ok)};
}

void ScenarioSession::run_km_sum(SimReport& rep, Rng& rng) const {
    const AbelianGroup& g = *group_;
    const ChannelPair& px = channels_.pair("x");
    const ChannelPair& py = channels_.pair("y");
    const CodeSpec& sx = specs_[0];
    const CodeSpec& sy = specs_[1];
    int size = sx.block_length();
    Distortion dw = make_distortion(cfg_, "d_w", g.order(), g.order());
    TupleSampler src(*joint_, {"X", "Y"});

    // common channel partitions agree on the cell tops; the sum decoder
    // resolves both codes' tops jointly
    std::vector<std::vector<int>> tops2(size);
    for (int i = 0; i < size; ++i) {
        require_identity(sx.partition.cells[i].first == sy.partition.cells[i].first,
                         "sum decoding needs a common cell top");
        const auto& th = g.transversal(sx.partition.cells[i].first, g.full_subgroup());
        tops2[i] = sumset(g, th, th);
    }

    CountStat sum_blk, wsym;
    MeanStat dws;
    std::vector<int> xs(size), ys(size), obs(size), qd(size), w(size), what(size);
    CandidateSets cand(size);
    for (long t = 0; t < cfg_.trials; ++t) {
        for (int j = 0; j < size; ++j) {
            const auto& tup = src.sample(rng);
            xs[j] = tup[0];
            ys[j] = tup[1];
        }
        for (int j = 0; j < size; ++j) obs[j] = obs_flat(px.ws.out(), {xs[j], sx.dither[j]});
        EncodeResult ex = source_encode(sx, g, px.ws, obs, rng);
        for (int j = 0; j < size; ++j) obs[j] = obs_flat(py.ws.out(), {ys[j], sy.dither[j]});
        EncodeResult ey = source_encode(sy, g, py.ws, obs, rng);

        std::vector<int> a_sum = add_blocks(g, ex.a, ey.a);
        std::vector<int> cw_sum = transform_block(g, a_sum);
        for (int j = 0; j < size; ++j) {
            qd[j] = g.add(sx.dither[j], sy.dither[j]);
            w[j] = g.add(ex.reconstruction[j], ey.reconstruction[j]);
            require_identity(w[j] == g.sub(qd[j], cw_sum[j]), "sum reconstruction");
        }

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(px.wc.out(), {qd[j]});
        for (int i = 0; i < size; ++i) {
            int base = g.add(g.add(sx.shared_k[i], sy.shared_k[i]),
                             g.add(ex.message[i], ey.message[i]));
            cand[i].clear();
            for (int e : tops2[i]) cand[i].push_back(g.add(base, e));
            std::sort(cand[i].begin(), cand[i].end());
            cand[i].erase(std::unique(cand[i].begin(), cand[i].end()), cand[i].end());
        }
        MapResult mr = sc_map(px.wc, cfg_.n, obs, cand);
        sum_blk.add(mr.a != a_sum);
        std::vector<int> cw_hat = transform_block(g, mr.a);
        double acc = 0.0;
        for (int j = 0; j < size; ++j) {
            what[j] = g.sub(qd[j], cw_hat[j]);
            wsym.add(what[j] != w[j]);
            acc += dw(w[j], what[j]);
        }
        dws.add(acc / size);
        rep.degenerate_events +=
            ex.zero_mass_events + ey.zero_mass_events + mr.empty_mass_events;
        rep.decode_failures += mr.failed ? 1 : 0;
    }
    rep.metrics = {proportion_metric("sum_block", sum_blk), proportion_metric("w_symbol", wsym),
                   mean_metric("d_w", dws)};
}

void ScenarioSession::run_mac(SimReport& rep, Rng& rng) const {
    const AbelianGroup& g = *group_;
    const ChannelPair& px = channels_.pair("x");
    const ChannelPair& py = channels_.pair("y");
    const CodeSpec& sx = specs_[0];
    const CodeSpec& sy = specs_[1];
    int size = sx.block_length();
    CondKernel chan = make_cond_kernel(*joint_, {"X", "Y"}, {"Z"});

    CountStat xerr, yerr;
    std::vector<int> obs(size), zs(size);
    for (long t = 0; t < cfg_.trials; ++t) {
        std::vector<int> mx = random_mids(g, sx, rng);
        std::vector<int> my = random_mids(g, sy, rng);
        for (int j = 0; j < size; ++j) obs[j] = obs_flat(px.ws.out(), {sx.dither[j]});
        EncodeResult ex = channel_encode(sx, g, px.ws, obs, mx, rng);
        for (int j = 0; j < size; ++j) obs[j] = obs_flat(py.ws.out(), {sy.dither[j]});
        EncodeResult ey = channel_encode(sy, g, py.ws, obs, my, rng);

        for (int j = 0; j < size; ++j)
            zs[j] = chan.sample({ex.reconstruction[j], ey.reconstruction[j]}, rng,
                                rep.degenerate_events);

        for (int j = 0; j < size; ++j)
            obs[j] = obs_flat(py.wc.out(), {zs[j], sy.dither[j]});
        DecodeOutcome dy = channel_decode(sy, g, py.wc, obs);
        yerr.add(dy.message != my);

        for (int j = 0; j < size; ++j)
            obs[j] = obs_flat(px.wc.out(), {dy.reconstruction[j], zs[j], sx.dither[j]});
        DecodeOutcome dx = channel_decode(sx, g, px.wc, obs);
        xerr.add(dx.message != mx);

        rep.degenerate_events += ex.zero_mass_events + ey.zero_mass_events +
                                 dx.empty_mass_events + dy.empty_mass_events;
        rep.decode_failures += (dx.failed ? 1 : 0) + (dy.failed ? 1 : 0);
    }
    rep.metrics = {proportion_metric("x_message", xerr), proportion_metric("y_message", yerr)};
}

void ScenarioSession::run_comp_mac(SimReport& rep, Rng& rng) const {
    const AbelianGroup& g = *group_;
    const ChannelPair& px = channels_.pair("x");
    const ChannelPair& py = channels_.pair("y");
    const CodeSpec& sx = specs_[0];
    const CodeSpec& sy = specs_[1];
    int size = sx.block_length();
    CondKernel chan = make_cond_kernel(*joint_, {"X", "Y"}, {"Z"});
    CandidateSets dec_cand = sum_decode_candidates(g, sx, sy);

    CountStat blk, sym;
    std::vector<int> obs(size), zs(size), qd(size);
    for (int j = 0; j < size; ++j) qd[j] = g.add(sx.dither[j], sy.dither[j]);
    for (long t = 0; t < cfg_.trials; ++t) {
        std::vector<int> mx = random_mids(g, sx, rng);
        std::vector<int> my = random_mids(g, sy, rng);

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(px.ws.out(), {sx.dither[j]});
        SampleResult ax = sc_sample(px.ws, cfg_.n, obs, gap_encode_candidates(g, sx, mx), rng);
        for (int j = 0; j < size; ++j) obs[j] = obs_flat(py.ws.out(), {sy.dither[j]});
        SampleResult ay = sc_sample(py.ws, cfg_.n, obs, gap_encode_candidates(g, sy, my), rng);

        std::vector<int> cwx = transform_block(g, ax.a);
        std::vector<int> cwy = transform_block(g, ay.a);
        std::vector<int> a_sum = add_blocks(g, ax.a, ay.a);
        std::vector<int> cw_sum = transform_block(g, a_sum);
        for (int j = 0; j < size; ++j) {
            int xin = g.sub(sx.dither[j], cwx[j]);
            int yin = g.sub(sy.dither[j], cwy[j]);
            int s_true = g.add(xin, yin);
            require_identity(s_true == g.sub(qd[j], cw_sum[j]), "sum channel input");
            zs[j] = chan.sample({xin, yin}, rng, rep.degenerate_events);
        }

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(px.wc.out(), {zs[j], qd[j]});
        MapResult mr = sc_map(px.wc, cfg_.n, obs, dec_cand);

        bool mismatch = false;
        for (int i = 0; i < size; ++i) {
            auto [h, k] = sx.partition.cells[i];
            int mid_hat = g.coset_decompose(mr.a[i], k, h).mid;
            int mid_true = g.coset_decompose(a_sum[i], k, h).mid;
            sym.add(mid_hat != mid_true);
            if (mid_hat != mid_true) mismatch = true;
        }
        blk.add(mismatch);
        rep.degenerate_events +=
            ax.zero_mass_events + ay.zero_mass_events + mr.empty_mass_events;
        rep.decode_failures += mr.failed ? 1 : 0;
    }
    rep.metrics = {proportion_metric("sum_block", blk), proportion_metric("sum_symbol", sym)};
}

void ScenarioSession::run_broadcast(SimReport& rep, Rng& rng) const {
    const AbelianGroup& g = *group_;
    const ChannelPair& pm = channels_.pair("main");
    const ChannelPair& pv = channels_.pair("v_branch");
    const CodeSpec& sm = specs_[0];
    const CodeSpec& sv = specs_[1];
    int size = sm.block_length();
    int q = g.order();
    int nx = joint_->size_of("X");
    int nz = joint_->size_of("Z");
    CondKernel chan = make_cond_kernel(*joint_, {"X"}, {"Y", "Z"});
    if (!cfg_.input_cost.empty() && static_cast<int>(cfg_.input_cost.size()) < nx)
        throw std::invalid_argument("input_cost expects one entry per channel input symbol");

    CountStat uerr, verr;
    MeanStat cost;
    std::vector<int> obs(size), xsym(size), ys(size), zs(size);
    for (long t = 0; t < cfg_.trials; ++t) {
        std::vector<int> mu = random_mids(g, sm, rng);
        std::vector<int> mv = random_mids(g, sv, rng);

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(pv.ws.out(), {sv.dither[j]});
        EncodeResult ev = channel_encode(sv, g, pv.ws, obs, mv, rng);
        for (int j = 0; j < size; ++j)
            obs[j] = obs_flat(pm.ws.out(), {ev.reconstruction[j], sm.dither[j]});
        EncodeResult eu = channel_encode(sm, g, pm.ws, obs, mu, rng);

        double cacc = 0.0;
        for (int j = 0; j < size; ++j) {
            int cell = eu.reconstruction[j] * q + ev.reconstruction[j];
            xsym[j] = channels_.g_table[cell];
            if (!channels_.g_defined[cell]) ++rep.degenerate_events;
            int yz = chan.sample({xsym[j]}, rng, rep.degenerate_events);
            ys[j] = yz / nz;
            zs[j] = yz % nz;
            if (!cfg_.input_cost.empty()) cacc += cfg_.input_cost[xsym[j]];
        }
        if (!cfg_.input_cost.empty()) cost.add(cacc / size);

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(pv.wc.out(), {zs[j], sv.dither[j]});
        DecodeOutcome dv = channel_decode(sv, g, pv.wc, obs);
        verr.add(dv.message != mv);

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(pm.wc.out(), {ys[j], sm.dither[j]});
        DecodeOutcome du = channel_decode(sm, g, pm.wc, obs);
        uerr.add(du.message != mu);

        rep.degenerate_events += eu.zero_mass_events + ev.zero_mass_events +
                                 du.empty_mass_events + dv.empty_mass_events;
        rep.decode_failures += (du.failed ? 1 : 0) + (dv.failed ? 1 : 0);
    }
    rep.metrics = {proportion_metric("main_message", uerr), proportion_metric("v_message", verr)};
    if (!cfg_.input_cost.empty()) rep.metrics.push_back(mean_metric("input_cost", cost));
}

void ScenarioSession::run_multiple_description(SimReport& rep, Rng& rng) const {
    const AbelianGroup& g = *group_;
    const ChannelPair& pu = channels_.pair("u_part");
    const ChannelPair& pw = channels_.pair("w_part");
    const ChannelPair& pv = channels_.pair("v_part");
    const CodeSpec& su = specs_[0];
    const CodeSpec& sw = specs_[1];
    const CodeSpec& sv = specs_[2];
    int size = su.block_length();
    Distortion d1 = make_distortion(cfg_, "d1", g.order(), joint_->size_of("X"));
    Distortion d2 = make_distortion(cfg_, "d2", g.order(), joint_->size_of("X"));
    Distortion d3 = make_distortion(cfg_, "d3", g.order(), joint_->size_of("X"));
    TupleSampler src(*joint_, {"X"});

    CountStat ue, ve, we;
    MeanStat d1s, d2s, d3s;
    std::vector<int> xs(size), obs(size);
    for (long t = 0; t < cfg_.trials; ++t) {
        for (int j = 0; j < size; ++j) xs[j] = src.sample(rng)[0];

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(pv.ws.out(), {xs[j], sv.dither[j]});
        EncodeResult ev = source_encode(sv, g, pv.ws, obs, rng);
        for (int j = 0; j < size; ++j)
            obs[j] = obs_flat(pu.ws.out(), {xs[j], ev.reconstruction[j], su.dither[j]});
        EncodeResult eu = source_encode(su, g, pu.ws, obs, rng);
        for (int j = 0; j < size; ++j)
            obs[j] = obs_flat(pw.ws.out(), {xs[j], eu.reconstruction[j], ev.reconstruction[j],
                                            sw.dither[j]});
        EncodeResult ew = source_encode(sw, g, pw.ws, obs, rng);

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(pu.wc.out(), {su.dither[j]});
        DecodeOutcome du = source_decode(su, g, pu.wc, obs, eu.message);
        ue.add(du.a_hat != eu.a);

        for (int j = 0; j < size; ++j) obs[j] = obs_flat(pv.wc.out(), {sv.dither[j]});
        DecodeOutcome dv = source_decode(sv, g, pv.wc, obs, ev.message);
        ve.add(dv.a_hat != ev.a);

        for (int j = 0; j < size; ++j)
            obs[j] = obs_flat(pw.wc.out(),
                              {du.reconstruction[j], dv.reconstruction[j], sw.dither[j]});
        DecodeOutcome dw = source_decode(sw, g, pw.wc, obs, ew.message);
        we.add(dw.a_hat != ew.a);

        double a1 = 0.0, a2 = 0.0, a3 = 0.0;
        for (int j = 0; j < size; ++j) {
            a1 += d1(xs[j], du.reconstruction[j]);
            a2 += d2(xs[j], dv.reconstruction[j]);
            a3 += d3(xs[j], dw.reconstruction[j]);
        }
        d1s.add(a1 / size);
        d2s.add(a2 / size);
        d3s.add(a3 / size);

        rep.degenerate_events += eu.zero_mass_events + ev.zero_mass_events +
                                 ew.zero_mass_events + du.empty_mass_events +
                                 dv.empty_mass_events + dw.empty_mass_events;
        rep.decode_failures +=
            (du.failed ? 1 : 0) + (dv.failed ? 1 : 0) + (dw.failed ? 1 : 0);
    }
    rep.metrics = {proportion_metric("u_block", ue),  proportion_metric("v_block", ve),
                   proportion_metric("w_block", we),  mean_metric("d1", d1s),
                   mean_metric("d2", d2s),            mean_metric("d3", d3s)};
}

std::map<std::string, double> theoretical_rates(Scenario s, const JointDist& joint,
                                                const AbelianGroup& g) {
    std::map<std::string, double> r;
    switch (s) {
        case Scenario::berger_tung:
            r["R1"] = joint.cond_mutual_information({"X"}, {"U"}, {"V"});
            r["R2"] = joint.mutual_information({"Y"}, {"V"});
            if (joint.has_var("Q")) {
                r["R1_timeshared"] = joint.cond_mutual_information({"X"}, {"U"}, {"V", "Q"});
                r["R2_timeshared"] = joint.cond_mutual_information({"Y"}, {"V"}, {"Q"});
            }
            break;
        case Scenario::km_sum: {
            JointDist ext = joint_with_sum(g, joint, "U", "V", "Wsum");
            double hw = ext.entropy({"Wsum"});
            r["R1"] = hw - ext.cond_entropy({"U"}, {"X"});
            r["R2"] = hw - ext.cond_entropy({"V"}, {"Y"});
            break;
        }
        case Scenario::mac:
            r["R1"] = joint.cond_mutual_information({"X"}, {"Z"}, {"Y"});
            r["R2"] = joint.mutual_information({"Y"}, {"Z"});
            if (joint.has_var("W"))
                r["R3"] = joint.cond_mutual_information({"W"}, {"Z"}, {"X", "Y"});
            break;
        case Scenario::comp_mac: {
            JointDist ext = joint_with_sum(g, joint, "X", "Y", "S");
            r["R_sum"] = std::min(joint.entropy({"X"}), joint.entropy({"Y"})) -
                         ext.cond_entropy({"S"}, {"Z"});
            break;
        }
        case Scenario::broadcast:
            r["R1"] = joint.mutual_information({"U"}, {"Y"}) -
                      joint.mutual_information({"U"}, {"V"});
            r["R2"] = joint.mutual_information({"V"}, {"Z"});
            break;
        case Scenario::multiple_description:
            r["R11"] = joint.entropy({"U"}) - joint.cond_entropy({"U"}, {"V", "X"});
            r["R12"] = joint.cond_mutual_information({"X"}, {"W"}, {"U", "V"});
            r["R1"] = r["R11"] + r["R12"];
            r["R2"] = joint.mutual_information({"X"}, {"V"});
            if (joint.has_var("T")) {
                double r1_alt = joint.mutual_information({"X"}, {"V", "T"});
                r["R1_alt"] = r1_alt;
                r["R2_alt"] = joint.cond_mutual_information({"X"}, {"U", "V", "W"}, {"T"}) +
                              2.0 * joint.mutual_information({"X"}, {"T"}) +
                              joint.cond_mutual_information({"U"}, {"V"}, {"T"}) - r1_alt;
            }
            break;
    }
    return r;
}

double expected_distortion(const JointDist& joint, const std::string& a, const std::string& b,
                           const std::vector<double>* table, int q) {
    JointDist m = joint.marginal({a, b});
    int na = m.sizes()[0], nb = m.sizes()[1];
    if (nb > q) throw std::invalid_argument("expected_distortion: alphabet exceeds the group");
    double acc = 0.0;
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            double p = m.probs()[i * nb + j];
            double d = table ? (*table)[i * q + j] : (i == j ? 0.0 : 1.0);
            acc += p * d;
        }
    return acc;
}

}  // namespace gpolar
