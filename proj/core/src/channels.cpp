#include "gpolar/channels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace gpolar {

namespace {

constexpr double kStructTol = 1e-9;
constexpr double kDegradeTol = 1e-12;

void require_vars(const JointDist& joint, const std::vector<std::string>& vars,
                  const std::string& scenario) {
    for (const auto& v : vars)
        if (!joint.has_var(v))
            throw std::invalid_argument(scenario + ": joint is missing variable " + v);
}

// W((pass..., z) | s) = p(pass..., z - s), the shifted-marginal channel.
// The shifted variable embeds into the group by index; z is the last output
// component, named out_name.
Dmc shifted_channel(const AbelianGroup& g, const JointDist& joint,
                    const std::vector<std::string>& pass, const std::string& shifted,
                    const std::string& out_name) {
    std::vector<std::string> keep = pass;
    keep.push_back(shifted);
    JointDist m = joint.marginal(keep);
    int q = g.order();
    int ns = m.sizes().back();
    if (ns > q)
        throw std::invalid_argument("channel build: alphabet of " + shifted +
                                    " exceeds the group order");
    OutputAlphabet out;
    int pass_total = 1;
    for (size_t i = 0; i < pass.size(); ++i) {
        out.names.push_back(pass[i]);
        out.sizes.push_back(m.sizes()[i]);
        pass_total *= m.sizes()[i];
    }
    out.names.push_back(out_name);
    out.sizes.push_back(q);

    std::vector<double> table(q * pass_total * q, 0.0);
    for (int s = 0; s < q; ++s)
        for (int pc = 0; pc < pass_total; ++pc)
            for (int z = 0; z < q; ++z) {
                int e = g.sub(z, s);
                double p = e < ns ? m.probs()[pc * ns + e] : 0.0;
                table[(s * pass_total + pc) * q + z] = p;
            }
    return Dmc(&g, out, table);
}

// p(b | a), row-major [a][b]; rows with p(a) = 0 become uniform.
std::vector<double> conditional(const JointDist& joint, const std::string& a,
                                const std::string& b) {
    JointDist m = joint.marginal({a, b});
    int na = m.sizes()[0], nb = m.sizes()[1];
    std::vector<double> k(na * nb);
    for (int i = 0; i < na; ++i) {
        double pa = 0.0;
        for (int j = 0; j < nb; ++j) pa += m.probs()[i * nb + j];
        for (int j = 0; j < nb; ++j)
            k[i * nb + j] = pa > 0.0 ? m.probs()[i * nb + j] / pa : 1.0 / nb;
    }
    return k;
}

}  // namespace

JointDist joint_with_sum(const AbelianGroup& g, const JointDist& joint, const std::string& a,
                         const std::string& b, const std::string& name) {
    int q = g.order();
    int ia = joint.var_index(a), ib = joint.var_index(b);
    if (joint.sizes()[ia] > q || joint.sizes()[ib] > q)
        throw std::invalid_argument("channel build: summand alphabet exceeds the group order");
    std::vector<std::string> names = joint.names();
    names.push_back(name);
    std::vector<int> sizes = joint.sizes();
    sizes.push_back(q);
    std::vector<double> probs(joint.probs().size() * q, 0.0);
    std::vector<int> idx(joint.nvars(), 0);
    for (size_t flat = 0; flat < joint.probs().size(); ++flat) {
        size_t f = flat;
        for (int i = joint.nvars() - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(f % joint.sizes()[i]);
            f /= joint.sizes()[i];
        }
        int s = g.add(idx[ia], idx[ib]);
        probs[flat * q + s] += joint.probs()[flat];
    }
    return JointDist(std::move(names), std::move(sizes), std::move(probs));
}

namespace {

// Identity-on-kept-components projection kernel; kept[j] is the dominant
// component matching degraded component j.
std::vector<double> projection_lambda(const OutputAlphabet& dom, const OutputAlphabet& deg,
                                      const std::vector<int>& kept) {
    if (kept.size() != deg.sizes.size())
        throw std::invalid_argument("projection: component count mismatch");
    for (size_t j = 0; j < kept.size(); ++j)
        if (dom.sizes[kept[j]] != deg.sizes[j])
            throw std::invalid_argument("projection: component size mismatch");
    std::vector<double> lambda(dom.size() * deg.size(), 0.0);
    for (int df = 0; df < dom.size(); ++df) {
        auto dsym = dom.unflatten(df);
        std::vector<int> gsym(kept.size());
        for (size_t j = 0; j < kept.size(); ++j) gsym[j] = dsym[kept[j]];
        lambda[df * deg.size() + deg.flatten(gsym)] = 1.0;
    }
    return lambda;
}

double log2q(const AbelianGroup& g) { return std::log2(double(g.order())); }

void check_chain(const JointDist& joint, const std::string& scenario) {
    // U <-> X <-> Y <-> V as two three-block conditions
    double v1 = joint.markov_violation({"U"}, {"X"}, {"Y", "V"});
    double v2 = joint.markov_violation({"U", "X"}, {"Y"}, {"V"});
    if (v1 > kStructTol || v2 > kStructTol)
        throw std::invalid_argument(scenario + ": joint violates the U-X-Y-V Markov chain");
}

void check_independent(const JointDist& joint, const std::string& a, const std::string& b,
                       const std::string& scenario) {
    JointDist m = joint.marginal({a, b});
    int na = m.sizes()[0], nb = m.sizes()[1];
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j) {
            double pa = 0.0, pb = 0.0;
            for (int jj = 0; jj < nb; ++jj) pa += m.probs()[i * nb + jj];
            for (int ii = 0; ii < na; ++ii) pb += m.probs()[ii * nb + j];
            if (std::abs(m.probs()[i * nb + j] - pa * pb) > kStructTol)
                throw std::invalid_argument(scenario + ": " + a + " and " + b +
                                            " must be independent");
        }
}

ScenarioChannels build_berger_tung(const JointDist& joint, const AbelianGroup& g) {
    require_vars(joint, {"X", "Y", "U", "V"}, "berger_tung");
    check_chain(joint, "berger_tung");
    ScenarioChannels sc;
    sc.tag = Scenario::berger_tung;

    ChannelPair x;
    x.role = "x";
    x.orientation = Orientation::source;
    x.wc = shifted_channel(g, joint, {"V"}, "U", "zu");
    x.ws = shifted_channel(g, joint, {"X"}, "U", "zu");
    x.degraded = x.wc;
    x.dominant = x.ws;
    {
        auto pvx = conditional(joint, "X", "V");
        int nx = joint.size_of("X"), nv = joint.size_of("V");
        int q = g.order();
        x.lambda.assign(x.dominant.out_size() * x.degraded.out_size(), 0.0);
        for (int xi = 0; xi < nx; ++xi)
            for (int z = 0; z < q; ++z)
                for (int v = 0; v < nv; ++v)
                    x.lambda[(xi * q + z) * x.degraded.out_size() + v * q + z] =
                        pvx[xi * nv + v];
    }
    x.cap_wc_expected = log2q(g) - joint.cond_entropy({"U"}, {"V"});
    x.cap_ws_expected = log2q(g) - joint.cond_entropy({"U"}, {"X"});
    sc.pairs.push_back(std::move(x));

    ChannelPair y;
    y.role = "y";
    y.orientation = Orientation::source;
    y.wc = shifted_channel(g, joint, {}, "V", "zv");
    y.ws = shifted_channel(g, joint, {"Y"}, "V", "zv");
    y.degraded = y.wc;
    y.dominant = y.ws;
    y.lambda = projection_lambda(y.dominant.out(), y.degraded.out(), {1});
    y.cap_wc_expected = log2q(g) - joint.entropy({"V"});
    y.cap_ws_expected = log2q(g) - joint.cond_entropy({"V"}, {"Y"});
    sc.pairs.push_back(std::move(y));
    return sc;
}

ScenarioChannels build_km_sum(const JointDist& joint, const AbelianGroup& g) {
    require_vars(joint, {"X", "Y", "U", "V"}, "km_sum");
    check_chain(joint, "km_sum");
    JointDist ext = joint_with_sum(g, joint, "U", "V", "Wsum");
    ScenarioChannels sc;
    sc.tag = Scenario::km_sum;
    int q = g.order();
    Dmc wc = shifted_channel(g, ext, {}, "Wsum", "q");
    double cap_wc = log2q(g) - ext.entropy({"Wsum"});

    ChannelPair x;
    x.role = "x";
    x.orientation = Orientation::source;
    x.wc = wc;
    x.ws = shifted_channel(g, joint, {"X"}, "U", "zx");
    x.degraded = x.wc;
    x.dominant = x.ws;
    {
        auto pvx = conditional(joint, "X", "V");
        int nx = joint.size_of("X"), nv = joint.size_of("V");
        x.lambda.assign(x.dominant.out_size() * x.degraded.out_size(), 0.0);
        for (int xi = 0; xi < nx; ++xi)
            for (int z = 0; z < q; ++z)
                for (int qt = 0; qt < q; ++qt) {
                    int e = g.sub(qt, z);
                    x.lambda[(xi * q + z) * q + qt] = e < nv ? pvx[xi * nv + e] : 0.0;
                }
    }
    x.cap_wc_expected = cap_wc;
    x.cap_ws_expected = log2q(g) - joint.cond_entropy({"U"}, {"X"});
    sc.pairs.push_back(std::move(x));

    ChannelPair y;
    y.role = "y";
    y.orientation = Orientation::source;
    y.wc = wc;
    y.ws = shifted_channel(g, joint, {"Y"}, "V", "zy");
    y.degraded = y.wc;
    y.dominant = y.ws;
    {
        auto puy = conditional(joint, "Y", "U");
        int ny = joint.size_of("Y"), nu = joint.size_of("U");
        y.lambda.assign(y.dominant.out_size() * y.degraded.out_size(), 0.0);
        for (int yi = 0; yi < ny; ++yi)
            for (int z = 0; z < q; ++z)
                for (int qt = 0; qt < q; ++qt) {
                    int e = g.sub(qt, z);
                    y.lambda[(yi * q + z) * q + qt] = e < nu ? puy[yi * nu + e] : 0.0;
                }
    }
    y.cap_wc_expected = cap_wc;
    y.cap_ws_expected = log2q(g) - joint.cond_entropy({"V"}, {"Y"});
    sc.pairs.push_back(std::move(y));
    return sc;
}

ScenarioChannels build_mac(const JointDist& joint, const AbelianGroup& g) {
    require_vars(joint, {"X", "Y", "Z"}, "mac");
    check_independent(joint, "X", "Y", "mac");
    ScenarioChannels sc;
    sc.tag = Scenario::mac;

    ChannelPair x;
    x.role = "x";
    x.orientation = Orientation::channel;
    x.ws = shifted_channel(g, joint, {}, "X", "s");
    x.wc = shifted_channel(g, joint, {"Y", "Z"}, "X", "s");
    x.degraded = x.ws;
    x.dominant = x.wc;
    x.lambda = projection_lambda(x.dominant.out(), x.degraded.out(), {2});
    x.cap_wc_expected = log2q(g) - joint.cond_entropy({"X"}, {"Y", "Z"});
    x.cap_ws_expected = log2q(g) - joint.entropy({"X"});
    sc.pairs.push_back(std::move(x));

    ChannelPair y;
    y.role = "y";
    y.orientation = Orientation::channel;
    y.ws = shifted_channel(g, joint, {}, "Y", "s");
    y.wc = shifted_channel(g, joint, {"Z"}, "Y", "s");
    y.degraded = y.ws;
    y.dominant = y.wc;
    y.lambda = projection_lambda(y.dominant.out(), y.degraded.out(), {1});
    y.cap_wc_expected = log2q(g) - joint.cond_entropy({"Y"}, {"Z"});
    y.cap_ws_expected = log2q(g) - joint.entropy({"Y"});
    sc.pairs.push_back(std::move(y));
    return sc;
}

ScenarioChannels build_comp_mac(const JointDist& joint, const AbelianGroup& g) {
    require_vars(joint, {"X", "Y", "Z"}, "comp_mac");
    check_independent(joint, "X", "Y", "comp_mac");
    JointDist ext = joint_with_sum(g, joint, "X", "Y", "S");
    ScenarioChannels sc;
    sc.tag = Scenario::comp_mac;
    Dmc wc = shifted_channel(g, ext, {"Z"}, "S", "q");
    Dmc w_sigma = shifted_channel(g, ext, {}, "S", "r");
    double cap_wc = log2q(g) - ext.cond_entropy({"S"}, {"Z"});

    for (const char* role : {"x", "y"}) {
        ChannelPair p;
        p.role = role;
        p.orientation = Orientation::channel;
        p.wc = wc;
        p.ws = shifted_channel(g, joint, {}, role[0] == 'x' ? "X" : "Y", "r");
        p.degraded = w_sigma;
        p.dominant = wc;
        p.lambda = projection_lambda(p.dominant.out(), p.degraded.out(), {1});
        p.cap_wc_expected = cap_wc;
        p.cap_ws_expected =
            log2q(g) - joint.entropy({role[0] == 'x' ? std::string("X") : std::string("Y")});
        sc.pairs.push_back(std::move(p));
    }
    return sc;
}

ScenarioChannels build_broadcast(const JointDist& joint, const AbelianGroup& g) {
    require_vars(joint, {"U", "V", "X", "Y", "Z"}, "broadcast");
    int q = g.order();
    int nu = joint.size_of("U"), nv = joint.size_of("V"), nx = joint.size_of("X");
    int ny = joint.size_of("Y");
    if (nu > q || nv > q)
        throw std::invalid_argument("broadcast: auxiliary alphabet exceeds the group order");

    // x = g(u, v) must be deterministic on the support of p_UV
    ScenarioChannels sc;
    sc.tag = Scenario::broadcast;
    sc.g_table.assign(q * q, 0);
    sc.g_defined.assign(q * q, 0);
    std::vector<char>& defined = sc.g_defined;
    {
        JointDist uvx = joint.marginal({"U", "V", "X"});
        for (int u = 0; u < nu; ++u)
            for (int v = 0; v < nv; ++v) {
                double puv = 0.0;
                int best = 0;
                double bestp = -1.0;
                for (int xi = 0; xi < nx; ++xi) {
                    double p = uvx.p({u, v, xi});
                    puv += p;
                    if (p > bestp) {
                        bestp = p;
                        best = xi;
                    }
                }
                if (puv <= 0.0) continue;
                if (puv - bestp > kStructTol)
                    throw std::invalid_argument(
                        "broadcast: joint admits no deterministic x = g(u, v)");
                sc.g_table[u * q + v] = best;
                defined[u * q + v] = 1;
            }
        for (int i = 0; i < q * q; ++i)
            if (!defined[i]) ++sc.g_off_support;
    }
    if (joint.markov_violation({"Y", "Z"}, {"X"}, {"U", "V"}) > kStructTol)
        throw std::invalid_argument("broadcast: channel must depend on (u, v) only through x");
    if (joint.markov_violation({"U"}, {"X"}, {"V"}) > kStructTol)
        throw std::invalid_argument("broadcast: joint violates the U-X-V Markov chain");

    ChannelPair main;
    main.role = "main";
    main.orientation = Orientation::channel;
    main.ws = shifted_channel(g, joint, {"V"}, "U", "zu");
    main.wc = shifted_channel(g, joint, {"Y"}, "U", "zu");
    main.degraded = main.ws;
    main.dominant = main.wc;
    {
        JointDist uy = joint.marginal({"U", "Y"});
        JointDist uv = joint.marginal({"U", "V"});
        auto kernel = solve_degradation_kernel(uy.probs(), uv.probs(), nu, ny, nv);
        if (kernel) {
            const auto& kq = *kernel;
            main.lambda.assign(main.dominant.out_size() * main.degraded.out_size(), 0.0);
            for (int y = 0; y < ny; ++y)
                for (int z = 0; z < q; ++z)
                    for (int v = 0; v < nv; ++v)
                        main.lambda[(y * q + z) * main.degraded.out_size() + v * q + z] =
                            kq[y * nv + v];
        }
    }
    main.cap_wc_expected = log2q(g) - joint.cond_entropy({"U"}, {"Y"});
    main.cap_ws_expected = log2q(g) - joint.cond_entropy({"U"}, {"V"});
    sc.pairs.push_back(std::move(main));

    ChannelPair vb;
    vb.role = "v_branch";
    vb.orientation = Orientation::channel;
    vb.ws = shifted_channel(g, joint, {}, "V", "zv");
    vb.wc = shifted_channel(g, joint, {"Z"}, "V", "zv");
    vb.degraded = vb.ws;
    vb.dominant = vb.wc;
    vb.lambda = projection_lambda(vb.dominant.out(), vb.degraded.out(), {1});
    vb.cap_wc_expected = log2q(g) - joint.cond_entropy({"V"}, {"Z"});
    vb.cap_ws_expected = log2q(g) - joint.entropy({"V"});
    sc.pairs.push_back(std::move(vb));
    return sc;
}

ScenarioChannels build_multiple_description(const JointDist& joint, const AbelianGroup& g) {
    require_vars(joint, {"X", "U", "V", "W"}, "multiple_description");
    ScenarioChannels sc;
    sc.tag = Scenario::multiple_description;

    ChannelPair u;
    u.role = "u_part";
    u.orientation = Orientation::source;
    u.ws = shifted_channel(g, joint, {"X", "V"}, "U", "zu");
    u.wc = shifted_channel(g, joint, {}, "U", "zu");
    u.degraded = u.wc;
    u.dominant = u.ws;
    u.lambda = projection_lambda(u.dominant.out(), u.degraded.out(), {2});
    u.cap_wc_expected = log2q(g) - joint.entropy({"U"});
    u.cap_ws_expected = log2q(g) - joint.cond_entropy({"U"}, {"X", "V"});
    sc.pairs.push_back(std::move(u));

    ChannelPair w;
    w.role = "w_part";
    w.orientation = Orientation::source;
    w.ws = shifted_channel(g, joint, {"X", "U", "V"}, "W", "zw");
    w.wc = shifted_channel(g, joint, {"U", "V"}, "W", "zw");
    w.degraded = w.wc;
    w.dominant = w.ws;
    w.lambda = projection_lambda(w.dominant.out(), w.degraded.out(), {1, 2, 3});
    w.cap_wc_expected = log2q(g) - joint.cond_entropy({"W"}, {"U", "V"});
    w.cap_ws_expected = log2q(g) - joint.cond_entropy({"W"}, {"X", "U", "V"});
    sc.pairs.push_back(std::move(w));

    ChannelPair v;
    v.role = "v_part";
    v.orientation = Orientation::source;
    v.ws = shifted_channel(g, joint, {"X"}, "V", "zv");
    v.wc = shifted_channel(g, joint, {}, "V", "zv");
    v.degraded = v.wc;
    v.dominant = v.ws;
    v.lambda = projection_lambda(v.dominant.out(), v.degraded.out(), {1});
    v.cap_wc_expected = log2q(g) - joint.entropy({"V"});
    v.cap_ws_expected = log2q(g) - joint.cond_entropy({"V"}, {"X"});
    sc.pairs.push_back(std::move(v));
    return sc;
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::berger_tung: return "berger_tung";
        case Scenario::km_sum: return "km_sum";
        case Scenario::mac: return "mac";
        case Scenario::comp_mac: return "comp_mac";
        case Scenario::broadcast: return "broadcast";
        case Scenario::multiple_description: return "multiple_description";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& s) {
    if (s == "berger_tung") return Scenario::berger_tung;
    if (s == "km_sum") return Scenario::km_sum;
    if (s == "mac") return Scenario::mac;
    if (s == "comp_mac") return Scenario::comp_mac;
    if (s == "broadcast") return Scenario::broadcast;
    if (s == "multiple_description") return Scenario::multiple_description;
    throw std::invalid_argument("unknown scenario " + s);
}

const ChannelPair& ScenarioChannels::pair(const std::string& role) const {
    for (const auto& p : pairs)
        if (p.role == role) return p;
    throw std::invalid_argument("scenario has no pair with role " + role);
}

DegradationResult verify_degradation(const ChannelPair& pair) {
    DegradationResult res;
    const Dmc& deg = pair.degraded;
    const Dmc& dom = pair.dominant;
    if (deg.q() != dom.q())
        throw std::invalid_argument("degradation: input group mismatch");
    if (pair.lambda.empty()) {
        res.ok = false;
        res.max_error = std::numeric_limits<double>::infinity();
        return res;
    }
    if (static_cast<int>(pair.lambda.size()) != dom.out_size() * deg.out_size())
        throw std::invalid_argument("degradation: kernel shape mismatch");

    int q = deg.q();
    res.certificate.assign(q * deg.out_size(), 0.0);
    for (int m = 0; m < q; ++m)
        for (int yo = 0; yo < dom.out_size(); ++yo) {
            double p = dom.w(m, yo);
            if (p == 0.0) continue;
            for (int yd = 0; yd < deg.out_size(); ++yd)
                res.certificate[m * deg.out_size() + yd] += p * pair.lambda[yo * deg.out_size() + yd];
        }
    res.max_error = 0.0;
    for (int m = 0; m < q; ++m)
        for (int yd = 0; yd < deg.out_size(); ++yd)
            res.max_error = std::max(
                res.max_error, std::abs(res.certificate[m * deg.out_size() + yd] - deg.w(m, yd)));
    res.ok = res.max_error <= kDegradeTol;
    return res;
}

ScenarioChannels build_scenario_channels(Scenario tag, const JointDist& joint,
                                         const AbelianGroup& group) {
    switch (tag) {
        case Scenario::berger_tung: return build_berger_tung(joint, group);
        case Scenario::km_sum: return build_km_sum(joint, group);
        case Scenario::mac: return build_mac(joint, group);
        case Scenario::comp_mac: return build_comp_mac(joint, group);
        case Scenario::broadcast: return build_broadcast(joint, group);
        case Scenario::multiple_description: return build_multiple_description(joint, group);
    }
    throw std::invalid_argument("unknown scenario tag");
}

std::string pair_content_hash(const ChannelPair& pair) {
    std::string s = pair.role + "|" + to_string(pair.orientation) + "|";
    char buf[32];
    auto add_dmc = [&](const Dmc& d) {
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
        s += "|";
    };
    add_dmc(pair.wc);
    add_dmc(pair.ws);
    return hash_hex(content_hash(s));
}

std::optional<std::vector<double>> solve_degradation_kernel(const std::vector<double>& p_uy,
                                                            const std::vector<double>& p_uv,
                                                            int nu, int ny, int nv) {
    int nx = ny * nv;        // unknowns, row-major [y][v]
    int rows = nu * nv + ny; // matching constraints plus stochasticity
    std::vector<double> a(rows * nx, 0.0), b(rows, 0.0);
    for (int u = 0; u < nu; ++u)
        for (int v = 0; v < nv; ++v) {
            int r = u * nv + v;
            for (int y = 0; y < ny; ++y) a[r * nx + y * nv + v] = p_uy[u * ny + y];
            b[r] = p_uv[u * nv + v];
        }
    for (int y = 0; y < ny; ++y) {
        int r = nu * nv + y;
        for (int v = 0; v < nv; ++v) a[r * nx + y * nv + v] = 1.0;
        b[r] = 1.0;
    }

    // phase-1 simplex: min sum of artificials subject to Ax + s = b
    int width = nx + rows + 1;
    std::vector<double> t(rows * width, 0.0);
    std::vector<int> basis(rows);
    for (int r = 0; r < rows; ++r) {
        for (int j = 0; j < nx; ++j) t[r * width + j] = a[r * nx + j];
        t[r * width + nx + r] = 1.0;
        t[r * width + width - 1] = b[r];
        basis[r] = nx + r;
    }
    std::vector<double> obj(width, 0.0);
    for (int j = 0; j < width; ++j) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) s += t[r * width + j];
        obj[j] = s;
    }
    for (int r = 0; r < rows; ++r) obj[nx + r] -= 1.0;  // reduced costs of artificials

    constexpr double kPivTol = 1e-11;
    for (int iter = 0; iter < 5000; ++iter) {
        int enter = -1;
        for (int j = 0; j < nx; ++j) {  // Bland: first improving structural column
            if (obj[j] > kPivTol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;
        int leave = -1;
        double best = 0.0;
        for (int r = 0; r < rows; ++r) {
            double piv = t[r * width + enter];
            if (piv <= kPivTol) continue;
            double ratio = t[r * width + width - 1] / piv;
            if (leave < 0 || ratio < best - 1e-15 ||
                (std::abs(ratio - best) <= 1e-15 && basis[r] < basis[leave]))
                best = ratio, leave = r;
        }
        if (leave < 0) return std::nullopt;
        double piv = t[leave * width + enter];
        for (int j = 0; j < width; ++j) t[leave * width + j] /= piv;
        for (int r = 0; r < rows; ++r) {
            if (r == leave) continue;
            double f = t[r * width + enter];
            if (f == 0.0) continue;
            for (int j = 0; j < width; ++j) t[r * width + j] -= f * t[leave * width + j];
        }
        double f = obj[enter];
        for (int j = 0; j < width; ++j) obj[j] -= f * t[leave * width + j];
        basis[leave] = enter;
    }

    double infeas = 0.0;
    for (int r = 0; r < rows; ++r)
        if (basis[r] >= nx) infeas += std::max(t[r * width + width - 1], 0.0);
    if (infeas > 1e-9) return std::nullopt;

    std::vector<double> x(nx, 0.0);
    for (int r = 0; r < rows; ++r)
        if (basis[r] < nx) x[basis[r]] = std::max(t[r * width + width - 1], 0.0);

    // polish: least-squares correction on the basic columns against the
    // original coefficients, removing accumulated tableau drift
    std::vector<int> cols;
    for (int r = 0; r < rows; ++r)
        if (basis[r] < nx) cols.push_back(basis[r]);
    if (!cols.empty()) {
        int k = static_cast<int>(cols.size());
        std::vector<double> resid(rows);
        for (int r = 0; r < rows; ++r) {
            double s = b[r];
            for (int j = 0; j < nx; ++j) s -= a[r * nx + j] * x[j];
            resid[r] = s;
        }
        std::vector<double> m(k * (k + 1), 0.0);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                double s = 0.0;
                for (int r = 0; r < rows; ++r) s += a[r * nx + cols[i]] * a[r * nx + cols[j]];
                m[i * (k + 1) + j] = s;
            }
            double s = 0.0;
            for (int r = 0; r < rows; ++r) s += a[r * nx + cols[i]] * resid[r];
            m[i * (k + 1) + k] = s;
        }
        for (int c = 0; c < k; ++c) {  // gaussian elimination with partial pivoting
            int piv = c;
            for (int r = c + 1; r < k; ++r)
                if (std::abs(m[r * (k + 1) + c]) > std::abs(m[piv * (k + 1) + c])) piv = r;
            if (std::abs(m[piv * (k + 1) + c]) < 1e-14) continue;
            if (piv != c)
                for (int j = 0; j <= k; ++j) std::swap(m[c * (k + 1) + j], m[piv * (k + 1) + j]);
            for (int r = 0; r < k; ++r) {
                if (r == c) continue;
                double f = m[r * (k + 1) + c] / m[c * (k + 1) + c];
                if (f == 0.0) continue;
                for (int j = 0; j <= k; ++j) m[r * (k + 1) + j] -= f * m[c * (k + 1) + j];
            }
        }
        std::vector<double> x2 = x;
        for (int i = 0; i < k; ++i) {
            double d = m[i * (k + 1) + i];
            if (std::abs(d) >= 1e-14) x2[cols[i]] += m[i * (k + 1) + k] / d;
        }
        auto max_resid = [&](const std::vector<double>& xx) {
            double worst = 0.0;
            for (int r = 0; r < rows; ++r) {
                double s = b[r];
                for (int j = 0; j < nx; ++j) s -= a[r * nx + j] * xx[j];
                worst = std::max(worst, std::abs(s));
            }
            return worst;
        };
        bool nonneg = true;
        for (double v : x2)
            if (v < -1e-12) nonneg = false;
        if (nonneg && max_resid(x2) < max_resid(x)) x = x2;
    }
    for (double& v : x) v = std::max(v, 0.0);
    return x;
}

}  // namespace gpolar
