#include "gpolar/codec.hpp"

#include <cmath>
#include <stdexcept>

#include "gpolar/sc.hpp"
#include "gpolar/transform.hpp"

namespace gpolar {

namespace {

void check_block(const Partition& part, const std::vector<int>& v, const char* what) {
    if (v.size() != part.cells.size())
        throw std::invalid_argument(std::string(what) + ": length does not match the partition");
}

std::vector<int> apply_transform(const AbelianGroup& g, const std::vector<int>& a) {
    Block b{&g, a};
    return transform(b).data;
}

std::vector<int> dither_minus(const AbelianGroup& g, const std::vector<int>& dither,
                              const std::vector<int>& x) {
    std::vector<int> r(x.size());
    for (size_t i = 0; i < x.size(); ++i) r[i] = g.sub(dither[i], x[i]);
    return r;
}

}  // namespace

CandidateSets candidates_bottom(const AbelianGroup& g, const Partition& part,
                                const std::vector<int>& fixed_k) {
    check_block(part, fixed_k, "candidates_bottom");
    CandidateSets out(part.cells.size());
    for (size_t i = 0; i < part.cells.size(); ++i) {
        auto [h, k] = part.cells[i];
        for (int a = 0; a < g.order(); ++a)
            if (g.coset_decompose(a, k, h).in_k == fixed_k[i]) out[i].push_back(a);
    }
    return out;
}

CandidateSets candidates_bottom_mid(const AbelianGroup& g, const Partition& part,
                                    const std::vector<int>& fixed_k,
                                    const std::vector<int>& msg) {
    check_block(part, fixed_k, "candidates_bottom_mid");
    check_block(part, msg, "candidates_bottom_mid");
    CandidateSets out(part.cells.size());
    for (size_t i = 0; i < part.cells.size(); ++i) {
        auto [h, k] = part.cells[i];
        for (int a = 0; a < g.order(); ++a) {
            AbelianGroup::Decomp d = g.coset_decompose(a, k, h);
            if (d.in_k == fixed_k[i] && d.mid == msg[i]) out[i].push_back(a);
        }
    }
    return out;
}

std::vector<int> block_middles(const AbelianGroup& g, const Partition& part,
                               const std::vector<int>& a) {
    check_block(part, a, "block_middles");
    std::vector<int> mids(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        auto [h, k] = part.cells[i];
        mids[i] = g.coset_decompose(a[i], k, h).mid;
    }
    return mids;
}

SampleResult sc_sample(const Dmc& w, int n, const std::vector<int>& obs,
                       const CandidateSets& candidates, Rng& rng) {
    int size = 1 << n;
    if (static_cast<int>(candidates.size()) != size)
        throw std::invalid_argument("sc_sample: candidate sets do not match the block length");
    ScEngine eng(w.group(), n, leaf_logliks(w, obs), true);
    SampleResult res;
    res.a.resize(size);
    std::vector<double> weights;
    for (int i = 0; i < size; ++i) {
        const std::vector<double>& row = eng.index_loglik(i);
        const std::vector<int>& cand = candidates[i];
        weights.assign(cand.size(), 0.0);
        double total = 0.0;
        for (size_t c = 0; c < cand.size(); ++c) {
            double ll = row[cand[c]];
            double p = std::isinf(ll) ? 0.0 : std::exp(ll);
            weights[c] = p;
            total += p;
        }
        int pick;
        if (total <= 0.0) {
            ++res.zero_mass_events;
            pick = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(cand.size())));
        } else {
            pick = rng.weighted_pick(weights, total);
        }
        res.a[i] = cand[pick];
        eng.commit(i, res.a[i]);
    }
    return res;
}

MapResult sc_map(const Dmc& w, int n, const std::vector<int>& obs,
                 const CandidateSets& candidates) {
    int size = 1 << n;
    if (static_cast<int>(candidates.size()) != size)
        throw std::invalid_argument("sc_map: candidate sets do not match the block length");
    ScEngine eng(w.group(), n, leaf_logliks(w, obs), true);
    MapResult res;
    res.a.resize(size);
    for (int i = 0; i < size; ++i) {
        const std::vector<double>& row = eng.index_loglik(i);
        if (!res.failed && ScEngine::all_zero(row)) {
            res.failed = true;
            res.failed_index = i;
        }
        const std::vector<int>& cand = candidates[i];
        int best = cand[0];
        double best_ll = row[cand[0]];
        for (size_t c = 1; c < cand.size(); ++c)
            if (row[cand[c]] > best_ll) {
                best_ll = row[cand[c]];
                best = cand[c];
            }
        if (std::isinf(best_ll) && best_ll < 0) ++res.empty_mass_events;
        res.a[i] = best;
        eng.commit(i, best);
    }
    return res;
}

EncodeResult source_encode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& ws,
                           const std::vector<int>& obs, Rng& rng) {
    CandidateSets cand = candidates_bottom(g, spec.partition, spec.shared_k);
    SampleResult s = sc_sample(ws, spec.n, obs, cand, rng);
    EncodeResult res;
    res.a = std::move(s.a);
    res.zero_mass_events = s.zero_mass_events;
    res.message = block_middles(g, spec.partition, res.a);
    res.codeword = apply_transform(g, res.a);
    res.reconstruction = dither_minus(g, spec.dither, res.codeword);
    return res;
}

DecodeOutcome source_decode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& wc,
                            const std::vector<int>& obs, const std::vector<int>& message) {
    CandidateSets cand = candidates_bottom_mid(g, spec.partition, spec.shared_k, message);
    MapResult m = sc_map(wc, spec.n, obs, cand);
    DecodeOutcome res;
    res.a_hat = std::move(m.a);
    res.failed = m.failed;
    res.failed_index = m.failed_index;
    res.empty_mass_events = m.empty_mass_events;
    res.message = block_middles(g, spec.partition, res.a_hat);
    res.reconstruction = dither_minus(g, spec.dither, apply_transform(g, res.a_hat));
    return res;
}

EncodeResult channel_encode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& ws,
                            const std::vector<int>& obs, const std::vector<int>& message,
                            Rng& rng) {
    CandidateSets cand = candidates_bottom_mid(g, spec.partition, spec.shared_k, message);
    SampleResult s = sc_sample(ws, spec.n, obs, cand, rng);
    EncodeResult res;
    res.a = std::move(s.a);
    res.zero_mass_events = s.zero_mass_events;
    res.message = message;
    res.codeword = apply_transform(g, res.a);
    res.reconstruction = dither_minus(g, spec.dither, res.codeword);
    return res;
}

DecodeOutcome channel_decode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& wc,
                             const std::vector<int>& obs) {
    CandidateSets cand = candidates_bottom(g, spec.partition, spec.shared_k);
    MapResult m = sc_map(wc, spec.n, obs, cand);
    DecodeOutcome res;
    res.a_hat = std::move(m.a);
    res.failed = m.failed;
    res.failed_index = m.failed_index;
    res.empty_mass_events = m.empty_mass_events;
    res.message = block_middles(g, spec.partition, res.a_hat);
    res.reconstruction = dither_minus(g, spec.dither, apply_transform(g, res.a_hat));
    return res;
}

}  // namespace gpolar
