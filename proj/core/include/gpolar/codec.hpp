#pragma once

#include <vector>

#include "gpolar/design.hpp"
#include "gpolar/dmc.hpp"
#include "gpolar/group.hpp"
#include "gpolar/rng.hpp"

namespace gpolar {

// Per-index candidate sets for the SC walks. Index i of the outer vector
// lists the admissible values of a_i in increasing order.
using CandidateSets = std::vector<std::vector<int>>;

// Elements whose bottom layer of the (K_i, H_i) decomposition equals
// fixed_k[i]: the resolution set of a party that knows only the shared value.
CandidateSets candidates_bottom(const AbelianGroup& g, const Partition& part,
                                const std::vector<int>& fixed_k);

// Elements with bottom fixed_k[i] and middle msg[i]: the resolution set of a
// party that also knows the per-index message content.
CandidateSets candidates_bottom_mid(const AbelianGroup& g, const Partition& part,
                                    const std::vector<int>& fixed_k,
                                    const std::vector<int>& msg);

// Middle layer of each a_i under the partition cells; the message content.
std::vector<int> block_middles(const AbelianGroup& g, const Partition& part,
                               const std::vector<int>& a);

struct SampleResult {
    std::vector<int> a;
    int zero_mass_events = 0;  // indices where the restricted posterior had no mass
};

// Sequential posterior sampling: at index i, draw a_i from the SC likelihood
// row restricted to candidates[i]. Zero restricted mass falls back to a
// uniform draw over the candidates and is counted.
SampleResult sc_sample(const Dmc& w, int n, const std::vector<int>& obs,
                       const CandidateSets& candidates, Rng& rng);

struct MapResult {
    std::vector<int> a;
    bool failed = false;     // some row had zero mass on the whole group
    int failed_index = -1;   // first such index
    int empty_mass_events = 0;  // indices where the restriction alone had no mass
};

// Sequential MAP: at index i, pick the likelihood argmax over candidates[i],
// smallest value on ties. A restriction with no mass picks the smallest
// candidate and is counted; zero mass over the whole group marks failure but
// decoding continues.
MapResult sc_map(const Dmc& w, int n, const std::vector<int>& obs,
                 const CandidateSets& candidates);

struct EncodeResult {
    std::vector<int> a;               // transform-domain block
    std::vector<int> message;         // middle layer per index
    std::vector<int> codeword;        // x = aG
    std::vector<int> reconstruction;  // dither - aG
    int zero_mass_events = 0;
};

struct DecodeOutcome {
    std::vector<int> a_hat;
    std::vector<int> message;         // middle layer of a_hat
    std::vector<int> reconstruction;  // dither - a_hat G
    bool failed = false;
    int failed_index = -1;
    int empty_mass_events = 0;
};

// Source-side encoder: samples a over the shared-bottom cosets from the
// posterior of ws given obs; the sampled middles become the message.
EncodeResult source_encode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& ws,
                           const std::vector<int>& obs, Rng& rng);

// Source-side decoder: knows bottoms and message middles, resolves the tops.
DecodeOutcome source_decode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& wc,
                            const std::vector<int>& obs, const std::vector<int>& message);

// Channel-side encoder: plants the message into the middles and samples the
// top layer from the shaping posterior of ws given obs.
EncodeResult channel_encode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& ws,
                            const std::vector<int>& obs, const std::vector<int>& message,
                            Rng& rng);

// Channel-side decoder: knows bottoms only; the recovered middles are the
// message estimate.
DecodeOutcome channel_decode(const CodeSpec& spec, const AbelianGroup& g, const Dmc& wc,
                             const std::vector<int>& obs);

}  // namespace gpolar
