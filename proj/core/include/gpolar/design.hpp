#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gpolar/dmc.hpp"
#include "gpolar/group.hpp"

namespace gpolar {

enum class EstimationMode { exact, monte_carlo };

std::string to_string(EstimationMode m);
EstimationMode estimation_mode_from_string(const std::string& s);

// Per-index reliability estimates for the synthesized channels of one Dmc.
struct IndexParams {
    int n = 0;
    EstimationMode mode = EstimationMode::exact;
    long trials = 0;                     // monte-carlo sample count, 0 for exact
    std::vector<std::vector<double>> zd; // [index][difference]
    std::vector<std::vector<double>> zh; // [index][subgroup lattice id]
    long denominator_underflows = 0;     // resampled monte-carlo draws

    int block_length() const { return 1 << n; }
};

// mode=exact enumerates the synthesized channels directly; requires
// N <= 8, |output| <= 4 and q^N * |output|^N <= 2^26. mode=monte_carlo
// estimates Z_d via sqrt-likelihood-ratio samples from genie-aided SC passes;
// requires trials >= 1000. Estimates are clipped to their valid ranges.
IndexParams estimate_index_params(const Dmc& w, int n, EstimationMode mode, long trials,
                                  uint64_t seed);

// Which side of a channel pair carries the big (degraded) code.
// source: source-coding shape, the channel-code side W_c is degraded, its
//   level is the cell top H and the message is decoded over T_H.
// channel: channel-coding shape, the shaping side W_s is degraded, its level
//   is the cell top H and the decoder resolves everything above the W_c level.
enum class Orientation { source, channel };

std::string to_string(Orientation o);

struct PromotionEvent {
    int index;
    int from_k;  // lattice id before promotion
    int h;       // cell top
    int to_k;    // from_k intersected with h
};

// Per-index nested-code cells. cells[i] = (H, K) lattice ids with K <= H.
struct Partition {
    std::vector<std::pair<int, int>> cells;
    std::vector<PromotionEvent> promotions;

    std::map<std::pair<int, int>, std::vector<int>> cell_sets() const;
};

// Classify each index by the minimal qualifying subgroup on each side
// (channel side: Z^H < delta_c; source side: Z^K < 1 - delta_s; no qualifier
// means G). The degraded side's level becomes the cell top per orientation;
// K !<= H is resolved by K -> K∩H with a logged PromotionEvent.
Partition partition_indices(const AbelianGroup& group, const IndexParams& params_c,
                            const IndexParams& params_s, double delta_c, double delta_s,
                            Orientation orientation);

// Minimal subgroup with zh[S] below the threshold under the canonical
// tie-break; G when nothing qualifies.
int minimal_qualifying_level(const AbelianGroup& g, const std::vector<double>& zh,
                             double threshold);

// A designed nested polar code, self-contained for encode/decode replay.
struct CodeSpec {
    std::vector<int> group_factors;
    int n = 0;
    std::string scenario;
    std::string role;
    Orientation orientation = Orientation::source;
    double delta_c = 0.0;
    double delta_s = 0.0;
    uint64_t seed = 0;  // master seed the dither and shared values derive from
    EstimationMode mode = EstimationMode::monte_carlo;
    long design_trials = 0;
    std::string pair_hash;  // content hash of the channel pair this was built for

    Partition partition;
    std::vector<int> dither;    // length N
    std::vector<int> shared_k;  // length N, element of cell K at each index

    // Extra layer between the cell top H and a per-terminal shaping level S:
    // used when the decoded object is a sum of codewords while shaping runs
    // per terminal. Empty for the standard two-layer codes.
    std::vector<int> shaping_level;  // lattice ids, H_i <= S_i
    std::vector<int> shared_gap;     // element of T_{H_i <= S_i}

    int block_length() const { return 1 << n; }
};

// R = sum over cells |A_{H,K}|/N * log2(|H|/|K|), in bits per symbol.
double code_rate(const AbelianGroup& group, const CodeSpec& spec);

// Versioned JSON round-trip. Reload reproduces identical behavior.
std::string codespec_to_json(const AbelianGroup& group, const CodeSpec& spec);
CodeSpec codespec_from_json(const std::string& text);

// FNV-1a over a canonical rendering; stable across runs and platforms.
uint64_t content_hash(const std::string& canonical);
std::string hash_hex(uint64_t h);

}  // namespace gpolar
