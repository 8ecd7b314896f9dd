#pragma once

#include <limits>
#include <vector>

#include "gpolar/dmc.hpp"
#include "gpolar/group.hpp"

namespace gpolar {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Observation slot marking a symbol no channel output can explain; its leaf
// row is identically -inf.
constexpr int kImpossibleObs = -1;

// Successive-cancellation recursion over the butterfly structure of
// transform(): per-index log-likelihood vectors over the group, given all
// earlier indices. One instance serves one block; O(q^2 N log N) per block
// via per-branch rows memoized on their current phase and partial-sum
// commits at pair boundaries.
//
// With normalize=false the returned values are the exact synthesized-channel
// log-likelihoods log W_N^(i)(obs, prefix | a). With normalize=true (default)
// node values are carried in the linear domain with per-node rescaling, so no
// transcendental work happens inside the recursion; the returned vector is
// shifted so its maximum is 0, and an entry whose rescaled probability
// underflows to zero comes back as -inf.
class ScEngine {
  public:
    // leaf_loglik is row-major [obs position][group element], log W(y_j | g).
    ScEngine(const AbelianGroup& group, int n, std::vector<double> leaf_loglik,
             bool normalize = true);

    int block_length() const { return size_; }

    // Log-likelihood vector for index i; requires exactly i committed decisions.
    const std::vector<double>& index_loglik(int i);

    // Fix the value of index i and fold it into the partial sums.
    void commit(int i, int value);

    // Codeword implied by the committed decisions; valid once all N are set.
    std::vector<int> codeword() const;

    static bool all_zero(const std::vector<double>& loglik);

  private:
    struct Slot {
        int phase = -1;
        std::vector<double> val;
    };

    const AbelianGroup& group_;
    int n_, size_, q_;
    double log_q_;
    bool normalize_;
    std::vector<double> leaf_;               // size_ * q_
    std::vector<double> leaf_lin_;           // normalized mode: exp(leaf_), row max 1
    std::vector<double> out_row_;            // normalized mode: log-domain return buffer
    std::vector<std::vector<int>> decided_;  // [depth][branch * N_d + phase]
    std::vector<std::vector<Slot>> memo_;    // [depth][branch], keyed by phase
    int committed_ = 0;

    const std::vector<double>& compute(int depth, int branch, int phase);
    void propagate(int depth, int branch, int phase);
};

// Leaf log-likelihood matrix for a block of flattened observations.
std::vector<double> leaf_logliks(const Dmc& w, const std::vector<int>& obs);

// Test-scale reference: exact posterior of index i by enumerating all
// completions u_{i+1..N-1}; proportional to W_N^(i)(obs, prefix | a).
// Cost q^N, intended for N <= 8 at small q.
std::vector<double> brute_index_likelihood(const Dmc& w, int n, const std::vector<int>& obs,
                                           const std::vector<int>& prefix, int index);

}  // namespace gpolar
