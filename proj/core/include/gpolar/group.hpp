#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gpolar {

// Subgroup of an AbelianGroup, identified by its position in the parent's
// lattice. Members are sorted canonical element indices; mask is the same
// set as a bitset (q <= 64 so one word suffices).
struct Subgroup {
    std::vector<int> members;
    uint64_t mask = 0;
    int order() const { return static_cast<int>(members.size()); }
};

// Finite Abelian group as a product of cyclic factors. Elements are indices
// 0..q-1 in mixed-radix order over the factors; 0 is the identity. The full
// subgroup lattice and all pairwise transversals are precomputed.
class AbelianGroup {
  public:
    static constexpr int kMaxOrder = 64;

    explicit AbelianGroup(std::vector<int> factors);

    int order() const { return q_; }
    const std::vector<int>& factors() const { return factors_; }

    int add(int a, int b) const { return add_[a * q_ + b]; }
    int neg(int a) const { return neg_[a]; }
    int sub(int a, int b) const { return add_[a * q_ + neg_[b]]; }

    std::vector<int> element_tuple(int g) const;
    std::string element_name(int g) const;
    std::string name() const;

    // Lattice, ordered by (order, lexicographic member list). Index 0 is {0},
    // the last index is G itself.
    const std::vector<Subgroup>& subgroups() const { return subgroups_; }
    int num_subgroups() const { return static_cast<int>(subgroups_.size()); }
    int trivial_subgroup() const { return 0; }
    int full_subgroup() const { return num_subgroups() - 1; }
    bool subgroup_contains(int h, int g) const { return (subgroups_[h].mask >> g) & 1; }
    bool subgroup_leq(int k, int h) const {
        return (subgroups_[k].mask & subgroups_[h].mask) == subgroups_[k].mask;
    }
    int subgroup_intersect(int a, int b) const;
    int subgroup_index(uint64_t mask) const;  // -1 when the mask is not a subgroup

    // Transversal of K in H under the minimal-representative rule; requires
    // K <= H. Sorted; size |H|/|K|. transversal(H, full_subgroup()) is T_H.
    const std::vector<int>& transversal(int k, int h) const;

    struct Decomp {
        int in_k;      // component in K
        int mid;       // component in T_{K<=H}
        int top;       // component in T_H
    };
    // g = in_k + mid + top, the unique such triple for the fixed transversals.
    Decomp coset_decompose(int g, int k, int h) const;

    // Representative of g + H under the minimal-representative rule.
    int coset_rep(int g, int h) const;

  private:
    std::vector<int> factors_;
    int q_;
    std::vector<int> add_;
    std::vector<int> neg_;
    std::vector<Subgroup> subgroups_;
    std::vector<std::vector<int>> transversals_;  // [k * S + h], empty when K !<= H

    void enumerate_subgroups();
    void build_transversals();
};

AbelianGroup build_group(const std::vector<int>& factors);

}  // namespace gpolar
