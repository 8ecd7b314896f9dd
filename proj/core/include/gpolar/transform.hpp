#pragma once

#include <vector>

#include "gpolar/group.hpp"

namespace gpolar {

// Length-N sequence of group elements, N a power of two.
struct Block {
    const AbelianGroup* group = nullptr;
    std::vector<int> data;

    int size() const { return static_cast<int>(data.size()); }
};

bool is_power_of_two(int n);
int log2_exact(int n);

// Bit-reversal permutation of size N = 2^n; an involution.
std::vector<int> bit_reversal(int n);

// s = aG: n stages of (u1, u2) -> (u1+u2, u2) butterflies composed with the
// bit-reversal reordering. Index sets elsewhere are always in the transform's
// input order (post-permutation successive processing order).
Block transform(const Block& a);

// Exact inverse of transform, via subtraction butterflies.
Block inverse_transform(const Block& s);

// Dense generator matrix row i, column j over {0,1}: x_j = sum_i u_i * G[i][j]
// with group addition. Intended as a test oracle for small N.
std::vector<std::vector<int>> generator_matrix(int n);

}  // namespace gpolar
