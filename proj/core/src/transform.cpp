#include "gpolar/transform.hpp"

#include <stdexcept>

namespace gpolar {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(int n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("block length must be a power of two");
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

std::vector<int> bit_reversal(int n) {
    int size = 1 << n;
    std::vector<int> perm(size);
    for (int i = 0; i < size; ++i) {
        int r = 0;
        for (int b = 0; b < n; ++b)
            if (i & (1 << b)) r |= 1 << (n - 1 - b);
        perm[i] = r;
    }
    return perm;
}

namespace {

void check_block(const Block& b) {
    if (!b.group) throw std::invalid_argument("block: no group");
    if (!is_power_of_two(b.size())) throw std::invalid_argument("block: length not a power of two");
    for (int v : b.data)
        if (v < 0 || v >= b.group->order()) throw std::invalid_argument("block: element out of range");
}

// [T(pair sums), T(pair seconds)]
void forward_rec(const AbelianGroup& g, std::vector<int>& v) {
    int n = static_cast<int>(v.size());
    if (n == 1) return;
    std::vector<int> a(n / 2), b(n / 2);
    for (int k = 0; k < n / 2; ++k) {
        a[k] = g.add(v[2 * k], v[2 * k + 1]);
        b[k] = v[2 * k + 1];
    }
    forward_rec(g, a);
    forward_rec(g, b);
    std::copy(a.begin(), a.end(), v.begin());
    std::copy(b.begin(), b.end(), v.begin() + n / 2);
}

void inverse_rec(const AbelianGroup& g, std::vector<int>& v) {
    int n = static_cast<int>(v.size());
    if (n == 1) return;
    std::vector<int> a(v.begin(), v.begin() + n / 2), b(v.begin() + n / 2, v.end());
    inverse_rec(g, a);
    inverse_rec(g, b);
    for (int k = 0; k < n / 2; ++k) {
        v[2 * k + 1] = b[k];
        v[2 * k] = g.sub(a[k], b[k]);
    }
}

}  // namespace

Block transform(const Block& a) {
    check_block(a);
    Block s = a;
    forward_rec(*a.group, s.data);
    return s;
}

Block inverse_transform(const Block& s) {
    check_block(s);
    Block a = s;
    inverse_rec(*s.group, a.data);
    return a;
}

std::vector<std::vector<int>> generator_matrix(int n) {
    int size = 1 << n;
    auto rev = bit_reversal(n);
    std::vector<std::vector<int>> g(size, std::vector<int>(size, 0));
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) g[i][j] = ((j & ~rev[i]) == 0) ? 1 : 0;
    return g;
}

}  // namespace gpolar
