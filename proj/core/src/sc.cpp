#include "gpolar/sc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "gpolar/transform.hpp"

namespace gpolar {

ScEngine::ScEngine(const AbelianGroup& group, int n, std::vector<double> leaf_loglik,
                   bool normalize)
    : group_(group),
      n_(n),
      size_(1 << n),
      q_(group.order()),
      log_q_(std::log(static_cast<double>(group.order()))),
      normalize_(normalize),
      leaf_(std::move(leaf_loglik)) {
    if (static_cast<int>(leaf_.size()) != size_ * q_)
        throw std::invalid_argument("sc: leaf matrix size mismatch");
    decided_.assign(n_ + 1, std::vector<int>(size_, -1));
    memo_.resize(n_ + 1);
    for (int d = 0; d <= n_; ++d) memo_[d].resize(size_t(1) << d);
    if (normalize_) {
        // linear-domain leaves, each row rescaled to max 1 so products over
        // deep blocks stay in range
        leaf_lin_.resize(leaf_.size());
        for (int j = 0; j < size_; ++j) {
            double m = kNegInf;
            for (int g = 0; g < q_; ++g) m = std::max(m, leaf_[j * q_ + g]);
            for (int g = 0; g < q_; ++g) {
                double v = leaf_[j * q_ + g];
                leaf_lin_[j * q_ + g] = v == kNegInf ? 0.0 : std::exp(v - m);
            }
        }
    }
}

const std::vector<double>& ScEngine::compute(int depth, int branch, int phase) {
    Slot& slot = memo_[depth][branch];
    if (slot.phase == phase) return slot.val;
    slot.phase = phase;
    slot.val.assign(q_, normalize_ ? 0.0 : kNegInf);

    if (depth == n_) {
        const double* leaf = normalize_ ? &leaf_lin_[branch * q_] : &leaf_[branch * q_];
        for (int g = 0; g < q_; ++g) slot.val[g] = leaf[g];
        return slot.val;
    }

    int psi = phase >> 1;
    const std::vector<double>& left = compute(depth + 1, 2 * branch, psi);
    const std::vector<double>& right = compute(depth + 1, 2 * branch + 1, psi);
    bool check = (phase & 1) == 0;
    int u_prev = 0;
    if (!check) {
        int n_d = size_ >> depth;
        u_prev = decided_[depth][branch * n_d + phase - 1];
        if (u_prev < 0) throw std::logic_error("sc: decision order violated");
    }

    if (normalize_) {
        // linear domain: check sum_e left(g+e) right(e), variable
        // left(u_prev+g) right(g); constants drop out in the rescale
        if (check) {
            for (int g = 0; g < q_; ++g) {
                double acc = 0.0;
                for (int e = 0; e < q_; ++e) acc += left[group_.add(g, e)] * right[e];
                slot.val[g] = acc;
            }
        } else {
            for (int g = 0; g < q_; ++g)
                slot.val[g] = left[group_.add(u_prev, g)] * right[g];
        }
        double m = *std::max_element(slot.val.begin(), slot.val.end());
        if (m > 0.0)
            for (double& v : slot.val) v /= m;
        return slot.val;
    }

    if (check) {
        // check node: (1/q) sum_e left(g+e) right(e)
        for (int g = 0; g < q_; ++g) {
            double m = kNegInf;
            for (int e = 0; e < q_; ++e) {
                double t = left[group_.add(g, e)] + right[e];
                if (t > m) m = t;
            }
            if (m == kNegInf) continue;
            double acc = 0.0;
            for (int e = 0; e < q_; ++e) {
                double t = left[group_.add(g, e)] + right[e];
                if (t != kNegInf) acc += std::exp(t - m);
            }
            slot.val[g] = m + std::log(acc) - log_q_;
        }
    } else {
        // variable node: (1/q) left(u_prev + g) right(g)
        for (int g = 0; g < q_; ++g) {
            double l = left[group_.add(u_prev, g)];
            double r = right[g];
            slot.val[g] = (l == kNegInf || r == kNegInf) ? kNegInf : l + r - log_q_;
        }
    }
    return slot.val;
}

const std::vector<double>& ScEngine::index_loglik(int i) {
    if (i != committed_) throw std::logic_error("sc: indices must be processed in order");
    const std::vector<double>& row = compute(0, 0, i);
    if (!normalize_) return row;
    out_row_.assign(q_, kNegInf);
    for (int g = 0; g < q_; ++g)
        if (row[g] > 0.0) out_row_[g] = std::log(row[g]);
    return out_row_;
}

void ScEngine::propagate(int depth, int branch, int phase) {
    if ((phase & 1) == 0 || depth == n_) return;
    int n_d = size_ >> depth;
    int base = branch * n_d;
    int first = decided_[depth][base + phase - 1];
    int second = decided_[depth][base + phase];
    int psi = phase >> 1;
    int n_c = n_d >> 1;
    decided_[depth + 1][(2 * branch) * n_c + psi] = group_.add(first, second);
    decided_[depth + 1][(2 * branch + 1) * n_c + psi] = second;
    propagate(depth + 1, 2 * branch, psi);
    propagate(depth + 1, 2 * branch + 1, psi);
}

void ScEngine::commit(int i, int value) {
    if (i != committed_) throw std::logic_error("sc: commits must be in order");
    if (value < 0 || value >= q_) throw std::invalid_argument("sc: value out of range");
    decided_[0][i] = value;
    ++committed_;
    propagate(0, 0, i);
}

std::vector<int> ScEngine::codeword() const {
    if (committed_ != size_) throw std::logic_error("sc: block not fully decided");
    return decided_[n_];
}

bool ScEngine::all_zero(const std::vector<double>& loglik) {
    for (double v : loglik)
        if (v != kNegInf) return false;
    return true;
}

std::vector<double> leaf_logliks(const Dmc& w, const std::vector<int>& obs) {
    int q = w.q();
    std::vector<double> leaf(obs.size() * q);
    for (size_t j = 0; j < obs.size(); ++j) {
        if (obs[j] == kImpossibleObs) {
            for (int g = 0; g < q; ++g) leaf[j * q + g] = kNegInf;
            continue;
        }
        if (obs[j] < 0 || obs[j] >= w.out_size())
            throw std::invalid_argument("sc: observation out of range");
        for (int g = 0; g < q; ++g) {
            double p = w.w(g, obs[j]);
            leaf[j * q + g] = p > 0.0 ? std::log(p) : kNegInf;
        }
    }
    return leaf;
}

std::vector<double> brute_index_likelihood(const Dmc& w, int n, const std::vector<int>& obs,
                                           const std::vector<int>& prefix, int index) {
    const AbelianGroup& g = w.group();
    int size = 1 << n;
    int q = g.order();
    if (static_cast<int>(prefix.size()) != index)
        throw std::invalid_argument("brute: prefix length mismatch");
    std::vector<double> out(q, 0.0);
    int tail = size - index - 1;
    long long combos = 1;
    for (int t = 0; t < tail; ++t) combos *= q;

    Block u;
    u.group = &g;
    u.data.assign(size, 0);
    std::copy(prefix.begin(), prefix.end(), u.data.begin());
    for (int a = 0; a < q; ++a) {
        u.data[index] = a;
        double total = 0.0;
        for (long long c = 0; c < combos; ++c) {
            long long rem = c;
            for (int t = 0; t < tail; ++t) {
                u.data[index + 1 + t] = static_cast<int>(rem % q);
                rem /= q;
            }
            Block x = transform(u);
            double p = 1.0;
            for (int j = 0; j < size; ++j) p *= w.w(x.data[j], obs[j]);
            total += p;
        }
        // 1/q per undetermined coordinate other than index itself
        double scale = 1.0;
        for (int t = 0; t < size - 1; ++t) scale /= q;
        out[a] = total * scale;
    }
    return out;
}

}  // namespace gpolar
