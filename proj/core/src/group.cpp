#include "gpolar/group.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gpolar {

AbelianGroup::AbelianGroup(std::vector<int> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw std::invalid_argument("group: factor list is empty");
    q_ = 1;
    for (int f : factors_) {
        if (f < 1) throw std::invalid_argument("group: factors must be >= 1");
        q_ *= f;
        if (q_ > kMaxOrder) throw std::invalid_argument("group: order exceeds lattice bound 64");
    }
    // drop trivial factors unless the whole group is trivial
    std::vector<int> kept;
    for (int f : factors_)
        if (f > 1) kept.push_back(f);
    if (kept.empty()) kept.push_back(1);
    factors_ = kept;

    add_.resize(q_ * q_);
    neg_.resize(q_);
    for (int a = 0; a < q_; ++a) {
        auto ta = element_tuple(a);
        for (int b = 0; b < q_; ++b) {
            auto tb = element_tuple(b);
            int idx = 0;
            for (size_t i = 0; i < factors_.size(); ++i)
                idx = idx * factors_[i] + (ta[i] + tb[i]) % factors_[i];
            add_[a * q_ + b] = idx;
        }
        int idx = 0;
        for (size_t i = 0; i < factors_.size(); ++i)
            idx = idx * factors_[i] + (factors_[i] - ta[i]) % factors_[i];
        neg_[a] = idx;
    }
    enumerate_subgroups();
    build_transversals();
}

std::vector<int> AbelianGroup::element_tuple(int g) const {
    std::vector<int> t(factors_.size());
    for (int i = static_cast<int>(factors_.size()) - 1; i >= 0; --i) {
        t[i] = g % factors_[i];
        g /= factors_[i];
    }
    return t;
}

std::string AbelianGroup::element_name(int g) const {
    auto t = element_tuple(g);
    if (t.size() == 1) return std::to_string(t[0]);
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(t[i]);
    }
    return s + ")";
}

std::string AbelianGroup::name() const {
    std::string s;
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (i) s += "x";
        s += "Z" + std::to_string(factors_[i]);
    }
    return s;
}

void AbelianGroup::enumerate_subgroups() {
    // BFS over generated subgroups; masks fit in one word.
    auto closure = [this](uint64_t seed_mask) {
        uint64_t m = seed_mask | 1ULL;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int a = 0; a < q_; ++a) {
                if (!((m >> a) & 1)) continue;
                for (int b = a; b < q_; ++b) {
                    if (!((m >> b) & 1)) continue;
                    int c = add(a, b);
                    if (!((m >> c) & 1)) {
                        m |= 1ULL << c;
                        grew = true;
                    }
                }
            }
        }
        return m;
    };

    std::set<uint64_t> seen;
    std::vector<uint64_t> frontier;
    uint64_t triv = closure(1ULL);
    seen.insert(triv);
    frontier.push_back(triv);
    while (!frontier.empty()) {
        uint64_t cur = frontier.back();
        frontier.pop_back();
        for (int g = 1; g < q_; ++g) {
            if ((cur >> g) & 1) continue;
            uint64_t ext = closure(cur | (1ULL << g));
            if (seen.insert(ext).second) frontier.push_back(ext);
        }
    }

    for (uint64_t m : seen) {
        Subgroup s;
        s.mask = m;
        for (int g = 0; g < q_; ++g)
            if ((m >> g) & 1) s.members.push_back(g);
        subgroups_.push_back(std::move(s));
    }
    std::sort(subgroups_.begin(), subgroups_.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
        return a.members < b.members;
    });
}

int AbelianGroup::subgroup_index(uint64_t mask) const {
    for (int i = 0; i < num_subgroups(); ++i)
        if (subgroups_[i].mask == mask) return i;
    return -1;
}

int AbelianGroup::subgroup_intersect(int a, int b) const {
    int idx = subgroup_index(subgroups_[a].mask & subgroups_[b].mask);
    if (idx < 0) throw std::logic_error("group: lattice not closed under intersection");
    return idx;
}

void AbelianGroup::build_transversals() {
    int s = num_subgroups();
    transversals_.assign(s * s, {});
    for (int k = 0; k < s; ++k) {
        for (int h = 0; h < s; ++h) {
            if (!subgroup_leq(k, h)) continue;
            std::vector<int> reps;
            uint64_t covered = 0;
            for (int g : subgroups_[h].members) {
                if ((covered >> g) & 1) continue;
                int rep = g;
                for (int e : subgroups_[k].members) {
                    int c = add(g, e);
                    covered |= 1ULL << c;
                    rep = std::min(rep, c);
                }
                reps.push_back(rep);
            }
            std::sort(reps.begin(), reps.end());
            transversals_[k * s + h] = std::move(reps);
        }
    }
}

const std::vector<int>& AbelianGroup::transversal(int k, int h) const {
    if (!subgroup_leq(k, h)) throw std::invalid_argument("group: transversal requires K <= H");
    return transversals_[k * num_subgroups() + h];
}

int AbelianGroup::coset_rep(int g, int h) const {
    int rep = g;
    for (int e : subgroups_[h].members) rep = std::min(rep, add(g, e));
    return rep;
}

AbelianGroup::Decomp AbelianGroup::coset_decompose(int g, int k, int h) const {
    if (!subgroup_leq(k, h)) throw std::invalid_argument("group: decompose requires K <= H");
    Decomp d;
    d.top = coset_rep(g, h);
    int rest = sub(g, d.top);  // lies in H
    d.mid = coset_rep(rest, k);
    d.in_k = sub(rest, d.mid);
    return d;
}

AbelianGroup build_group(const std::vector<int>& factors) { return AbelianGroup(factors); }

}  // namespace gpolar
