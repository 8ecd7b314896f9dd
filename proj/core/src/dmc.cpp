#include "gpolar/dmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gpolar {

namespace {
constexpr double kRowTol = 1e-12;

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }
}  // namespace

int OutputAlphabet::flatten(const std::vector<int>& sym) const {
    if (sym.size() != sizes.size()) throw std::invalid_argument("output alphabet: arity mismatch");
    int idx = 0;
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (sym[i] < 0 || sym[i] >= sizes[i])
            throw std::invalid_argument("output alphabet: symbol out of range");
        idx = idx * sizes[i] + sym[i];
    }
    return idx;
}

std::vector<int> OutputAlphabet::unflatten(int idx) const {
    std::vector<int> sym(sizes.size());
    for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
        sym[i] = idx % sizes[i];
        idx /= sizes[i];
    }
    return sym;
}

int OutputAlphabet::component_index(const std::string& name) const {
    for (size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("output alphabet: no component named " + name);
}

Dmc::Dmc(const AbelianGroup* group, OutputAlphabet out, std::vector<double> table)
    : group_(group), out_(std::move(out)), table_(std::move(table)) {
    int q = group_->order();
    int m = out_.size();
    if (static_cast<int>(table_.size()) != q * m)
        throw std::invalid_argument("dmc: table size mismatch");
    for (int x = 0; x < q; ++x) {
        double row = 0.0;
        for (int y = 0; y < m; ++y) {
            double v = table_[x * m + y];
            if (v < 0.0) throw std::invalid_argument("dmc: negative entry");
            row += v;
        }
        if (std::abs(row - 1.0) > kRowTol) throw std::invalid_argument("dmc: row does not sum to 1");
    }
}

ZParams z_params(const Dmc& w) {
    const AbelianGroup& g = w.group();
    int q = g.order();
    int m = w.out_size();
    ZParams z;
    z.zd.assign(q, 0.0);
    for (int d = 0; d < q; ++d) {
        double acc = 0.0;
        for (int x = 0; x < q; ++x) {
            int xd = g.add(x, d);
            for (int y = 0; y < m; ++y) acc += std::sqrt(w.w(x, y) * w.w(xd, y));
        }
        z.zd[d] = acc / q;
    }
    z.zh.assign(g.num_subgroups(), 0.0);
    for (int h = 0; h < g.num_subgroups(); ++h) {
        double acc = 0.0;
        for (int d = 0; d < q; ++d)
            if (!g.subgroup_contains(h, d)) acc += z.zd[d];
        z.zh[h] = acc;
    }
    return z;
}

double symmetric_capacity(const Dmc& w) {
    int q = w.q();
    int m = w.out_size();
    // I(X;Y) = H(Y) - H(Y|X) with X uniform
    double hy = 0.0, hyx = 0.0;
    for (int y = 0; y < m; ++y) {
        double py = 0.0;
        for (int x = 0; x < q; ++x) py += w.w(x, y) / q;
        hy -= xlog2x(py);
    }
    for (int x = 0; x < q; ++x)
        for (int y = 0; y < m; ++y) hyx -= xlog2x(w.w(x, y)) / q;
    return hy - hyx;
}

JointDist::JointDist(std::vector<std::string> names, std::vector<int> sizes,
                     std::vector<double> probs)
    : names_(std::move(names)), sizes_(std::move(sizes)), probs_(std::move(probs)) {
    if (names_.size() != sizes_.size()) throw std::invalid_argument("joint: names/sizes mismatch");
    size_t total = 1;
    for (int s : sizes_) {
        if (s < 1) throw std::invalid_argument("joint: alphabet size must be >= 1");
        total *= s;
    }
    if (probs_.size() != total) throw std::invalid_argument("joint: tensor size mismatch");
    double sum = 0.0;
    for (double v : probs_) {
        if (v < 0.0) throw std::invalid_argument("joint: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kRowTol) throw std::invalid_argument("joint: does not sum to 1");
}

bool JointDist::has_var(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

int JointDist::var_index(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("joint: no variable named " + name);
}

double JointDist::p(const std::vector<int>& idx) const {
    if (idx.size() != names_.size()) throw std::invalid_argument("joint: index arity mismatch");
    size_t flat = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0 || idx[i] >= sizes_[i]) throw std::invalid_argument("joint: index range");
        flat = flat * sizes_[i] + idx[i];
    }
    return probs_[flat];
}

JointDist JointDist::marginal(const std::vector<std::string>& keep) const {
    std::vector<int> kidx;
    std::vector<int> ksizes;
    for (const auto& n : keep) {
        kidx.push_back(var_index(n));
        ksizes.push_back(sizes_[var_index(n)]);
    }
    size_t ktotal = 1;
    for (int s : ksizes) ktotal *= s;
    std::vector<double> out(ktotal, 0.0);

    std::vector<int> idx(names_.size(), 0);
    for (size_t flat = 0; flat < probs_.size(); ++flat) {
        size_t f = flat;
        for (int i = static_cast<int>(names_.size()) - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(f % sizes_[i]);
            f /= sizes_[i];
        }
        size_t kflat = 0;
        for (size_t i = 0; i < kidx.size(); ++i) kflat = kflat * ksizes[i] + idx[kidx[i]];
        out[kflat] += probs_[flat];
    }
    return JointDist(keep, ksizes, std::move(out));
}

double JointDist::entropy(const std::vector<std::string>& vars) const {
    JointDist m = marginal(vars);
    double h = 0.0;
    for (double v : m.probs_) h -= xlog2x(v);
    return h;
}

double JointDist::cond_entropy(const std::vector<std::string>& vars,
                               const std::vector<std::string>& given) const {
    if (given.empty()) return entropy(vars);
    std::vector<std::string> all = vars;
    for (const auto& g : given) all.push_back(g);
    return entropy(all) - entropy(given);
}

double JointDist::mutual_information(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) const {
    return entropy(a) - cond_entropy(a, b);
}

double JointDist::cond_mutual_information(const std::vector<std::string>& a,
                                          const std::vector<std::string>& b,
                                          const std::vector<std::string>& given) const {
    if (given.empty()) return mutual_information(a, b);
    // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
    std::vector<std::string> ac = a, bc = b, abc = a;
    for (const auto& g : given) ac.push_back(g);
    for (const auto& g : given) bc.push_back(g);
    for (const auto& v : b) abc.push_back(v);
    for (const auto& g : given) abc.push_back(g);
    return entropy(ac) + entropy(bc) - entropy(abc) - entropy(given);
}

double JointDist::markov_violation(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b,
                                   const std::vector<std::string>& c) const {
    std::vector<std::string> ab = a, bc = b, abc = a;
    for (const auto& v : b) ab.push_back(v);
    for (const auto& v : c) bc.push_back(v);
    for (const auto& v : b) abc.push_back(v);
    for (const auto& v : c) abc.push_back(v);
    JointDist mabc = marginal(abc);
    JointDist mab = marginal(ab);
    JointDist mbc = marginal(bc);
    JointDist mb = marginal(b);

    // iterate the (a,b,c) product space through mabc's own ordering
    double worst = 0.0;
    std::vector<int> idx(mabc.nvars(), 0);
    size_t na = a.size(), nb = b.size();
    for (size_t flat = 0; flat < mabc.probs_.size(); ++flat) {
        size_t f = flat;
        for (int i = mabc.nvars() - 1; i >= 0; --i) {
            idx[i] = static_cast<int>(f % mabc.sizes_[i]);
            f /= mabc.sizes_[i];
        }
        std::vector<int> ia(idx.begin(), idx.begin() + na);
        std::vector<int> ib(idx.begin() + na, idx.begin() + na + nb);
        std::vector<int> ic(idx.begin() + na + nb, idx.end());
        std::vector<int> iab = ia, ibc = ib;
        iab.insert(iab.end(), ib.begin(), ib.end());
        ibc.insert(ibc.end(), ic.begin(), ic.end());
        double lhs = mabc.probs_[flat] * mb.p(ib);
        double rhs = mab.p(iab) * mbc.p(ibc);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

}  // namespace gpolar
