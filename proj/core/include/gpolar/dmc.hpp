#pragma once

#include <map>
#include <string>
#include <vector>

#include "gpolar/group.hpp"

namespace gpolar {

// Labeled finite output alphabet, possibly a product of named components.
// The flat index is row-major over the declared component order.
struct OutputAlphabet {
    std::vector<std::string> names;
    std::vector<int> sizes;

    int size() const {
        int s = 1;
        for (int v : sizes) s *= v;
        return s;
    }
    int flatten(const std::vector<int>& sym) const;
    std::vector<int> unflatten(int idx) const;
    int component_index(const std::string& name) const;

    static OutputAlphabet single(const std::string& name, int size) { return {{name}, {size}}; }
};

// Discrete memoryless channel with a group-valued input and a labeled finite
// output alphabet. Rows sum to 1 within 1e-12.
class Dmc {
  public:
    Dmc() = default;  // empty placeholder, valid only as an assignment target
    Dmc(const AbelianGroup* group, OutputAlphabet out, std::vector<double> table);

    const AbelianGroup& group() const { return *group_; }
    int q() const { return group_->order(); }
    const OutputAlphabet& out() const { return out_; }
    int out_size() const { return out_.size(); }
    double w(int x, int y) const { return table_[x * out_.size() + y]; }
    const std::vector<double>& table() const { return table_; }

  private:
    const AbelianGroup* group_ = nullptr;
    OutputAlphabet out_;
    std::vector<double> table_;
};

struct ZParams {
    std::vector<double> zd;  // indexed by difference d
    std::vector<double> zh;  // indexed by subgroup lattice id
};

// Z_d = (1/q) sum_x sum_y sqrt(W(y|x) W(y|x+d)); Z^H = sum_{d not in H} Z_d.
ZParams z_params(const Dmc& w);

// I(X;Y) in bits with X uniform on the group.
double symmetric_capacity(const Dmc& w);

// Joint distribution over named finite variables; flat tensor is row-major
// over the declared variable order. Sums to 1 within 1e-12.
class JointDist {
  public:
    JointDist(std::vector<std::string> names, std::vector<int> sizes, std::vector<double> probs);

    int nvars() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& sizes() const { return sizes_; }
    int size_of(const std::string& name) const { return sizes_[var_index(name)]; }
    bool has_var(const std::string& name) const;
    int var_index(const std::string& name) const;
    const std::vector<double>& probs() const { return probs_; }

    double p(const std::vector<int>& idx) const;
    JointDist marginal(const std::vector<std::string>& keep) const;

    // All information quantities in bits.
    double entropy(const std::vector<std::string>& vars) const;
    double cond_entropy(const std::vector<std::string>& vars,
                        const std::vector<std::string>& given) const;
    double mutual_information(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) const;
    double cond_mutual_information(const std::vector<std::string>& a,
                                   const std::vector<std::string>& b,
                                   const std::vector<std::string>& given) const;

    // Max over entries of |p(a,b,c)p(b) - p(a,b)p(b,c)|, the a<->b<->c check.
    double markov_violation(const std::vector<std::string>& a, const std::vector<std::string>& b,
                            const std::vector<std::string>& c) const;

  private:
    std::vector<std::string> names_;
    std::vector<int> sizes_;
    std::vector<double> probs_;
};

}  // namespace gpolar
