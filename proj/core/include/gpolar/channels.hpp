#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gpolar/design.hpp"
#include "gpolar/dmc.hpp"
#include "gpolar/group.hpp"

namespace gpolar {

enum class Scenario { berger_tung, km_sum, mac, comp_mac, broadcast, multiple_description };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

// Joint extended by name = a + b, the group sum of the two embedded
// variables. Both summand alphabets must fit inside the group.
JointDist joint_with_sum(const AbelianGroup& g, const JointDist& joint, const std::string& a,
                         const std::string& b, const std::string& name);

// A W_c/W_s pair plus the degradation claim backing its nesting. The claim
// relates `degraded` to `dominant` through the intermediate kernel `lambda`;
// for most scenarios those are copies of wc/ws picked by orientation, for
// computation-over-MAC the claim is carried by the sum-shaping channel.
struct ChannelPair {
    std::string role;
    Orientation orientation = Orientation::source;
    Dmc wc;
    Dmc ws;
    Dmc degraded;
    Dmc dominant;
    std::vector<double> lambda;  // [dominant output][degraded output]; empty when infeasible
    double cap_wc_expected = 0.0;  // symmetric capacities implied by the joint
    double cap_ws_expected = 0.0;

    // Designed-rate target in bits per symbol: the capacity gap the nested
    // code closes, always nonnegative for a valid pair.
    double rate_target() const {
        return orientation == Orientation::source ? cap_ws_expected - cap_wc_expected
                                                  : cap_wc_expected - cap_ws_expected;
    }
};

struct DegradationResult {
    bool ok = false;
    double max_error = 0.0;           // worst entrywise deviation of the composition
    std::vector<double> certificate;  // composed table, [input][degraded output]
};

// True iff dominant composed with lambda reproduces degraded entrywise
// within 1e-12. An empty lambda (no feasible kernel found) fails.
DegradationResult verify_degradation(const ChannelPair& pair);

struct ScenarioChannels {
    Scenario tag = Scenario::berger_tung;
    std::vector<ChannelPair> pairs;
    // broadcast only: x = g(u, v) as a dense table over embedded group pairs
    std::vector<int> g_table;
    std::vector<char> g_defined;  // 1 where the joint pins the entry
    long g_off_support = 0;       // entries filled by the default extension

    const ChannelPair& pair(const std::string& role) const;
};

// Build every channel pair of a scenario from its joint distribution, with
// tables given by group-shifted marginals. Validates the structural
// requirements (variables, Markov chains, independence, deterministic g)
// within 1e-9 and throws std::invalid_argument when they fail.
ScenarioChannels build_scenario_channels(Scenario tag, const JointDist& joint,
                                         const AbelianGroup& group);

// Canonical content hash of a pair (tables, alphabets, role, orientation).
std::string pair_content_hash(const ChannelPair& pair);

// Feasibility solve for a column-stochastic kernel Q with
// sum_y p_uy(u,y) Q(y,v) = p_uv(u,v); returns row-major [y][v] or nullopt.
std::optional<std::vector<double>> solve_degradation_kernel(const std::vector<double>& p_uy,
                                                            const std::vector<double>& p_uv,
                                                            int nu, int ny, int nv);

}  // namespace gpolar
