#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "drrs/model.hpp"
#include "drrs/rules.hpp"
#include "drrs/streams.hpp"

namespace drrs {

// Round-start identification used by both procedures: the empirical
// worst-case scenario of every alternative and the current best alternative.
struct RoundLeaders {
    std::vector<int> worst;   // 1-based distribution index per alternative
    int best = 1;             // 1-based alternative index
};

// worst[i] maximizes the sample mean within row i; best minimizes the
// worst-case sample mean. Ties break to the lowest index.
RoundLeaders identify_round_leaders(const AllocationState& state);

// Configuration of a general additive allocation procedure. The AA procedure
// is the instance (equal, equal, n0 = 1, delta_m = m, delta_k = k-1).
struct GaaConfig {
    std::int64_t n0 = 1;
    std::int64_t delta_m = 1;
    std::int64_t delta_k = 1;
    std::shared_ptr<const SamplingRule> m_rule;
    std::shared_ptr<const SamplingRule> k_rule;
    // Joint design: negate the k-part means, concatenate both candidate sets
    // and let m_rule place a single observation per round.
    bool joint_mode = false;

    void validate(int k, int m) const;
};

GaaConfig aa_as_gaa(int k, int m);

// One macro-replication's outcome.
struct RunRecord {
    int selection = 0;
    std::vector<std::int64_t> sample_sizes;   // k x m, row-major
    std::vector<std::int64_t> sample_sizes_m; // observations via m-steps
    std::vector<std::int64_t> sample_sizes_k; // observations via k-steps
    std::vector<double> sample_means;         // k x m, row-major
    std::vector<std::int64_t> r_m;            // m-step rounds per alternative
    std::vector<std::int64_t> r_k;            // k-step rounds per alternative
    std::vector<int> per_round_best;          // b-hat per round
    std::int64_t consumed = 0;
    std::optional<bool> correct;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Additive allocation procedure: initialize every scenario once, then per
// round sample all scenarios of the current best (m-step) and the current
// worst-case scenario of every other alternative (k-step). Selects the
// alternative with the largest total sample size, ties to the lowest index.
// Requires N >= k*m.
RunRecord run_aa(const ProblemInstance& instance, std::int64_t budget, const StreamSpec& spec);
RunRecord run_aa(const ProblemInstance& instance, std::int64_t budget, StreamSet& streams);

// General additive allocation. Requires N >= n0*k*m. Selects the alternative
// with the most m-step rounds; ties break to the lower worst-case sample
// mean, then the lowest index.
RunRecord run_gaa(const ProblemInstance& instance, std::int64_t budget, const GaaConfig& config,
                  const StreamSpec& spec);
RunRecord run_gaa(const ProblemInstance& instance, std::int64_t budget, const GaaConfig& config,
                  StreamSet& streams, CounterSequence& decisions);

}  // namespace drrs
