#pragma once

#include <functional>
#include <span>
#include <vector>

#include "drrs/model.hpp"
#include "drrs/procedures.hpp"
#include "drrs/streams.hpp"

namespace drrs {

// The infinite-horizon last exit times of the boundary-crossing analysis can
// only be approximated on a finite horizon H. `resolved` certifies that the
// tail-probability residual 2*exp(-H*g^2/2), with g the standardized boundary
// gap, is below the truncation guard, so the truncated supremum equals the
// true one except on an event of probability < guard.
struct LastExitResult {
    std::int64_t value = 0;   // 0 = the path never lies beyond the boundary
    bool resolved = true;
    std::int64_t horizon = 0;
};

inline constexpr double kTruncationGuard = 1e-6;

// Smallest horizon making the Lemma-type residual 2*exp(-H*g^2/2) fall below
// the guard.
std::int64_t horizon_for_guard(double standardized_gap, double guard = kTruncationGuard);

// Last time the prefix mean is >= b (of the first `horizon` entries,
// 1-based). standardized_gap > 0 enables the resolution certificate.
LastExitResult last_exit_upper(std::span<const double> means, double b, std::int64_t horizon,
                               double standardized_gap = 0.0);

// Mirror with <=.
LastExitResult last_exit_lower(std::span<const double> means, double b, std::int64_t horizon,
                               double standardized_gap = 0.0);

// Supplies the prefix-mean path of one scenario up to a horizon. The
// production provider replays the same counter-keyed streams the procedure
// consumes, which is what makes the pathwise checks exact.
using PathProvider = std::function<std::vector<double>(ScenarioId, std::int64_t)>;

PathProvider backend_path_provider(const ProblemInstance& instance, const StreamSpec& spec);

// S(b_delta) = sum_{i>=2} min_j L_ij(b_delta) + sum_j U_1j(b_delta) on the
// given paths. Scenarios of non-best alternatives with mean <= b_delta have
// an almost surely infinite last exit time and are excluded from the min.
struct SBoundResult {
    std::int64_t value = 0;
    bool resolved = true;
    std::int64_t horizon = 0;
};

SBoundResult s_bound(const ProblemInstance& instance, const PathProvider& paths, double b_delta,
                     std::int64_t horizon);

// Horizon large enough to resolve every component of S(b_delta).
std::int64_t s_bound_horizon(const ProblemInstance& instance, double b_delta);

// Midpoint default when the caller leaves the boundary free.
double default_b_delta(const ProblemInstance& instance);

// Monte Carlo estimate of the probability lower-bounding the PCS:
// Pr{ floor((N-mk)/(m+k-1)) > 2 S(b_delta) }.
struct PcsBoundEstimate {
    double estimate = 0.0;
    double se = 0.0;
    std::int64_t resolved_replications = 0;
    std::int64_t unresolved_replications = 0;   // excluded; bound biased none
};

PcsBoundEstimate pcs_lower_bound_mc(const ProblemInstance& instance, std::int64_t budget,
                                    double b_delta, std::int64_t replications,
                                    const StreamSpec& spec);

// Same estimator with injectable paths (stub streams in tests).
PcsBoundEstimate pcs_lower_bound_mc(const ProblemInstance& instance, std::int64_t budget,
                                    double b_delta, std::int64_t replications,
                                    const std::function<PathProvider(std::int64_t)>& paths_for_rep,
                                    std::int64_t horizon);

// Additive exponential PICS bound with r = floor((N-mk)/(2(m+k-1)^2)),
// clamped to [0,1]. The default evaluates the e-companion form (variance
// doubled in the exponent denominators); the main-text form is kept behind
// the flag for comparison.
double pics_bound_additive(const ProblemInstance& instance, std::int64_t budget, double b_delta,
                           bool ec_form = true);

// Tail bound Pr{U(b) > n} <= 2 exp(-n b^2 / 2).
double last_exit_tail_bound(std::int64_t n, double b);

// Zero-exit bound Pr{U(b) = 0} >= 1 - exp(-b^2 / 2).
double zero_exit_bound(double b);

// Prefix means of a truncated standard-normal path, for direct simulation of
// the generic last exit time U(b).
std::vector<double> standard_normal_prefix_means(std::uint64_t seed, std::uint32_t replication,
                                                 std::int64_t horizon);

// Probability lower bound that the worst-case scenario of a non-best
// alternative is sampled only finitely often. `initial_samples` is n0 (1 for
// the additive allocation procedure).
struct NonNecessityBound {
    bool applicable = false;
    double value = 0.0;
};

NonNecessityBound nonnecessity_bound(const ProblemInstance& instance, double b_delta,
                                     int alternative, std::int64_t initial_samples = 1);

// Aggregated version over all non-best alternatives.
NonNecessityBound nonnecessity_bound_aggregate(const ProblemInstance& instance, double b_delta,
                                               std::int64_t initial_samples = 1);

// Empirical surrogate of the additivity statement: which scenarios carry a
// substantial share of the final sample sizes.
struct AllocationPattern {
    std::vector<ScenarioId> heavy_set;            // share > theta
    int heavy_count = 0;
    std::vector<bool> worst_case_most_sampled;    // per alternative: (i,1) is argmax_j n_ij
};

AllocationPattern allocation_pattern(const RunRecord& record, int k, int m, double theta);

}  // namespace drrs
