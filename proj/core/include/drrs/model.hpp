#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "drrs/types.hpp"

namespace drrs {

// ---------------------------------------------------------------------------
// Sampling backends
// ---------------------------------------------------------------------------

struct GaussianBackend {};

struct InventoryPolicy {
    double reorder_point = 0.0;   // s
    double order_up_to = 0.0;     // S; must satisfy s < S
};

struct InventoryBackend {
    std::vector<InventoryPolicy> policies;   // one per alternative
    std::vector<double> demand_means;        // one per distribution
    double initial_inventory = 1000.0;
    std::int64_t horizon_periods = 1000;
    double lead_time_mean = 6.0;
    double holding_cost = 0.5;
    double fixed_order_cost = 36.0;
    double unit_order_cost = 1.0;
};

enum class ServiceFamily { Exponential, Lognormal, Gamma, Weibull };

struct ServiceDistribution {
    ServiceFamily family = ServiceFamily::Exponential;
    // Exponential: a = mean. Lognormal: a = meanlog, b = sdlog.
    // Gamma: a = shape, b = scale. Weibull: a = shape, b = scale.
    double a = 1.0;
    double b = 0.0;
};

struct QueueBackend {
    std::vector<int> staffing_levels;               // one per alternative
    std::vector<ServiceDistribution> services;      // one per distribution
    double arrival_mean = 0.1;
    double patience_mean = 3.0;
    double cost_abandon = 0.1;
    double cost_wait = 15.0;
    double cost_staff = 0.5;
    std::int64_t horizon_arrivals = 1000;
};

using Backend = std::variant<GaussianBackend, InventoryBackend, QueueBackend>;

// ---------------------------------------------------------------------------
// Problem instance
// ---------------------------------------------------------------------------

// A k-alternative, m-distribution problem. `means`/`variances` are row-major
// k x m. For testbed backends they hold estimated ground truth (or zeros when
// unknown); the procedures themselves never read them, only the analysis and
// correctness bookkeeping do.
struct ProblemInstance {
    int k = 0;
    int m = 0;
    std::vector<double> means;
    std::vector<double> variances;
    Backend backend = GaussianBackend{};
    // True when the instance is declared to satisfy the canonical ordering
    // (rows nonincreasing, worst-case column nondecreasing, unique best).
    bool canonical = false;

    double mean(int alternative, int distribution) const {
        return means[index(alternative, distribution)];
    }
    double variance(int alternative, int distribution) const {
        return variances[index(alternative, distribution)];
    }
    std::size_t index(int alternative, int distribution) const {
        return static_cast<std::size_t>(alternative - 1) * m + (distribution - 1);
    }
    int scenario_count() const { return k * m; }

    bool contains(ScenarioId id) const {
        return id.alternative >= 1 && id.alternative <= k && id.distribution >= 1 &&
               id.distribution <= m;
    }

    // Indifference gap between the two smallest worst-case means.
    double worst_case_mean(int alternative) const;
    int true_best() const;
    double gap_delta() const;

    void validate() const;
    bool satisfies_canonical_ordering() const;
};

ProblemInstance sc_config(int k, int m, double gap, double variance);
ProblemInstance mm_config(int k, int m, double variance);

// ---------------------------------------------------------------------------
// Running statistics
// ---------------------------------------------------------------------------

enum class Provenance { Init, MStep, KStep };

// Streaming mean and sum of squared deviations for one scenario, split by
// how the observations were allocated. Welford updates keep the variance
// stable for the million-observation additivity runs.
struct ScenarioStats {
    std::int64_t n = 0;
    std::int64_t n_m = 0;
    std::int64_t n_k = 0;
    double mean = 0.0;
    double m2 = 0.0;

    std::int64_t n_init() const { return n - n_m - n_k; }
    bool has_variance() const { return n >= 2; }
    double sample_variance() const;
    double sample_stddev() const;
};

// Adds one observation. Rejects non-finite values.
void update_stats(ScenarioStats& stats, double x, Provenance provenance);

// ---------------------------------------------------------------------------
// Procedure state
// ---------------------------------------------------------------------------

struct AllocationState {
    int k = 0;
    int m = 0;
    std::vector<ScenarioStats> stats;    // row-major k x m
    std::vector<std::int64_t> r_m;       // m-step rounds per alternative
    std::vector<std::int64_t> r_k;       // k-step rounds per alternative
    std::int64_t rounds = 0;
    std::int64_t consumed = 0;

    explicit AllocationState(int k_, int m_)
        : k(k_), m(m_), stats(static_cast<std::size_t>(k_) * m_),
          r_m(static_cast<std::size_t>(k_), 0), r_k(static_cast<std::size_t>(k_), 0) {}

    ScenarioStats& at(int alternative, int distribution) {
        return stats[static_cast<std::size_t>(alternative - 1) * m + (distribution - 1)];
    }
    const ScenarioStats& at(int alternative, int distribution) const {
        return stats[static_cast<std::size_t>(alternative - 1) * m + (distribution - 1)];
    }

    std::int64_t alternative_total(int alternative) const;
    double worst_case_sample_mean(int alternative) const;

    // Checks the counter identities (sum r_m = rounds, sum r_k = rounds*(k-1)).
    bool counters_consistent() const;
};

}  // namespace drrs
