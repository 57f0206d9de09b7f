#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drrs/model.hpp"
#include "drrs/philox.hpp"

namespace drrs {

// ---------------------------------------------------------------------------
// (s,S) inventory simulation
// ---------------------------------------------------------------------------

// One replication's average per-period cost under periodic review with full
// backlogging. Per period: receive due orders; draw exponential demand and
// satisfy it from on-hand (shortfall backlogged); if the inventory position
// (on-hand + on-order - backorders) is below s, order up to S at fixed cost
// plus unit cost, with a Poisson lead time; charge holding on end-of-period
// positive on-hand. demand_mean == 0 is the deterministic no-demand limit.
double inventory_cost(const InventoryBackend& params, const InventoryPolicy& policy,
                      double demand_mean, CounterSequence& rng);

// ---------------------------------------------------------------------------
// Multiserver queue with abandonment (G/G/s+G)
// ---------------------------------------------------------------------------

double sample_service_time(const ServiceDistribution& dist, CounterSequence& rng);

struct QueueCostBreakdown {
    std::int64_t abandoned = 0;
    std::int64_t served = 0;
    double mean_wait_served = 0.0;
    double cost = 0.0;
};

// Simulates `horizon_arrivals` customers through a FIFO multiserver queue.
// A customer abandons if their waiting time would exceed their patience.
// Cost = c_A * (abandon count) + c_W * (mean wait of served) + c_S * servers.
QueueCostBreakdown queue_cost_detail(const QueueBackend& params, int servers,
                                     const ServiceDistribution& service, CounterSequence& rng);

double queue_cost(const QueueBackend& params, int servers, const ServiceDistribution& service,
                  CounterSequence& rng);

// ---------------------------------------------------------------------------
// Ambiguity-set construction (KS retention over fitted families)
// ---------------------------------------------------------------------------

struct AmbiguityMember {
    ServiceDistribution distribution;
    std::string family_name;
    double ks_statistic = 0.0;
    double critical_value = 0.0;
    bool retained = false;
    bool degenerate = false;   // MLE failed or collapsed; excluded from the set
};

struct AmbiguitySet {
    std::vector<AmbiguityMember> fits;          // one per candidate family
    std::vector<ServiceDistribution> members;   // retained, in family order

    bool empty() const { return members.empty(); }
};

// Maximum-likelihood fits (closed form for exponential/lognormal, iterative
// for gamma/Weibull). Degenerate inputs are flagged per family.
std::optional<ServiceDistribution> fit_exponential(const std::vector<double>& obs);
std::optional<ServiceDistribution> fit_lognormal(const std::vector<double>& obs);
std::optional<ServiceDistribution> fit_gamma(const std::vector<double>& obs);
std::optional<ServiceDistribution> fit_weibull(const std::vector<double>& obs);

double service_cdf(const ServiceDistribution& dist, double x);

// One-sample KS statistic of `obs` against the fitted distribution.
double ks_statistic(const std::vector<double>& obs, const ServiceDistribution& dist);

// Asymptotic one-sample KS critical value at level alpha, already divided
// by sqrt(n).
double ks_critical_value(double alpha, std::size_t n);

// Fits the four candidate families to a positive sample and retains those
// whose KS statistic stays below the critical value at level alpha.
AmbiguitySet build_ambiguity_set(const std::vector<double>& observations, double alpha);

const char* family_name(ServiceFamily family);

}  // namespace drrs
