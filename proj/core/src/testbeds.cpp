#include "drrs/testbeds.hpp"

#include <algorithm>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <deque>
#include <queue>
#include <stdexcept>

namespace drrs {

double inventory_cost(const InventoryBackend& params, const InventoryPolicy& policy,
                      double demand_mean, CounterSequence& rng) {
    if (params.horizon_periods < 1) throw ConfigError("inventory horizon must be >= 1");
    if (demand_mean < 0.0) throw ConfigError("demand mean must be nonnegative");
    if (!(policy.reorder_point < policy.order_up_to))
        throw ConfigError("inventory policy requires s < S");

    double on_hand = params.initial_inventory;   // negative = backlog
    // Orders in flight: (arrival period, quantity).
    std::vector<std::pair<std::int64_t, double>> pipeline;
    double on_order = 0.0;
    double total_cost = 0.0;

    for (std::int64_t period = 0; period < params.horizon_periods; ++period) {
        // Receive orders due this period.
        for (auto it = pipeline.begin(); it != pipeline.end();) {
            if (it->first <= period) {
                on_hand += it->second;
                on_order -= it->second;
                it = pipeline.erase(it);
            } else {
                ++it;
            }
        }

        const double demand = demand_mean > 0.0 ? rng.next_exponential(demand_mean) : 0.0;
        on_hand -= demand;   // full backlogging

        const double position = on_hand + on_order;
        if (position < policy.reorder_point) {
            const double quantity = policy.order_up_to - position;
            const std::int64_t lead = static_cast<std::int64_t>(
                rng.next_poisson(params.lead_time_mean));
            pipeline.emplace_back(period + 1 + lead, quantity);
            on_order += quantity;
            total_cost += params.fixed_order_cost + params.unit_order_cost * quantity;
        }

        if (on_hand > 0.0) total_cost += params.holding_cost * on_hand;
    }
    return total_cost / static_cast<double>(params.horizon_periods);
}

double sample_service_time(const ServiceDistribution& dist, CounterSequence& rng) {
    switch (dist.family) {
        case ServiceFamily::Exponential:
            return dist.a > 0.0 ? rng.next_exponential(dist.a) : 0.0;
        case ServiceFamily::Lognormal:
            return std::exp(dist.a + dist.b * rng.next_normal());
        case ServiceFamily::Gamma:
            return dist.b * rng.next_gamma(dist.a);
        case ServiceFamily::Weibull: {
            const double u = rng.next_uniform();
            return dist.b * std::pow(-std::log(u), 1.0 / dist.a);
        }
    }
    throw std::logic_error("unknown service family");
}

QueueCostBreakdown queue_cost_detail(const QueueBackend& params, int servers,
                                     const ServiceDistribution& service, CounterSequence& rng) {
    if (servers < 1) throw ConfigError("queue requires at least one server");
    if (params.horizon_arrivals < 1) throw ConfigError("queue horizon must be >= 1");

    // Service starts follow arrival (FIFO) order, so customers can be
    // processed sequentially against the earliest-free-server heap. An
    // abandoning customer never occupies a server.
    std::priority_queue<double, std::vector<double>, std::greater<double>> free_at;
    for (int i = 0; i < servers; ++i) free_at.push(0.0);

    QueueCostBreakdown out;
    double t_arrival = 0.0;
    double wait_sum = 0.0;
    for (std::int64_t i = 0; i < params.horizon_arrivals; ++i) {
        t_arrival += rng.next_exponential(params.arrival_mean);
        const double patience = rng.next_exponential(params.patience_mean);
        const double service_time = sample_service_time(service, rng);

        const double earliest = free_at.top();
        const double start = std::max(t_arrival, earliest);
        const double wait = start - t_arrival;
        if (wait > patience) {
            out.abandoned += 1;
            continue;
        }
        free_at.pop();
        free_at.push(start + service_time);
        wait_sum += wait;
        out.served += 1;
    }
    out.mean_wait_served = out.served > 0 ? wait_sum / static_cast<double>(out.served) : 0.0;
    out.cost = params.cost_abandon * static_cast<double>(out.abandoned) +
               params.cost_wait * out.mean_wait_served +
               params.cost_staff * static_cast<double>(servers);
    return out;
}

double queue_cost(const QueueBackend& params, int servers, const ServiceDistribution& service,
                  CounterSequence& rng) {
    return queue_cost_detail(params, servers, service, rng).cost;
}

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

namespace {

bool all_positive(const std::vector<double>& obs) {
    for (double x : obs)
        if (!(x > 0.0) || !std::isfinite(x)) return false;
    return true;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

std::optional<ServiceDistribution> fit_exponential(const std::vector<double>& obs) {
    const double mu = mean_of(obs);
    if (!(mu > 0.0)) return std::nullopt;
    return ServiceDistribution{ServiceFamily::Exponential, mu, 0.0};
}

std::optional<ServiceDistribution> fit_lognormal(const std::vector<double>& obs) {
    std::vector<double> logs(obs.size());
    std::transform(obs.begin(), obs.end(), logs.begin(), [](double x) { return std::log(x); });
    const double mu = mean_of(logs);
    double ss = 0.0;
    for (double l : logs) ss += (l - mu) * (l - mu);
    const double sigma = std::sqrt(ss / static_cast<double>(obs.size()));
    if (!(sigma > 0.0)) return std::nullopt;   // constant sample: degenerate
    return ServiceDistribution{ServiceFamily::Lognormal, mu, sigma};
}

std::optional<ServiceDistribution> fit_gamma(const std::vector<double>& obs) {
    const double mu = mean_of(obs);
    double log_mean = 0.0;
    for (double x : obs) log_mean += std::log(x);
    log_mean /= static_cast<double>(obs.size());
    const double s = std::log(mu) - log_mean;
    if (!(s > 0.0)) return std::nullopt;   // constant sample

    // Minka's initialization, then Newton on ln k - psi(k) = s.
    double shape = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int iter = 0; iter < 100; ++iter) {
        const double f = std::log(shape) - boost::math::digamma(shape) - s;
        const double fp = 1.0 / shape - boost::math::trigamma(shape);
        const double step = f / fp;
        shape -= step;
        if (!(shape > 0.0) || !std::isfinite(shape)) return std::nullopt;
        if (std::abs(step) < 1e-10 * shape) break;
    }
    return ServiceDistribution{ServiceFamily::Gamma, shape, mu / shape};
}

std::optional<ServiceDistribution> fit_weibull(const std::vector<double>& obs) {
    const std::size_t n = obs.size();
    // The shape equation is scale-invariant; normalize by the maximum so the
    // powers x^c cannot overflow while bracketing.
    const double x_max = *std::max_element(obs.begin(), obs.end());
    std::vector<double> scaled(n), logs(n);
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = obs[i] / x_max;
        logs[i] = std::log(scaled[i]);
    }
    const double mean_log = mean_of(logs);

    // g(c) = sum x^c log x / sum x^c - 1/c - mean(log x); increasing in c.
    auto g = [&](double c) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = std::pow(scaled[i], c);
            num += w * logs[i];
            den += w;
        }
        return num / den - 1.0 / c - mean_log;
    };

    double lo = 1e-3, hi = 1.0;
    while (!(g(hi) >= 0.0) && hi < 1e4) hi *= 2.0;
    if (hi >= 1e4) return std::nullopt;
    if (g(lo) > 0.0) return std::nullopt;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12 * hi) break;
    }
    const double shape = 0.5 * (lo + hi);
    double scale_pow = 0.0;
    for (double x : scaled) scale_pow += std::pow(x, shape);
    const double scale =
        x_max * std::pow(scale_pow / static_cast<double>(n), 1.0 / shape);
    if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;
    return ServiceDistribution{ServiceFamily::Weibull, shape, scale};
}

double service_cdf(const ServiceDistribution& dist, double x) {
    if (x <= 0.0) return 0.0;
    switch (dist.family) {
        case ServiceFamily::Exponential:
            return 1.0 - std::exp(-x / dist.a);
        case ServiceFamily::Lognormal:
            return 0.5 * std::erfc(-(std::log(x) - dist.a) / (dist.b * std::sqrt(2.0)));
        case ServiceFamily::Gamma:
            return boost::math::gamma_p(dist.a, x / dist.b);
        case ServiceFamily::Weibull:
            return 1.0 - std::exp(-std::pow(x / dist.b, dist.a));
    }
    throw std::logic_error("unknown service family");
}

double ks_statistic(const std::vector<double>& obs, const ServiceDistribution& dist) {
    std::vector<double> sorted = obs;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = service_cdf(dist, sorted[i]);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
        d = std::max(d, f - static_cast<double>(i) / n);
    }
    return d;
}

double ks_critical_value(double alpha, std::size_t n) {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("KS level must lie in (0,1)");
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

const char* family_name(ServiceFamily family) {
    switch (family) {
        case ServiceFamily::Exponential: return "exponential";
        case ServiceFamily::Lognormal: return "lognormal";
        case ServiceFamily::Gamma: return "gamma";
        case ServiceFamily::Weibull: return "weibull";
    }
    return "unknown";
}

AmbiguitySet build_ambiguity_set(const std::vector<double>& observations, double alpha) {
    if (observations.size() < 2) throw ConfigError("ambiguity set needs at least 2 observations");
    if (!all_positive(observations)) throw ConfigError("observations must be positive and finite");

    const double critical = ks_critical_value(alpha, observations.size());
    AmbiguitySet set;
    const ServiceFamily families[] = {ServiceFamily::Lognormal, ServiceFamily::Gamma,
                                      ServiceFamily::Weibull, ServiceFamily::Exponential};
    for (ServiceFamily family : families) {
        std::optional<ServiceDistribution> fitted;
        switch (family) {
            case ServiceFamily::Lognormal: fitted = fit_lognormal(observations); break;
            case ServiceFamily::Gamma: fitted = fit_gamma(observations); break;
            case ServiceFamily::Weibull: fitted = fit_weibull(observations); break;
            case ServiceFamily::Exponential: fitted = fit_exponential(observations); break;
        }
        AmbiguityMember member;
        member.family_name = family_name(family);
        member.critical_value = critical;
        if (!fitted) {
            member.degenerate = true;
            set.fits.push_back(member);
            continue;
        }
        member.distribution = *fitted;
        member.ks_statistic = ks_statistic(observations, *fitted);
        member.retained = member.ks_statistic < critical;
        if (member.retained) set.members.push_back(*fitted);
        set.fits.push_back(member);
    }
    return set;
}

}  // namespace drrs
