#include "drrs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "drrs/posterior.hpp"

namespace drrs {

std::int64_t horizon_for_guard(double standardized_gap, double guard) {
    if (!(standardized_gap > 0.0)) throw ConfigError("standardized gap must be positive");
    const double h = 2.0 * std::log(2.0 / guard) / (standardized_gap * standardized_gap);
    return static_cast<std::int64_t>(std::ceil(h)) + 1;
}

namespace {

LastExitResult scan_last_exit(std::span<const double> means, double b, std::int64_t horizon,
                              double standardized_gap, bool upper) {
    if (horizon < 1) throw ConfigError("last exit horizon must be >= 1");
    if (horizon > static_cast<std::int64_t>(means.size()))
        throw ConfigError("last exit horizon exceeds available prefix means");
    LastExitResult result;
    result.horizon = horizon;
    for (std::int64_t n = horizon; n >= 1; --n) {
        const double x = means[static_cast<std::size_t>(n - 1)];
        if (upper ? (x >= b) : (x <= b)) {
            result.value = n;
            break;
        }
    }
    if (standardized_gap > 0.0) {
        const double residual =
            2.0 * std::exp(-static_cast<double>(horizon) * standardized_gap * standardized_gap / 2.0);
        result.resolved = residual < kTruncationGuard;
    }
    return result;
}

}  // namespace

LastExitResult last_exit_upper(std::span<const double> means, double b, std::int64_t horizon,
                               double standardized_gap) {
    return scan_last_exit(means, b, horizon, standardized_gap, /*upper=*/true);
}

LastExitResult last_exit_lower(std::span<const double> means, double b, std::int64_t horizon,
                               double standardized_gap) {
    return scan_last_exit(means, b, horizon, standardized_gap, /*upper=*/false);
}

PathProvider backend_path_provider(const ProblemInstance& instance, const StreamSpec& spec) {
    return [instance, spec](ScenarioId id, std::int64_t horizon) {
        StreamSpec local = spec;
        local.horizon = horizon;
        const ScenarioStream stream = open_stream(instance, id, local);
        return prefix_means(stream, horizon);
    };
}

double default_b_delta(const ProblemInstance& instance) {
    return 0.5 * (instance.worst_case_mean(1) + instance.worst_case_mean(2));
}

namespace {

void require_boundary(const ProblemInstance& instance, double b_delta) {
    const double mu_11 = instance.worst_case_mean(1);
    const double mu_21 = instance.worst_case_mean(2);
    if (!(b_delta > mu_11 && b_delta < mu_21))
        throw ConfigError("boundary must lie strictly between the two smallest worst-case means");
}

}  // namespace

std::int64_t s_bound_horizon(const ProblemInstance& instance, double b_delta) {
    require_boundary(instance, b_delta);
    std::int64_t horizon = 1;
    for (int j = 1; j <= instance.m; ++j) {
        const double gap = (b_delta - instance.mean(1, j)) / std::sqrt(instance.variance(1, j));
        horizon = std::max(horizon, horizon_for_guard(gap));
    }
    for (int i = 2; i <= instance.k; ++i)
        for (int j = 1; j <= instance.m; ++j) {
            const double mu = instance.mean(i, j);
            if (mu <= b_delta) continue;
            const double gap = (mu - b_delta) / std::sqrt(instance.variance(i, j));
            horizon = std::max(horizon, horizon_for_guard(gap));
        }
    return horizon;
}

SBoundResult s_bound(const ProblemInstance& instance, const PathProvider& paths, double b_delta,
                     std::int64_t horizon) {
    require_boundary(instance, b_delta);
    SBoundResult result;
    result.horizon = horizon;

    for (int j = 1; j <= instance.m; ++j) {
        const double sigma = std::sqrt(instance.variance(1, j));
        const double gap = (b_delta - instance.mean(1, j)) / sigma;
        const std::vector<double> path = paths(ScenarioId{1, j}, horizon);
        const LastExitResult u = last_exit_upper(path, b_delta, horizon, gap);
        result.value += u.value;
        result.resolved = result.resolved && u.resolved;
    }
    for (int i = 2; i <= instance.k; ++i) {
        std::int64_t min_exit = std::numeric_limits<std::int64_t>::max();
        bool any = false;
        for (int j = 1; j <= instance.m; ++j) {
            const double mu = instance.mean(i, j);
            if (mu <= b_delta) continue;   // L_ij almost surely infinite
            const double sigma = std::sqrt(instance.variance(i, j));
            const double gap = (mu - b_delta) / sigma;
            const std::vector<double> path = paths(ScenarioId{i, j}, horizon);
            const LastExitResult l = last_exit_lower(path, b_delta, horizon, gap);
            min_exit = std::min(min_exit, l.value);
            result.resolved = result.resolved && l.resolved;
            any = true;
        }
        if (!any)
            throw ConfigError("no scenario of a non-best alternative lies above the boundary");
        result.value += min_exit;
    }
    return result;
}

PcsBoundEstimate pcs_lower_bound_mc(const ProblemInstance& instance, std::int64_t budget,
                                    double b_delta, std::int64_t replications,
                                    const StreamSpec& spec) {
    const std::int64_t horizon = s_bound_horizon(instance, b_delta);
    return pcs_lower_bound_mc(instance, budget, b_delta, replications,
                              [&](std::int64_t r) {
                                  StreamSpec rep = spec;
                                  rep.replication =
                                      spec.replication + static_cast<std::uint32_t>(r);
                                  return backend_path_provider(instance, rep);
                              },
                              horizon);
}

PcsBoundEstimate pcs_lower_bound_mc(const ProblemInstance& instance, std::int64_t budget,
                                    double b_delta, std::int64_t replications,
                                    const std::function<PathProvider(std::int64_t)>& paths_for_rep,
                                    std::int64_t horizon) {
    if (budget < static_cast<std::int64_t>(instance.k) * instance.m)
        throw ConfigError("budget must be at least k*m");
    require_boundary(instance, b_delta);
    const std::int64_t rounds =
        (budget - static_cast<std::int64_t>(instance.k) * instance.m) / (instance.m + instance.k - 1);

    std::int64_t successes = 0;
    PcsBoundEstimate out;
    for (std::int64_t r = 0; r < replications; ++r) {
        const PathProvider paths = paths_for_rep(r);
        const SBoundResult s = s_bound(instance, paths, b_delta, horizon);
        if (!s.resolved) {
            out.unresolved_replications += 1;
            continue;
        }
        out.resolved_replications += 1;
        if (rounds > 2 * s.value) successes += 1;
    }
    if (out.resolved_replications > 0) {
        const double p =
            static_cast<double>(successes) / static_cast<double>(out.resolved_replications);
        out.estimate = p;
        out.se = std::sqrt(p * (1.0 - p) / static_cast<double>(out.resolved_replications));
    }
    return out;
}

double pics_bound_additive(const ProblemInstance& instance, std::int64_t budget, double b_delta,
                           bool ec_form) {
    if (budget < static_cast<std::int64_t>(instance.k) * instance.m)
        throw ConfigError("budget must be at least k*m");
    require_boundary(instance, b_delta);
    const double denom_scale = ec_form ? 2.0 : 1.0;
    const std::int64_t mk = static_cast<std::int64_t>(instance.k) * instance.m;
    const std::int64_t width = instance.m + instance.k - 1;
    const auto r = static_cast<double>((budget - mk) / (2 * width * width));

    double bound = 0.0;
    for (int i = 2; i <= instance.k; ++i) {
        double exponent = 0.0;
        int above = 0;
        for (int j = 1; j <= instance.m; ++j) {
            const double mu = instance.mean(i, j);
            if (mu <= b_delta) continue;
            above += 1;
            exponent += (mu - b_delta) * (mu - b_delta) /
                        (denom_scale * instance.variance(i, j));
        }
        bound += std::pow(2.0, above) * std::exp(-r * exponent);
    }
    for (int j = 1; j <= instance.m; ++j) {
        const double gap = b_delta - instance.mean(1, j);
        bound += 2.0 * std::exp(-r * gap * gap / (denom_scale * instance.variance(1, j)));
    }
    return std::clamp(bound, 0.0, 1.0);
}

double last_exit_tail_bound(std::int64_t n, double b) {
    if (n < 1) throw ConfigError("tail bound requires n >= 1");
    if (!(b > 0.0)) throw ConfigError("tail bound requires b > 0");
    return 2.0 * std::exp(-static_cast<double>(n) * b * b / 2.0);
}

double zero_exit_bound(double b) {
    if (!(b > 0.0)) throw ConfigError("zero-exit bound requires b > 0");
    return 1.0 - std::exp(-b * b / 2.0);
}

std::vector<double> standard_normal_prefix_means(std::uint64_t seed, std::uint32_t replication,
                                                 std::int64_t horizon) {
    const PhiloxKey key = make_key(seed);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    double mean = 0.0;
    for (std::int64_t t = 0; t < horizon; ++t) {
        const PhiloxBlock block = philox4x32(
            make_counter(StreamLane::Observation, 1, 1, replication,
                         static_cast<std::uint64_t>(t), 0),
            key);
        const double z = standard_normal(block);
        mean += (z - mean) / static_cast<double>(t + 1);
        out.push_back(mean);
    }
    return out;
}

NonNecessityBound nonnecessity_bound(const ProblemInstance& instance, double b_delta,
                                     int alternative, std::int64_t initial_samples) {
    NonNecessityBound out;
    if (alternative < 2 || alternative > instance.k)
        throw ConfigError("non-necessity bound applies to non-best alternatives only");
    const double mu_11 = instance.worst_case_mean(1);
    const double mu_i1 = instance.mean(alternative, 1);
    if (!(b_delta > mu_11 && b_delta < mu_i1)) return out;

    double indicator_sum = 0.0;
    for (int j = 2; j <= instance.m; ++j) {
        const double mu = instance.mean(alternative, j);
        if (mu <= b_delta) continue;
        indicator_sum +=
            1.0 - std::exp(-(b_delta - mu) * (b_delta - mu) /
                           (2.0 * instance.variance(alternative, j)));
    }
    if (indicator_sum <= 0.0) return out;   // hypothesis violated: inapplicable

    const double a_i = normal_cdf(std::sqrt(static_cast<double>(initial_samples)) *
                                  (b_delta - mu_i1) / std::sqrt(instance.variance(alternative, 1)));
    double product = 1.0;
    for (int j = 1; j <= instance.m; ++j) {
        const double gap = b_delta - instance.mean(1, j);
        product *= 1.0 - std::exp(-gap * gap / (2.0 * instance.variance(1, j)));
    }
    out.applicable = true;
    out.value = a_i * indicator_sum * product;
    return out;
}

NonNecessityBound nonnecessity_bound_aggregate(const ProblemInstance& instance, double b_delta,
                                               std::int64_t initial_samples) {
    NonNecessityBound out;
    double total = 0.0;
    bool any = false;
    for (int i = 2; i <= instance.k; ++i) {
        const NonNecessityBound part = nonnecessity_bound(instance, b_delta, i, initial_samples);
        if (part.applicable) {
            total += part.value;
            any = true;
        }
    }
    if (!any) return out;
    out.applicable = true;
    out.value = total;
    return out;
}

AllocationPattern allocation_pattern(const RunRecord& record, int k, int m, double theta) {
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigError("theta must lie in (0,1)");
    if (record.sample_sizes.size() != static_cast<std::size_t>(k) * m)
        throw ConfigError("record does not match k x m");
    AllocationPattern pattern;
    std::int64_t total = 0;
    for (std::int64_t n : record.sample_sizes) total += n;
    // Heavy = share of the final sample sizes above theta. Callers pick
    // theta below 1/(k*m) so an unconcentrated record keeps every scenario.
    const double cutoff = theta;
    for (int i = 1; i <= k; ++i) {
        std::int64_t best_n = -1;
        int best_j = 1;
        for (int j = 1; j <= m; ++j) {
            const std::int64_t n =
                record.sample_sizes[static_cast<std::size_t>(i - 1) * m + (j - 1)];
            const double share = static_cast<double>(n) / static_cast<double>(total);
            if (share > cutoff) pattern.heavy_set.push_back(ScenarioId{i, j});
            if (n > best_n) {
                best_n = n;
                best_j = j;
            }
        }
        pattern.worst_case_most_sampled.push_back(best_j == 1);
    }
    pattern.heavy_count = static_cast<int>(pattern.heavy_set.size());
    return pattern;
}

}  // namespace drrs
