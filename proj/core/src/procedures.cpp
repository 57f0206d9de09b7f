#include "drrs/procedures.hpp"

#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace drrs {

RoundLeaders identify_round_leaders(const AllocationState& state) {
    RoundLeaders leaders;
    leaders.worst.resize(static_cast<std::size_t>(state.k));
    double best_value = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= state.k; ++i) {
        int worst_j = 1;
        double worst_value = -std::numeric_limits<double>::infinity();
        for (int j = 1; j <= state.m; ++j) {
            const ScenarioStats& s = state.at(i, j);
            assert(s.n >= 1);
            if (s.mean > worst_value) {
                worst_value = s.mean;
                worst_j = j;
            }
        }
        leaders.worst[static_cast<std::size_t>(i - 1)] = worst_j;
        if (worst_value < best_value) {
            best_value = worst_value;
            leaders.best = i;
        }
    }
    return leaders;
}

void GaaConfig::validate(int k, int m) const {
    if (n0 < 1) throw ConfigError("gaa requires n0 >= 1");
    if (delta_m < 1 || delta_k < 1) throw ConfigError("gaa requires delta_m >= 1 and delta_k >= 1");
    if (!m_rule) throw ConfigError("gaa requires an m-step rule");
    if (!joint_mode && !k_rule) throw ConfigError("gaa requires a k-step rule");
    const bool variance_needed =
        m_rule->needs_variance() || (k_rule && !joint_mode && k_rule->needs_variance());
    if (variance_needed && n0 < 2)
        throw ConfigError("variance-based rules require n0 >= 2");
    (void)k;
    (void)m;
}

GaaConfig aa_as_gaa(int k, int m) {
    GaaConfig config;
    config.n0 = 1;
    config.delta_m = m;
    config.delta_k = k - 1;
    config.m_rule = std::make_shared<EqualRule>();
    config.k_rule = std::make_shared<EqualRule>();
    return config;
}

namespace {

void take_observation(AllocationState& state, StreamSet& streams, ScenarioId id,
                      Provenance provenance) {
    const double x = streams.next(id);
    update_stats(state.at(id.alternative, id.distribution), x, provenance);
    state.consumed += 1;
}

RunRecord finalize(const ProblemInstance& instance, const AllocationState& state, int selection,
                   std::vector<int> per_round_best) {
    RunRecord record;
    record.selection = selection;
    record.sample_sizes.reserve(state.stats.size());
    record.sample_means.reserve(state.stats.size());
    for (const ScenarioStats& s : state.stats) {
        record.sample_sizes.push_back(s.n);
        record.sample_sizes_m.push_back(s.n_m);
        record.sample_sizes_k.push_back(s.n_k);
        record.sample_means.push_back(s.mean);
    }
    record.r_m = state.r_m;
    record.r_k = state.r_k;
    record.per_round_best = std::move(per_round_best);
    record.consumed = state.consumed;
    if (instance.canonical) record.correct = selection == instance.true_best();
    return record;
}

void check_allocation(const std::vector<std::int64_t>& alloc, std::int64_t delta,
                      bool zero_one_only, std::int64_t round, const char* step) {
    std::int64_t total = 0;
    for (std::int64_t a : alloc) {
        if (a < 0)
            throw std::logic_error(std::string(step) + " allocation negative in round " +
                                   std::to_string(round));
        if (zero_one_only && a > 1)
            throw std::logic_error(std::string(step) + " allocation exceeds 1 per scenario in round " +
                                   std::to_string(round));
        total += a;
    }
    if (total != delta)
        throw std::logic_error(std::string(step) + " allocation does not sum to the step budget in round " +
                               std::to_string(round));
}

}  // namespace

RunRecord run_aa(const ProblemInstance& instance, std::int64_t budget, StreamSet& streams) {
    instance.validate();
    const int k = instance.k;
    const int m = instance.m;
    if (budget < static_cast<std::int64_t>(k) * m)
        throw ConfigError("aa requires budget N >= k*m");

    AllocationState state(k, m);
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= m; ++j)
            take_observation(state, streams, ScenarioId{i, j}, Provenance::Init);

    std::vector<int> per_round_best;
    const std::int64_t round_cost = k + m - 1;
    while (state.consumed + round_cost < budget) {
        const RoundLeaders leaders = identify_round_leaders(state);
        const int b = leaders.best;
        per_round_best.push_back(b);
        state.rounds += 1;
        state.r_m[static_cast<std::size_t>(b - 1)] += 1;
        for (int i = 1; i <= k; ++i)
            if (i != b) state.r_k[static_cast<std::size_t>(i - 1)] += 1;

        for (int j = 1; j <= m; ++j)
            take_observation(state, streams, ScenarioId{b, j}, Provenance::MStep);
        // The k-step targets the worst-case scenarios fixed at round start.
        for (int i = 1; i <= k; ++i) {
            if (i == b) continue;
            const int j = leaders.worst[static_cast<std::size_t>(i - 1)];
            take_observation(state, streams, ScenarioId{i, j}, Provenance::KStep);
        }
    }
    assert(state.counters_consistent());
    assert(state.consumed <= budget);

    int selection = 1;
    std::int64_t best_total = state.alternative_total(1);
    for (int i = 2; i <= k; ++i) {
        const std::int64_t total = state.alternative_total(i);
        if (total > best_total) {
            best_total = total;
            selection = i;
        }
    }
    return finalize(instance, state, selection, std::move(per_round_best));
}

RunRecord run_aa(const ProblemInstance& instance, std::int64_t budget, const StreamSpec& spec) {
    StreamSpec effective = spec;
    if (effective.horizon <= 0) effective.horizon = budget;
    BackendStreamSet streams(instance, effective);
    return run_aa(instance, budget, streams);
}

RunRecord run_gaa(const ProblemInstance& instance, std::int64_t budget, const GaaConfig& config,
                  StreamSet& streams, CounterSequence& decisions) {
    instance.validate();
    const int k = instance.k;
    const int m = instance.m;
    config.validate(k, m);
    if (budget < config.n0 * static_cast<std::int64_t>(k) * m)
        throw ConfigError("gaa requires budget N >= n0*k*m");

    AllocationState state(k, m);
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= m; ++j)
            for (std::int64_t c = 0; c < config.n0; ++c)
                take_observation(state, streams, ScenarioId{i, j}, Provenance::Init);

    std::vector<int> per_round_best;
    const std::int64_t round_reserve = config.delta_m + config.delta_k;
    while (state.consumed + round_reserve < budget) {
        const RoundLeaders leaders = identify_round_leaders(state);
        const int b = leaders.best;
        per_round_best.push_back(b);
        state.rounds += 1;
        state.r_m[static_cast<std::size_t>(b - 1)] += 1;
        for (int i = 1; i <= k; ++i)
            if (i != b) state.r_k[static_cast<std::size_t>(i - 1)] += 1;

        if (config.joint_mode) {
            // Concatenate the m-part (as is) and the negated k-part, and let
            // one max-seeking rule place a single observation. The negated
            // values are anchored at twice the incumbent's worst-case sample
            // mean: reflecting rather than bare negation keeps the two groups
            // on one scale, so the incumbent's worst-case scenario is the
            // top of the race exactly whenever it has the lowest worst-case
            // mean, and close competitors land just beneath it.
            const int b_worst = leaders.worst[static_cast<std::size_t>(b - 1)];
            const double anchor = 2.0 * state.at(b, b_worst).mean;
            std::vector<Candidate> candidates;
            candidates.reserve(static_cast<std::size_t>(m + k - 1));
            for (int j = 1; j <= m; ++j)
                candidates.push_back(Candidate{ScenarioId{b, j}, &state.at(b, j), 1.0, 0.0});
            for (int i = 1; i <= k; ++i) {
                if (i == b) continue;
                const int j = leaders.worst[static_cast<std::size_t>(i - 1)];
                candidates.push_back(
                    Candidate{ScenarioId{i, j}, &state.at(i, j), -1.0, anchor});
            }
            std::vector<std::int64_t> alloc;
            try {
                alloc = config.m_rule->allocate(candidates, 1, Direction::MaxSeeking, decisions);
            } catch (const ConfigError& e) {
                throw ConfigError("joint step failed in round " + std::to_string(state.rounds) +
                                  ": " + e.what());
            }
            check_allocation(alloc, 1, /*zero_one_only=*/true, state.rounds, "joint");
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (alloc[c] == 0) continue;
                const Provenance provenance =
                    candidates[c].id.alternative == b ? Provenance::MStep : Provenance::KStep;
                take_observation(state, streams, candidates[c].id, provenance);
            }
        } else {
            std::vector<Candidate> m_candidates;
            m_candidates.reserve(static_cast<std::size_t>(m));
            for (int j = 1; j <= m; ++j)
                m_candidates.push_back(Candidate{ScenarioId{b, j}, &state.at(b, j), 1.0});
            std::vector<std::int64_t> m_alloc;
            try {
                m_alloc = config.m_rule->allocate(m_candidates, config.delta_m,
                                                  Direction::MaxSeeking, decisions);
            } catch (const ConfigError& e) {
                throw ConfigError("m-step failed in round " + std::to_string(state.rounds) + ": " +
                                  e.what());
            }
            check_allocation(m_alloc, config.delta_m, /*zero_one_only=*/false, state.rounds,
                             "m-step");
            for (std::size_t c = 0; c < m_candidates.size(); ++c)
                for (std::int64_t rep = 0; rep < m_alloc[c]; ++rep)
                    take_observation(state, streams, m_candidates[c].id, Provenance::MStep);

            std::vector<Candidate> k_candidates;
            k_candidates.reserve(static_cast<std::size_t>(k - 1));
            for (int i = 1; i <= k; ++i) {
                if (i == b) continue;
                const int j = leaders.worst[static_cast<std::size_t>(i - 1)];
                k_candidates.push_back(Candidate{ScenarioId{i, j}, &state.at(i, j), 1.0});
            }
            std::vector<std::int64_t> k_alloc;
            try {
                k_alloc = config.k_rule->allocate(k_candidates, config.delta_k,
                                                  Direction::MinSeeking, decisions);
            } catch (const ConfigError& e) {
                throw ConfigError("k-step failed in round " + std::to_string(state.rounds) + ": " +
                                  e.what());
            }
            check_allocation(k_alloc, config.delta_k, /*zero_one_only=*/true, state.rounds,
                             "k-step");
            for (std::size_t c = 0; c < k_candidates.size(); ++c)
                if (k_alloc[c] == 1)
                    take_observation(state, streams, k_candidates[c].id, Provenance::KStep);
        }
    }
    assert(state.counters_consistent());
    assert(state.consumed <= budget);

    int selection = 1;
    for (int i = 2; i <= k; ++i) {
        const std::int64_t lhs = state.r_m[static_cast<std::size_t>(i - 1)];
        const std::int64_t rhs = state.r_m[static_cast<std::size_t>(selection - 1)];
        if (lhs > rhs ||
            (lhs == rhs &&
             state.worst_case_sample_mean(i) < state.worst_case_sample_mean(selection)))
            selection = i;
    }
    return finalize(instance, state, selection, std::move(per_round_best));
}

RunRecord run_gaa(const ProblemInstance& instance, std::int64_t budget, const GaaConfig& config,
                  const StreamSpec& spec) {
    StreamSpec effective = spec;
    if (effective.horizon <= 0) effective.horizon = budget;
    BackendStreamSet streams(instance, effective);
    CounterSequence decisions = decision_stream(effective);
    return run_gaa(instance, budget, config, streams, decisions);
}

}  // namespace drrs
