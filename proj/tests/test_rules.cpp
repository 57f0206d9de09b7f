#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "drrs/rules.hpp"

using namespace drrs;

namespace {

struct CandidatePool {
    std::vector<ScenarioStats> stats;
    std::vector<Candidate> candidates;
};

CandidatePool make_pool(const std::vector<std::vector<double>>& observations) {
    CandidatePool pool;
    pool.stats.resize(observations.size());
    for (std::size_t c = 0; c < observations.size(); ++c)
        for (double x : observations[c]) update_stats(pool.stats[c], x, Provenance::Init);
    for (std::size_t c = 0; c < observations.size(); ++c)
        pool.candidates.push_back(
            Candidate{ScenarioId{static_cast<int>(c) + 1, 1}, &pool.stats[c], 1.0});
    return pool;
}

CounterSequence fresh_rng(std::uint32_t replication = 1) {
    return CounterSequence(make_key(987654321), StreamLane::Decision, 0, 0, replication, 0);
}

// Always dumps the whole budget on candidate 1: used to probe the epsilon mix.
struct FirstCandidateRule final : SamplingRule {
    std::vector<std::int64_t> allocate(std::span<const Candidate> candidates, std::int64_t delta,
                                       Direction, CounterSequence&) const override {
        std::vector<std::int64_t> alloc(candidates.size(), 0);
        alloc[0] = delta;
        return alloc;
    }
    std::string name() const override { return "first"; }
};

}  // namespace

TEST_CASE("equal rule splits evenly or fills in index order") {
    CounterSequence rng = fresh_rng();
    CandidatePool pool = make_pool({{1.0}, {2.0}, {3.0}});
    CHECK(EqualRule{}.allocate(pool.candidates, 3, Direction::MaxSeeking, rng) ==
          std::vector<std::int64_t>{1, 1, 1});
    CHECK(EqualRule{}.allocate(pool.candidates, 2, Direction::MaxSeeking, rng) ==
          std::vector<std::int64_t>{1, 1, 0});

    CandidatePool two = make_pool({{1.0}, {2.0}});
    CHECK(EqualRule{}.allocate(two.candidates, 4, Direction::MaxSeeking, rng) ==
          std::vector<std::int64_t>{2, 2});

    CHECK_THROWS_AS(EqualRule{}.allocate(pool.candidates, 7, Direction::MaxSeeking, rng),
                    ConfigError);
}

TEST_CASE("kg rule breaks symmetric ties to the lowest index") {
    CounterSequence rng = fresh_rng();
    CandidatePool pool = make_pool({{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}});
    const auto alloc = KgRule{}.allocate(pool.candidates, 1, Direction::MaxSeeking, rng);
    CHECK(alloc == std::vector<std::int64_t>{1, 0});
}

TEST_CASE("kg rule prefers the less-sampled candidate at equal means") {
    // Candidate A: 100 observations, B: only 2; same mean and spread.
    std::vector<std::vector<double>> obs(2);
    for (int i = 0; i < 50; ++i) {
        obs[0].push_back(1.0);
        obs[0].push_back(-1.0);
    }
    obs[1] = {1.0, -1.0};
    CandidatePool pool = make_pool(obs);
    CounterSequence rng = fresh_rng();
    const auto alloc = KgRule{}.allocate(pool.candidates, 1, Direction::MaxSeeking, rng);
    CHECK(alloc == std::vector<std::int64_t>{0, 1});

    // Same conclusion with finite scores (n = 4 for B).
    obs[1] = {1.0, -1.0, 1.0, -1.0};
    CandidatePool pool2 = make_pool(obs);
    const auto alloc2 = KgRule{}.allocate(pool2.candidates, 1, Direction::MaxSeeking, rng);
    CHECK(alloc2 == std::vector<std::int64_t>{0, 1});
}

TEST_CASE("kg rule enforces its preconditions") {
    CounterSequence rng = fresh_rng();
    CandidatePool pool = make_pool({{1.0, 2.0}, {1.0}});
    CHECK_THROWS_AS(KgRule{}.allocate(pool.candidates, 1, Direction::MaxSeeking, rng),
                    ConfigError);
    CandidatePool ok = make_pool({{1.0, 2.0}, {1.0, 3.0}});
    CHECK_THROWS_AS(KgRule{}.allocate(ok.candidates, 2, Direction::MaxSeeking, rng), ConfigError);
}

TEST_CASE("ttts with beta=1 always samples the dominant leader") {
    // Candidate 1 dominates: posterior mass far above candidate 2.
    std::vector<std::vector<double>> obs(2);
    for (int i = 0; i < 100; ++i) obs[0].push_back(100.0 + (i % 2 == 0 ? 0.01 : -0.01));
    for (int i = 0; i < 100; ++i) obs[1].push_back(0.0 + (i % 2 == 0 ? 0.01 : -0.01));
    CandidatePool pool = make_pool(obs);

    TttsRule always_leader(1.0);
    TttsRule always_challenger(0.0);
    CounterSequence rng = fresh_rng();
    for (int i = 0; i < 200; ++i) {
        CHECK(always_leader.allocate(pool.candidates, 1, Direction::MaxSeeking, rng) ==
              std::vector<std::int64_t>{1, 0});
        // With two candidates the challenger is always the non-leader.
        CHECK(always_challenger.allocate(pool.candidates, 1, Direction::MaxSeeking, rng) ==
              std::vector<std::int64_t>{0, 1});
    }
}

TEST_CASE("ttts with beta=0.5 splits symmetric candidates evenly") {
    std::vector<std::vector<double>> obs(2);
    for (int i = 0; i < 20; ++i) {
        obs[0].push_back(i % 2 == 0 ? 1.0 : -1.0);
        obs[1].push_back(i % 2 == 0 ? 1.0 : -1.0);
    }
    CandidatePool pool = make_pool(obs);
    TttsRule rule(0.5);
    CounterSequence rng = fresh_rng();
    const int calls = 100000;
    std::int64_t first = 0;
    for (int i = 0; i < calls; ++i)
        first += rule.allocate(pool.candidates, 1, Direction::MaxSeeking, rng)[0];
    const double share = static_cast<double>(first) / calls;
    const double se = 0.5 / std::sqrt(static_cast<double>(calls));
    CHECK(std::abs(share - 0.5) < 3.0 * se);
}

TEST_CASE("ttts direction flips which candidate leads") {
    std::vector<std::vector<double>> obs(2);
    for (int i = 0; i < 100; ++i) obs[0].push_back(10.0 + (i % 2 ? 0.01 : -0.01));
    for (int i = 0; i < 100; ++i) obs[1].push_back(-10.0 + (i % 2 ? 0.01 : -0.01));
    CandidatePool pool = make_pool(obs);
    TttsRule rule(1.0);
    CounterSequence rng = fresh_rng();
    CHECK(rule.allocate(pool.candidates, 1, Direction::MaxSeeking, rng) ==
          std::vector<std::int64_t>{1, 0});
    CHECK(rule.allocate(pool.candidates, 1, Direction::MinSeeking, rng) ==
          std::vector<std::int64_t>{0, 1});
}

TEST_CASE("epsilon=0 wrapper is bit-identical to the inner rule") {
    CandidatePool pool = make_pool({{1.0, 2.0}, {3.0, 4.0}, {0.0, 1.0}});
    TttsRule inner(0.5);
    EpsilonGreedyRule wrapped(std::make_shared<TttsRule>(0.5), 0.0);
    CounterSequence rng_a = fresh_rng(5);
    CounterSequence rng_b = fresh_rng(5);
    for (int i = 0; i < 500; ++i)
        CHECK(inner.allocate(pool.candidates, 1, Direction::MaxSeeking, rng_a) ==
              wrapped.allocate(pool.candidates, 1, Direction::MaxSeeking, rng_b));
}

TEST_CASE("epsilon=1 wrapper allocates uniformly") {
    CandidatePool pool = make_pool({{1.0, 2.0}, {3.0, 4.0}, {0.0, 1.0}});
    EpsilonGreedyRule uniform(std::make_shared<FirstCandidateRule>(), 1.0);
    CounterSequence rng = fresh_rng(6);
    const int calls = 100000;
    std::vector<std::int64_t> counts(3, 0);
    for (int i = 0; i < calls; ++i) {
        const auto alloc = uniform.allocate(pool.candidates, 1, Direction::MaxSeeking, rng);
        for (std::size_t c = 0; c < 3; ++c) counts[c] += alloc[c];
    }
    const double se = std::sqrt((1.0 / 3) * (2.0 / 3) / calls);
    for (std::int64_t c : counts)
        CHECK(std::abs(static_cast<double>(c) / calls - 1.0 / 3) < 3.0 * se);
}

TEST_CASE("epsilon=0.1 mixes the stub rule with uniform exploration") {
    CandidatePool pool = make_pool({{1.0, 2.0}, {3.0, 4.0}, {0.0, 1.0}});
    EpsilonGreedyRule mixed(std::make_shared<FirstCandidateRule>(), 0.1);
    CounterSequence rng = fresh_rng(7);
    const int calls = 100000;
    std::int64_t second = 0;
    for (int i = 0; i < calls; ++i)
        second += mixed.allocate(pool.candidates, 1, Direction::MaxSeeking, rng)[1];
    const double expected = 0.1 / 3.0;
    const double se = std::sqrt(expected * (1.0 - expected) / calls);
    CHECK(std::abs(static_cast<double>(second) / calls - expected) < 3.0 * se);
}

TEST_CASE("epsilon exploration spreads larger budgets over distinct candidates") {
    CandidatePool pool = make_pool({{1.0, 2.0}, {3.0, 4.0}, {0.0, 1.0}});
    EpsilonGreedyRule uniform(std::make_shared<FirstCandidateRule>(), 1.0);
    CounterSequence rng = fresh_rng(8);
    for (int i = 0; i < 200; ++i) {
        const auto alloc = uniform.allocate(pool.candidates, 2, Direction::MaxSeeking, rng);
        std::int64_t total = 0;
        for (std::int64_t a : alloc) {
            CHECK(a >= 0);
            CHECK(a <= 1);   // distinct scenarios for delta <= |candidates|
            total += a;
        }
        CHECK(total == 2);
    }
}

TEST_CASE("rule constructors validate their parameters") {
    CHECK_THROWS_AS(TttsRule(1.5), ConfigError);
    CHECK_THROWS_AS(TttsRule(-0.1), ConfigError);
    CHECK_THROWS_AS(EpsilonGreedyRule(nullptr, 0.5), ConfigError);
    CHECK_THROWS_AS(EpsilonGreedyRule(std::make_shared<EqualRule>(), 2.0), ConfigError);
}
