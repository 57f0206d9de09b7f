#include "drrs/rules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace drrs {

std::vector<std::int64_t> EqualRule::allocate(std::span<const Candidate> candidates,
                                              std::int64_t delta, Direction, CounterSequence&) const {
    const auto count = static_cast<std::int64_t>(candidates.size());
    if (count == 0) throw ConfigError("equal rule needs at least one candidate");
    std::vector<std::int64_t> alloc(candidates.size(), 0);
    if (delta % count == 0) {
        std::fill(alloc.begin(), alloc.end(), delta / count);
        return alloc;
    }
    if (delta <= count) {
        for (std::int64_t i = 0; i < delta; ++i) alloc[static_cast<std::size_t>(i)] = 1;
        return alloc;
    }
    throw ConfigError("equal rule requires delta to be a multiple of the candidate count "
                      "or at most the candidate count");
}

namespace {

void require_variance_ready(std::span<const Candidate> candidates, const char* rule) {
    for (const Candidate& c : candidates)
        if (c.stats->n < 2)
            throw ConfigError(std::string(rule) + " rule requires n >= 2 per candidate");
}

}  // namespace

std::vector<std::int64_t> KgRule::allocate(std::span<const Candidate> candidates,
                                           std::int64_t delta, Direction direction,
                                           CounterSequence&) const {
    if (delta != 1) throw ConfigError("kg rule is fully sequential (delta must be 1)");
    if (candidates.empty()) throw ConfigError("kg rule needs at least one candidate");
    require_variance_ready(candidates, "kg");

    // Score each candidate against the best effective mean among the rest.
    std::size_t best_idx = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double best_other = -std::numeric_limits<double>::infinity();
        for (std::size_t o = 0; o < candidates.size(); ++o)
            if (o != c) best_other = std::max(best_other, effective_mean(candidates[o], direction));
        double score;
        if (candidates.size() == 1) {
            score = 0.0;
        } else {
            ConjugateBelief belief = belief_from_stats(*candidates[c].stats);
            belief.loc = effective_mean(candidates[c], direction);
            score = kg_score(belief, best_other, Direction::MaxSeeking);
        }
        if (score > best_score) {
            best_score = score;
            best_idx = c;
        }
    }
    std::vector<std::int64_t> alloc(candidates.size(), 0);
    alloc[best_idx] = 1;
    return alloc;
}

TttsRule::TttsRule(double beta) : beta_(beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("ttts beta must lie in [0,1]");
}

std::vector<std::int64_t> TttsRule::allocate(std::span<const Candidate> candidates,
                                             std::int64_t delta, Direction direction,
                                             CounterSequence& rng) const {
    if (delta != 1) throw ConfigError("ttts rule is fully sequential (delta must be 1)");
    if (candidates.empty()) throw ConfigError("ttts rule needs at least one candidate");
    require_variance_ready(candidates, "ttts");

    const auto draw_effective = [&](const Candidate& c) {
        const ConjugateBelief belief = belief_from_stats(*c.stats);
        return effective_value(c, draw_mean(belief, rng), direction);
    };

    std::size_t leader = 0;
    double leader_draw = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const double theta = draw_effective(candidates[c]);
        if (theta > leader_draw) {
            leader_draw = theta;
            leader = c;
        }
    }

    std::size_t target = leader;
    if (candidates.size() > 1 && !(rng.next_uniform() <= beta_)) {
        // Challenger: redraw with the leader deactivated; one pass suffices.
        std::size_t challenger = leader == 0 ? 1 : 0;
        double challenger_draw = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            if (c == leader) continue;
            const double theta = draw_effective(candidates[c]);
            if (theta > challenger_draw) {
                challenger_draw = theta;
                challenger = c;
            }
        }
        target = challenger;
    }

    std::vector<std::int64_t> alloc(candidates.size(), 0);
    alloc[target] = 1;
    return alloc;
}

EpsilonGreedyRule::EpsilonGreedyRule(std::shared_ptr<const SamplingRule> inner, double epsilon)
    : inner_(std::move(inner)), epsilon_(epsilon) {
    if (!inner_) throw ConfigError("epsilon wrapper needs an inner rule");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon must lie in [0,1]");
}

std::string EpsilonGreedyRule::name() const {
    return inner_->name() + "+eps";
}

std::vector<std::int64_t> EpsilonGreedyRule::allocate(std::span<const Candidate> candidates,
                                                      std::int64_t delta, Direction direction,
                                                      CounterSequence& rng) const {
    if (epsilon_ > 0.0 && rng.next_uniform() <= epsilon_) {
        const auto count = static_cast<std::int64_t>(candidates.size());
        if (count == 0) throw ConfigError("epsilon exploration needs at least one candidate");
        std::vector<std::int64_t> alloc(candidates.size(), delta / count);
        std::int64_t remainder = delta % count;
        if (remainder > 0) {
            // Partial Fisher-Yates: `remainder` distinct candidates, uniformly.
            std::vector<std::size_t> order(candidates.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            for (std::int64_t r = 0; r < remainder; ++r) {
                const auto span_left = static_cast<double>(count - r);
                auto pick = static_cast<std::size_t>(rng.next_uniform() * span_left);
                pick = std::min(pick, static_cast<std::size_t>(count - r - 1));
                std::swap(order[static_cast<std::size_t>(r)],
                          order[static_cast<std::size_t>(r) + pick]);
                alloc[order[static_cast<std::size_t>(r)]] += 1;
            }
        }
        return alloc;
    }
    return inner_->allocate(candidates, delta, direction, rng);
}

}  // namespace drrs
