#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "drrs/model.hpp"
#include "drrs/philox.hpp"
#include "drrs/posterior.hpp"
#include "drrs/types.hpp"

namespace drrs {

// One scenario eligible for allocation in a step. The joint k/m design gives
// the k-part candidates sign -1 and an offset of twice the incumbent's
// worst-case sample mean, reflecting them onto the m-part's scale so the
// incumbent's worst-case scenario tops the concatenated race by construction.
struct Candidate {
    ScenarioId id;
    const ScenarioStats* stats = nullptr;
    double sign = 1.0;
    double offset = 0.0;
};

// Maps a candidate set and a step budget to a nonnegative integer allocation
// summing exactly to the budget. Rules hold no mutable state; all randomness
// comes from the per-replication decision stream.
class SamplingRule {
  public:
    virtual ~SamplingRule() = default;
    virtual std::vector<std::int64_t> allocate(std::span<const Candidate> candidates,
                                               std::int64_t delta, Direction direction,
                                               CounterSequence& rng) const = 0;
    virtual std::string name() const = 0;
    virtual bool needs_variance() const { return false; }
};

// Equal allocation: delta = c*|candidates| gives c each; delta <= |candidates|
// gives one observation to the first delta candidates in index order.
class EqualRule final : public SamplingRule {
  public:
    std::vector<std::int64_t> allocate(std::span<const Candidate> candidates, std::int64_t delta,
                                       Direction direction, CounterSequence& rng) const override;
    std::string name() const override { return "equal"; }
};

// Knowledge gradient under the unknown-variance (Student-t) predictive,
// fully sequential (delta must be 1).
class KgRule final : public SamplingRule {
  public:
    std::vector<std::int64_t> allocate(std::span<const Candidate> candidates, std::int64_t delta,
                                       Direction direction, CounterSequence& rng) const override;
    std::string name() const override { return "kg"; }
    bool needs_variance() const override { return true; }
};

// Top-two Thompson sampling with leader probability beta; the challenger is
// chosen by redrawing with the leader deactivated. Fully sequential.
class TttsRule final : public SamplingRule {
  public:
    explicit TttsRule(double beta);
    std::vector<std::int64_t> allocate(std::span<const Candidate> candidates, std::int64_t delta,
                                       Direction direction, CounterSequence& rng) const override;
    std::string name() const override { return "ttts"; }
    bool needs_variance() const override { return true; }
    double beta() const { return beta_; }

  private:
    double beta_;
};

// Epsilon-exploration wrapper: with probability epsilon the step budget is
// spread uniformly at random over the candidates (distinct scenarios first),
// otherwise the wrapped rule decides. epsilon = 0 consumes no randomness, so
// it is bit-identical to the wrapped rule on shared streams.
class EpsilonGreedyRule final : public SamplingRule {
  public:
    EpsilonGreedyRule(std::shared_ptr<const SamplingRule> inner, double epsilon);
    std::vector<std::int64_t> allocate(std::span<const Candidate> candidates, std::int64_t delta,
                                       Direction direction, CounterSequence& rng) const override;
    std::string name() const override;
    bool needs_variance() const override { return inner_->needs_variance(); }

  private:
    std::shared_ptr<const SamplingRule> inner_;
    double epsilon_;
};

// Effective (direction- and sign-adjusted) mean used for max-seeking
// comparisons inside rules.
inline double effective_mean(const Candidate& c, Direction direction) {
    const double v = c.sign * c.stats->mean + c.offset;
    return direction == Direction::MinSeeking ? -v : v;
}

// Same adjustment applied to a posterior draw.
inline double effective_value(const Candidate& c, double raw, Direction direction) {
    const double v = c.sign * raw + c.offset;
    return direction == Direction::MinSeeking ? -v : v;
}

}  // namespace drrs
