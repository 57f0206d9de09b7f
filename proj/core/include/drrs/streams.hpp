#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "drrs/model.hpp"
#include "drrs/philox.hpp"
#include "drrs/types.hpp"

namespace drrs {

// Identifies one macro-replication's randomness. A full procedure run is a
// pure function of (instance, procedure config, StreamSpec).
struct StreamSpec {
    std::uint64_t master_seed = 0;
    std::uint32_t replication = 0;
    std::int64_t horizon = 0;   // max observations per scenario
};

// Sequential reader over one scenario's i.i.d. observation sequence.
// Observation `idx` (0-based) is addressable at random; the cursor only
// tracks the next unread position.
class ScenarioStream {
  public:
    ScenarioStream() = default;
    ScenarioStream(ScenarioId scenario, std::int64_t horizon,
                   std::function<double(std::int64_t)> value_at)
        : scenario_(scenario), horizon_(horizon), value_at_(std::move(value_at)) {}

    double next() {
        if (cursor_ >= horizon_) throw HorizonExceeded("scenario stream horizon exceeded");
        return value_at_(cursor_++);
    }

    double value_at(std::int64_t idx) const { return value_at_(idx); }

    ScenarioId scenario() const { return scenario_; }
    std::int64_t cursor() const { return cursor_; }
    std::int64_t horizon() const { return horizon_; }

  private:
    ScenarioId scenario_{};
    std::int64_t horizon_ = 0;
    std::int64_t cursor_ = 0;
    std::function<double(std::int64_t)> value_at_;
};

// Deterministic function of (master_seed, replication, scenario). Identical
// inputs yield bit-identical streams regardless of read order or threads.
ScenarioStream open_stream(const ProblemInstance& instance, ScenarioId scenario,
                           const StreamSpec& spec);

// Fixed-content stream for tests and worked examples.
ScenarioStream stub_stream(ScenarioId scenario, std::vector<double> values);

// Prefix means of the first n observations, computed with the same running
// update the engine uses so the two agree bit-for-bit. result[t-1] is the
// mean of the first t observations.
std::vector<double> prefix_means(const ScenarioStream& stream, std::int64_t n);

// ---------------------------------------------------------------------------
// Observation sources for the engines
// ---------------------------------------------------------------------------

// What an engine consumes: one fresh observation per request per scenario.
class StreamSet {
  public:
    virtual ~StreamSet() = default;
    virtual double next(ScenarioId scenario) = 0;
};

// Per-scenario counter-keyed streams for a problem instance.
class BackendStreamSet : public StreamSet {
  public:
    BackendStreamSet(const ProblemInstance& instance, const StreamSpec& spec);
    double next(ScenarioId scenario) override;

  private:
    int m_ = 0;
    std::vector<ScenarioStream> streams_;
};

// Stub source with fixed per-scenario sequences (k x m, row-major).
class StubStreamSet : public StreamSet {
  public:
    StubStreamSet(int k, int m, std::vector<std::vector<double>> sequences);
    double next(ScenarioId scenario) override;

  private:
    int m_ = 0;
    std::vector<ScenarioStream> streams_;
};

// Multiplies every observation of an inner source by a positive constant.
class ScaledStreamSet : public StreamSet {
  public:
    ScaledStreamSet(StreamSet& inner, double scale) : inner_(inner), scale_(scale) {}
    double next(ScenarioId scenario) override { return scale_ * inner_.next(scenario); }

  private:
    StreamSet& inner_;
    double scale_;
};

// Randomness for the sampling rules themselves (exploration coins, posterior
// draws). Lives on its own lane so rule randomness never perturbs the
// observation streams.
inline CounterSequence decision_stream(const StreamSpec& spec) {
    return CounterSequence(make_key(spec.master_seed), StreamLane::Decision, 0, 0,
                           spec.replication, 0);
}

}  // namespace drrs
