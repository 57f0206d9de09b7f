#include "drrs/streams.hpp"

#include <cmath>
#include <utility>

#include "drrs/testbeds.hpp"

namespace drrs {

namespace {

std::function<double(std::int64_t)> make_value_fn(const ProblemInstance& instance,
                                                  ScenarioId scenario, const StreamSpec& spec) {
    const auto alt = static_cast<std::uint32_t>(scenario.alternative);
    const auto dist = static_cast<std::uint32_t>(scenario.distribution);
    const PhiloxKey key = make_key(spec.master_seed);
    const std::uint32_t rep = spec.replication;

    if (std::holds_alternative<GaussianBackend>(instance.backend)) {
        const double mu = instance.mean(scenario.alternative, scenario.distribution);
        const double sigma =
            std::sqrt(instance.variance(scenario.alternative, scenario.distribution));
        return [=](std::int64_t idx) {
            const PhiloxBlock block = philox4x32(
                make_counter(StreamLane::Observation, alt, dist, rep,
                             static_cast<std::uint64_t>(idx), 0),
                key);
            return mu + sigma * standard_normal(block);
        };
    }
    if (const auto* inv = std::get_if<InventoryBackend>(&instance.backend)) {
        const InventoryPolicy policy = inv->policies.at(scenario.alternative - 1);
        const double demand_mean = inv->demand_means.at(scenario.distribution - 1);
        const InventoryBackend params = *inv;
        return [=](std::int64_t idx) {
            CounterSequence rng(key, StreamLane::Testbed, alt, dist, rep,
                                static_cast<std::uint64_t>(idx));
            return inventory_cost(params, policy, demand_mean, rng);
        };
    }
    const auto& queue = std::get<QueueBackend>(instance.backend);
    const int servers = queue.staffing_levels.at(scenario.alternative - 1);
    const ServiceDistribution service = queue.services.at(scenario.distribution - 1);
    const QueueBackend params = queue;
    return [=](std::int64_t idx) {
        CounterSequence rng(key, StreamLane::Testbed, alt, dist, rep,
                            static_cast<std::uint64_t>(idx));
        return queue_cost(params, servers, service, rng);
    };
}

}  // namespace

ScenarioStream open_stream(const ProblemInstance& instance, ScenarioId scenario,
                           const StreamSpec& spec) {
    if (!instance.contains(scenario)) throw ConfigError("scenario out of range for instance");
    if (spec.horizon < 1) throw ConfigError("stream horizon must be >= 1");
    return ScenarioStream(scenario, spec.horizon, make_value_fn(instance, scenario, spec));
}

ScenarioStream stub_stream(ScenarioId scenario, std::vector<double> values) {
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    const auto horizon = static_cast<std::int64_t>(data->size());
    return ScenarioStream(scenario, horizon, [data](std::int64_t idx) {
        return data->at(static_cast<std::size_t>(idx));
    });
}

std::vector<double> prefix_means(const ScenarioStream& stream, std::int64_t n) {
    if (n > stream.horizon()) throw HorizonExceeded("prefix_means beyond stream horizon");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    double mean = 0.0;
    for (std::int64_t t = 0; t < n; ++t) {
        const double x = stream.value_at(t);
        mean += (x - mean) / static_cast<double>(t + 1);
        out.push_back(mean);
    }
    return out;
}

BackendStreamSet::BackendStreamSet(const ProblemInstance& instance, const StreamSpec& spec)
    : m_(instance.m) {
    streams_.reserve(static_cast<std::size_t>(instance.k) * instance.m);
    for (int i = 1; i <= instance.k; ++i)
        for (int j = 1; j <= instance.m; ++j)
            streams_.push_back(open_stream(instance, ScenarioId{i, j}, spec));
}

double BackendStreamSet::next(ScenarioId scenario) {
    return streams_[static_cast<std::size_t>(scenario.alternative - 1) * m_ +
                    (scenario.distribution - 1)]
        .next();
}

StubStreamSet::StubStreamSet(int k, int m, std::vector<std::vector<double>> sequences) : m_(m) {
    if (sequences.size() != static_cast<std::size_t>(k) * m)
        throw ConfigError("stub stream set needs k*m sequences");
    streams_.reserve(sequences.size());
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= m; ++j)
            streams_.push_back(stub_stream(
                ScenarioId{i, j}, std::move(sequences[static_cast<std::size_t>(i - 1) * m + j - 1])));
}

double StubStreamSet::next(ScenarioId scenario) {
    return streams_[static_cast<std::size_t>(scenario.alternative - 1) * m_ +
                    (scenario.distribution - 1)]
        .next();
}

}  // namespace drrs
