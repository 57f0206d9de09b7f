#include <doctest.h>

#include <cmath>
#include <vector>

#include "drrs/model.hpp"
#include "drrs/philox.hpp"

using namespace drrs;

TEST_CASE("sc_config builds the slippage configuration") {
    const ProblemInstance inst = sc_config(2, 2, 0.5, 25.0);
    CHECK(inst.mean(1, 1) == 0.0);
    CHECK(inst.mean(1, 2) == 0.0);
    CHECK(inst.mean(2, 1) == 0.5);
    CHECK(inst.mean(2, 2) == 0.5);
    for (double v : inst.variances) CHECK(v == 25.0);
    CHECK(inst.gap_delta() == doctest::Approx(0.5));
    CHECK(inst.true_best() == 1);
    CHECK(inst.satisfies_canonical_ordering());
}

TEST_CASE("sc_config degenerates to classic R&S at m=1") {
    const ProblemInstance inst = sc_config(3, 1, 1.0, 1.0);
    CHECK(inst.mean(1, 1) == 0.0);
    CHECK(inst.mean(2, 1) == 1.0);
    CHECK(inst.mean(3, 1) == 1.0);
}

TEST_CASE("sc_config rejects non-positive gap and variance") {
    CHECK_THROWS_AS(sc_config(2, 2, 0.0, 25.0), ConfigError);
    CHECK_THROWS_AS(sc_config(2, 2, -1.0, 25.0), ConfigError);
    CHECK_THROWS_AS(sc_config(2, 2, 0.5, 0.0), ConfigError);
    CHECK_THROWS_AS(sc_config(1, 2, 0.5, 25.0), ConfigError);
}

TEST_CASE("mm_config matches direct substitution") {
    const ProblemInstance inst = mm_config(3, 2, 25.0);
    CHECK(inst.mean(1, 1) == doctest::Approx(0.0));
    CHECK(inst.mean(1, 2) == doctest::Approx(-0.1));
    CHECK(inst.mean(2, 1) == doctest::Approx(0.3));
    CHECK(inst.mean(2, 2) == doctest::Approx(0.2));
    CHECK(inst.mean(3, 1) == doctest::Approx(0.6));
    CHECK(inst.mean(3, 2) == doctest::Approx(0.5));
    CHECK(inst.satisfies_canonical_ordering());

    const ProblemInstance big = mm_config(10, 5, 25.0);
    CHECK(big.mean(1, 1) == doctest::Approx(0.0));
    CHECK(big.mean(2, 1) == doctest::Approx(0.3));
    CHECK(big.gap_delta() == doctest::Approx(0.3));
    CHECK(big.satisfies_canonical_ordering());
}

TEST_CASE("update_stats handles the worked two-point example") {
    ScenarioStats stats;
    update_stats(stats, 3.0, Provenance::Init);
    CHECK(stats.n == 1);
    CHECK(stats.mean == doctest::Approx(3.0));

    update_stats(stats, 1.0, Provenance::MStep);
    CHECK(stats.n == 2);
    CHECK(stats.n_m == 1);
    CHECK(stats.mean == doctest::Approx(2.0));
    CHECK(stats.sample_variance() == doctest::Approx(2.0));

    update_stats(stats, 2.0, Provenance::KStep);
    CHECK(stats.mean == doctest::Approx(2.0));
    CHECK(stats.n_k == 1);
    CHECK(stats.n_init() == 1);
}

TEST_CASE("update_stats rejects non-finite observations") {
    ScenarioStats stats;
    CHECK_THROWS_AS(update_stats(stats, std::nan(""), Provenance::Init), std::invalid_argument);
    CHECK_THROWS_AS(update_stats(stats, INFINITY, Provenance::Init), std::invalid_argument);
}

TEST_CASE("streaming statistics agree with batch recomputation") {
    // A few thousand heavy-tailed-ish values to stress the single-pass update.
    CounterSequence rng(make_key(777), StreamLane::Observation, 1, 1, 1, 0);
    ScenarioStats stats;
    std::vector<double> values;
    for (int i = 0; i < 5000; ++i) {
        const double x = 1e6 + std::exp(2.0 * rng.next_normal());
        values.push_back(x);
        update_stats(stats, x, Provenance::Init);
    }
    double batch_mean = 0.0;
    for (double x : values) batch_mean += x;
    batch_mean /= static_cast<double>(values.size());
    double batch_ss = 0.0;
    for (double x : values) batch_ss += (x - batch_mean) * (x - batch_mean);
    const double batch_var = batch_ss / static_cast<double>(values.size() - 1);

    CHECK(stats.mean == doctest::Approx(batch_mean).epsilon(1e-9));
    CHECK(stats.sample_variance() == doctest::Approx(batch_var).epsilon(1e-9));
}

TEST_CASE("sample variance requires two observations") {
    ScenarioStats stats;
    update_stats(stats, 1.0, Provenance::Init);
    CHECK(!stats.has_variance());
    CHECK_THROWS(stats.sample_variance());
}

TEST_CASE("instance validation rejects bad shapes and variances") {
    ProblemInstance inst = sc_config(2, 2, 0.5, 25.0);
    inst.variances[1] = 0.0;
    CHECK_THROWS_AS(inst.validate(), ConfigError);

    ProblemInstance wrong = sc_config(2, 2, 0.5, 25.0);
    wrong.means.pop_back();
    CHECK_THROWS_AS(wrong.validate(), ConfigError);
}

TEST_CASE("canonical flag is checked against the actual ordering") {
    ProblemInstance inst = sc_config(2, 2, 0.5, 25.0);
    inst.means[inst.index(1, 2)] = 1.0;   // row 1 now increasing in j
    CHECK(!inst.satisfies_canonical_ordering());
    CHECK_THROWS_AS(inst.validate(), ConfigError);
}
