#include "drrs/model.hpp"

#include <cmath>
#include <limits>

namespace drrs {

double ProblemInstance::worst_case_mean(int alternative) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= m; ++j) worst = std::max(worst, mean(alternative, j));
    return worst;
}

int ProblemInstance::true_best() const {
    int best = 1;
    double best_value = worst_case_mean(1);
    for (int i = 2; i <= k; ++i) {
        const double value = worst_case_mean(i);
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    return best;
}

double ProblemInstance::gap_delta() const {
    const int best = true_best();
    double second = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= k; ++i) {
        if (i == best) continue;
        second = std::min(second, worst_case_mean(i));
    }
    return second - worst_case_mean(best);
}

void ProblemInstance::validate() const {
    if (k < 2) throw ConfigError("instance requires k >= 2 alternatives");
    if (m < 1) throw ConfigError("instance requires m >= 1 distributions");
    const std::size_t cells = static_cast<std::size_t>(k) * m;
    if (means.size() != cells || variances.size() != cells)
        throw ConfigError("means/variances must be k x m");
    for (double v : variances)
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("every variance must be positive");
    for (double mu : means)
        if (!std::isfinite(mu)) throw ConfigError("every mean must be finite");
    if (canonical && !satisfies_canonical_ordering())
        throw ConfigError("instance flagged canonical but ordering does not hold");
}

bool ProblemInstance::satisfies_canonical_ordering() const {
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j < m; ++j)
            if (mean(i, j) < mean(i, j + 1)) return false;
    for (int i = 1; i < k; ++i)
        if (worst_case_mean(i + 1) < worst_case_mean(i)) return false;
    if (k >= 2 && !(worst_case_mean(2) > worst_case_mean(1))) return false;
    return true;
}

ProblemInstance sc_config(int k, int m, double gap, double variance) {
    if (k < 2 || m < 1) throw ConfigError("sc_config requires k >= 2 and m >= 1");
    if (!(gap > 0.0)) throw ConfigError("sc_config requires a positive gap");
    if (!(variance > 0.0)) throw ConfigError("sc_config requires a positive variance");
    ProblemInstance inst;
    inst.k = k;
    inst.m = m;
    inst.means.assign(static_cast<std::size_t>(k) * m, gap);
    for (int j = 1; j <= m; ++j) inst.means[inst.index(1, j)] = 0.0;
    inst.variances.assign(static_cast<std::size_t>(k) * m, variance);
    inst.canonical = true;
    return inst;
}

ProblemInstance mm_config(int k, int m, double variance) {
    if (k < 2 || m < 1) throw ConfigError("mm_config requires k >= 2 and m >= 1");
    if (!(variance > 0.0)) throw ConfigError("mm_config requires a positive variance");
    ProblemInstance inst;
    inst.k = k;
    inst.m = m;
    inst.means.resize(static_cast<std::size_t>(k) * m);
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= m; ++j)
            inst.means[inst.index(i, j)] = 0.3 * (i - 1) - 0.1 * (j - 1);
    inst.variances.assign(static_cast<std::size_t>(k) * m, variance);
    inst.canonical = true;
    return inst;
}

double ScenarioStats::sample_variance() const {
    if (n < 2) throw std::logic_error("sample variance undefined for n < 2");
    return m2 / static_cast<double>(n - 1);
}

double ScenarioStats::sample_stddev() const { return std::sqrt(sample_variance()); }

void update_stats(ScenarioStats& stats, double x, Provenance provenance) {
    if (!std::isfinite(x)) throw std::invalid_argument("observation must be finite");
    stats.n += 1;
    switch (provenance) {
        case Provenance::MStep: stats.n_m += 1; break;
        case Provenance::KStep: stats.n_k += 1; break;
        case Provenance::Init: break;
    }
    const double delta = x - stats.mean;
    stats.mean += delta / static_cast<double>(stats.n);
    stats.m2 += delta * (x - stats.mean);
}

std::int64_t AllocationState::alternative_total(int alternative) const {
    std::int64_t total = 0;
    for (int j = 1; j <= m; ++j) total += at(alternative, j).n;
    return total;
}

double AllocationState::worst_case_sample_mean(int alternative) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 1; j <= m; ++j) worst = std::max(worst, at(alternative, j).mean);
    return worst;
}

bool AllocationState::counters_consistent() const {
    std::int64_t sum_m = 0;
    std::int64_t sum_k = 0;
    for (int i = 0; i < k; ++i) {
        sum_m += r_m[i];
        sum_k += r_k[i];
    }
    return sum_m == rounds && sum_k == rounds * (k - 1);
}

}  // namespace drrs
