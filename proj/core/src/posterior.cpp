#include "drrs/posterior.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drrs {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) {
    constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double ConjugateBelief::sample_stddev_equiv() const {
    if (degenerate || shape <= 0.0) return 0.0;
    return std::sqrt(rate / shape);
}

double ConjugateBelief::scale() const {
    if (degenerate || shape <= 0.0 || strength <= 0.0) return 0.0;
    return std::sqrt(rate / (shape * strength));
}

ConjugateBelief belief_from_stats(const ScenarioStats& stats) {
    if (stats.n < 2) throw std::invalid_argument("belief requires n >= 2 observations");
    ConjugateBelief belief;
    belief.loc = stats.mean;
    belief.strength = static_cast<double>(stats.n);
    belief.shape = 0.5 * static_cast<double>(stats.n - 1);
    belief.rate = 0.5 * stats.m2;
    belief.degenerate = !(stats.m2 > 0.0);
    return belief;
}

double draw_mean(const ConjugateBelief& belief, CounterSequence& rng) {
    if (belief.degenerate) return belief.loc;
    const double dof = belief.dof();
    const double z = rng.next_normal();
    const double w = rng.next_chi_square(dof);
    return belief.loc + belief.scale() * z / std::sqrt(w / dof);
}

double kg_factor_normal(double z) { return z * normal_cdf(z) + normal_pdf(z); }

double student_t_expected_gain(double c, double dof) {
    if (dof <= 1.0) return std::numeric_limits<double>::infinity();
    const boost::math::students_t dist(dof);
    const double pdf = boost::math::pdf(dist, c);
    const double sf = boost::math::cdf(boost::math::complement(dist, c));
    return (dof + c * c) / (dof - 1.0) * pdf - c * sf;
}

double kg_score(const ConjugateBelief& belief, double best_other_value, Direction direction) {
    if (!std::isfinite(best_other_value))
        throw std::invalid_argument("kg_score requires a finite competing value");
    if (belief.degenerate) return 0.0;

    const double value = direction == Direction::MinSeeking ? -belief.loc : belief.loc;
    const double other = direction == Direction::MinSeeking ? -best_other_value : best_other_value;
    const double n = belief.strength;
    const double sigma_tilde = belief.sample_stddev_equiv() / std::sqrt(n * (n + 1.0));
    if (!(sigma_tilde > 0.0)) return 0.0;

    const double dof = belief.dof();
    if (dof <= 1.0) return std::numeric_limits<double>::infinity();
    const double c = std::abs(value - other) / sigma_tilde;
    return sigma_tilde * student_t_expected_gain(c, dof);
}

}  // namespace drrs
