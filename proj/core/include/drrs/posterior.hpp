#pragma once

#include "drrs/model.hpp"
#include "drrs/philox.hpp"

namespace drrs {

// Normal-gamma belief over one scenario's (mean, precision), materialized in
// the noninformative limit from sample statistics at n >= 2. The marginal
// posterior of the mean is then a Student-t centered at the sample mean with
// scale s/sqrt(n) and n-1 degrees of freedom.
struct ConjugateBelief {
    double loc = 0.0;        // posterior location of the mean (= sample mean)
    double strength = 0.0;   // pseudo-count (= n)
    double shape = 0.0;      // precision-gamma shape (= (n-1)/2)
    double rate = 0.0;       // precision-gamma rate  (= m2/2)
    bool degenerate = false; // zero sample variance: all mass at loc

    double dof() const { return 2.0 * shape; }
    double scale() const;                 // marginal t scale of the mean
    double sample_stddev_equiv() const;   // s implied by (shape, rate)
};

ConjugateBelief belief_from_stats(const ScenarioStats& stats);

// One draw from the marginal posterior of the mean: loc + scale * Z /
// sqrt(W/dof) with Z standard normal and W chi-square(dof), both taken from
// the given substream. Degenerate beliefs return loc exactly.
double draw_mean(const ConjugateBelief& belief, CounterSequence& rng);

enum class Direction { MaxSeeking, MinSeeking };

// Known-variance knowledge-gradient factor f(z) = z Phi(z) + phi(z); kept as
// the large-n cross-check limit of the Student-t form.
double kg_factor_normal(double z);

// Expected shortfall E[(T - c)+] for standard Student-t with dof > 1.
double student_t_expected_gain(double c, double dof);

// One-step value of information for sampling this belief's scenario once,
// against the best competing value. Uses the Student-t predictive; returns
// +infinity at dof <= 1 (a fresh pair of observations always wins) and 0 for
// degenerate beliefs.
double kg_score(const ConjugateBelief& belief, double best_other_value, Direction direction);

double normal_cdf(double z);
double normal_pdf(double z);

}  // namespace drrs
