#pragma once

#include <functional>
#include <string>
#include <vector>

#include "drrs/analysis.hpp"
#include "drrs/config.hpp"
#include "drrs/procedures.hpp"

namespace drrs {

// Replication-level fan-out with deterministic per-index results; output
// never depends on the worker count.
void parallel_for(std::int64_t count, int workers, const std::function<void(std::int64_t)>& fn);

// One (procedure, budget) cell of an experiment.
struct EstimateRow {
    std::string procedure;
    std::int64_t n1 = 0;
    std::int64_t budget = 0;
    std::int64_t replications = 0;
    double pcs_hat = 0.0;
    double pics_hat = 0.0;
    double se = 0.0;
    double wall_seconds = 0.0;   // written to timings.csv, not the data CSVs
};

inline double pics_plot_floor(std::int64_t replications) {
    return 1.0 / (10.0 * static_cast<double>(replications));
}

// Runs `replications` macro-replications of one procedure at budget
// N = (n0 + n1) * k * m. Records are ordered by replication index;
// replication r uses stream replication id rep_offset + r + 1.
std::vector<RunRecord> run_procedure_batch(const ExperimentConfig& config,
                                           const ProcedureSpec& procedure, std::int64_t n1,
                                           std::int64_t replications, std::uint32_t rep_offset);

EstimateRow summarize_records(const std::string& label, std::int64_t n1, std::int64_t budget,
                              const std::vector<RunRecord>& records);

struct SuiteOutput {
    std::vector<EstimateRow> estimates;
    std::vector<std::string> files;
};

// Full experiment: every configured procedure across the budget grid.
// Emits records.csv, estimates.csv and timings.csv under config.out_dir.
SuiteOutput run_experiment(const ExperimentConfig& config);

// Figure-style suites layered on the same machinery.
SuiteOutput suite_pics_decay(const ExperimentConfig& config);
SuiteOutput suite_allocation(const ExperimentConfig& config);
SuiteOutput suite_gaa_consistency(const ExperimentConfig& config);
SuiteOutput suite_compare(const ExperimentConfig& config);

// Ground-truth estimation for the testbeds ("inventory" or "queue"), plus
// the ambiguity-set fit report when observations are configured.
SuiteOutput testbed_report(const ExperimentConfig& config, const std::string& kind);

// ---------------------------------------------------------------------------
// Verification checks (shared by `drrs verify` and the acceptance suite)
// ---------------------------------------------------------------------------

struct VerifyRow {
    std::string check;
    double statistic = 0.0;
    double bound = 0.0;
    double margin = 0.0;   // positive = pass, with the tolerance already folded in
    bool pass = false;
};

void write_verify_csv(const std::string& path, const std::vector<VerifyRow>& rows);

// Pathwise Lemma-type check: on shared streams, the k-steps allocated to the
// best alternative never exceed S(b_delta). Returns one row per replication
// plus a summary row; `unresolved` counts replications without a resolution
// certificate (excluded from the hard assertion).
struct Lemma1Result {
    std::vector<VerifyRow> rows;
    std::int64_t resolved = 0;
    std::int64_t unresolved = 0;
    std::int64_t violations = 0;
};

Lemma1Result lemma1_pathwise_check(const ProblemInstance& instance, std::int64_t budget,
                                   double b_delta, std::int64_t replications, std::uint64_t seed,
                                   int workers);

// PCS of the procedure against an independent Monte Carlo estimate of the
// boundary-crossing lower bound, with 3 combined standard errors of slack.
struct Lemma2Result {
    double pcs_hat = 0.0;
    double pcs_se = 0.0;
    PcsBoundEstimate bound;
    double margin = 0.0;
    bool pass = false;
};

Lemma2Result lemma2_consistency_check(const ProblemInstance& instance, std::int64_t budget,
                                      double b_delta, std::int64_t replications,
                                      std::uint64_t seed, int workers);

// Empirical tail of the generic last exit time U(b) over truncated
// standard-normal paths against 2 exp(-n b^2/2) (+3 SE), and the zero-exit
// probability against 1 - exp(-b^2/2) (-3 SE).
std::vector<VerifyRow> last_exit_tail_check(const std::vector<double>& boundaries,
                                            const std::vector<std::int64_t>& ns,
                                            std::int64_t paths, std::uint64_t seed, int workers);

// Empirical PICS against the clamped additive bound across a budget grid,
// plus monotonicity of log-PICS (zero cells floored) and the least-squares
// slope diagnostics of log PICS vs N.
struct EnvelopePoint {
    std::int64_t n1 = 0;
    std::int64_t budget = 0;
    double pics_hat = 0.0;
    double se = 0.0;
    double bound = 0.0;
    bool within = false;
};

struct EnvelopeResult {
    std::vector<EnvelopePoint> points;
    bool all_within = false;
    bool monotone_decreasing = false;
    double slope = 0.0;       // of log10 PICS vs N
    double r_squared = 0.0;   // linearity report, not asserted
};

EnvelopeResult pics_envelope_check(const ExperimentConfig& config);

// Allocation-pattern surrogate across replications at one large budget:
// heavy-set cardinality, best-alternative coverage, and how often some
// non-best alternative's most-sampled scenario is not its true worst case.
struct AdditivityResult {
    std::int64_t replications = 0;
    std::int64_t correct = 0;
    std::int64_t heavy_exact = 0;        // heavy_count == k+m-1, among correct
    std::int64_t best_all_heavy = 0;     // all m best-alternative scenarios heavy, among correct
    std::int64_t worst_case_missed = 0;  // some non-best argmax scenario != (i,1), all reps
    double missed_fraction = 0.0;
    double missed_se = 0.0;
};

AdditivityResult additivity_check(const ExperimentConfig& config, const ProcedureSpec& procedure,
                                  std::int64_t n1);

int verify_bounds(const ExperimentConfig& config, const std::string& out_path);
int verify_lemma1(const ExperimentConfig& config, const std::string& out_path);

}  // namespace drrs
