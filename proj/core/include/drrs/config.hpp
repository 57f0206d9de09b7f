#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drrs/model.hpp"
#include "drrs/procedures.hpp"

namespace drrs {

// One procedure entry of an experiment config.
struct ProcedureSpec {
    std::string label;                 // unique name used in output rows
    std::string type = "aa";           // "aa" | "gaa"
    std::string m_rule = "equal";      // equal | kg | ttts
    std::string k_rule = "equal";
    bool joint = false;
    double beta = 0.5;                 // ttts leader probability
    double epsilon = 0.0;              // exploration mix; 0 disables the wrapper
    std::int64_t n0 = 0;               // 0 = inherit the budget grid's n0
    std::int64_t delta_m = 0;          // 0 = natural default (m for equal, 1 otherwise)
    std::int64_t delta_k = 0;          // 0 = natural default (k-1 for equal, 1 otherwise)
};

struct BudgetGrid {
    std::int64_t n0 = 1;
    std::vector<std::int64_t> n1;      // N = (n0 + n1) * k * m per entry
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string name = "experiment";
    std::uint64_t seed = 1;
    std::int64_t replications = 100;
    int workers = 0;                   // 0 = hardware concurrency
    std::string out_dir = "out";
    bool plots = false;
    ProblemInstance instance;
    std::optional<int> true_best;      // defaults to the instance's when canonical
    BudgetGrid budget;
    std::vector<ProcedureSpec> procedures;
    double theta = 0.05;               // heavy-share threshold
    std::optional<double> b_delta;     // boundary override; default midpoint
    std::int64_t sample_paths = 2;     // allocation suite paths
    std::int64_t truth_replications = 10000;   // testbed ground-truth protocol
    double ks_alpha = 0.05;
    std::vector<double> fit_observations;      // queue service sample, optional

    std::int64_t total_budget(std::int64_t n1) const {
        return (budget.n0 + n1) * static_cast<std::int64_t>(instance.k) * instance.m;
    }
    int resolved_true_best() const;
    double resolved_b_delta() const;
    void validate() const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

// ProblemInstance <-> structured text. Keys: k, m, means (row-major),
// variances (row-major), backend, canonical, plus backend parameters.
std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& json_text);

// Builds the engine configuration for a "gaa" procedure spec.
GaaConfig build_gaa_config(const ProcedureSpec& spec, const BudgetGrid& grid, int k, int m);

}  // namespace drrs
