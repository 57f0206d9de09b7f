#include "drrs/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "drrs/analysis.hpp"
#include "drrs/testbeds.hpp"

namespace drrs {

using nlohmann::json;

namespace {

ServiceDistribution service_from_json(const json& j) {
    ServiceDistribution d;
    const std::string family = j.at("family").get<std::string>();
    if (family == "exponential")
        d.family = ServiceFamily::Exponential;
    else if (family == "lognormal")
        d.family = ServiceFamily::Lognormal;
    else if (family == "gamma")
        d.family = ServiceFamily::Gamma;
    else if (family == "weibull")
        d.family = ServiceFamily::Weibull;
    else
        throw ConfigError("unknown service family: " + family);
    d.a = j.at("a").get<double>();
    d.b = j.value("b", 0.0);
    return d;
}

json service_to_json(const ServiceDistribution& d) {
    json j;
    j["family"] = family_name(d.family);
    j["a"] = d.a;
    j["b"] = d.b;
    return j;
}

ProblemInstance instance_from(const json& j) {
    const std::string type = j.value("type", "explicit");
    if (type == "sc")
        return sc_config(j.at("k").get<int>(), j.at("m").get<int>(), j.at("gap").get<double>(),
                         j.at("variance").get<double>());
    if (type == "mm")
        return mm_config(j.at("k").get<int>(), j.at("m").get<int>(),
                         j.at("variance").get<double>());

    ProblemInstance inst;
    if (type == "explicit") {
        inst.k = j.at("k").get<int>();
        inst.m = j.at("m").get<int>();
        inst.means = j.at("means").get<std::vector<double>>();
        inst.variances = j.at("variances").get<std::vector<double>>();
        inst.canonical = j.value("canonical", false);
        inst.validate();
        return inst;
    }
    if (type == "inventory") {
        InventoryBackend backend;
        for (const auto& p : j.at("policies"))
            backend.policies.push_back(
                InventoryPolicy{p.at(0).get<double>(), p.at(1).get<double>()});
        backend.demand_means = j.at("demand_means").get<std::vector<double>>();
        backend.initial_inventory = j.value("initial_inventory", 1000.0);
        backend.horizon_periods = j.value("horizon_periods", std::int64_t{1000});
        backend.lead_time_mean = j.value("lead_time_mean", 6.0);
        backend.holding_cost = j.value("holding_cost", 0.5);
        backend.fixed_order_cost = j.value("fixed_order_cost", 36.0);
        backend.unit_order_cost = j.value("unit_order_cost", 1.0);
        inst.k = static_cast<int>(backend.policies.size());
        inst.m = static_cast<int>(backend.demand_means.size());
        inst.backend = backend;
    } else if (type == "queue") {
        QueueBackend backend;
        backend.staffing_levels = j.at("staffing").get<std::vector<int>>();
        for (const auto& s : j.at("services")) backend.services.push_back(service_from_json(s));
        backend.arrival_mean = j.value("arrival_mean", 0.1);
        backend.patience_mean = j.value("patience_mean", 3.0);
        backend.cost_abandon = j.value("cost_abandon", 0.1);
        backend.cost_wait = j.value("cost_wait", 15.0);
        backend.cost_staff = j.value("cost_staff", 0.5);
        backend.horizon_arrivals = j.value("horizon_arrivals", std::int64_t{1000});
        inst.k = static_cast<int>(backend.staffing_levels.size());
        inst.m = static_cast<int>(backend.services.size());
        inst.backend = backend;
    } else {
        throw ConfigError("unknown instance type: " + type);
    }

    const std::size_t cells = static_cast<std::size_t>(inst.k) * inst.m;
    if (j.contains("means"))
        inst.means = j.at("means").get<std::vector<double>>();
    else
        inst.means.assign(cells, 0.0);
    if (j.contains("variances"))
        inst.variances = j.at("variances").get<std::vector<double>>();
    else
        inst.variances.assign(cells, 1.0);
    inst.canonical = j.value("canonical", false);
    inst.validate();
    return inst;
}

json instance_to(const ProblemInstance& inst) {
    json j;
    j["k"] = inst.k;
    j["m"] = inst.m;
    j["means"] = inst.means;
    j["variances"] = inst.variances;
    j["canonical"] = inst.canonical;
    if (std::holds_alternative<GaussianBackend>(inst.backend)) {
        j["type"] = "explicit";
        j["backend"] = "gaussian";
    } else if (const auto* inv = std::get_if<InventoryBackend>(&inst.backend)) {
        j["type"] = "inventory";
        j["backend"] = "inventory";
        json policies = json::array();
        for (const auto& p : inv->policies)
            policies.push_back(json::array({p.reorder_point, p.order_up_to}));
        j["policies"] = policies;
        j["demand_means"] = inv->demand_means;
        j["initial_inventory"] = inv->initial_inventory;
        j["horizon_periods"] = inv->horizon_periods;
        j["lead_time_mean"] = inv->lead_time_mean;
        j["holding_cost"] = inv->holding_cost;
        j["fixed_order_cost"] = inv->fixed_order_cost;
        j["unit_order_cost"] = inv->unit_order_cost;
    } else {
        const auto& q = std::get<QueueBackend>(inst.backend);
        j["type"] = "queue";
        j["backend"] = "queue";
        j["staffing"] = q.staffing_levels;
        json services = json::array();
        for (const auto& s : q.services) services.push_back(service_to_json(s));
        j["services"] = services;
        j["arrival_mean"] = q.arrival_mean;
        j["patience_mean"] = q.patience_mean;
        j["cost_abandon"] = q.cost_abandon;
        j["cost_wait"] = q.cost_wait;
        j["cost_staff"] = q.cost_staff;
        j["horizon_arrivals"] = q.horizon_arrivals;
    }
    return j;
}

}  // namespace

std::string instance_to_json(const ProblemInstance& instance) {
    return instance_to(instance).dump(2);
}

ProblemInstance instance_from_json(const std::string& json_text) {
    return instance_from(json::parse(json_text));
}

int ExperimentConfig::resolved_true_best() const {
    if (true_best) return *true_best;
    if (instance.canonical) return instance.true_best();
    throw ConfigError("true best alternative unknown: set \"true_best\" in the config");
}

double ExperimentConfig::resolved_b_delta() const {
    if (b_delta) return *b_delta;
    return default_b_delta(instance);
}

void ExperimentConfig::validate() const {
    std::vector<std::string> problems;
    if (schema_version != 1) problems.push_back("unsupported schema_version");
    if (replications < 1) problems.push_back("replications must be >= 1");
    if (budget.n1.empty()) problems.push_back("budget grid must be nonempty");
    if (budget.n0 < 1) problems.push_back("budget n0 must be >= 1");
    for (std::int64_t n1 : budget.n1)
        if (n1 < 0) problems.push_back("budget n1 entries must be nonnegative");
    if (procedures.empty()) problems.push_back("at least one procedure required");
    if (!(theta > 0.0 && theta < 1.0)) problems.push_back("theta must lie in (0,1)");
    for (const auto& p : procedures) {
        if (p.type != "aa" && p.type != "gaa")
            problems.push_back("procedure type must be aa or gaa: " + p.label);
        if (p.type == "gaa") {
            for (const std::string& r : {p.m_rule, p.k_rule})
                if (r != "equal" && r != "kg" && r != "ttts")
                    problems.push_back("unknown rule '" + r + "' in " + p.label);
            if (!(p.beta >= 0.0 && p.beta <= 1.0)) problems.push_back("beta outside [0,1]: " + p.label);
            if (!(p.epsilon >= 0.0 && p.epsilon <= 1.0))
                problems.push_back("epsilon outside [0,1]: " + p.label);
        }
    }
    try {
        instance.validate();
    } catch (const std::exception& e) {
        problems.push_back(e.what());
    }
    if (!problems.empty()) {
        std::ostringstream oss;
        oss << "invalid config:";
        for (const auto& p : problems) oss << "\n  - " << p;
        throw ConfigError(oss.str());
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    const json j = json::parse(json_text);
    ExperimentConfig config;
    config.schema_version = j.value("schema_version", 1);
    config.name = j.value("name", std::string("experiment"));
    config.seed = j.value("seed", std::uint64_t{1});
    config.replications = j.value("replications", std::int64_t{100});
    config.workers = j.value("workers", 0);
    config.out_dir = j.value("out_dir", std::string("out"));
    config.plots = j.value("plots", false);
    config.instance = instance_from(j.at("instance"));
    if (j.contains("true_best")) config.true_best = j.at("true_best").get<int>();
    config.budget.n0 = j.at("budget").value("n0", std::int64_t{1});
    config.budget.n1 = j.at("budget").at("n1").get<std::vector<std::int64_t>>();
    if (j.contains("thresholds")) {
        config.theta = j.at("thresholds").value("theta", 0.05);
        if (j.at("thresholds").contains("b_delta") && !j.at("thresholds").at("b_delta").is_null())
            config.b_delta = j.at("thresholds").at("b_delta").get<double>();
    }
    config.sample_paths = j.value("sample_paths", std::int64_t{2});
    config.truth_replications = j.value("truth_replications", std::int64_t{10000});
    config.ks_alpha = j.value("ks_alpha", 0.05);
    if (j.contains("fit_observations"))
        config.fit_observations = j.at("fit_observations").get<std::vector<double>>();

    for (const auto& pj : j.at("procedures")) {
        ProcedureSpec spec;
        spec.type = pj.value("type", std::string("aa"));
        spec.m_rule = pj.value("m_rule", std::string("equal"));
        spec.k_rule = pj.value("k_rule", std::string("equal"));
        spec.joint = pj.value("joint", false);
        spec.beta = pj.value("beta", 0.5);
        spec.epsilon = pj.value("epsilon", 0.0);
        spec.n0 = pj.value("n0", std::int64_t{0});
        spec.delta_m = pj.value("delta_m", std::int64_t{0});
        spec.delta_k = pj.value("delta_k", std::int64_t{0});
        spec.label = pj.value("label", spec.type);
        config.procedures.push_back(spec);
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

namespace {

std::shared_ptr<const SamplingRule> make_rule(const std::string& name, double beta) {
    if (name == "equal") return std::make_shared<EqualRule>();
    if (name == "kg") return std::make_shared<KgRule>();
    if (name == "ttts") return std::make_shared<TttsRule>(beta);
    throw ConfigError("unknown rule: " + name);
}

}  // namespace

GaaConfig build_gaa_config(const ProcedureSpec& spec, const BudgetGrid& grid, int k, int m) {
    GaaConfig config;
    config.n0 = spec.n0 > 0 ? spec.n0 : grid.n0;
    config.joint_mode = spec.joint;
    config.delta_m = spec.delta_m > 0 ? spec.delta_m : (spec.m_rule == "equal" ? m : 1);
    config.delta_k = spec.delta_k > 0 ? spec.delta_k : (spec.k_rule == "equal" ? k - 1 : 1);

    auto m_rule = make_rule(spec.m_rule, spec.beta);
    auto k_rule = make_rule(spec.k_rule, spec.beta);
    if (spec.epsilon > 0.0) {
        m_rule = std::make_shared<EpsilonGreedyRule>(m_rule, spec.epsilon);
        k_rule = std::make_shared<EpsilonGreedyRule>(k_rule, spec.epsilon);
    }
    config.m_rule = m_rule;
    config.k_rule = k_rule;
    return config;
}

}  // namespace drrs
