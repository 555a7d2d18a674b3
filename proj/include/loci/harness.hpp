#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loci/inference.hpp"
#include "loci/model.hpp"

namespace loci {

enum class HarnessMethod {
    bootstrap = 0,
    m_out_of_n = 1,
    loci_nb = 2,
    lot_nb = 3,
    lot_is_design = 4,
    lot_is_refined = 5,
    loci_is = 6,
};

HarnessMethod harness_method_from_string(const std::string& s);
std::string to_string(HarnessMethod m);

struct DesignSpec {
    enum class Kind { grid, lhd };
    Kind kind = Kind::grid;
    int U = 3;   // grid resolution per dimension
    int L = 30;  // latin hypercube size
};

struct ExperimentConfig {
    std::string model;
    nlohmann::json model_config;
    std::string experiment;  // "ci" or "test"
    std::vector<HarnessMethod> methods;
    int reps = 100;
    int M = 500;
    double alpha = 0.05;
    double delta = 0.1;
    DesignSpec design;
    std::uint64_t seed = 1;
    int threads = 1;
    int m_out_of_n_m = 0;  // 0: floor(2 sqrt(n))
    std::vector<double> power_grid;  // hdreg test experiments only
    int power_reps = 0;              // 0: same as reps

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct ReportRow {
    std::string method;
    std::string metric;
    double value = 0.0;
    double mc_se = 0.0;
    int reps = 0;
    std::string warnings;
};

struct SimReport {
    std::vector<ReportRow> rows;
    int requested_reps = 0;
    int skipped_reps = 0;
    std::vector<std::string> errors;  // first few skip reasons
    double wall_seconds = 0.0;
    std::uint64_t seed = 0;
    nlohmann::json config_echo;

    const ReportRow* find(const std::string& method, const std::string& metric) const;
};

void write_report_csv(std::ostream& os, const SimReport& report);
void write_report_json(std::ostream& os, const SimReport& report);

/// Model instance plus the truth the harness simulates from. Rebuilt per
/// replication so models with replication-level context (the regression
/// design matrix) stay pure.
struct ModelBundle {
    std::shared_ptr<const Model> model;
    ParamPoint truth;
};

using BundleFactory = std::function<ModelBundle(RngStream)>;

/// Builds the factory for the configured model (and optional truth override).
BundleFactory make_bundle_factory(const ExperimentConfig& config);

/// Deterministic substream assignment for (replication, method, purpose)
/// tuples. Streams depend only on the master seed and the tuple, never on
/// thread count or method order in the config.
struct SeedPlan {
    explicit SeedPlan(std::uint64_t master_seed) : master_(master_seed) {}

    RngStream replication(int rep) const { return master_.derive(0x5EED0000 + rep); }
    RngStream model_stream(int rep) const { return replication(rep).derive(1); }
    RngStream data_stream(int rep) const { return replication(rep).derive(2); }
    RngStream method_stream(int rep, HarnessMethod m) const {
        return replication(rep).derive(0x100 + static_cast<int>(m));
    }
    RngStream design_stream(int rep, HarnessMethod m) const {
        return method_stream(rep, m).derive(0xDE51);
    }

private:
    RngStream master_;
};

SimReport run_ci_experiment(const ExperimentConfig& config);
SimReport run_test_experiment(const ExperimentConfig& config);

/// Variants taking an explicit factory (custom models; the power grid is only
/// expanded by the config-driven form).
SimReport run_ci_experiment(const ExperimentConfig& config, const BundleFactory& factory);
SimReport run_test_experiment(const ExperimentConfig& config, const BundleFactory& factory);

/// Dispatches on config.experiment.
SimReport run_experiment(const ExperimentConfig& config);

}  // namespace loci
