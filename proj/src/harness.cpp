#include "loci/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "loci/math_util.hpp"
#include "loci/models/diagnostic.hpp"
#include "loci/models/hdreg.hpp"
#include "loci/models/multinomial.hpp"
#include "loci/models/npreg.hpp"
#include "loci/models/weibull.hpp"

namespace loci {

using nlohmann::json;

HarnessMethod harness_method_from_string(const std::string& s) {
    if (s == "bootstrap") return HarnessMethod::bootstrap;
    if (s == "m-out-of-n") return HarnessMethod::m_out_of_n;
    if (s == "loci-nb") return HarnessMethod::loci_nb;
    if (s == "lot-nb") return HarnessMethod::lot_nb;
    if (s == "lot-is-design") return HarnessMethod::lot_is_design;
    if (s == "lot-is-refined") return HarnessMethod::lot_is_refined;
    if (s == "loci-is") return HarnessMethod::loci_is;
    throw InputError("unknown method '" + s + "'");
}

std::string to_string(HarnessMethod m) {
    switch (m) {
        case HarnessMethod::bootstrap: return "bootstrap";
        case HarnessMethod::m_out_of_n: return "m-out-of-n";
        case HarnessMethod::loci_nb: return "loci-nb";
        case HarnessMethod::lot_nb: return "lot-nb";
        case HarnessMethod::lot_is_design: return "lot-is-design";
        case HarnessMethod::lot_is_refined: return "lot-is-refined";
        case HarnessMethod::loci_is: return "loci-is";
    }
    return "?";
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig c;
    try {
        c.model = j.at("model").get<std::string>();
        c.model_config = j.value("model_config", json::object());
        c.experiment = j.at("experiment").get<std::string>();
        for (const auto& m : j.at("methods"))
            c.methods.push_back(harness_method_from_string(m.get<std::string>()));
        c.reps = j.value("reps", 100);
        c.M = j.value("M", 500);
        c.alpha = j.value("alpha", 0.05);
        c.delta = j.value("delta", 0.1);
        c.seed = j.value("seed", 1ULL);
        c.threads = j.value("threads", 1);
        c.m_out_of_n_m = j.value("m", 0);
        if (j.contains("design")) {
            const auto& d = j.at("design");
            std::string kind = d.value("kind", "grid");
            if (kind == "grid")
                c.design.kind = DesignSpec::Kind::grid;
            else if (kind == "lhd")
                c.design.kind = DesignSpec::Kind::lhd;
            else
                throw InputError("unknown design kind '" + kind + "'");
            c.design.U = d.value("U", 3);
            c.design.L = d.value("L", 30);
        }
        if (j.contains("power_grid"))
            for (const auto& v : j.at("power_grid")) c.power_grid.push_back(v.get<double>());
        c.power_reps = j.value("power_reps", 0);
    } catch (const json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    if (c.experiment != "ci" && c.experiment != "test")
        throw InputError("config: experiment must be 'ci' or 'test'");
    if (c.reps < 1 || c.M < 1) throw InputError("config: reps and M must be >= 1");
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw InputError("config: alpha outside (0,1)");
    if (c.methods.empty()) throw InputError("config: no methods");
    return c;
}

json ExperimentConfig::to_json() const {
    json j;
    j["model"] = model;
    j["model_config"] = model_config;
    j["experiment"] = experiment;
    json ms = json::array();
    for (auto m : methods) ms.push_back(to_string(m));
    j["methods"] = ms;
    j["reps"] = reps;
    j["M"] = M;
    j["alpha"] = alpha;
    j["delta"] = delta;
    j["design"] = {{"kind", design.kind == DesignSpec::Kind::grid ? "grid" : "lhd"},
                   {"U", design.U},
                   {"L", design.L}};
    j["seed"] = seed;
    j["threads"] = threads;
    j["m"] = m_out_of_n_m;
    if (!power_grid.empty()) {
        j["power_grid"] = power_grid;
        j["power_reps"] = power_reps;
    }
    return j;
}

const ReportRow* SimReport::find(const std::string& method, const std::string& metric) const {
    for (const auto& r : rows)
        if (r.method == method && r.metric == metric) return &r;
    return nullptr;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string warnings_string(const Diag& d) {
    std::string s;
    auto add = [&](const std::string& part) {
        if (!s.empty()) s += ";";
        s += part;
    };
    if (d.ess_warnings) add("ess:" + std::to_string(d.ess_warnings));
    if (d.optimizer_nonconverged) add("optim:" + std::to_string(d.optimizer_nonconverged));
    if (d.fallbacks) add("fallback:" + std::to_string(d.fallbacks));
    return s;
}

std::vector<double> beta_from_spec(const std::string& spec, int p) {
    std::vector<double> beta(p, 0.0);
    if (spec == "i" || spec == "(i)") {
    } else if (spec == "ii" || spec == "(ii)") {
        beta[0] = 2.0;
    } else if (spec == "iii" || spec == "(iii)") {
        beta[0] = beta[1] = 2.0;
    } else if (spec == "iv" || spec == "(iv)") {
        beta[0] = beta[1] = beta[2] = 2.0;
    } else if (spec.rfind("power:", 0) == 0) {
        beta[0] = 2.0;
        beta[1] = std::stod(spec.substr(6));
    } else {
        throw InputError("hdreg: unknown beta_spec '" + spec + "'");
    }
    return beta;
}

}  // namespace

BundleFactory make_bundle_factory(const ExperimentConfig& config) {
    const json& mc = config.model_config;

    if (config.model == "multinomial") {
        int k = mc.at("k").get<int>();
        int n = mc.at("n").get<int>();
        std::vector<double> pi = mc.at("pi").get<std::vector<double>>();
        if (static_cast<int>(pi.size()) != k) throw InputError("multinomial: |pi| != k");
        auto model = std::make_shared<MultinomialModel>(k, n);
        ParamPoint truth(pi);
        return [model, truth](RngStream) { return ModelBundle{model, truth}; };
    }
    if (config.model == "weibull") {
        int n = mc.at("n").get<int>();
        MpsFitOptions fit;
        fit.tol = mc.value("fit_tol", 1e-8);
        fit.budget_per_start = mc.value("fit_budget", 0L);
        fit.max_gap_ranges = mc.value("fit_max_gap_ranges", 4.0);
        auto model = std::make_shared<WeibullModel>(n, fit);
        ParamPoint truth({mc.at("a").get<double>(), mc.at("b").get<double>(),
                          mc.at("tau").get<double>()});
        return [model, truth](RngStream) { return ModelBundle{model, truth}; };
    }
    if (config.model == "hdreg") {
        int n = mc.at("n").get<int>();
        int p = mc.at("p").get<int>();
        double rho = mc.value("rho", 0.1);
        double lambda = mc.value("lambda", hdreg_recommended_penalty(n, p));
        bool sigma_dim = mc.value("include_sigma_dim", true);
        bool df_correct = mc.value("sigma2_df_correct", false);
        std::string spec = mc.value("beta_spec", std::string("i"));
        double sigma2 = mc.value("sigma2", 1.0);
        std::vector<double> beta = beta_from_spec(spec, p);
        beta.push_back(sigma2);
        ParamPoint truth(beta);
        return [=](RngStream stream) {
            Eigen::MatrixXd X = hdreg_design_matrix(n, p, rho, stream);
            return ModelBundle{std::make_shared<HdregModel>(X, lambda, sigma_dim, df_correct),
                               truth};
        };
    }
    if (config.model == "npreg") {
        int n = mc.at("n").get<int>();
        auto f = npreg_function_from_string(mc.value("function", std::string("I")));
        double sigma2 = mc.value("sigma2", 0.25);
        auto model = std::make_shared<NpregModel>(n);
        ParamPoint truth = model->truth_point(f, std::sqrt(sigma2));
        return [model, truth](RngStream) { return ModelBundle{model, truth}; };
    }
    if (config.model == "binomial") {
        int n = mc.at("n").get<int>();
        double pi = mc.at("pi").get<double>();
        std::optional<double> pi0;
        if (mc.contains("pi0")) pi0 = mc.at("pi0").get<double>();
        auto model = std::make_shared<BinomialModel>(n, pi0);
        ParamPoint truth({pi});
        return [model, truth](RngStream) { return ModelBundle{model, truth}; };
    }
    if (config.model == "normal-mean") {
        int n = mc.at("n").get<int>();
        double mu = mc.value("mu", 0.0);
        std::optional<double> mu0;
        if (mc.contains("mu0")) mu0 = mc.at("mu0").get<double>();
        auto model = std::make_shared<NormalMeanModel>(n, mu0);
        ParamPoint truth({mu});
        return [model, truth](RngStream) { return ModelBundle{model, truth}; };
    }
    throw InputError("unknown model '" + config.model + "'");
}

namespace {

// Try design over the region for the configured design spec. The unit design
// covers the region's free dimensions (one less under a simplex constraint,
// which the builder completes).
TryDesign make_try_design(const ParamPoint& theta_hat, const Region& region,
                          const DesignSpec& spec, RngStream design_stream) {
    std::size_t active = region.active_dims().size();
    bool simplex = false;
    for (const auto& p : region.constraint.preds)
        if (p.kind == Predicate::Kind::simplex_sum_to_one) simplex = true;
    std::size_t q = simplex && active > 0 ? active - 1 : active;

    UnitDesign unit;  // empty design: center-only
    if (q > 0) {
        if (spec.kind == DesignSpec::Kind::grid)
            unit = grid_design(static_cast<std::size_t>(spec.U), q);
        else
            unit = lhd_design(static_cast<std::size_t>(spec.L), q, design_stream);
    }
    return build_try_design(theta_hat, region, unit);
}

TryDesign center_only(const ParamPoint& theta_hat, const Region& region) {
    return build_try_design(theta_hat, region, UnitDesign{});
}

struct MethodOutcome {
    bool hit = false;      // covered (ci) or rejected (test)
    double length = 0.0;   // ci only
    int try_points = 1;
    Diag diag;
};

struct RepResult {
    bool ok = false;
    std::string error;
    std::vector<MethodOutcome> outcomes;  // one per configured method
};

MethodOutcome run_ci_method(HarnessMethod method, const ExperimentConfig& config,
                            const ModelBundle& bundle, const Dataset& data,
                            const ParamPoint& theta_hat, const SeedPlan& plan, int rep) {
    const Model& model = *bundle.model;
    const int n = model.sample_size(data);
    const double truth_xi = model.target(bundle.truth);
    RngStream stream = plan.method_stream(rep, method);
    EngineOptions opts;  // serial inside: replications are the parallel unit

    MethodOutcome out;
    switch (method) {
        case HarnessMethod::bootstrap: {
            Region region = model.neighborhood(theta_hat, n, config.delta);
            CiResult ci = nb_ci(model, data, region, center_only(theta_hat, region), config.M,
                                stream, config.alpha, CiSide::two_sided, opts);
            out.hit = ci.lower <= truth_xi && truth_xi <= ci.upper;
            out.length = ci.upper - ci.lower;
            out.diag = ci.diag;
            return out;
        }
        case HarnessMethod::m_out_of_n: {
            int m = config.m_out_of_n_m > 0
                        ? config.m_out_of_n_m
                        : static_cast<int>(2.0 * std::sqrt(static_cast<double>(n)));
            CiResult ci = m_out_of_n_ci(model, data, m, config.M, stream, config.alpha, opts);
            out.hit = ci.lower <= truth_xi && truth_xi <= ci.upper;
            out.length = ci.upper - ci.lower;
            out.diag = ci.diag;
            return out;
        }
        case HarnessMethod::loci_nb: {
            Region region = model.neighborhood(theta_hat, n, config.delta);
            TryDesign design = make_try_design(theta_hat, region, config.design,
                                               plan.design_stream(rep, method));
            CiResult ci = nb_ci(model, data, region, design, config.M, stream, config.alpha,
                                CiSide::two_sided, opts);
            out.hit = ci.lower <= truth_xi && truth_xi <= ci.upper;
            out.length = ci.upper - ci.lower;
            out.try_points = static_cast<int>(design.size());
            out.diag = ci.diag;
            return out;
        }
        case HarnessMethod::loci_is: {
            Region region = model.neighborhood(theta_hat, n, config.delta);
            TryDesign design = make_try_design(theta_hat, region, config.design,
                                               plan.design_stream(rep, method));
            CiResult ci = is_ci_upper(model, data, region, design, config.M, stream,
                                      1.0 - config.alpha, opts);
            out.hit = truth_xi <= ci.upper;
            out.length = ci.upper - ci.estimate;  // upper margin: one-sided limit
            out.try_points = static_cast<int>(design.size());
            out.diag = ci.diag;
            return out;
        }
        default:
            throw InputError("method " + to_string(method) + " is not an interval method");
    }
}

MethodOutcome run_test_method(HarnessMethod method, const ExperimentConfig& config,
                              const ModelBundle& bundle, const Dataset& data,
                              const ParamPoint& theta_hat, const SeedPlan& plan, int rep) {
    const Model& model = *bundle.model;
    const int n = model.sample_size(data);
    RngStream stream = plan.method_stream(rep, method);
    EngineOptions opts;

    MethodOutcome out;
    PValueResult pv;
    switch (method) {
        case HarnessMethod::bootstrap:
            pv = bootstrap_pvalue(model, data, config.M, stream, opts);
            break;
        case HarnessMethod::lot_nb: {
            Region region =
                model.restrict_to_null(model.neighborhood(theta_hat, n, config.delta));
            TryDesign design = make_try_design(theta_hat, region, config.design,
                                               plan.design_stream(rep, method));
            pv = nb_pvalue(model, data, region, design, config.M, stream, opts);
            out.try_points = static_cast<int>(design.size());
            break;
        }
        case HarnessMethod::lot_is_design: {
            Region region =
                model.restrict_to_null(model.neighborhood(theta_hat, n, config.delta));
            TryDesign design = make_try_design(theta_hat, region, config.design,
                                               plan.design_stream(rep, method));
            pv = is_pvalue_design(model, data, design, config.M, stream, opts);
            out.try_points = static_cast<int>(design.size());
            break;
        }
        case HarnessMethod::lot_is_refined: {
            Region region =
                model.restrict_to_null(model.neighborhood(theta_hat, n, config.delta));
            TryDesign design = make_try_design(theta_hat, region, config.design,
                                               plan.design_stream(rep, method));
            pv = is_pvalue_refined(model, data, region, design, config.M, stream, 0, opts);
            out.try_points = static_cast<int>(design.size());
            break;
        }
        default:
            throw InputError("method " + to_string(method) + " is not a test method");
    }
    out.hit = pv.p < config.alpha;
    out.diag = pv.diag;
    return out;
}

std::vector<RepResult> run_replications(const ExperimentConfig& config, bool ci_experiment,
                                        const BundleFactory& factory) {
    const SeedPlan plan(config.seed);
    std::vector<RepResult> results(config.reps);

    Exec exec{config.threads};
    parallel_for_index(static_cast<std::size_t>(config.reps), exec, [&](std::size_t r) {
        int rep = static_cast<int>(r);
        RepResult& res = results[r];
        try {
            ModelBundle bundle = factory(plan.model_stream(rep));
            const Model& model = *bundle.model;
            const int n = model.default_sample_size();
            Dataset data = model.simulate(bundle.truth, n, plan.data_stream(rep));
            Diag est_diag;
            ParamPoint theta_hat = model.estimate(data, &est_diag);

            res.outcomes.resize(config.methods.size());
            for (std::size_t k = 0; k < config.methods.size(); ++k) {
                MethodOutcome o =
                    ci_experiment
                        ? run_ci_method(config.methods[k], config, bundle, data, theta_hat,
                                        plan, rep)
                        : run_test_method(config.methods[k], config, bundle, data, theta_hat,
                                          plan, rep);
                o.diag.merge(est_diag);
                res.outcomes[k] = std::move(o);
            }
            res.ok = true;
        } catch (const std::exception& e) {
            res.ok = false;
            res.error = e.what();
        }
    });
    return results;
}

void aggregate_rows(SimReport& report, const ExperimentConfig& config, bool ci_experiment,
                    const std::vector<RepResult>& results) {
    int effective = 0;
    for (const auto& r : results) {
        if (r.ok) {
            ++effective;
        } else {
            ++report.skipped_reps;
            if (report.errors.size() < 8) report.errors.push_back(r.error);
        }
    }

    for (std::size_t k = 0; k < config.methods.size(); ++k) {
        const std::string name = to_string(config.methods[k]);
        std::vector<double> lengths;
        double hits = 0.0, try_sum = 0.0;
        Diag diag;
        for (const auto& r : results) {
            if (!r.ok) continue;
            const MethodOutcome& o = r.outcomes[k];
            hits += o.hit ? 1.0 : 0.0;
            lengths.push_back(o.length);
            try_sum += o.try_points;
            diag.merge(o.diag);
        }
        if (effective == 0) continue;
        const double fe = static_cast<double>(effective);
        const double rate = hits / fe;
        const double rate_se = std::sqrt(rate * (1.0 - rate) / fe);
        const std::string warn = warnings_string(diag);

        if (ci_experiment) {
            double ml = mean_of(lengths);
            double sdl = sample_sd(lengths);
            report.rows.push_back({name, "CR", rate, rate_se, effective, warn});
            report.rows.push_back({name, "ML", ml, sdl / std::sqrt(fe), effective, warn});
            report.rows.push_back(
                {name, "SDL", sdl, sdl / std::sqrt(2.0 * std::max(fe - 1.0, 1.0)), effective,
                 warn});
        } else {
            report.rows.push_back({name, "rejection_rate", rate, rate_se, effective, warn});
        }
        report.rows.push_back(
            {name, "try_points_mean", try_sum / fe, 0.0, effective, std::string()});
    }
}

}  // namespace

SimReport run_ci_experiment(const ExperimentConfig& config, const BundleFactory& factory) {
    auto t0 = std::chrono::steady_clock::now();
    SimReport report;
    report.requested_reps = config.reps;
    report.seed = config.seed;
    report.config_echo = config.to_json();

    auto results = run_replications(config, true, factory);
    aggregate_rows(report, config, true, results);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SimReport run_ci_experiment(const ExperimentConfig& config) {
    return run_ci_experiment(config, make_bundle_factory(config));
}

SimReport run_test_experiment(const ExperimentConfig& config, const BundleFactory& factory) {
    auto t0 = std::chrono::steady_clock::now();
    SimReport report;
    report.requested_reps = config.reps;
    report.seed = config.seed;
    report.config_echo = config.to_json();

    auto results = run_replications(config, false, factory);
    aggregate_rows(report, config, false, results);

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SimReport run_test_experiment(const ExperimentConfig& config) {
    auto t0 = std::chrono::steady_clock::now();
    SimReport report;
    report.requested_reps = config.reps;
    report.seed = config.seed;
    report.config_echo = config.to_json();

    auto results = run_replications(config, false, make_bundle_factory(config));
    aggregate_rows(report, config, false, results);

    // rejection rates under the configured alternative grid (hdreg power curve)
    for (double c : config.power_grid) {
        ExperimentConfig alt = config;
        alt.model_config["beta_spec"] = "power:" + format_double(c);
        alt.reps = config.power_reps > 0 ? config.power_reps : config.reps;
        alt.power_grid.clear();
        auto alt_results = run_replications(alt, false, make_bundle_factory(alt));
        int effective = 0;
        std::vector<double> hits(config.methods.size(), 0.0);
        for (const auto& r : alt_results) {
            if (!r.ok) continue;
            ++effective;
            for (std::size_t k = 0; k < config.methods.size(); ++k)
                hits[k] += r.outcomes[k].hit ? 1.0 : 0.0;
        }
        if (effective == 0) continue;
        for (std::size_t k = 0; k < config.methods.size(); ++k) {
            double rate = hits[k] / effective;
            report.rows.push_back({to_string(config.methods[k]),
                                   "power[c=" + format_double(c) + "]", rate,
                                   std::sqrt(rate * (1.0 - rate) / effective), effective,
                                   std::string()});
        }
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

SimReport run_experiment(const ExperimentConfig& config) {
    return config.experiment == "ci" ? run_ci_experiment(config) : run_test_experiment(config);
}

void write_report_csv(std::ostream& os, const SimReport& report) {
    os << "method,metric,value,mc_se,reps,warnings\n";
    for (const auto& r : report.rows)
        os << r.method << "," << r.metric << "," << format_double(r.value) << ","
           << format_double(r.mc_se) << "," << r.reps << "," << r.warnings << "\n";
}

void write_report_json(std::ostream& os, const SimReport& report) {
    json j;
    j["seed"] = report.seed;
    j["config"] = report.config_echo;
    j["requested_reps"] = report.requested_reps;
    j["skipped_reps"] = report.skipped_reps;
    j["errors"] = report.errors;
    j["wall_seconds"] = report.wall_seconds;
    json rows = json::array();
    for (const auto& r : report.rows)
        rows.push_back({{"method", r.method},
                        {"metric", r.metric},
                        {"value", r.value},
                        {"mc_se", r.mc_se},
                        {"reps", r.reps},
                        {"warnings", r.warnings}});
    j["rows"] = rows;
    os << j.dump(2) << "\n";
}

}  // namespace loci
