// Command-line front end: single-shot tests and confidence intervals on data
// files, simulation studies from a JSON config, and design generation.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "loci/harness.hpp"
#include "loci/models/diagnostic.hpp"
#include "loci/models/hdreg.hpp"
#include "loci/models/multinomial.hpp"
#include "loci/models/npreg.hpp"
#include "loci/models/weibull.hpp"

using nlohmann::json;

namespace {

std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw loci::InputError("cannot open data file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (...) {
                throw loci::InputError("non-numeric cell '" + cell + "' in " + path);
            }
        }
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw loci::InputError("empty data file '" + path + "'");
    return rows;
}

struct DataBundle {
    std::shared_ptr<const loci::Model> model;
    loci::Dataset data;
};

// Per-model data file schemas (no header row, comma separated):
//   multinomial: one row of k cell counts
//   weibull:     one observation per row
//   npreg:       one response per row (grid positions are implied by n)
//   hdreg:       n rows of p feature columns followed by the response
//   binomial:    one row: successes,trials
//   normal-mean: one row: mean,n
DataBundle load_model_data(const std::string& model_id, const std::string& path,
                           const json& opts) {
    auto rows = read_numeric_csv(path);
    if (model_id == "multinomial") {
        if (rows.size() != 1 || rows[0].size() < 2)
            throw loci::InputError("multinomial data: expected one row of k >= 2 counts");
        loci::Dataset counts = rows[0];
        int n = 0;
        for (double c : counts) {
            if (c < 0 || c != std::floor(c))
                throw loci::InputError("multinomial data: counts must be nonnegative integers");
            n += static_cast<int>(c);
        }
        auto model = std::make_shared<loci::MultinomialModel>(static_cast<int>(counts.size()), n);
        return {model, counts};
    }
    if (model_id == "weibull") {
        loci::Dataset x;
        for (const auto& r : rows)
            for (double v : r) x.push_back(v);
        auto model = std::make_shared<loci::WeibullModel>(static_cast<int>(x.size()));
        return {model, x};
    }
    if (model_id == "npreg") {
        loci::Dataset y;
        for (const auto& r : rows)
            for (double v : r) y.push_back(v);
        auto model = std::make_shared<loci::NpregModel>(static_cast<int>(y.size()));
        return {model, y};
    }
    if (model_id == "hdreg") {
        int n = static_cast<int>(rows.size());
        int pc = static_cast<int>(rows[0].size());
        if (pc < 2) throw loci::InputError("hdreg data: need feature columns plus a response");
        for (const auto& r : rows)
            if (static_cast<int>(r.size()) != pc)
                throw loci::InputError("hdreg data: ragged rows");
        int p = pc - 1;
        Eigen::MatrixXd X(n, p);
        loci::Dataset y(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < p; ++j) X(i, j) = rows[i][j];
            y[i] = rows[i][p];
        }
        double lambda = opts.value("lambda", loci::hdreg_recommended_penalty(n, p));
        auto model = std::make_shared<loci::HdregModel>(X, lambda);
        return {model, y};
    }
    if (model_id == "binomial") {
        if (rows.size() != 1 || rows[0].size() != 2)
            throw loci::InputError("binomial data: expected one row 'successes,trials'");
        int n = static_cast<int>(rows[0][1]);
        std::optional<double> pi0;
        if (opts.contains("pi0")) pi0 = opts["pi0"].get<double>();
        auto model = std::make_shared<loci::BinomialModel>(n, pi0);
        return {model, rows[0]};
    }
    if (model_id == "normal-mean") {
        if (rows.size() != 1 || rows[0].size() != 2)
            throw loci::InputError("normal-mean data: expected one row 'mean,n'");
        int n = static_cast<int>(rows[0][1]);
        std::optional<double> mu0;
        if (opts.contains("mu0")) mu0 = opts["mu0"].get<double>();
        auto model = std::make_shared<loci::NormalMeanModel>(n, mu0);
        return {model, loci::Dataset{rows[0][0]}};
    }
    throw loci::InputError("unknown model '" + model_id + "'");
}

int env_threads(int flag_value) {
    if (flag_value != 0) return flag_value;
    if (const char* env = std::getenv("LOCI_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    return 1;
}

loci::TryDesign design_for(const loci::Model& model, const loci::ParamPoint& theta_hat,
                           const loci::Region& region, const std::string& kind, int U, int L,
                           std::uint64_t seed) {
    std::size_t active = region.active_dims().size();
    bool simplex = false;
    for (const auto& p : region.constraint.preds)
        if (p.kind == loci::Predicate::Kind::simplex_sum_to_one) simplex = true;
    std::size_t q = simplex && active > 0 ? active - 1 : active;

    loci::UnitDesign unit;
    if (q > 0) {
        if (kind == "grid")
            unit = loci::grid_design(U, q);
        else if (kind == "lhd")
            unit = loci::lhd_design(L, q, loci::RngStream(seed).derive(0xDE51));
        else
            throw loci::InputError("unknown design kind '" + kind + "'");
    }
    (void)model;
    return loci::build_try_design(theta_hat, region, unit);
}

json per_point_json(const std::vector<std::pair<loci::ParamPoint, double>>& pts) {
    json arr = json::array();
    for (const auto& [phi, v] : pts) arr.push_back({{"phi", phi.coords}, {"value", v}});
    return arr;
}

void emit(const json& record, const std::string& out_path) {
    if (out_path.empty()) return;
    std::ofstream os(out_path);
    if (!os) throw loci::InputError("cannot write '" + out_path + "'");
    os << record.dump(2) << "\n";
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Local optimization-based tests and confidence intervals"};
    app.require_subcommand(1);

    // ---- designs ----
    auto* cmd_designs = app.add_subcommand("designs", "emit a space-filling design as CSV");
    std::string d_kind = "grid", d_out;
    int d_U = 3, d_L = 30, d_q = 2;
    std::uint64_t d_seed = 1;
    std::vector<double> d_lower, d_upper;
    bool d_simplex = false;
    cmd_designs->add_option("--kind", d_kind, "grid|lhd");
    cmd_designs->add_option("--U", d_U, "grid resolution per dimension");
    cmd_designs->add_option("--L", d_L, "latin hypercube size");
    cmd_designs->add_option("--q", d_q, "dimension");
    cmd_designs->add_option("--seed", d_seed, "rng seed (lhd)");
    cmd_designs->add_option("--out", d_out, "output CSV path (default stdout)");
    cmd_designs->add_option("--lower", d_lower, "box lower bounds (maps the design)")->delimiter(',');
    cmd_designs->add_option("--upper", d_upper, "box upper bounds")->delimiter(',');
    cmd_designs->add_flag("--simplex", d_simplex, "keep only sum-to-one points");

    // ---- shared flags for test/ci ----
    std::string model_id, data_path, method, out_path, design_kind = "grid";
    int M = 1000, U = 3, L = 30, threads = 0, mn_m = 0;
    double alpha = 0.05, delta = 0.1;
    std::uint64_t seed = 1;
    double pi0 = 0.0, mu0 = 0.0, lambda = 0.0;
    bool has_pi0 = false, has_mu0 = false;

    auto add_shared = [&](CLI::App* cmd) {
        cmd->add_option("--model", model_id, "model id")->required();
        cmd->add_option("--data", data_path, "data CSV path")->required();
        cmd->add_option("--method", method, "inference method")->required();
        cmd->add_option("--M", M, "resamples per try point");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--delta", delta, "neighborhood scale");
        cmd->add_option("--design-kind", design_kind, "grid|lhd");
        cmd->add_option("--U", U, "grid resolution");
        cmd->add_option("--L", L, "latin hypercube size");
        cmd->add_option("--out", out_path, "JSON record path");
        cmd->add_option("--threads", threads, "worker threads (env LOCI_THREADS)");
        cmd->add_option("--pi0", pi0, "binomial null bound")->each([&](std::string) { has_pi0 = true; });
        cmd->add_option("--mu0", mu0, "normal-mean null bound")->each([&](std::string) { has_mu0 = true; });
        cmd->add_option("--lambda", lambda, "hdreg penalty override");
    };

    auto* cmd_test = app.add_subcommand("test", "p-value for a data file");
    add_shared(cmd_test);

    auto* cmd_ci = app.add_subcommand("ci", "confidence interval for a data file");
    add_shared(cmd_ci);
    cmd_ci->add_option("--alpha", alpha, "1 - confidence level");
    cmd_ci->add_option("--m", mn_m, "m-out-of-n resample size");

    // ---- simulate ----
    auto* cmd_sim = app.add_subcommand("simulate", "run a simulation study from a config");
    std::string cfg_path, sim_out = "report";
    int sim_reps = 0, sim_M = 0, sim_threads = 0;
    double sim_delta = 0.0, sim_alpha = 0.0;
    std::uint64_t sim_seed = 0;
    cmd_sim->add_option("--config", cfg_path, "JSON config path")->required();
    cmd_sim->add_option("--out", sim_out, "output basename (.csv and .json)");
    cmd_sim->add_option("--seed", sim_seed, "override master seed");
    cmd_sim->add_option("--reps", sim_reps, "override replication count");
    cmd_sim->add_option("--M", sim_M, "override resample count");
    cmd_sim->add_option("--delta", sim_delta, "override neighborhood scale");
    cmd_sim->add_option("--alpha", sim_alpha, "override alpha");
    cmd_sim->add_option("--threads", sim_threads, "override threads");

    CLI11_PARSE(app, argc, argv);

    if (cmd_designs->parsed()) {
        loci::UnitDesign unit =
            d_kind == "grid"
                ? loci::grid_design(d_U, d_q)
                : loci::lhd_design(d_L, d_q, loci::RngStream(d_seed).derive(0xDE51));
        std::vector<loci::ParamPoint> pts;
        if (!d_lower.empty() || !d_upper.empty()) {
            if (d_lower.size() != static_cast<std::size_t>(d_q) || d_upper.size() != d_lower.size())
                throw loci::InputError("designs: --lower/--upper must have length q");
            loci::Region box(d_lower, d_upper,
                             d_simplex ? loci::Constraint::simplex() : loci::Constraint::none());
            pts = loci::map_to_region(unit, box);
            if (d_simplex) pts = loci::filter_feasible(pts, box);
        } else {
            for (const auto& psi : unit.points) pts.emplace_back(psi);
        }
        if (d_out.empty()) {
            loci::write_design_csv(std::cout, pts);
        } else {
            std::ofstream os(d_out);
            if (!os) throw loci::InputError("cannot write '" + d_out + "'");
            loci::write_design_csv(os, pts);
        }
        return 0;
    }

    if (cmd_test->parsed() || cmd_ci->parsed()) {
        json mopts;
        if (has_pi0) mopts["pi0"] = pi0;
        if (has_mu0) mopts["mu0"] = mu0;
        if (lambda > 0.0) mopts["lambda"] = lambda;
        DataBundle db = load_model_data(model_id, data_path, mopts);
        const loci::Model& model = *db.model;
        loci::EngineOptions opts;
        opts.exec = loci::Exec{env_threads(threads)};
        loci::RngStream rng(seed);
        loci::ParamPoint theta_hat = model.estimate(db.data);
        const int n = model.sample_size(db.data);

        json record;
        record["model"] = model_id;
        record["method"] = method;
        record["seed"] = seed;
        record["M"] = M;
        record["n"] = n;
        record["estimate"] = theta_hat.coords;

        if (cmd_test->parsed()) {
            loci::PValueResult pv;
            if (method == "bootstrap") {
                pv = loci::bootstrap_pvalue(model, db.data, M, rng, opts);
            } else {
                loci::Region region =
                    model.restrict_to_null(model.neighborhood(theta_hat, n, delta));
                loci::TryDesign design =
                    design_for(model, theta_hat, region, design_kind, U, L, seed);
                record["try_points"] = design.size();
                if (method == "lot-nb")
                    pv = loci::nb_pvalue(model, db.data, region, design, M, rng, opts);
                else if (method == "lot-is-design")
                    pv = loci::is_pvalue_design(model, db.data, design, M, rng, opts);
                else if (method == "lot-is-refined")
                    pv = loci::is_pvalue_refined(model, db.data, region, design, M, rng, 0, opts);
                else
                    throw loci::InputError("unknown test method '" + method + "'");
            }
            record["p"] = pv.p;
            record["per_point"] = per_point_json(pv.per_point);
            std::cout << "p-value: " << pv.p << "\n";
            emit(record, out_path);
            return 0;
        }

        if (!(alpha > 0.0 && alpha < 1.0)) throw loci::InputError("invalid alpha");
        loci::CiResult ci;
        if (method == "bootstrap") {
            loci::Region region = model.neighborhood(theta_hat, n, delta);
            ci = loci::nb_ci(model, db.data, region,
                             loci::build_try_design(theta_hat, region, loci::UnitDesign{}), M,
                             rng, alpha, loci::CiSide::two_sided, opts);
        } else if (method == "m-out-of-n") {
            int m = mn_m > 0 ? mn_m : static_cast<int>(2.0 * std::sqrt(static_cast<double>(n)));
            ci = loci::m_out_of_n_ci(model, db.data, m, M, rng, alpha, opts);
        } else if (method == "loci-nb" || method == "loci-is") {
            loci::Region region = model.neighborhood(theta_hat, n, delta);
            loci::TryDesign design = design_for(model, theta_hat, region, design_kind, U, L, seed);
            record["try_points"] = design.size();
            if (method == "loci-nb")
                ci = loci::nb_ci(model, db.data, region, design, M, rng, alpha,
                                 loci::CiSide::two_sided, opts);
            else
                ci = loci::is_ci_upper(model, db.data, region, design, M, rng, 1.0 - alpha, opts);
        } else {
            throw loci::InputError("unknown ci method '" + method + "'");
        }
        record["alpha"] = alpha;
        record["lower"] = ci.lower;
        record["upper"] = ci.upper;
        record["target_estimate"] = ci.estimate;
        record["per_point_quantiles"] = per_point_json(ci.per_point_quantiles);
        std::cout << "interval: [" << ci.lower << ", " << ci.upper << "]\n";
        emit(record, out_path);
        return 0;
    }

    // simulate
    std::ifstream cfg_in(cfg_path);
    if (!cfg_in) throw loci::InputError("cannot open config '" + cfg_path + "'");
    json cfg_json;
    try {
        cfg_in >> cfg_json;
    } catch (const json::exception& e) {
        throw loci::InputError(std::string("config parse: ") + e.what());
    }
    loci::ExperimentConfig config = loci::ExperimentConfig::from_json(cfg_json);
    if (sim_seed != 0) config.seed = sim_seed;
    if (sim_reps > 0) config.reps = sim_reps;
    if (sim_M > 0) config.M = sim_M;
    if (sim_delta > 0.0) config.delta = sim_delta;
    if (sim_alpha > 0.0) config.alpha = sim_alpha;
    if (sim_threads > 0) config.threads = sim_threads;
    if (const char* env = std::getenv("LOCI_THREADS"); env && sim_threads == 0) {
        int t = std::atoi(env);
        if (t > 0) config.threads = t;
    }

    loci::SimReport report = loci::run_experiment(config);
    {
        std::ofstream os(sim_out + ".csv");
        if (!os) throw loci::InputError("cannot write '" + sim_out + ".csv'");
        loci::write_report_csv(os, report);
    }
    {
        std::ofstream os(sim_out + ".json");
        loci::write_report_json(os, report);
    }
    std::cout << "wrote " << sim_out << ".csv and " << sim_out << ".json ("
              << report.rows.size() << " rows, " << report.skipped_reps << " skipped reps)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const loci::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const loci::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const loci::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
