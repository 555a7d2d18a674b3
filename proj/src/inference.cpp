#include "loci/inference.hpp"

#include <algorithm>
#include <cmath>

#include "loci/optim.hpp"

namespace loci {

namespace {

// Stream for resample m of try point l. Every operation uses this layout, so
// a center-only design reproduces the classic bootstrap streams exactly and
// appending try points never disturbs existing ones.
RngStream resample_stream(const RngStream& base, std::size_t l, std::size_t m) {
    return base.derive(l).derive(m);
}

void check_m(int M) {
    if (M <= 0) throw InputError("resample count M must be positive");
}

}  // namespace

std::string to_string(PvMethod m) {
    switch (m) {
        case PvMethod::bootstrap: return "bootstrap";
        case PvMethod::neighborhood_bootstrap: return "neighborhood-bootstrap";
        case PvMethod::importance_design: return "importance-design";
        case PvMethod::importance_refined: return "importance-refined";
    }
    return "?";
}

std::string to_string(CiMethod m) {
    switch (m) {
        case CiMethod::bootstrap_hybrid: return "bootstrap-hybrid";
        case CiMethod::neighborhood_bootstrap: return "neighborhood-bootstrap";
        case CiMethod::m_out_of_n: return "m-out-of-n";
        case CiMethod::importance_weighted: return "importance-weighted";
    }
    return "?";
}

PValueResult bootstrap_pvalue(const Model& model, const Dataset& data, int M, RngStream rng,
                              const EngineOptions& opts) {
    check_m(M);
    if (!model.has_statistic()) throw InputError("bootstrap_pvalue: model has no statistic");

    PValueResult out;
    out.method = PvMethod::bootstrap;
    out.resamples = M;

    const double t = model.statistic(data, &out.diag);
    const ParamPoint theta_hat = model.estimate(data, &out.diag);
    const int n = model.sample_size(data);

    std::vector<char> exceeds(M, 0);
    std::vector<Diag> diags(M);
    parallel_for_index(static_cast<std::size_t>(M), opts.exec, [&](std::size_t m) {
        Dataset x = model.simulate(theta_hat, n, resample_stream(rng, 0, m));
        exceeds[m] = model.statistic(x, &diags[m]) >= t ? 1 : 0;
    });

    double hits = 0.0;
    for (int m = 0; m < M; ++m) {
        hits += exceeds[m] ? 1.0 : 0.0;
        out.diag.merge(diags[m]);
    }
    out.p = hits / static_cast<double>(M);
    out.per_point.emplace_back(theta_hat, out.p);
    return out;
}

PValueResult nb_pvalue(const Model& model, const Dataset& data, const Region& region,
                       const TryDesign& design, int M, RngStream rng,
                       const EngineOptions& opts) {
    check_m(M);
    if (design.size() == 0) throw InputError("nb_pvalue: empty try design");
    if (!model.has_statistic()) throw InputError("nb_pvalue: model has no statistic");
    (void)region;

    PValueResult out;
    out.method = PvMethod::neighborhood_bootstrap;
    out.resamples = M;

    const double t = model.statistic(data, &out.diag);
    const int n = model.sample_size(data);
    const std::size_t L = design.size();

    std::vector<double> values(L, 0.0);
    std::vector<Diag> diags(L);
    parallel_for_index(L, opts.exec, [&](std::size_t l) {
        double hits = 0.0;
        for (int m = 0; m < M; ++m) {
            Dataset x = model.simulate(design.points[l], n, resample_stream(rng, l, m));
            if (model.statistic(x, &diags[l]) >= t) hits += 1.0;
        }
        values[l] = hits / static_cast<double>(M);
    });

    out.p = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        out.per_point.emplace_back(design.points[l], values[l]);
        out.p = std::max(out.p, values[l]);
        out.diag.merge(diags[l]);
    }
    return out;
}

IsContext make_is_context(const Model& model, const Dataset& data, int M, RngStream rng,
                          const EngineOptions& opts) {
    check_m(M);
    if (!model.has_statistic()) throw InputError("importance sampling: model has no statistic");
    if (!model.has_log_density()) throw InputError("importance sampling: model has no log density");

    IsContext ctx;
    ctx.M = M;
    Diag diag;
    ctx.t_observed = model.statistic(data, &diag);
    ctx.theta_hat = model.estimate(data, &diag);
    const int n = model.sample_size(data);

    ctx.resamples.resize(M);
    ctx.exceeds.assign(M, 0);
    ctx.log_f_center.assign(M, 0.0);
    parallel_for_index(static_cast<std::size_t>(M), opts.exec, [&](std::size_t m) {
        ctx.resamples[m] = model.simulate(ctx.theta_hat, n, resample_stream(rng, 0, m));
        ctx.exceeds[m] = model.statistic(ctx.resamples[m]) >= ctx.t_observed ? 1 : 0;
        ctx.log_f_center[m] = model.log_density(ctx.resamples[m], ctx.theta_hat);
        if (!std::isfinite(ctx.log_f_center[m]))
            throw NumericError("importance sampling: log density not finite at the estimate");
    });
    return ctx;
}

double is_objective(const Model& model, const IsContext& ctx, const ParamPoint& phi, Diag* diag,
                    double ess_warn_threshold) {
    double sum = 0.0;       // indicator-weighted mass
    double wsum = 0.0;      // for the degeneracy diagnostic
    double wsq = 0.0;
    for (int m = 0; m < ctx.M; ++m) {
        double lf = model.log_density(ctx.resamples[m], phi);
        if (!std::isfinite(lf))
            throw NumericError("is_objective: log density not finite at a try point");
        double w = std::exp(lf - ctx.log_f_center[m]);
        wsum += w;
        wsq += w * w;
        if (ctx.exceeds[m]) sum += w;
    }
    if (diag && wsq > 0.0) {
        double ess = wsum * wsum / wsq;
        if (ess < ess_warn_threshold) {
            diag->ess_warnings += 1;
            diag->note("importance weights degenerate: ESS " + std::to_string(ess));
        }
    }
    return sum / static_cast<double>(ctx.M);
}

double is_objective(const Model& model, const Dataset& data, const ParamPoint& phi,
                    const std::vector<Dataset>& resamples, Diag* diag) {
    IsContext ctx;
    ctx.M = static_cast<int>(resamples.size());
    if (ctx.M == 0) throw InputError("is_objective: no resamples");
    ctx.t_observed = model.statistic(data);
    ctx.theta_hat = model.estimate(data);
    ctx.resamples = resamples;
    ctx.exceeds.assign(ctx.M, 0);
    ctx.log_f_center.assign(ctx.M, 0.0);
    for (int m = 0; m < ctx.M; ++m) {
        ctx.exceeds[m] = model.statistic(resamples[m]) >= ctx.t_observed ? 1 : 0;
        ctx.log_f_center[m] = model.log_density(resamples[m], ctx.theta_hat);
        if (!std::isfinite(ctx.log_f_center[m]))
            throw NumericError("is_objective: log density not finite at the estimate");
    }
    return is_objective(model, ctx, phi, diag);
}

PValueResult is_pvalue_design(const Model& model, const Dataset& data, const TryDesign& design,
                              int M, RngStream rng, const EngineOptions& opts) {
    if (design.size() == 0) throw InputError("is_pvalue_design: empty try design");
    IsContext ctx = make_is_context(model, data, M, rng, opts);

    PValueResult out;
    out.method = PvMethod::importance_design;
    out.resamples = M;

    const std::size_t L = design.size();
    std::vector<double> values(L, 0.0);
    std::vector<Diag> diags(L);
    parallel_for_index(L, opts.exec, [&](std::size_t l) {
        values[l] = is_objective(model, ctx, design.points[l], &diags[l],
                                 opts.ess_warn_threshold);
    });

    double best = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        out.per_point.emplace_back(design.points[l], values[l]);
        best = std::max(best, values[l]);
        out.diag.merge(diags[l]);
    }
    out.p = std::min(1.0, best);
    return out;
}

PValueResult is_pvalue_refined(const Model& model, const Dataset& data, const Region& region,
                               const TryDesign& design, int M, RngStream rng, long budget,
                               const EngineOptions& opts) {
    if (design.size() == 0) throw InputError("is_pvalue_refined: empty try design");
    IsContext ctx = make_is_context(model, data, M, rng, opts);

    PValueResult out;
    out.method = PvMethod::importance_refined;
    out.resamples = M;

    const std::size_t L = design.size();
    std::vector<double> values(L, 0.0);
    std::vector<Diag> diags(L);
    parallel_for_index(L, opts.exec, [&](std::size_t l) {
        values[l] = is_objective(model, ctx, design.points[l], &diags[l],
                                 opts.ess_warn_threshold);
    });
    double design_best = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        out.per_point.emplace_back(design.points[l], values[l]);
        design_best = std::max(design_best, values[l]);
        out.diag.merge(diags[l]);
    }

    // top three design points seed the local search
    std::vector<std::size_t> order(L);
    for (std::size_t l = 0; l < L; ++l) order[l] = l;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<ParamPoint> starts;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, L); ++i)
        starts.push_back(design.points[order[i]]);

    Objective f = [&](const std::vector<double>& x) {
        ParamPoint phi(x);
        if (!region.constraint.holds(x)) return -std::numeric_limits<double>::infinity();
        return is_objective(model, ctx, phi, nullptr, opts.ess_warn_threshold);
    };
    OptResult best = multistart_max(f, starts, region, budget, 1e-8, opts.exec);
    if (!best.converged) out.diag.optimizer_nonconverged += 1;

    out.per_point.emplace_back(best.point, best.value);
    out.p = std::min(1.0, std::max(design_best, best.value));
    return out;
}

CiResult nb_ci(const Model& model, const Dataset& data, const Region& region,
               const TryDesign& design, int M, RngStream rng, double alpha, CiSide side,
               const EngineOptions& opts) {
    check_m(M);
    if (design.size() == 0) throw InputError("nb_ci: empty try design");
    if (!model.has_target()) throw InputError("nb_ci: model has no target functional");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("nb_ci: alpha outside (0,1)");
    (void)region;

    CiResult out;
    out.method = design.size() == 1 ? CiMethod::bootstrap_hybrid : CiMethod::neighborhood_bootstrap;
    out.level = 1.0 - alpha;

    const double xi_hat = model.target_estimate(data, &out.diag);
    out.estimate = xi_hat;
    const int n = model.sample_size(data);
    const std::size_t L = design.size();

    const double gamma_hi = (side == CiSide::two_sided) ? 1.0 - alpha / 2.0 : 1.0 - alpha;
    const double gamma_lo = (side == CiSide::two_sided) ? alpha / 2.0 : alpha;

    std::vector<double> q_hi(L, 0.0), q_lo(L, 0.0);
    std::vector<Diag> diags(L);
    parallel_for_index(L, opts.exec, [&](std::size_t l) {
        const double xi_phi = model.target(design.points[l]);
        std::vector<double> pivots(M);
        for (int m = 0; m < M; ++m) {
            Dataset x = model.simulate(design.points[l], n, resample_stream(rng, l, m));
            pivots[m] = xi_phi - model.target_estimate(x, &diags[l]);
        }
        if (side != CiSide::lower) q_hi[l] = sample_quantile(pivots, gamma_hi);
        if (side != CiSide::upper) q_lo[l] = sample_quantile(pivots, gamma_lo);
    });

    for (std::size_t l = 0; l < L; ++l) out.diag.merge(diags[l]);

    if (side != CiSide::lower) {
        double best = q_hi[0];
        for (std::size_t l = 0; l < L; ++l) {
            best = std::max(best, q_hi[l]);
            out.per_point_quantiles.emplace_back(design.points[l], q_hi[l]);
        }
        out.upper = xi_hat + best;
    }
    if (side != CiSide::upper) {
        double worst = q_lo[0];
        for (std::size_t l = 0; l < L; ++l) {
            worst = std::min(worst, q_lo[l]);
            if (side == CiSide::lower)
                out.per_point_quantiles.emplace_back(design.points[l], q_lo[l]);
        }
        out.lower = xi_hat + worst;
    }
    if (out.lower > out.upper)
        throw NumericError("nb_ci: crossed interval limits");
    return out;
}

CiResult is_ci_upper(const Model& model, const Dataset& data, const Region& region,
                     const TryDesign& design, int M, RngStream rng, double gamma,
                     const EngineOptions& opts) {
    check_m(M);
    if (design.size() == 0) throw InputError("is_ci_upper: empty try design");
    if (!model.has_target()) throw InputError("is_ci_upper: model has no target functional");
    if (!model.has_log_density()) throw InputError("is_ci_upper: model has no log density");
    if (!(gamma > 0.0 && gamma < 1.0)) throw InputError("is_ci_upper: gamma outside (0,1)");
    (void)region;

    CiResult out;
    out.method = CiMethod::importance_weighted;
    out.level = gamma;

    Diag diag;
    const ParamPoint theta_hat = model.estimate(data, &diag);
    const double xi_hat = model.target_estimate(data, &diag);
    out.estimate = xi_hat;
    out.diag.merge(diag);
    const int n = model.sample_size(data);

    // single shared resample set at the estimate
    std::vector<Dataset> resamples(M);
    std::vector<double> xi_star(M), log_f_center(M);
    parallel_for_index(static_cast<std::size_t>(M), opts.exec, [&](std::size_t m) {
        resamples[m] = model.simulate(theta_hat, n, resample_stream(rng, 0, m));
        xi_star[m] = model.target_estimate(resamples[m]);
        log_f_center[m] = model.log_density(resamples[m], theta_hat);
        if (!std::isfinite(log_f_center[m]))
            throw NumericError("is_ci_upper: log density not finite at the estimate");
    });

    const std::size_t L = design.size();
    std::vector<double> qs(L, 0.0);
    std::vector<Diag> diags(L);
    parallel_for_index(L, opts.exec, [&](std::size_t l) {
        const ParamPoint& phi = design.points[l];
        const double xi_phi = model.target(phi);
        std::vector<double> pivots(M), weights(M);
        double wsum = 0.0, wsq = 0.0;
        for (int m = 0; m < M; ++m) {
            pivots[m] = xi_phi - xi_star[m];
            double lf = model.log_density(resamples[m], phi);
            if (!std::isfinite(lf))
                throw NumericError("is_ci_upper: log density not finite at a try point");
            weights[m] = std::exp(lf - log_f_center[m]);
            wsum += weights[m];
            wsq += weights[m] * weights[m];
        }
        if (wsq > 0.0) {
            double ess = wsum * wsum / wsq;
            if (ess < opts.ess_warn_threshold) {
                diags[l].ess_warnings += 1;
                diags[l].note("importance weights degenerate: ESS " + std::to_string(ess));
            }
        }
        qs[l] = weighted_quantile(pivots, weights, gamma);
    });

    double best = -std::numeric_limits<double>::infinity();
    bool any_finite = false;
    for (std::size_t l = 0; l < L; ++l) {
        out.per_point_quantiles.emplace_back(design.points[l], qs[l]);
        out.diag.merge(diags[l]);
        if (std::isfinite(qs[l])) any_finite = true;
        best = std::max(best, qs[l]);
    }
    if (!any_finite) {
        out.diag.note("weighted mass below gamma at every try point: upper bound infinite");
        out.upper = std::numeric_limits<double>::infinity();
    } else {
        out.upper = xi_hat + best;
    }
    out.lower = -std::numeric_limits<double>::infinity();
    return out;
}

CiResult m_out_of_n_ci(const Model& model, const Dataset& data, int m, int M, RngStream rng,
                       double alpha, const EngineOptions& opts) {
    check_m(M);
    if (!model.has_target()) throw InputError("m_out_of_n_ci: model has no target functional");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("m_out_of_n_ci: alpha outside (0,1)");
    const int n = model.sample_size(data);
    if (m < 1 || m > n) throw InputError("m_out_of_n_ci: m must lie in [1, n]");

    CiResult out;
    out.method = CiMethod::m_out_of_n;
    out.level = 1.0 - alpha;

    const ParamPoint theta_hat = model.estimate(data, &out.diag);
    const double xi_hat = model.target_estimate(data, &out.diag);
    out.estimate = xi_hat;
    const double scale = std::sqrt(static_cast<double>(m)) / std::sqrt(static_cast<double>(n));

    std::vector<double> pivots(M);
    std::vector<Diag> diags(M);
    parallel_for_index(static_cast<std::size_t>(M), opts.exec, [&](std::size_t i) {
        Dataset x = model.simulate(theta_hat, m, resample_stream(rng, 0, i));
        pivots[i] = scale * (xi_hat - model.target_estimate(x, &diags[i]));
    });
    for (int i = 0; i < M; ++i) out.diag.merge(diags[i]);

    out.upper = xi_hat + sample_quantile(pivots, 1.0 - alpha / 2.0);
    out.lower = xi_hat + sample_quantile(pivots, alpha / 2.0);
    out.per_point_quantiles.emplace_back(theta_hat, out.upper - xi_hat);
    return out;
}

}  // namespace loci
