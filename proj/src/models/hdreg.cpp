#include "loci/models/hdreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loci {

namespace {

constexpr double kSweepTol = 1e-8;
constexpr int kMaxSweeps = 10000;

// Shared coordinate-descent core; `nonnegative` clips updates at zero.
Eigen::VectorXd cd_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                       bool nonnegative) {
    if (!(lambda > 0.0)) throw InputError("coordinate descent: lambda must be positive");
    const int p = static_cast<int>(X.cols());

    Eigen::VectorXd col_sq(p);
    for (int j = 0; j < p; ++j) col_sq[j] = X.col(j).squaredNorm();

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd r = y;  // full residual, maintained incrementally
    const double half_lambda = lambda / 2.0;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (int j = 0; j < p; ++j) {
            if (col_sq[j] <= 0.0) {
                beta[j] = 0.0;  // zero-norm column carries no signal
                continue;
            }
            double z = X.col(j).dot(r) + col_sq[j] * beta[j];
            double bj;
            if (nonnegative) {
                bj = std::max(0.0, (z - half_lambda) / col_sq[j]);
            } else {
                double shrunk = std::max(0.0, std::fabs(z) - half_lambda);
                bj = (z < 0.0 ? -shrunk : shrunk) / col_sq[j];
            }
            double delta = bj - beta[j];
            if (delta != 0.0) {
                r -= delta * X.col(j);
                beta[j] = bj;
                max_change = std::max(max_change, std::fabs(delta));
            }
        }
        if (max_change < kSweepTol) break;
    }
    return beta;
}

}  // namespace

Eigen::VectorXd lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
    return cd_fit(X, y, lambda, false);
}

Eigen::VectorXd nnlasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
    return cd_fit(X, y, lambda, true);
}

double nnlasso_kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                             const Eigen::VectorXd& beta) {
    // gradient of ||y - X b||^2 + lambda * sum b_j at b: -2 X'(y - Xb) + lambda
    Eigen::VectorXd grad = -2.0 * (X.transpose() * (y - X * beta));
    grad.array() += lambda;
    double worst = 0.0;
    for (int j = 0; j < beta.size(); ++j) {
        if (beta[j] > 0.0)
            worst = std::max(worst, std::fabs(grad[j]));
        else
            worst = std::max(worst, std::max(0.0, -grad[j]));
    }
    return worst;
}

double glr_statistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
    Eigen::VectorXd b0 = nnlasso_fit(X, y, lambda);
    Eigen::VectorXd b1 = lasso_fit(X, y, lambda);
    double rss0 = (y - X * b0).squaredNorm();
    double rss1 = (y - X * b1).squaredNorm();
    if (rss1 <= 0.0)
        return rss0 <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    return rss0 / rss1;
}

double sigma2_refit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    const std::vector<int>& support, bool df_correct) {
    const int n = static_cast<int>(X.rows());
    if (support.empty()) return std::max(y.squaredNorm() / n, 1e-12);

    Eigen::MatrixXd Xs(n, static_cast<int>(support.size()));
    for (int j = 0; j < static_cast<int>(support.size()); ++j) Xs.col(j) = X.col(support[j]);
    // least-norm solution handles rank deficiency
    Eigen::VectorXd b = Xs.completeOrthogonalDecomposition().solve(y);
    int divisor = df_correct ? std::max(n - static_cast<int>(support.size()), 1) : n;
    return std::max((y - Xs * b).squaredNorm() / divisor, 1e-12);
}

double hdreg_recommended_penalty(int n, int p) {
    return static_cast<double>(n) * 4.0 *
           std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

Eigen::MatrixXd hdreg_design_matrix(int n, int p, double rho, RngStream stream) {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Constant(p, p, rho);
    sigma.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw NumericError("hdreg_design_matrix: covariance not positive definite");
    Eigen::MatrixXd Lt = llt.matrixL().transpose();

    Eigen::MatrixXd Z(n, p);
    for (int i = 0; i < n; ++i) {
        RngStream row = stream.derive(i);
        for (int j = 0; j < p; ++j) Z(i, j) = row.next_normal();
    }
    return Z * Lt;
}

HdregModel::HdregModel(Eigen::MatrixXd X, double lambda, bool sigma_dim_in_region,
                       bool sigma2_df_correct)
    : X_(std::move(X)), n_(static_cast<int>(X_.rows())), p_(static_cast<int>(X_.cols())),
      lambda_(lambda), sigma_dim_in_region_(sigma_dim_in_region),
      sigma2_df_correct_(sigma2_df_correct) {
    if (n_ < 2) throw InputError("hdreg: need at least 2 rows");
    if (!(lambda_ > 0.0)) throw InputError("hdreg: lambda must be positive");
    if (!X_.allFinite()) throw InputError("hdreg: non-finite design entries");
}

Eigen::VectorXd HdregModel::to_response(const Dataset& data) const {
    if (static_cast<int>(data.size()) != n_)
        throw InputError("hdreg: response length does not match the design matrix");
    return Eigen::Map<const Eigen::VectorXd>(data.data(), n_);
}

Dataset HdregModel::simulate(const ParamPoint& phi, int n, RngStream stream) const {
    if (n != n_) throw InputError("hdreg: sample size is fixed by the design matrix");
    if (static_cast<int>(phi.dim()) != p_ + 1)
        throw InputError("hdreg: wrong parameter dimension");
    const double sigma2 = phi[p_];
    if (!(sigma2 > 0.0)) throw InputError("hdreg: sigma^2 must be positive");
    const double sd = std::sqrt(sigma2);

    Eigen::Map<const Eigen::VectorXd> beta(phi.coords.data(), p_);
    Eigen::VectorXd mean = X_ * beta;
    Dataset y(n_);
    for (int i = 0; i < n_; ++i) y[i] = mean[i] + sd * stream.next_normal();
    return y;
}

ParamPoint HdregModel::estimate(const Dataset& data, Diag*) const {
    Eigen::VectorXd y = to_response(data);
    Eigen::VectorXd b0 = nnlasso_fit(X_, y, lambda_);
    std::vector<int> support;
    for (int j = 0; j < p_; ++j)
        if (b0[j] > 0.0) support.push_back(j);
    double s2 = sigma2_refit(X_, y, support, sigma2_df_correct_);

    std::vector<double> coords(p_ + 1);
    for (int j = 0; j < p_; ++j) coords[j] = b0[j];
    coords[p_] = s2;
    return ParamPoint(std::move(coords));
}

double HdregModel::statistic(const Dataset& data, Diag*) const {
    return glr_statistic(X_, to_response(data), lambda_);
}

Region HdregModel::neighborhood(const ParamPoint& theta_hat, int, double delta) const {
    if (!(delta > 0.0)) throw InputError("hdreg: delta must be positive");
    const double s2 = theta_hat[p_];
    const double s = std::sqrt(std::max(s2, 0.0));

    std::vector<double> lo(p_ + 1), hi(p_ + 1);
    for (int j = 0; j < p_; ++j) {
        double bj = theta_hat[j];
        if (bj == 0.0) {
            lo[j] = hi[j] = 0.0;  // frozen at the selected zero
        } else {
            lo[j] = std::max(0.0, bj - delta * s);
            hi[j] = bj + delta * s;
        }
    }
    if (sigma_dim_in_region_) {
        lo[p_] = std::max(1e-12, s2 - delta);
        hi[p_] = s2 + delta;
    } else {
        lo[p_] = hi[p_] = s2;
    }
    return Region(std::move(lo), std::move(hi));
}

double HdregModel::log_density(const Dataset& data, const ParamPoint& phi) const {
    const double sigma2 = phi[p_];
    if (!(sigma2 > 0.0)) throw InputError("hdreg: sigma^2 must be positive");
    Eigen::VectorXd y = to_response(data);
    Eigen::Map<const Eigen::VectorXd> beta(phi.coords.data(), p_);
    double rss = (y - X_ * beta).squaredNorm();
    return -0.5 * n_ * std::log(2.0 * M_PI * sigma2) - rss / (2.0 * sigma2);
}

}  // namespace loci
