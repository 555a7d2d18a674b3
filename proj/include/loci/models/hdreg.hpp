#pragma once

#include <Eigen/Dense>

#include "loci/model.hpp"

namespace loci {

/// Lasso fit by cyclic coordinate descent on the objective
/// ||y - X beta||^2 + lambda * sum |beta_j|. Converged when the largest
/// coordinate change in a sweep falls below 1e-8 (at most 1e4 sweeps).
Eigen::VectorXd lasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

/// Nonnegative lasso: same objective with beta_j >= 0, coordinate updates
/// clipped at zero.
Eigen::VectorXd nnlasso_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

/// Largest KKT violation of a nonnegative-lasso candidate (0 when optimal).
double nnlasso_kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                             const Eigen::VectorXd& beta);

/// Ratio of null to alternative residual sums of squares,
/// T = RSS(nonnegative lasso) / RSS(lasso). +inf when the denominator
/// vanishes while the numerator does not; 1 when both vanish.
double glr_statistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

/// Residual mean square of the least-norm OLS refit on the given support
/// columns; ||y||^2/n for an empty support. Floored at 1e-12. The divisor is
/// n, or n - |support| when df_correct is set (guarded at 1): without the
/// correction the refit variance collapses once the selected submodel grows,
/// which poisons every resampling step downstream.
double sigma2_refit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                    const std::vector<int>& support, bool df_correct = false);

/// Penalty rule lambda = 4 sqrt(log(p)/n) stated for the mean-squared-error
/// loss, rescaled by n to match the sum-of-squares objective used by the fit
/// routines.
double hdreg_recommended_penalty(int n, int p);

/// Design matrix with i.i.d. N(0, Sigma) rows, Sigma unit diagonal and `rho`
/// off-diagonal, sampled through the Cholesky factor of Sigma.
Eigen::MatrixXd hdreg_design_matrix(int n, int p, double rho, RngStream stream);

/// Test for nonnegativity of all regression coefficients in high-dimensional
/// linear regression. The parameter point is (beta_1..beta_p, sigma^2); a
/// dataset is the response vector for this model's fixed design matrix.
class HdregModel : public Model {
public:
    HdregModel(Eigen::MatrixXd X, double lambda, bool sigma_dim_in_region = true,
               bool sigma2_df_correct = false);

    std::string id() const override { return "hdreg"; }
    std::size_t param_dim() const override { return static_cast<std::size_t>(p_) + 1; }
    int default_sample_size() const override { return n_; }

    Dataset simulate(const ParamPoint& phi, int n, RngStream stream) const override;
    ParamPoint estimate(const Dataset& data, Diag* diag = nullptr) const override;
    int sample_size(const Dataset&) const override { return n_; }

    bool has_statistic() const override { return true; }
    double statistic(const Dataset& data, Diag* diag = nullptr) const override;

    Region neighborhood(const ParamPoint& theta_hat, int n, double delta) const override;

    bool has_log_density() const override { return true; }
    double log_density(const Dataset& data, const ParamPoint& phi) const override;

    const Eigen::MatrixXd& design() const { return X_; }
    double lambda() const { return lambda_; }

private:
    Eigen::VectorXd to_response(const Dataset& data) const;

    Eigen::MatrixXd X_;
    int n_ = 0;
    int p_ = 0;
    double lambda_ = 0.0;
    bool sigma_dim_in_region_ = true;
    bool sigma2_df_correct_ = false;
};

}  // namespace loci
