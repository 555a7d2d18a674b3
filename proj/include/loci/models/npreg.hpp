#pragma once

#include <functional>

#include "loci/model.hpp"

namespace loci {

/// Epanechnikov kernel 0.75 (1 - u^2) on |u| <= 1.
double epanechnikov(double u);

/// Nadaraya-Watson estimate at x from (xs, ys) with bandwidth h. When no
/// design point falls inside the kernel window the nearest point's response
/// is returned and *fell_back (if given) is set.
double nadaraya_watson(double x, const std::vector<double>& xs, const std::vector<double>& ys,
                       double h, bool* fell_back = nullptr);

/// Named regression functions used by the simulation studies.
enum class NpregFunction { I, II, III, IV };
NpregFunction npreg_function_from_string(const std::string& s);
std::string to_string(NpregFunction f);
double npreg_r(NpregFunction f, double x);
double npreg_true_argmin(NpregFunction f);

/// Interval estimation for the argmin of an unknown regression function on
/// [0,1], observed at the fixed grid x_i = (2i-1)/(2n) with Gaussian noise.
///
/// The parameter point is the finite-dimensional surrogate
/// (xi, mean_1..mean_n, sd): simulate draws independent Gaussians around the
/// mean vector, and the first coordinate plays the target in the pivot. A
/// dataset generated from the true function r corresponds exactly to the
/// surrogate at (argmin r, r(x_1)..r(x_n), sigma).
class NpregModel : public Model {
public:
    explicit NpregModel(int n);

    std::string id() const override { return "npreg"; }
    std::size_t param_dim() const override { return static_cast<std::size_t>(n_) + 2; }
    int default_sample_size() const override { return n_; }

    Dataset simulate(const ParamPoint& phi, int n, RngStream stream) const override;
    ParamPoint estimate(const Dataset& data, Diag* diag = nullptr) const override;

    bool has_target() const override { return true; }
    double target(const ParamPoint& phi) const override { return phi[0]; }
    double target_estimate(const Dataset& data, Diag* diag = nullptr) const override;

    /// Box (Nnr): xi and the mean coordinates get half-width delta*sd_hat
    /// (xi clipped to [0,1]), the sd coordinate delta (clipped positive).
    Region neighborhood(const ParamPoint& theta_hat, int n, double delta) const override;

    /// Surrogate point (argmin r, r(x_1)..r(x_n), sigma) for a named function.
    ParamPoint truth_point(NpregFunction f, double sigma) const;

    double bandwidth() const { return h_; }
    const std::vector<double>& x_grid() const { return x_grid_; }

    double nw(double x, const Dataset& y, bool* fell_back = nullptr) const;
    double argmin_estimate(const Dataset& y, Diag* diag = nullptr) const;
    double sigma2_estimate(const Dataset& y, Diag* diag = nullptr) const;

private:
    struct WeightRow {
        int first = 0;                 // index of the first design point in the window
        std::vector<double> w;         // kernel weights over the window
        double sum = 0.0;              // total weight; 0 marks an empty window
        int nearest = 0;               // fallback index
    };
    WeightRow make_row(double x) const;
    double smooth(const WeightRow& row, const Dataset& y) const;

    int n_;
    double h_;
    std::vector<double> x_grid_;       // (2i-1)/(2n)
    std::vector<double> eval_grid_;    // 1001 equally spaced argmin candidates
    std::vector<WeightRow> eval_rows_; // kernel weights at the eval grid
    std::vector<WeightRow> design_rows_;  // kernel weights at the design points
};

}  // namespace loci
