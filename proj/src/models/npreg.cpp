#include "loci/models/npreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace loci {

double epanechnikov(double u) {
    double a = std::fabs(u);
    return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
}

double nadaraya_watson(double x, const std::vector<double>& xs, const std::vector<double>& ys,
                       double h, bool* fell_back) {
    if (xs.empty() || xs.size() != ys.size())
        throw InputError("nadaraya_watson: bad input lengths");
    if (!(h > 0.0)) throw InputError("nadaraya_watson: bandwidth must be positive");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double k = epanechnikov((x - xs[i]) / h);
        num += k * ys[i];
        den += k;
    }
    if (den > 0.0) {
        if (fell_back) *fell_back = false;
        return num / den;
    }
    // empty window: nearest design point's response
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::fabs(x - xs[i]) < std::fabs(x - xs[best])) best = i;
    if (fell_back) *fell_back = true;
    return ys[best];
}

NpregFunction npreg_function_from_string(const std::string& s) {
    if (s == "I") return NpregFunction::I;
    if (s == "II") return NpregFunction::II;
    if (s == "III") return NpregFunction::III;
    if (s == "IV") return NpregFunction::IV;
    throw InputError("npreg: unknown regression function '" + s + "'");
}

std::string to_string(NpregFunction f) {
    switch (f) {
        case NpregFunction::I: return "I";
        case NpregFunction::II: return "II";
        case NpregFunction::III: return "III";
        case NpregFunction::IV: return "IV";
    }
    return "?";
}

double npreg_r(NpregFunction f, double x) {
    switch (f) {
        case NpregFunction::I: return 2.0 * (2.0 * x - 1.0) * (2.0 * x - 1.0);
        case NpregFunction::II: return 2.0 / (x + 1.0);
        case NpregFunction::III: return std::sin(2.0 * M_PI * x + 3.0 * M_PI / 4.0) / 2.0;
        case NpregFunction::IV: return std::fabs(x - 0.5);
    }
    return 0.0;
}

double npreg_true_argmin(NpregFunction f) {
    switch (f) {
        case NpregFunction::I: return 0.5;
        case NpregFunction::II: return 1.0;
        case NpregFunction::III: return 0.375;
        case NpregFunction::IV: return 0.5;
    }
    return 0.0;
}

NpregModel::NpregModel(int n) : n_(n) {
    if (n < 2) throw InputError("npreg: n must be >= 2");
    h_ = std::pow(static_cast<double>(n), -0.2) / 5.0;
    x_grid_.resize(n);
    for (int i = 0; i < n; ++i)
        x_grid_[i] = (2.0 * i + 1.0) / (2.0 * static_cast<double>(n));

    const int G = 1001;
    eval_grid_.resize(G);
    eval_rows_.reserve(G);
    for (int g = 0; g < G; ++g) {
        eval_grid_[g] = static_cast<double>(g) / static_cast<double>(G - 1);
        eval_rows_.push_back(make_row(eval_grid_[g]));
    }
    design_rows_.reserve(n);
    for (int i = 0; i < n; ++i) design_rows_.push_back(make_row(x_grid_[i]));
}

NpregModel::WeightRow NpregModel::make_row(double x) const {
    WeightRow row;
    // window of design points with |x - x_i| <= h (grid is uniform)
    int lo = static_cast<int>(std::floor((x - h_) * n_ - 0.5));
    int hi = static_cast<int>(std::ceil((x + h_) * n_ - 0.5));
    lo = std::max(lo, 0);
    hi = std::min(hi, n_ - 1);
    row.first = lo;
    for (int i = lo; i <= hi; ++i) {
        double k = epanechnikov((x - x_grid_[i]) / h_);
        row.w.push_back(k);
        row.sum += k;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i) {
        double d = std::fabs(x - x_grid_[i]);
        if (d < best) {
            best = d;
            row.nearest = i;
        }
    }
    return row;
}

double NpregModel::smooth(const WeightRow& row, const Dataset& y) const {
    if (row.sum <= 0.0) return y[row.nearest];
    double num = 0.0;
    for (std::size_t j = 0; j < row.w.size(); ++j) num += row.w[j] * y[row.first + j];
    return num / row.sum;
}

double NpregModel::nw(double x, const Dataset& y, bool* fell_back) const {
    if (static_cast<int>(y.size()) != n_) throw InputError("npreg: wrong response length");
    return nadaraya_watson(x, x_grid_, y, h_, fell_back);
}

double NpregModel::argmin_estimate(const Dataset& y, Diag* diag) const {
    if (static_cast<int>(y.size()) != n_) throw InputError("npreg: wrong response length");
    double best_x = eval_grid_[0];
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < eval_grid_.size(); ++g) {
        if (eval_rows_[g].sum <= 0.0 && diag) diag->fallbacks += 1;
        double v = smooth(eval_rows_[g], y);
        if (v < best_v) {  // strict: ties keep the smallest x
            best_v = v;
            best_x = eval_grid_[g];
        }
    }
    return best_x;
}

double NpregModel::sigma2_estimate(const Dataset& y, Diag*) const {
    if (static_cast<int>(y.size()) != n_) throw InputError("npreg: wrong response length");
    double rss = 0.0;
    for (int i = 0; i < n_; ++i) {
        double r = y[i] - smooth(design_rows_[i], y);
        rss += r * r;
    }
    return std::max(rss / static_cast<double>(n_), 1e-12);
}

Dataset NpregModel::simulate(const ParamPoint& phi, int n, RngStream stream) const {
    if (n != n_) throw InputError("npreg: sample size is fixed by the design grid");
    if (static_cast<int>(phi.dim()) != n_ + 2) throw InputError("npreg: wrong parameter dimension");
    const double sd = phi[n_ + 1];
    if (!(sd > 0.0)) throw InputError("npreg: sd must be positive");
    Dataset y(n_);
    for (int i = 0; i < n_; ++i) y[i] = phi[i + 1] + sd * stream.next_normal();
    return y;
}

ParamPoint NpregModel::estimate(const Dataset& data, Diag* diag) const {
    std::vector<double> coords(n_ + 2);
    coords[0] = argmin_estimate(data, diag);
    for (int i = 0; i < n_; ++i) coords[i + 1] = smooth(design_rows_[i], data);
    coords[n_ + 1] = std::sqrt(sigma2_estimate(data, diag));
    return ParamPoint(std::move(coords));
}

double NpregModel::target_estimate(const Dataset& data, Diag* diag) const {
    return argmin_estimate(data, diag);
}

Region NpregModel::neighborhood(const ParamPoint& theta_hat, int, double delta) const {
    if (!(delta > 0.0)) throw InputError("npreg: delta must be positive");
    const double s = theta_hat[n_ + 1];
    std::vector<double> lo(n_ + 2), hi(n_ + 2);
    lo[0] = std::max(0.0, theta_hat[0] - delta * s);
    hi[0] = std::min(1.0, theta_hat[0] + delta * s);
    for (int i = 0; i < n_; ++i) {
        lo[i + 1] = theta_hat[i + 1] - delta * s;
        hi[i + 1] = theta_hat[i + 1] + delta * s;
    }
    lo[n_ + 1] = std::max(1e-12, s - delta);
    hi[n_ + 1] = s + delta;
    return Region(std::move(lo), std::move(hi));
}

ParamPoint NpregModel::truth_point(NpregFunction f, double sigma) const {
    std::vector<double> coords(n_ + 2);
    coords[0] = npreg_true_argmin(f);
    for (int i = 0; i < n_; ++i) coords[i + 1] = npreg_r(f, x_grid_[i]);
    coords[n_ + 1] = sigma;
    return ParamPoint(std::move(coords));
}

}  // namespace loci
