#include "hpt/linreg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "hpt/kernels.hpp"

namespace hpt {

namespace {

constexpr double kRankTolerance = 1e-10;

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& X) {
    const int n = static_cast<int>(X.size());
    const int k = n > 0 ? static_cast<int>(X[0].size()) : 0;
    Eigen::MatrixXd M(n, k);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(X[static_cast<size_t>(i)].size()) != k)
            throw DataError("ragged design matrix at row " + std::to_string(i));
        for (int j = 0; j < k; ++j) M(i, j) = X[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    return M;
}

bool has_intercept_column(const Eigen::MatrixXd& X) {
    for (int j = 0; j < X.cols(); ++j) {
        if ((X.col(j).array() - 1.0).abs().maxCoeff() == 0.0) return true;
    }
    return false;
}

double durbin_watson_unchecked(const std::vector<double>& e) {
    double num = 0.0, den = 0.0;
    for (size_t t = 0; t < e.size(); ++t) {
        den += e[t] * e[t];
        if (t > 0) {
            const double d = e[t] - e[t - 1];
            num += d * d;
        }
    }
    // Zero residual vector has no serial correlation information; report the null value.
    return den > 0.0 ? num / den : 2.0;
}

}  // namespace

double tstat_infinity() { return std::numeric_limits<double>::infinity(); }

RegressionFit ols_fit(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
    const Eigen::MatrixXd M = to_matrix(X);
    const int n = static_cast<int>(M.rows());
    const int k = static_cast<int>(M.cols());
    if (static_cast<int>(y.size()) != n)
        throw DataError("ols_fit: y length " + std::to_string(y.size()) +
                        " != design rows " + std::to_string(n));
    if (n <= k)
        throw NumericError("ols_fit: n=" + std::to_string(n) + " <= k=" + std::to_string(k));

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(k - 1) / sv(0) < kRankTolerance) {
        // Name the columns loading most heavily on the null-space directions.
        std::string cols;
        for (int j = k - 1; j >= 0 && (sv(0) <= 0.0 || sv(j) / sv(0) < kRankTolerance); --j) {
            int worst = 0;
            svd.matrixV().col(j).cwiseAbs().maxCoeff(&worst);
            if (!cols.empty()) cols += ",";
            cols += std::to_string(worst);
        }
        throw NumericError("ols_fit: rank-deficient design, dependent column(s) near index " + cols);
    }

    Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
    const Eigen::VectorXd beta = svd.solve(yv);
    const Eigen::VectorXd resid = yv - M * beta;

    RegressionFit fit;
    fit.n_obs = n;
    fit.n_params = k;
    fit.coefficients.assign(beta.data(), beta.data() + k);
    fit.residuals.assign(resid.data(), resid.data() + n);

    const double ssr = resid.squaredNorm();
    double sst;
    if (has_intercept_column(M)) {
        const double mean = yv.mean();
        sst = (yv.array() - mean).matrix().squaredNorm();
    } else {
        sst = yv.squaredNorm();
    }
    fit.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 0.0;
    if (fit.r_squared < 0.0) fit.r_squared = 0.0;
    if (fit.r_squared > 1.0) fit.r_squared = 1.0;

    const double sigma2 = ssr / static_cast<double>(n - k);
    // (X'X)^-1 = V S^-2 V' from the same decomposition.
    const Eigen::VectorXd inv_s2 = sv.array().square().inverse();
    fit.std_errors.resize(static_cast<size_t>(k));
    fit.t_stats.resize(static_cast<size_t>(k));
    for (int j = 0; j < k; ++j) {
        double var_j = 0.0;
        for (int d = 0; d < k; ++d)
            var_j += svd.matrixV()(j, d) * svd.matrixV()(j, d) * inv_s2(d);
        const double se = std::sqrt(sigma2 * var_j);
        fit.std_errors[static_cast<size_t>(j)] = se;
        if (se > 0.0)
            fit.t_stats[static_cast<size_t>(j)] = beta(j) / se;
        else
            fit.t_stats[static_cast<size_t>(j)] =
                beta(j) == 0.0 ? 0.0 : std::copysign(tstat_infinity(), beta(j));
    }
    fit.durbin_watson = durbin_watson_unchecked(fit.residuals);
    return fit;
}

double durbin_watson(const std::vector<double>& residuals) {
    if (residuals.size() < 2)
        throw NumericError("durbin_watson: need at least 2 residuals");
    double den = 0.0;
    for (double e : residuals) den += e * e;
    if (den == 0.0) throw NumericError("durbin_watson: all residuals zero");
    return durbin_watson_unchecked(residuals);
}

CochraneOrcuttResult cochrane_orcutt(const std::vector<std::vector<double>>& X,
                                     const std::vector<double>& y) {
    const size_t n = y.size();
    const size_t k = X.empty() ? 0 : X[0].size();
    if (n <= k + 1)
        throw NumericError("cochrane_orcutt: need n > k+1");

    constexpr int kMaxIter = 50;
    constexpr double kTol = 1e-6;

    // Original-scale residuals for the current coefficient estimate; rho is
    // always re-estimated on the untransformed time axis.
    auto original_residuals = [&](const std::vector<double>& beta) {
        std::vector<double> e(n);
        for (size_t t = 0; t < n; ++t) {
            double pred = 0.0;
            for (size_t j = 0; j < k; ++j) pred += X[t][j] * beta[j];
            e[t] = y[t] - pred;
        }
        return e;
    };

    double rho = 0.0;
    CochraneOrcuttResult result;
    std::vector<double> e = ols_fit(X, y).residuals;
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        double num = 0.0, den = 0.0;
        for (size_t t = 1; t < e.size(); ++t) {
            num += e[t] * e[t - 1];
            den += e[t - 1] * e[t - 1];
        }
        if (den == 0.0) throw NumericError("cochrane_orcutt: degenerate residuals");
        const double rho_new = num / den;
        if (std::fabs(rho_new) >= 1.0)
            throw NumericError("cochrane_orcutt: |rho| >= 1 (rho=" + std::to_string(rho_new) +
                               "), nonstationary residuals");

        result.fit = quasi_difference_fit(X, y, rho_new);
        result.iterations = iter;
        const double delta = std::fabs(rho_new - rho);
        rho = rho_new;
        result.rho = rho;
        if (delta < kTol) return result;
        e = original_residuals(result.fit.coefficients);
    }
    throw NumericError("cochrane_orcutt: no convergence in 50 iterations, last rho=" +
                       std::to_string(rho));
}

RegressionFit quasi_difference_fit(const std::vector<std::vector<double>>& X,
                                   const std::vector<double>& y, double rho) {
    const size_t n = y.size();
    const size_t k = X.empty() ? 0 : X[0].size();
    if (n < 2) throw DataError("quasi_difference_fit: need n >= 2");
    std::vector<std::vector<double>> Xq(n - 1, std::vector<double>(k));
    std::vector<double> yq(n - 1);
    for (size_t t = 1; t < n; ++t) {
        yq[t - 1] = y[t] - rho * y[t - 1];
        for (size_t j = 0; j < k; ++j) Xq[t - 1][j] = X[t][j] - rho * X[t - 1][j];
    }
    return ols_fit(Xq, yq);
}

TrendFit time_trend_fit(const std::vector<double>& values) {
    const int n = static_cast<int>(values.size());
    if (n < 3) throw DataError("time_trend_fit: need at least 3 values");

    TrendFit tf;
    const double first = values[0];
    bool constant = true;
    for (double v : values)
        if (v != first) { constant = false; break; }
    if (constant) {
        tf.intercept = first;
        tf.residuals.assign(static_cast<size_t>(n), 0.0);
        return tf;
    }

    std::vector<std::vector<double>> X(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) X[static_cast<size_t>(t)] = {1.0, static_cast<double>(t)};
    RegressionFit fit = ols_fit(X, values);
    tf.intercept = fit.coefficients[0];
    tf.slope = fit.coefficients[1];
    tf.slope_t_stat = fit.t_stats[1];
    tf.residuals = fit.residuals;
    return tf;
}

CorrResult corr_with_tstat(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    if (y.size() != n) throw DataError("corr_with_tstat: length mismatch");
    if (n < 3) throw DataError("corr_with_tstat: need n >= 3");

    const kernels::PairMoments m = kernels::pair_moments(x, y);
    const double dn = static_cast<double>(n);
    const double var_x = m.sum_xx - m.sum_x * m.sum_x / dn;
    const double var_y = m.sum_yy - m.sum_y * m.sum_y / dn;
    if (var_x <= 0.0 || var_y <= 0.0)
        throw NumericError("corr_with_tstat: zero variance");
    const double cov = m.sum_xy - m.sum_x * m.sum_y / dn;

    CorrResult c;
    c.r = cov / std::sqrt(var_x * var_y);
    if (c.r > 1.0) c.r = 1.0;
    if (c.r < -1.0) c.r = -1.0;
    const double denom = 1.0 - c.r * c.r;
    c.t = denom > 0.0 ? c.r * std::sqrt(dn - 2.0) / std::sqrt(denom)
                      : std::copysign(tstat_infinity(), c.r);
    return c;
}

double mean_corr_tstat(double mean, double sigma, long long n) {
    if (!(sigma > 0.0)) throw NumericError("mean_corr_tstat: sigma must be > 0");
    if (n < 2) throw DataError("mean_corr_tstat: need n >= 2");
    return mean / (sigma / std::sqrt(static_cast<double>(n)));
}

}  // namespace hpt
