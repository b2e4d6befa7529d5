#pragma once

#include <vector>

#include "hpt/series.hpp"

namespace hpt {

// Explicit sentinel for a t-statistic with zero residual variance.
double tstat_infinity();

struct RegressionFit {
    std::vector<double> coefficients;  // intercept first when present
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    double r_squared = 0.0;
    std::vector<double> residuals;  // time order
    int n_obs = 0;
    int n_params = 0;
    double durbin_watson = 2.0;
};

struct TrendFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_t_stat = 0.0;
    std::vector<double> residuals;
};

// OLS with classical (homoskedastic) inference, n-k degrees of freedom.
// X is row-major n x k including any intercept column. Solved by SVD; a
// singular-value ratio below 1e-10 raises NumericError naming the dependent
// columns.
RegressionFit ols_fit(const std::vector<std::vector<double>>& X, const std::vector<double>& y);

// Sum of squared first differences over sum of squares. All-zero residuals
// raise NumericError.
double durbin_watson(const std::vector<double>& residuals);

struct CochraneOrcuttResult {
    double rho = 0.0;
    RegressionFit fit;  // on quasi-differenced data (first observation dropped)
    int iterations = 0;
};

// Iterates rho estimation and quasi-differencing until |delta rho| < 1e-6,
// at most 50 iterations. |rho| >= 1 or non-convergence raise NumericError.
CochraneOrcuttResult cochrane_orcutt(const std::vector<std::vector<double>>& X,
                                     const std::vector<double>& y);

// One quasi-differencing pass at a fixed rho (first observation dropped),
// then OLS. rho = 0 is plain OLS on observations 2..n.
RegressionFit quasi_difference_fit(const std::vector<std::vector<double>>& X,
                                   const std::vector<double>& y, double rho);

// OLS on (1, t), t = 0..n-1. Constant regressand yields slope 0, t 0.
TrendFit time_trend_fit(const std::vector<double>& values);

struct CorrResult {
    double r = 0.0;
    double t = 0.0;
};

// Pearson r and t = r*sqrt(n-2)/sqrt(1-r^2). Zero variance raises NumericError.
CorrResult corr_with_tstat(const std::vector<double>& x, const std::vector<double>& y);

// mean / (sigma / sqrt(n)): significance of a mean correlation under
// cross-coefficient independence.
double mean_corr_tstat(double mean, double sigma, long long n);

}  // namespace hpt
