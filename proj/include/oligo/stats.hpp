#pragma once

#include <span>
#include <vector>

namespace oligo {

enum class Tails { TwoSided, OneLower, OneUpper };

struct TestResult {
    double statistic = 0.0;
    double degrees_of_freedom = 0.0;
    double p_value = 1.0;
    double ci_lo = 0.0;  // 95% two-sided interval regardless of tails
    double ci_hi = 0.0;
    Tails tails = Tails::TwoSided;
};

double mean_of(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // n-1 denominator
double sample_sd(std::span<const double> xs);

double t_cdf(double t, double df);
double t_quantile(double p, double df);

// Welch two-sample test with Welch-Satterthwaite degrees of freedom. The CI
// is the 95% interval for mean(a) - mean(b). OneUpper tests mean(a) > mean(b).
TestResult welch_t_test(std::span<const double> a, std::span<const double> b,
                        Tails tails = Tails::TwoSided);

// One-sample form against a constant; CI is for mean(a) itself.
TestResult welch_t_test(std::span<const double> a, double reference_mean,
                        Tails tails = Tails::TwoSided);

// Pearson correlation of average ranks.
double spearman(std::span<const double> x, std::span<const double> y);

// r[k + max_lag] = Pearson correlation of x[t+k] with y[t] over the
// overlapping window, for k in [-max_lag, max_lag]. A peak at negative k
// means x leads y.
std::vector<double> cross_correlation(std::span<const double> x, std::span<const double> y,
                                      int max_lag = 5);

struct LagCorrelationSummary {
    int lag = 0;
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Treats each run's per-lag correlations as IID samples: cross-run mean and
// 95% t interval per lag. Every inner vector must have length 2*max_lag + 1.
std::vector<LagCorrelationSummary> cross_correlation_summary(
    const std::vector<std::vector<double>>& per_run, int max_lag);

double cohens_d(std::span<const double> a, std::span<const double> b);  // pooled sd
double cohens_d(std::span<const double> a, double reference);  // (mean - ref) / sd

// Difference of Fisher-transformed correlations, normal reference
// distribution; CI is for z1 - z2 in transformed space.
TestResult fisher_r_to_z_compare(double r1, long n1, double r2, long n2);

struct TukeySummary {
    double lower_staple = 0.0;
    double lower_quartile = 0.0;
    double median = 0.0;
    double upper_quartile = 0.0;
    double upper_staple = 0.0;
};

// Quartiles by linear interpolation (type 7); staples at the most extreme
// data within 1.5 IQR of the quartiles.
TukeySummary tukey_summary(std::span<const double> sample);

}  // namespace oligo
