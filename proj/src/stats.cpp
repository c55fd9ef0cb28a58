#include "oligo/stats.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oligo {

namespace {

double t_sf(double t, double df) {
    return boost::math::cdf(boost::math::complement(
        boost::math::students_t_distribution<double>(df), t));
}

double p_from_tails(double t, double df, Tails tails) {
    switch (tails) {
        case Tails::TwoSided: return 2.0 * t_sf(std::abs(t), df);
        case Tails::OneUpper: return t_sf(t, df);
        case Tails::OneLower: return t_sf(-t, df);
    }
    throw std::logic_error("unreachable tails");
}

std::vector<double> average_ranks(std::span<const double> xs) {
    const size_t n = xs.size();
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return xs[a] < xs[b]; });

    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && xs[idx[j + 1]] == xs[idx[i]]) ++j;
        double rank = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based average rank
        for (size_t k = i; k <= j; ++k) ranks[idx[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double mx = mean_of(x), my = mean_of(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::domain_error("correlation undefined: an input has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

double quantile_type7(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const size_t lo = static_cast<size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double mean_of(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance needs at least 2 values");
    double m = mean_of(xs);
    double ss = 0.0;
    for (double v : xs) ss += (v - m) * (v - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double sample_sd(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

double t_cdf(double t, double df) {
    return boost::math::cdf(boost::math::students_t_distribution<double>(df), t);
}

double t_quantile(double p, double df) {
    return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b, Tails tails) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("welch_t_test: each sample needs at least 2 values");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = sample_variance(a), vb = sample_variance(b);
    const double sea = va / na, seb = vb / nb;
    const double se2 = sea + seb;
    if (se2 == 0.0) throw std::invalid_argument("welch_t_test: degenerate samples (zero variance)");

    TestResult res;
    res.tails = tails;
    const double diff = mean_of(a) - mean_of(b);
    const double se = std::sqrt(se2);
    res.statistic = diff / se;
    res.degrees_of_freedom =
        se2 * se2 / (sea * sea / (na - 1.0) + seb * seb / (nb - 1.0));
    res.p_value = p_from_tails(res.statistic, res.degrees_of_freedom, tails);
    const double tq = t_quantile(0.975, res.degrees_of_freedom);
    res.ci_lo = diff - tq * se;
    res.ci_hi = diff + tq * se;
    return res;
}

TestResult welch_t_test(std::span<const double> a, double reference_mean, Tails tails) {
    if (a.size() < 2)
        throw std::invalid_argument("welch_t_test: sample needs at least 2 values");
    const double sd = sample_sd(a);
    if (sd == 0.0) throw std::invalid_argument("welch_t_test: degenerate sample (zero variance)");

    TestResult res;
    res.tails = tails;
    const double m = mean_of(a);
    const double se = sd / std::sqrt(static_cast<double>(a.size()));
    res.statistic = (m - reference_mean) / se;
    res.degrees_of_freedom = static_cast<double>(a.size() - 1);
    res.p_value = p_from_tails(res.statistic, res.degrees_of_freedom, tails);
    const double tq = t_quantile(0.975, res.degrees_of_freedom);
    res.ci_lo = m - tq * se;
    res.ci_hi = m + tq * se;
    return res;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("spearman: needs at least 3 pairs");
    std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
    return pearson(rx, ry);
}

std::vector<double> cross_correlation(std::span<const double> x, std::span<const double> y,
                                      int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("cross_correlation: max_lag must be >= 0");
    if (x.size() != y.size()) throw std::invalid_argument("cross_correlation: length mismatch");
    const long n = static_cast<long>(x.size());
    if (n <= 2 * max_lag)
        throw std::invalid_argument("cross_correlation: series length must exceed 2*max_lag");

    std::vector<double> out;
    out.reserve(static_cast<size_t>(2 * max_lag + 1));
    for (int k = -max_lag; k <= max_lag; ++k) {
        const long t_lo = std::max<long>(0, -k);
        const long t_hi = n - 1 - std::max<long>(0, k);
        std::vector<double> xs, ys;
        xs.reserve(static_cast<size_t>(t_hi - t_lo + 1));
        ys.reserve(static_cast<size_t>(t_hi - t_lo + 1));
        for (long t = t_lo; t <= t_hi; ++t) {
            xs.push_back(x[static_cast<size_t>(t + k)]);
            ys.push_back(y[static_cast<size_t>(t)]);
        }
        out.push_back(pearson(xs, ys));
    }
    return out;
}

std::vector<LagCorrelationSummary> cross_correlation_summary(
    const std::vector<std::vector<double>>& per_run, int max_lag) {
    const size_t width = static_cast<size_t>(2 * max_lag + 1);
    if (per_run.empty())
        throw std::invalid_argument("cross_correlation_summary: no runs");
    for (const auto& r : per_run)
        if (r.size() != width)
            throw std::invalid_argument("cross_correlation_summary: lag vector length mismatch");

    std::vector<LagCorrelationSummary> out(width);
    std::vector<double> vals(per_run.size());
    for (size_t li = 0; li < width; ++li) {
        for (size_t r = 0; r < per_run.size(); ++r) vals[r] = per_run[r][li];
        LagCorrelationSummary& s = out[li];
        s.lag = static_cast<int>(li) - max_lag;
        s.mean = mean_of(vals);
        if (vals.size() >= 2) {
            double sd = sample_sd(vals);
            double se = sd / std::sqrt(static_cast<double>(vals.size()));
            double tq = t_quantile(0.975, static_cast<double>(vals.size() - 1));
            s.ci_lo = s.mean - tq * se;
            s.ci_hi = s.mean + tq * se;
        } else {
            s.ci_lo = s.ci_hi = s.mean;
        }
    }
    return out;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("cohens_d: each sample needs at least 2 values");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double pooled = std::sqrt(((na - 1.0) * sample_variance(a) +
                                     (nb - 1.0) * sample_variance(b)) /
                                    (na + nb - 2.0));
    if (pooled == 0.0) throw std::invalid_argument("cohens_d: zero pooled sd");
    return (mean_of(a) - mean_of(b)) / pooled;
}

double cohens_d(std::span<const double> a, double reference) {
    const double sd = sample_sd(a);
    if (sd == 0.0) throw std::invalid_argument("cohens_d: zero sd");
    return (mean_of(a) - reference) / sd;
}

TestResult fisher_r_to_z_compare(double r1, long n1, double r2, long n2) {
    if (n1 <= 3 || n2 <= 3)
        throw std::invalid_argument("fisher_r_to_z_compare: sample sizes must exceed 3");
    if (std::abs(r1) >= 1.0 || std::abs(r2) >= 1.0)
        throw std::invalid_argument("fisher_r_to_z_compare: correlations must be inside (-1, 1)");

    const double z1 = std::atanh(r1), z2 = std::atanh(r2);
    const double se = std::sqrt(1.0 / static_cast<double>(n1 - 3) +
                                1.0 / static_cast<double>(n2 - 3));
    boost::math::normal_distribution<double> norm;

    TestResult res;
    res.tails = Tails::TwoSided;
    res.statistic = (z1 - z2) / se;
    res.degrees_of_freedom = std::numeric_limits<double>::infinity();
    res.p_value = 2.0 * boost::math::cdf(boost::math::complement(norm, std::abs(res.statistic)));
    const double zq = boost::math::quantile(norm, 0.975);
    res.ci_lo = (z1 - z2) - zq * se;
    res.ci_hi = (z1 - z2) + zq * se;
    return res;
}

TukeySummary tukey_summary(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("tukey_summary: empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());

    TukeySummary s;
    s.lower_quartile = quantile_type7(sorted, 0.25);
    s.median = quantile_type7(sorted, 0.5);
    s.upper_quartile = quantile_type7(sorted, 0.75);
    const double iqr = s.upper_quartile - s.lower_quartile;
    const double lo_fence = s.lower_quartile - 1.5 * iqr;
    const double hi_fence = s.upper_quartile + 1.5 * iqr;
    s.lower_staple = *std::find_if(sorted.begin(), sorted.end(),
                                   [&](double v) { return v >= lo_fence; });
    s.upper_staple = *std::find_if(sorted.rbegin(), sorted.rend(),
                                   [&](double v) { return v <= hi_fence; });
    return s;
}

}  // namespace oligo
