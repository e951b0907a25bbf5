#pragma once

#include <span>
#include <vector>

namespace vecgp {

struct SummaryStats {
    int count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // n-1 divisor; 0 with degenerate set for count < 2
    double min = 0.0;
    double max = 0.0;
    bool degenerate = false;
};

// Box-plot numbers: quartiles by linear interpolation, notch half-width
// 1.57 * IQR / sqrt(n), whiskers at the most extreme data within 1.5 * IQR of
// the box, everything beyond flagged as an outlier.
struct BoxStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double notch_halfwidth = 0.0;
    double whisker_low = 0.0;
    double whisker_high = 0.0;
    std::vector<double> outliers;  // ascending
};

struct TTestResult {
    double t = 0.0;
    double p = 1.0;
    bool significant = false;  // two-tailed at 95%
};

SummaryStats summary_stats(std::span<const double> xs);

BoxStats box_stats(std::span<const double> xs);

// Linear-interpolation quantile of an ascending-sorted sequence, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

// Pooled-variance two-sample Student's t-test, df = |a| + |b| - 2.
// Zero pooled variance degenerates to t=0, p=1 on equal means and p=0
// otherwise. Requires at least two values per sample.
TTestResult t_test(std::span<const double> a, std::span<const double> b);

// Regularized incomplete beta I_x(a, b), evaluated with the Lentz continued
// fraction.
double regularized_incomplete_beta(double a, double b, double x);

// Two-tailed p-value of a Student's t statistic with df degrees of freedom:
// I_{df/(df+t^2)}(df/2, 1/2).
double student_t_two_tailed_p(double t, double df);

} // namespace vecgp
