#include "vecgp/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace vecgp {

SummaryStats summary_stats(std::span<const double> xs) {
    assert(!xs.empty());
    SummaryStats out;
    out.count = static_cast<int>(xs.size());
    double sum = 0.0;
    out.min = xs[0];
    out.max = xs[0];
    for (double x : xs) {
        sum += x;
        out.min = std::min(out.min, x);
        out.max = std::max(out.max, x);
    }
    out.mean = sum / static_cast<double>(xs.size());
    if (xs.size() < 2) {
        out.degenerate = true;
        return out;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    assert(!sorted.empty());
    assert(q >= 0.0 && q <= 1.0);
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> xs) {
    assert(!xs.empty());
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());

    BoxStats out;
    out.median = quantile_sorted(sorted, 0.5);
    out.q1 = quantile_sorted(sorted, 0.25);
    out.q3 = quantile_sorted(sorted, 0.75);
    const double iqr = out.q3 - out.q1;
    out.notch_halfwidth = 1.57 * iqr / std::sqrt(static_cast<double>(sorted.size()));
    const double low_limit = out.q1 - 1.5 * iqr;
    const double high_limit = out.q3 + 1.5 * iqr;
    out.whisker_low = out.q1;
    out.whisker_high = out.q3;
    for (double x : sorted) {
        if (x >= low_limit) {
            out.whisker_low = x;
            break;
        }
    }
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (*it <= high_limit) {
            out.whisker_high = *it;
            break;
        }
    }
    for (double x : sorted) {
        if (x < low_limit || x > high_limit) out.outliers.push_back(x);
    }
    return out;
}

namespace {

// Continued fraction for the incomplete beta, modified Lentz iteration.
double incomplete_beta_cf(double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    assert(a > 0.0 && b > 0.0);
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * incomplete_beta_cf(a, b, x) / a;
    }
    return 1.0 - front * incomplete_beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
    assert(df > 0.0);
    if (std::isinf(t)) return 0.0;
    return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult t_test(std::span<const double> a, std::span<const double> b) {
    assert(a.size() >= 2 && b.size() >= 2);
    const SummaryStats sa = summary_stats(a);
    const SummaryStats sb = summary_stats(b);
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());
    const double df = na + nb - 2.0;
    const double pooled =
        ((na - 1.0) * sa.stddev * sa.stddev + (nb - 1.0) * sb.stddev * sb.stddev) / df;

    TTestResult out;
    if (pooled == 0.0) {
        if (sa.mean == sb.mean) {
            out.t = 0.0;
            out.p = 1.0;
        } else {
            out.t = sa.mean > sb.mean ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
            out.p = 0.0;
        }
    } else {
        out.t = (sa.mean - sb.mean) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
        out.p = student_t_two_tailed_p(out.t, df);
    }
    out.significant = out.p < 0.05;
    return out;
}

} // namespace vecgp
