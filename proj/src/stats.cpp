#include "retailsim/stats.hpp"

#include "retailsim/errors.hpp"

#include <cmath>
#include <limits>

namespace retailsim {
namespace {

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

// Sample variance (Bessel corrected).
double var_of(const std::vector<double>& xs, double mean) {
    double s = 0.0;
    for (double x : xs)
        s += (x - mean) * (x - mean);
    return s / static_cast<double>(xs.size() - 1);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny)
        d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny)
            d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny)
            c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps)
            break;
    }
    return h;
}

TTestResult finish_t(double t, double df) {
    TTestResult r;
    r.t = t;
    r.df = df;
    // Two-sided p value via the t CDF tail.
    r.p = incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return r;
}

} // namespace

Descriptives describe(const std::vector<double>& xs) {
    if (xs.empty())
        throw DegenerateInputError("describe: need at least one value");
    Descriptives d;
    d.n = xs.size();
    d.mean = mean_of(xs);
    d.sd = xs.size() < 2 ? std::numeric_limits<double>::quiet_NaN()
                         : std::sqrt(var_of(xs, d.mean));
    return d;
}

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw DegenerateInputError("incomplete_beta: a and b must be positive");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // Use the representation that converges fastest.
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double t_cdf(double t, double df) {
    if (!(df > 0.0))
        throw DegenerateInputError("t_cdf: df must be positive");
    if (t == 0.0)
        return 0.5;
    const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
    return t > 0.0 ? 1.0 - tail : tail;
}

double f_cdf(double x, double d1, double d2) {
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw DegenerateInputError("f_cdf: degrees of freedom must be positive");
    if (x <= 0.0)
        return 0.0;
    return incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2));
}

TTestResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw DegenerateInputError("welch_t: each group needs at least two values");
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = var_of(a, ma), vb = var_of(b, mb);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double sa = va / na, sb = vb / nb;

    if (sa + sb == 0.0) {
        TTestResult r;
        r.degenerate = true;
        r.df = na + nb - 2.0;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }

    const double t = (ma - mb) / std::sqrt(sa + sb);
    const double df = (sa + sb) * (sa + sb) /
                      (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    return finish_t(t, df);
}

TTestResult student_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw DegenerateInputError("student_t: each group needs at least two values");
    const double ma = mean_of(a), mb = mean_of(b);
    const double va = var_of(a, ma), vb = var_of(b, mb);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double df = na + nb - 2.0;
    const double pooled = ((na - 1.0) * va + (nb - 1.0) * vb) / df;

    if (pooled == 0.0) {
        TTestResult r;
        r.degenerate = true;
        r.df = df;
        if (ma == mb) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }

    const double t = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    return finish_t(t, df);
}

LeveneResult levene_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw DegenerateInputError("levene_test: each group needs at least two values");

    const double ma = mean_of(a), mb = mean_of(b);
    std::vector<double> za, zb;
    za.reserve(a.size());
    zb.reserve(b.size());
    for (double x : a)
        za.push_back(std::abs(x - ma));
    for (double x : b)
        zb.push_back(std::abs(x - mb));

    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double N = na + nb;
    const double mza = mean_of(za), mzb = mean_of(zb);
    const double mz = (na * mza + nb * mzb) / N;

    const double between = na * (mza - mz) * (mza - mz) + nb * (mzb - mz) * (mzb - mz);
    double within = 0.0;
    for (double z : za)
        within += (z - mza) * (z - mza);
    for (double z : zb)
        within += (z - mzb) * (z - mzb);

    LeveneResult r;
    if (within == 0.0) {
        // Identical spread in both groups: no evidence against equal variances.
        r.W = between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        r.p = between == 0.0 ? 1.0 : 0.0;
        return r;
    }
    const double k = 2.0;
    r.W = (N - k) / (k - 1.0) * between / within;
    r.p = 1.0 - f_cdf(r.W, k - 1.0, N - k);
    return r;
}

double eta_squared(double t, double df) {
    if (!(df > 0.0))
        throw DegenerateInputError("eta_squared: df must be positive");
    if (std::isinf(t))
        return 1.0;
    return t * t / (t * t + df);
}

} // namespace retailsim
