#pragma once

#include <cstddef>
#include <vector>

namespace retailsim {

struct Descriptives {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0; // sample standard deviation; NaN when n < 2
};

Descriptives describe(const std::vector<double>& xs);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 0.0;       // two-sided
    bool degenerate = false; // both groups had zero variance
};

// Unequal-variance t test with Welch-Satterthwaite degrees of freedom.
TTestResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Classic pooled-variance two-sample t test.
TTestResult student_t(const std::vector<double>& a, const std::vector<double>& b);

struct LeveneResult {
    double W = 0.0;
    double p = 0.0;
};

// Levene's test for equal variances, centered on group means.
LeveneResult levene_test(const std::vector<double>& a, const std::vector<double>& b);

// Effect size for a t statistic: t^2 / (t^2 + df).
double eta_squared(double t, double df);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// CDF of Student's t distribution with df degrees of freedom.
double t_cdf(double t, double df);

// CDF of the F distribution with (d1, d2) degrees of freedom.
double f_cdf(double x, double d1, double d2);

} // namespace retailsim
