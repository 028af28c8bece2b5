#pragma once

#include <span>
#include <vector>

namespace fbnet::stats {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
// Absolute accuracy ~1e-14 on the domain used here.
double betainc_reg(double a, double b, double x);

// Two-sided p for a Student-t statistic with df degrees of freedom.
double student_t_two_sided_p(double t, double df);

// Two-sided p for a standard normal z.
double normal_two_sided_p(double z);

struct TestResult {
    double statistic = 0.0;
    double p = 1.0;
};

// Welch's t-test (unequal-variance two-sample t), Welch-Satterthwaite df,
// two-sided p. Requires both samples of size >= 2 and a nonzero pooled
// standard error.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);

enum class WilcoxonMethod {
    normal,  // tie-corrected normal approximation (production default)
    exact,   // full enumeration over rank assignments; n1+n2 <= 30
};

struct WilcoxonOptions {
    WilcoxonMethod method = WilcoxonMethod::normal;
    bool continuity_correction = true;  // normal method only
};

// Mann-Whitney U (two-sample Wilcoxon rank-sum) with midrank tie handling.
// The reported statistic is U of the first sample. Both samples must be
// non-empty.
TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                             WilcoxonOptions options = {});

struct Correlation {
    double r = 0.0;
    double p = 1.0;
};

// Pearson sample correlation with the usual t-based two-sided p
// (t = r*sqrt((n-2)/(1-r^2)), n-2 dof). Requires n >= 3 and nonconstant
// inputs.
Correlation pearson(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
double median(std::span<const double> v);       // even length: mean of central pair
double sample_variance(std::span<const double> v);

}  // namespace fbnet::stats
