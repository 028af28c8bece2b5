#include "fbnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "fbnet/errors.hpp"

namespace fbnet::stats {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

std::vector<double> midranks(const std::vector<double>& sorted_values,
                             const std::vector<double>& combined_sorted) {
    // combined_sorted drives rank positions; values asked for are looked up
    // by equal-range so ties share the mean rank.
    std::vector<double> ranks;
    ranks.reserve(sorted_values.size());
    for (double v : sorted_values) {
        auto lo = std::lower_bound(combined_sorted.begin(), combined_sorted.end(), v);
        auto hi = std::upper_bound(combined_sorted.begin(), combined_sorted.end(), v);
        const double first = static_cast<double>(lo - combined_sorted.begin()) + 1.0;
        const double last = static_cast<double>(hi - combined_sorted.begin());
        ranks.push_back(0.5 * (first + last));
    }
    return ranks;
}

}  // namespace

double betainc_reg(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) throw DataError("betainc_reg: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * betacf(a, b, x) / a;
    }
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw DataError("student_t_two_sided_p: df must be positive");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return betainc_reg(0.5 * df, 0.5, x);
}

double normal_two_sided_p(double z) {
    return std::erfc(std::abs(z) / std::sqrt(2.0));
}

double mean(std::span<const double> v) {
    if (v.empty()) throw DataError("mean of empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median(std::span<const double> v) {
    if (v.empty()) throw DataError("median of empty sample");
    std::vector<double> tmp(v.begin(), v.end());
    std::sort(tmp.begin(), tmp.end());
    const std::size_t n = tmp.size();
    if (n % 2 == 1) return tmp[n / 2];
    return 0.5 * (tmp[n / 2 - 1] + tmp[n / 2]);
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw DataError("sample_variance needs >= 2 observations");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw DataError("welch_t_test: need >= 2 observations per sample");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double va = sample_variance(a);
    const double vb = sample_variance(b);
    const double se2 = va / na + vb / nb;
    if (se2 <= 0.0) throw DataError("welch_t_test: degenerate variance in both samples");
    const double t = (mean(a) - mean(b)) / std::sqrt(se2);
    const double df = se2 * se2 /
                      ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
    return {t, student_t_two_sided_p(t, df)};
}

TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                             WilcoxonOptions options) {
    if (a.empty() || b.empty()) throw DataError("wilcoxon_rank_sum: both samples must be non-empty");
    const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

    std::vector<double> combined(a.begin(), a.end());
    combined.insert(combined.end(), b.begin(), b.end());
    std::sort(combined.begin(), combined.end());

    std::vector<double> a_sorted(a.begin(), a.end());
    std::sort(a_sorted.begin(), a_sorted.end());
    const std::vector<double> ranks_a = midranks(a_sorted, combined);

    double r1 = 0.0;
    for (double r : ranks_a) r1 += r;
    const double u = r1 - static_cast<double>(n1) * (n1 + 1.0) / 2.0;
    const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;

    if (options.method == WilcoxonMethod::exact) {
        if (n > 30) throw DataError("wilcoxon_rank_sum: exact method limited to n1+n2 <= 30");
        // All midranks are multiples of 1/2; scale by 2 for integer sums.
        const std::vector<double> all_ranks = midranks(combined, combined);
        std::vector<std::int64_t> scaled;
        scaled.reserve(n);
        for (double r : all_ranks) scaled.push_back(static_cast<std::int64_t>(std::llround(2.0 * r)));
        const std::int64_t max_sum = std::accumulate(scaled.begin(), scaled.end(), std::int64_t{0});

        // count[k][s] = number of k-subsets of the rank multiset with scaled
        // rank sum s. Counts fit doubles exactly for n <= 30.
        std::vector<std::vector<double>> count(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
        count[0][0] = 1.0;
        for (std::int64_t r : scaled) {
            for (std::size_t k = n1; k >= 1; --k) {
                for (std::int64_t s = max_sum; s >= r; --s) {
                    if (count[k - 1][s - r] > 0.0) count[k][s] += count[k - 1][s - r];
                }
            }
        }
        const double dev_obs = std::abs(u - mu);
        double favorable = 0.0, total = 0.0;
        for (std::int64_t s = 0; s <= max_sum; ++s) {
            const double c = count[n1][s];
            if (c == 0.0) continue;
            total += c;
            const double u_s = 0.5 * static_cast<double>(s) - static_cast<double>(n1) * (n1 + 1.0) / 2.0;
            if (std::abs(u_s - mu) >= dev_obs - 1e-9) favorable += c;
        }
        return {u, favorable / total};
    }

    // Normal approximation with tie-corrected variance.
    double tie_term = 0.0;
    for (std::size_t i = 0; i < combined.size();) {
        std::size_t j = i;
        while (j < combined.size() && combined[j] == combined[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double nn = static_cast<double>(n);
    const double var = (static_cast<double>(n1) * n2 / 12.0) *
                       ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (var <= 0.0) return {u, 1.0};  // every observation tied
    double z = u - mu;
    if (options.continuity_correction) {
        if (z > 0.0) z -= 0.5;
        else if (z < 0.0) z += 0.5;
    }
    z /= std::sqrt(var);
    return {u, std::min(1.0, normal_two_sided_p(z))};
}

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError("pearson: samples must be the same length");
    if (x.size() < 3) throw DataError("pearson: need >= 3 observations");
    const std::size_t n = x.size();
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw DataError("pearson: constant input");
    double r = sxy / std::sqrt(sxx * syy);
    r = std::clamp(r, -1.0, 1.0);
    if (std::abs(r) >= 1.0) return {r, 0.0};
    const double df = static_cast<double>(n - 2);
    const double t = r * std::sqrt(df / (1.0 - r * r));
    return {r, student_t_two_sided_p(t, df)};
}

}  // namespace fbnet::stats
