#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fbnet/errors.hpp"
#include "fbnet/rng.hpp"
#include "fbnet/stats.hpp"

using namespace fbnet;
using namespace fbnet::stats;

// Expected values in this file were computed ahead of time with 50-digit
// arbitrary-precision arithmetic (statistic, Welch-Satterthwaite df and the
// regularized-incomplete-beta tail evaluated exactly) and frozen here.

namespace {

struct WelchCase {
    std::vector<double> a, b;
    double t, p;
};

const WelchCase kWelchVectors[] = {
    {{1, 2, 3, 4}, {2, 3, 4, 5}, -1.09544511501033223, 0.315333596201229733},
    {{1.5, 2.5, 3.5, 4.5, 10.0}, {2, 2, 3, 3}, 1.25464254151401394, 0.273489119286141566},
    {{0.1, 0.2, 0.3}, {5, 6, 7, 8, 9}, -9.58475610899276728, 0.000620873830985925436},
    {{10, 11, 12, 13, 14, 15}, {10.5, 11.5, 12.2}, 1.20983869892616503, 0.265621129744660771},
    {{-3, -1, 0, 2, 4}, {-2, 0, 1, 3}, -0.0627044493520612638, 0.95175482272988119},
    {{100, 101, 99, 98, 102, 103, 97}, {95, 96, 94, 93}, 5.2842290755678754, 0.000524247999018175865},
    {{0.001, 0.002, 0.0015, 0.0025}, {0.003, 0.0031, 0.0029}, -3.81246425831511617, 0.0284719940128202376},
    {{7, 7, 8, 9}, {7, 8, 8, 9, 10}, -0.929362038700663463, 0.383824559661181773},
    {{2.2, 3.3, 4.4, 5.5, 6.6, 7.7}, {1.1, 2.1, 3.1}, 2.79577525245312778, 0.0268499957695738166},
    {{42, 43, 41, 40, 44}, {50, 51, 52, 49, 48, 47}, -7.20576692122892101, 0.0000508258229552256497},
};

struct PearsonCase {
    std::vector<double> x, y;
    double r, p;
};

const PearsonCase kPearsonVectors[] = {
    {{1, 2, 3, 4}, {1, 3, 2, 4}, 0.8, 0.2},
    {{1, 2, 3, 4, 5}, {2, 4, 5, 4, 5}, 0.774596669241483377, 0.124027062657554625},
    {{0, 1, 2, 3, 4, 5, 6}, {6, 4, 5, 1, 2, 0, 3}, -0.714285714285714286, 0.071343561467537731},
    {{1.5, 2.5, 0.5, 4.5}, {3, 1, 2, 5}, 0.657142857142857143, 0.342857142857142857},
    {{10, 20, 30, 40, 50}, {12, 19, 33, 38, 52}, 0.990594535135161937, 0.00109342901856553135},
    {{1, 2, 3, 4, 5, 6, 7, 8}, {8, 7, 6, 5, 4, 3, 2, 2}, -0.991836598134175519, 1.35173245777828566e-6},
    {{0.1, 0.5, 0.9, 1.3}, {2.0, 1.1, 3.9, 2.8}, 0.564019190328506016, 0.435980809671493984},
    {{3, 6, 9, 12, 15, 18}, {1, 5, 2, 8, 6, 9}, 0.821434171653855497, 0.0449817794476814451},
    {{-5, -3, -1, 1, 3, 5}, {2, 2, 3, 5, 4, 6}, 0.916515138991168001, 0.0101636498895385586},
    {{2, 4, 4, 6, 8}, {1, 3, 2, 5, 6}, 0.972796349206971196, 0.00536407095975540033},
};

// Independent oracle: exact two-sided rank-sum p by enumerating every size-n1
// subset of the combined midranks.
double exact_wilcoxon_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> combined(a);
    combined.insert(combined.end(), b.begin(), b.end());
    std::vector<double> sorted(combined);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> ranks(combined.size());
    for (std::size_t i = 0; i < combined.size(); ++i) {
        auto lo = std::lower_bound(sorted.begin(), sorted.end(), combined[i]) - sorted.begin();
        auto hi = std::upper_bound(sorted.begin(), sorted.end(), combined[i]) - sorted.begin();
        ranks[i] = 0.5 * static_cast<double>(lo + 1 + hi);
    }
    const std::size_t n = combined.size(), n1 = a.size();
    const double mu = static_cast<double>(n1) * static_cast<double>(b.size()) / 2.0;
    double r_obs = 0.0;
    for (std::size_t i = 0; i < n1; ++i) r_obs += ranks[i];
    const double dev_obs = std::abs(r_obs - n1 * (n1 + 1.0) / 2.0 - mu);

    std::size_t favorable = 0, total = 0;
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + n1, true);
    std::sort(pick.begin(), pick.end());  // lexicographically smallest mask
    do {
        double rsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) rsum += ranks[i];
        }
        const double dev = std::abs(rsum - n1 * (n1 + 1.0) / 2.0 - mu);
        ++total;
        if (dev >= dev_obs - 1e-9) ++favorable;
    } while (std::next_permutation(pick.begin(), pick.end()));
    return static_cast<double>(favorable) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("betainc_reg matches high-precision reference") {
    struct Row { double a, b, x, v; };
    const Row rows[] = {
        {0.5, 0.5, 0.3, 0.369010119565545375},
        {2, 3, 0.5, 0.6875},
        {5, 1.5, 0.9, 0.776172134316215668},
        {10, 10, 0.4, 0.186092021415411766},
        {0.5, 8, 0.05, 0.627578271933152421},
        {30, 0.5, 0.99, 0.439334368905251012},
    };
    for (const auto& r : rows) {
        CHECK(std::abs(betainc_reg(r.a, r.b, r.x) - r.v) < 1e-13);
    }
    CHECK(betainc_reg(2.0, 2.0, 0.0) == 0.0);
    CHECK(betainc_reg(2.0, 2.0, 1.0) == 1.0);
}

TEST_CASE("student t two-sided p reference values") {
    struct Row { double t, df, p; };
    const Row rows[] = {
        {0.0, 5, 1.0},
        {1.0, 1, 0.5},
        {2.5, 10, 0.0314468442366088042},
        {-3.2, 7, 0.0150658113424893043},
        {0.3, 29, 0.766317093328967754},
        {6.0, 3, 0.0092727148922846674},
    };
    for (const auto& r : rows) {
        CHECK(std::abs(student_t_two_sided_p(r.t, r.df) - r.p) < 1e-12);
    }
}

TEST_CASE("welch matches the frozen oracle suite to 1e-6") {
    for (const auto& c : kWelchVectors) {
        const TestResult res = welch_t_test(c.a, c.b);
        CHECK(std::abs(res.statistic - c.t) < 1e-9);
        CHECK(std::abs(res.p - c.p) < 1e-6);
    }
}

TEST_CASE("welch symmetry and errors") {
    const std::vector<double> a = {1, 2, 3, 4};
    const TestResult res = welch_t_test(a, a);
    CHECK(res.statistic == 0.0);
    CHECK(res.p == doctest::Approx(1.0));

    const std::vector<double> zeros = {0, 0, 0};
    CHECK_THROWS_AS(welch_t_test(zeros, zeros), DataError);
    CHECK_THROWS_AS(welch_t_test(std::vector<double>{1.0}, a), DataError);
}

TEST_CASE("pearson matches the frozen oracle suite to 1e-6") {
    for (const auto& c : kPearsonVectors) {
        const Correlation res = pearson(c.x, c.y);
        CHECK(std::abs(res.r - c.r) < 1e-12);
        CHECK(std::abs(res.p - c.p) < 1e-6);
    }
}

TEST_CASE("pearson exact linearity and errors") {
    const std::vector<double> x = {1, 2, 5, 9};
    std::vector<double> y;
    for (double v : x) y.push_back(2 * v + 1);
    const Correlation res = pearson(x, y);
    CHECK(res.r == 1.0);
    CHECK(res.p == 0.0);

    const std::vector<double> c7 = {7, 7, 7, 7};
    CHECK_THROWS_AS(pearson(x, c7), DataError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1, 2}, std::vector<double>{3, 4}), DataError);
}

TEST_CASE("wilcoxon basics") {
    const std::vector<double> a = {1, 2}, b = {1, 2};
    const TestResult same = wilcoxon_rank_sum(a, b);
    CHECK(same.statistic == doctest::Approx(2.0));  // n1*n2/2
    CHECK(same.p == doctest::Approx(1.0));

    const TestResult sep = wilcoxon_rank_sum(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6});
    CHECK(sep.statistic == 0.0);

    CHECK_THROWS_AS(wilcoxon_rank_sum(std::vector<double>{5}, std::vector<double>{}), DataError);
}

TEST_CASE("wilcoxon exact p: separated samples") {
    // a=[1,2,3] vs b=[4,5,6]: U=0; the only assignments as extreme are
    // U in {0, 9}, i.e. 2 of C(6,3)=20 -> p = 0.1.
    const TestResult res = wilcoxon_rank_sum(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5, 6},
                                             {WilcoxonMethod::exact, false});
    CHECK(res.statistic == 0.0);
    CHECK(res.p == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("wilcoxon exact matches full enumeration for all n1+n2 <= 10") {
    Rng rng(99);
    for (std::size_t n1 = 1; n1 <= 9; ++n1) {
        for (std::size_t n2 = 1; n1 + n2 <= 10; ++n2) {
            for (int rep = 0; rep < 3; ++rep) {
                std::vector<double> a(n1), b(n2);
                // Small integer support provokes plenty of ties.
                for (auto& v : a) v = static_cast<double>(rng.next_below(6));
                for (auto& v : b) v = static_cast<double>(rng.next_below(6));
                const TestResult res = wilcoxon_rank_sum(a, b, {WilcoxonMethod::exact, false});
                const double oracle = exact_wilcoxon_oracle(a, b);
                CHECK(std::abs(res.p - oracle) < 1e-6);
            }
        }
    }
}

TEST_CASE("wilcoxon normal approximation approaches exact for moderate n") {
    Rng rng(3);
    std::vector<double> a(14), b(14);
    for (auto& v : a) v = rng.next_double();
    for (auto& v : b) v = rng.next_double() + 0.2;
    const TestResult approx = wilcoxon_rank_sum(a, b, {WilcoxonMethod::normal, true});
    const TestResult exact = wilcoxon_rank_sum(a, b, {WilcoxonMethod::exact, false});
    CHECK(approx.p == doctest::Approx(exact.p).epsilon(0.15));
    CHECK(approx.p >= 0.0);
    CHECK(approx.p <= 1.0);
}

TEST_CASE("median conventions") {
    CHECK(median(std::vector<double>{3, 1, 2}) == 2.0);
    CHECK(median(std::vector<double>{4, 1, 2, 3}) == 2.5);
    CHECK_THROWS_AS(median(std::vector<double>{}), DataError);
}
