#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gssr {

namespace detail {

/// Regularized lower incomplete gamma P(a, x) via series / continued fraction
/// (Numerical Recipes style). Accurate to ~1e-10 for the moderate a used by
/// chi-square tests.
inline double regularized_gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("regularized_gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        // Series representation.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Continued fraction for Q(a, x); P = 1 - Q.
    const double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    const double q = std::exp(-x + a * std::log(x) - gln) * h;
    return 1.0 - q;
}

}  // namespace detail

/// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
inline double chi_square_pvalue(double statistic, int dof) {
    if (dof <= 0) throw std::invalid_argument("chi_square_pvalue: dof must be positive");
    if (statistic <= 0.0) return 1.0;
    return 1.0 - detail::regularized_gamma_p(0.5 * dof, 0.5 * statistic);
}

/// Pearson chi-square goodness-of-fit p-value for observed counts against
/// expected counts. Entries with expected <= 0 are rejected.
inline double chi_square_gof_pvalue(const std::vector<double>& observed, const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof_pvalue: size mismatch");
    double stat = 0.0;
    for (size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw std::invalid_argument("chi_square_gof_pvalue: expected count must be positive");
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    return chi_square_pvalue(stat, int(observed.size()) - 1);
}

}  // namespace gssr
