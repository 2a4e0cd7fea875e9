#include "sbrp/overbooking.hpp"

#include <algorithm>
#include <cmath>

#include "sbrp/errors.hpp"

namespace sbrp {

ChanceParams make_chance_params(int capacity, double alpha, int v_plus) {
    if (capacity < 1) fail("DomainError", "bus capacity must be >= 1");
    if (!(alpha > 0.0) || alpha > 0.5)
        fail("DomainError", "alpha must lie in (0, 0.5]; larger values void the safety bound");
    ChanceParams p;
    p.capacity = capacity;
    p.alpha = alpha;
    const int needed = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(capacity))));
    p.v_plus = v_plus > 0 ? v_plus : needed + 1;
    if (p.v_plus < needed)
        fail("DomainError", "v_plus too small for capacity (needs >= ceil(sqrt(Q)))");
    return p;
}

LoadMoments group_moments(const std::vector<double>& riderships) {
    LoadMoments m;
    for (double rho : riderships) {
        if (!(rho >= 0.0 && rho <= 1.0)) fail("DomainError", "ridership outside [0,1]");
        m.mu += rho;
        m.var += rho * (1.0 - rho);
    }
    return m;
}

double inv_norm_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) fail("DomainError", "inv_norm_cdf needs p in (0,1)");

    static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};

    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }

    // One Halley step against the erfc-based CDF.
    static const double sqrt2 = std::sqrt(2.0);
    static const double sqrt_2pi = std::sqrt(8.0 * std::atan(1.0));
    const double e = 0.5 * std::erfc(-x / sqrt2) - p;
    const double u = e * sqrt_2pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

bool normal_feasible(const LoadMoments& m, const ChanceParams& params) {
    const double z = inv_norm_cdf(1.0 - params.alpha);
    return m.mu + z * std::sqrt(std::max(0.0, m.var)) <=
           static_cast<double>(params.capacity) + 0.5;
}

int sigma_tilde(double var, const ChanceParams& params) {
    if (var < 0.0) fail("DomainError", "variance must be >= 0");
    int v = static_cast<int>(std::ceil(std::sqrt(var)));
    while (static_cast<double>(v) * v < var) ++v;
    while (v > 0 && static_cast<double>(v - 1) * (v - 1) >= var) --v;
    if (v > params.v_plus)
        fail("VPlusTooSmall", "group variance needs sigma level " + std::to_string(v) +
                                  " > v_plus " + std::to_string(params.v_plus));
    return v;
}

double poisson_binomial_tail(const std::vector<double>& riderships, int threshold) {
    if (riderships.size() > 10000) fail("DomainError", "poisson_binomial_tail capped at n=10000");
    for (double rho : riderships)
        if (!(rho >= 0.0 && rho <= 1.0)) fail("DomainError", "ridership outside [0,1]");

    const int n = static_cast<int>(riderships.size());
    if (threshold < 0) return 1.0;
    if (threshold >= n) return 0.0;

    // p[k] = P(current count == k, never overflowed); overflow is absorbing.
    std::vector<double> p(static_cast<std::size_t>(threshold) + 1, 0.0);
    p[0] = 1.0;
    double over = 0.0;
    for (double rho : riderships) {
        over += p[static_cast<std::size_t>(threshold)] * rho;
        for (int k = threshold; k >= 1; --k)
            p[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)] * (1.0 - rho) +
                                             p[static_cast<std::size_t>(k - 1)] * rho;
        p[0] *= (1.0 - rho);
    }
    return std::clamp(over, 0.0, 1.0);
}

}  // namespace sbrp
