#pragma once

#include <vector>

namespace sbrp {

// First two moments of a bus load: the sum of independent Bernoulli riders.
struct LoadMoments {
    double mu = 0.0;   // expected riders
    double var = 0.0;  // rider variance, always <= mu
};

struct ChanceParams {
    int capacity = 48;    // seats per bus
    double alpha = 0.05;  // overcrowding probability bound, must be <= 0.5
    int v_plus = 8;       // largest integer sigma level the linearization offers
};

/// Validates and fills defaults: v_plus <= 0 selects ceil(sqrt(capacity))+1,
/// which is safe because any accepted group has var <= mu <= capacity + 1/2.
ChanceParams make_chance_params(int capacity, double alpha, int v_plus = 0);

/// mu = sum rho_i, var = sum rho_i (1 - rho_i).
LoadMoments group_moments(const std::vector<double>& riderships);

/// Inverse standard-normal CDF: rational approximation plus one Halley
/// refinement step; absolute error below 1.2e-9 on (0,1).
double inv_norm_cdf(double p);

/// Continuous chance test mu + Phi^{-1}(1-alpha) * sigma <= capacity + 1/2.
bool normal_feasible(const LoadMoments& m, const ChanceParams& params);

/// Smallest integer v in {0..v_plus} with v*v >= var (the level the integer
/// linearization selects); always >= sqrt(var). Throws VPlusTooSmall when no
/// level reaches var.
int sigma_tilde(double var, const ChanceParams& params);

/// Exact P(sum X_i > threshold) for independent Bernoulli(rho_i) via the
/// O(n * threshold) convolution with an absorbing overflow state.
double poisson_binomial_tail(const std::vector<double>& riderships, int threshold);

}  // namespace sbrp
