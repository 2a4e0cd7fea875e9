#pragma once

// Test-only oracles, kept independent of the library code paths they check:
// brute-force enumeration, Hungarian assignment, bisection quantiles, and
// exhaustive Poisson-binomial distributions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest-augmenting-path Hungarian algorithm for n x m (n <= m) cost
// matrices; blocked cells carry kInf. Returns total cost and the column of
// each row, or kInf cost when no full assignment exists.
inline std::pair<double, std::vector<int>> hungarian(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    if (n == 0) return {0.0, {}};
    const int m = static_cast<int>(a[0].size());
    const double big = 1e17;

    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(m) + 1, 0.0);
    std::vector<int> p(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(m) + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(m) + 1, kInf);
        std::vector<char> used(static_cast<std::size_t>(m) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cell = std::min(a[static_cast<std::size_t>(i0) - 1]
                                              [static_cast<std::size_t>(j) - 1],
                                             big);
                const double cur = cell - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    double cost = 0.0;
    for (int j = 1; j <= m; ++j) {
        if (p[static_cast<std::size_t>(j)] == 0) continue;
        row_to_col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1] = j - 1;
        const double cell = a[static_cast<std::size_t>(p[static_cast<std::size_t>(j)]) - 1]
                             [static_cast<std::size_t>(j) - 1];
        cost += cell;
    }
    for (int c : row_to_col)
        if (c < 0) return {kInf, row_to_col};
    if (cost >= big) return {kInf, row_to_col};
    return {cost, row_to_col};
}

// Lexicographic allocation optimum by exhaustive subset enumeration plus a
// slot-expanded Hungarian assignment. candidates[i]/walk[i] mirror the
// library's problem layout.
struct AllocOptimum {
    bool feasible = false;
    int open_count = 0;
    double total_walk = 0.0;
};

inline AllocOptimum allocation_optimum(const std::vector<std::vector<int>>& candidates,
                                       const std::vector<std::vector<double>>& walk,
                                       int num_stops, int capacity) {
    const int n = static_cast<int>(candidates.size());
    AllocOptimum best;
    if (n == 0) {
        best.feasible = true;
        return best;
    }
    for (int k = 1; k <= num_stops && !best.feasible; ++k) {
        std::vector<int> pick(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i;
        double best_walk = kInf;
        for (;;) {
            // slots: capacity copies of each picked stop
            std::vector<int> slot_stop;
            for (int j : pick)
                for (int c = 0; c < capacity; ++c) slot_stop.push_back(j);
            if (static_cast<int>(slot_stop.size()) >= n) {
                std::vector<std::vector<double>> cost(
                    static_cast<std::size_t>(n),
                    std::vector<double>(slot_stop.size(), kInf));
                for (int i = 0; i < n; ++i)
                    for (std::size_t c = 0; c < candidates[static_cast<std::size_t>(i)].size();
                         ++c) {
                        const int j = candidates[static_cast<std::size_t>(i)][c];
                        for (std::size_t s = 0; s < slot_stop.size(); ++s)
                            if (slot_stop[s] == j)
                                cost[static_cast<std::size_t>(i)][s] =
                                    walk[static_cast<std::size_t>(i)][c];
                    }
                const auto [total, assign] = hungarian(cost);
                if (total < best_walk) best_walk = total;
            }
            int pos = k - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == num_stops - k + pos) --pos;
            if (pos < 0) break;
            ++pick[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < k; ++q)
                pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(q - 1)] + 1;
        }
        if (best_walk < kInf) {
            best.feasible = true;
            best.open_count = k;
            best.total_walk = best_walk;
        }
    }
    return best;
}

/// Calls fn with every set partition of {0..n-1} (restricted growth strings).
inline void for_each_partition(int n,
                               const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    std::vector<int> block(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int max_used) {
        if (i == n) {
            std::vector<std::vector<int>> blocks(static_cast<std::size_t>(max_used) + 1);
            for (int q = 0; q < n; ++q)
                blocks[static_cast<std::size_t>(block[static_cast<std::size_t>(q)])].push_back(q);
            fn(blocks);
            return;
        }
        for (int b = 0; b <= max_used + 1; ++b) {
            block[static_cast<std::size_t>(i)] = b;
            rec(i + 1, std::max(max_used, b));
        }
    };
    if (n > 0) rec(0, -1);
}

/// Standard-normal quantile by bisection on the erfc-based CDF; accurate to
/// the bisection width.
inline double bisect_quantile(double p, int iters = 200) {
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double cdf = 0.5 * std::erfc(-mid / std::sqrt(2.0));
        if (cdf < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Exhaustive Poisson-binomial pmf over all 2^n outcomes (n <= 20).
inline std::vector<double> pb_pmf_enumerated(const std::vector<double>& rho) {
    const int n = static_cast<int>(rho.size());
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double pr = 1.0;
        int ones = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                pr *= rho[static_cast<std::size_t>(i)];
                ++ones;
            } else {
                pr *= 1.0 - rho[static_cast<std::size_t>(i)];
            }
        }
        pmf[static_cast<std::size_t>(ones)] += pr;
    }
    return pmf;
}

/// Up-front convolution pmf, no cap (independent of the library's absorbing
/// formulation).
inline std::vector<double> pb_pmf_convolved(const std::vector<double>& rho) {
    std::vector<double> pmf{1.0};
    for (double r : rho) {
        std::vector<double> next(pmf.size() + 1, 0.0);
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * (1.0 - r);
            next[k + 1] += pmf[k] * r;
        }
        pmf = std::move(next);
    }
    return pmf;
}

/// Monte Carlo tail estimate with its own uniform stream.
inline double mc_tail(const std::vector<double>& rho, int threshold, int draws,
                      std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    auto uniform = [&]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    long hits = 0;
    for (int d = 0; d < draws; ++d) {
        int count = 0;
        for (double r : rho)
            if (uniform() < r) ++count;
        if (count > threshold) ++hits;
    }
    return static_cast<double>(hits) / draws;
}

}  // namespace oracle
