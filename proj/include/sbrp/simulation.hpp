#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sbrp/allocation.hpp"
#include "sbrp/instance.hpp"
#include "sbrp/optout.hpp"
#include "sbrp/ridership.hpp"
#include "sbrp/routing.hpp"

namespace sbrp {

struct CostParams {
    double bus_cost = 85000.0;  // USD per bus per planning horizon
    double time_cost = 0.0;     // USD per expected minute
};

// Everything replicas share, read-only: fitted ridership, the opt-out model,
// travel/chance parameters and solver options.
struct SimulationSetup {
    const Instance* instance = nullptr;
    CandidateSets cand;
    RidershipModel ridership;
    std::vector<double> rho;  // per student index, fitted on the full population
    OptOutModel optout;
    TravelParams travel;
    ChanceParams chance;
    double dt_max = 40.0;
    CostParams cost;
    AllocationOptions alloc_opts;
    RoutingOptions routing_opts;
};

SimulationSetup make_setup(const Instance& inst, double mean_ridership, GKind g_kind,
                           const OptOutModel& optout, const TravelParams& travel,
                           const ChanceParams& chance, double dt_max, const CostParams& cost);

struct Baseline {
    Allocation alloc;
    RoutePlan plan;
    double operating_cost = 0.0;
};

/// Zero-opt-out plan over the full student body, solved with the same
/// pipeline replicas use so solver bias cancels in the savings.
Baseline compute_baseline(const SimulationSetup& setup);

struct Scenario {
    double tau = 0.0;
    std::uint64_t replica_seed = 0;
    std::vector<int> optout_ids;  // student ids, ascending
    RoutePlan plan;
    int open_stops = 0;
    double incentive_paid = 0.0;
    double operating_cost = 0.0;
    double savings = 0.0;
    double max_incentive_per_student = 0.0;  // +infinity when nobody opted out
};

/// One draw of the opt-out process followed by re-allocation and re-routing
/// of the remaining students. Deterministic in (base_seed, replica_index).
Scenario run_replica(const SimulationSetup& setup, const Baseline& baseline, double tau,
                     int replica_index, std::uint64_t base_seed);

struct SweepPoint {
    double tau = 0.0;
    int replicas = 0;
    double mean_savings = 0.0;
    double std_savings = 0.0;
    double p_fail = 0.0;
    double mean_buses = 0.0;
    double mean_optouts = 0.0;
};

struct SavingsCurve {
    std::vector<SweepPoint> points;
    int replicas = 0;
    bool degenerate_std = false;  // single-replica runs report std 0
};

using SweepProgress = std::function<void(const SweepPoint&)>;

/// R replicas per incentive with common random numbers across the grid
/// (replica r reuses one uniform per student at every tau). Replicas run in
/// parallel when threads > 1; results merge in replica order, so the output
/// is byte-identical for any thread count.
SavingsCurve sweep(const SimulationSetup& setup, const Baseline& baseline,
                   const std::vector<double>& tau_grid, int replicas, std::uint64_t base_seed,
                   int threads = 1, const SweepProgress& progress = {});

std::string curve_to_csv(const SavingsCurve& curve, const std::string& config_hash,
                         std::uint64_t base_seed);
std::string curve_to_plot_data(const SavingsCurve& curve, const std::string& config_hash,
                               std::uint64_t base_seed);

}  // namespace sbrp
