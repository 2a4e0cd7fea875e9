#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sbrp/allocation.hpp"
#include "sbrp/instance.hpp"
#include "sbrp/overbooking.hpp"

namespace sbrp {

// One selected stop with the students allocated to it.
struct StopDemand {
    int stop = 0;  // instance stop index, carried through to outputs
    std::vector<std::pair<int, double>> students;  // (student id, ridership)
    int count = 0;
};

struct TravelParams {
    double bus_speed_mph = 20.0;
    double stop_dwell_min = 0.5;
    double board_min_per_student = 0.1;
};

// Expected travel times between routing locations. Locations are indexed
// depots first, then the demand stops (in demand order), then the school.
struct TravelModel {
    int num_depots = 1;
    int num_stops = 0;
    std::vector<double> travel;  // minutes, locations() x locations()
    std::vector<double> dwell;   // minutes per location; zero off stops

    int locations() const { return num_depots + num_stops + 1; }
    int depot_loc(int d) const { return d; }
    int stop_loc(int s) const { return num_depots + s; }
    int school_loc() const { return num_depots + num_stops; }
    double between(int a, int b) const {
        return travel[static_cast<std::size_t>(a) * static_cast<std::size_t>(locations()) +
                      static_cast<std::size_t>(b)];
    }
};

/// Travel minutes from Euclidean miles at bus speed, or sliced out of the
/// instance travel matrix when one is present; stop dwell grows with the
/// expected boarders.
TravelModel make_travel_model(const Instance& inst, const std::vector<StopDemand>& demands,
                              const TravelParams& params);

/// Groups an allocation into per-stop demands (stops sorted by instance stop
/// index, students by id). rho_by_row aligns with the problem rows.
std::vector<StopDemand> build_stop_demands(const AllocationProblem& prob, const Allocation& alloc,
                                           const std::vector<double>& rho_by_row);

struct Route {
    int bus = 0;
    int depot = 0;            // depot index
    std::vector<int> stops;   // indices into the demand vector, visit order
    double duration = 0.0;    // depot -> stops -> school, minutes
    double ride_time = 0.0;   // duration minus the depot deadhead
    LoadMoments load;
};

struct RoutePlan {
    std::vector<Route> routes;
    int bus_count = 0;
    double total_time = 0.0;
};

/// (duration, ride_time) for a visiting order; ride time excludes the
/// depot -> first stop deadhead.
std::pair<double, double> route_duration(const std::vector<int>& stops, int depot,
                                         const TravelModel& tm);

bool route_feasible(const Route& r, const ChanceParams& chance, double dt_max);

struct RoutingOptions {
    int exact_stop_limit = 6;       // full set-partition enumeration up to here
    int order_exact_limit = 7;      // exhaustive visit-order search up to here
    long partition_node_cap = 200000;
    int improvement_pass_cap = 60;
};

/// All buses parked at depot 0, then 1, ... round robin.
std::vector<int> make_default_fleet(int num_buses, int num_depots);

/// Lexicographic minimum bus count, then total expected time. Exact
/// enumeration at small stop counts; otherwise nearest-neighbor +
/// cheapest-insertion column seeding, savings merges, a set-partition
/// branch-and-bound over the column pool, and relocate/swap/2-opt
/// improvement that never increases the bus count. Deterministic.
RoutePlan solve_routing(const std::vector<StopDemand>& demands, const TravelModel& tm,
                        const ChanceParams& chance, double dt_max,
                        const std::vector<int>& fleet, const RoutingOptions& opts = {});

struct PlanDiagnostics {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Re-derives every route quantity from scratch and checks the plan
/// invariants (exact cover, feasibility, reported totals).
PlanDiagnostics check_plan(const RoutePlan& plan, const std::vector<StopDemand>& demands,
                           const TravelModel& tm, const ChanceParams& chance, double dt_max);

}  // namespace sbrp
