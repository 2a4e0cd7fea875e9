#pragma once

#include <map>
#include <string>
#include <vector>

#include "sbrp/lp_format.hpp"
#include "sbrp/routing.hpp"

namespace sbrp {

// Full arc-based routing MILP over the demand stops: binary arc variables
// per bus, stop-to-route assignment variables, the integer sigma-level
// selection for the chance constraint, ride-time rows with the depot
// deadhead excluded, and MTZ ordering variables. The lexicographic objective
// is weighted: W * (depot departures) + total expected time, with W one more
// than a proven upper bound on total time (recorded in the header comment).
lp::Model build_routing_milp(const std::vector<StopDemand>& demands, const TravelModel& tm,
                             const ChanceParams& chance, double dt_max,
                             const std::vector<int>& fleet);

/// Writes the LP-format text; bit-exact for identical inputs. Throws
/// TooLarge beyond 30 stops.
void export_milp(const std::vector<StopDemand>& demands, const TravelModel& tm,
                 const ChanceParams& chance, double dt_max, const std::vector<int>& fleet,
                 const std::string& path, const std::string& config_hash = "");

std::string milp_to_string(const std::vector<StopDemand>& demands, const TravelModel& tm,
                           const ChanceParams& chance, double dt_max,
                           const std::vector<int>& fleet, const std::string& config_hash = "");

/// Variable assignment a plan induces (arcs, assignments, MTZ orderings,
/// sigma levels); substituting it into the exported model must satisfy every
/// row when the plan is feasible.
std::map<std::string, double> plan_to_milp_solution(const RoutePlan& plan,
                                                    const std::vector<StopDemand>& demands,
                                                    const TravelModel& tm,
                                                    const ChanceParams& chance,
                                                    const std::vector<int>& fleet);

}  // namespace sbrp
