#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbrp/optout.hpp"
#include "sbrp/overbooking.hpp"
#include "sbrp/ridership.hpp"
#include "sbrp/routing.hpp"
#include "sbrp/simulation.hpp"

namespace sbrp {

// Flat key=value configuration with dotted sections; flags override file
// entries. Unknown keys are rejected.
struct RunConfig {
    // instance
    double walk_limit = 0.5;
    int stop_capacity = 15;
    double stop_spacing = 0.0;  // 0 selects walk_limit / sqrt(2)
    // ridership
    double mean_ridership = 0.3;
    GKind g_kind = GKind::identity;
    // optout: direct coefficients, or the six calibration anchors
    OptOutModel optout{};
    bool optout_use_anchors = false;
    CalibrationAnchors anchors{};
    // routing / chance capacity
    int bus_capacity = 48;
    double alpha = 0.05;
    int v_plus = 0;  // 0 selects ceil(sqrt(capacity)) + 1
    double max_ride_time = 40.0;
    TravelParams travel{};
    // cost
    CostParams cost{};
    // sweep
    std::vector<double> tau_grid = {0,    250,  500,  750,  1000, 1250,
                                    1500, 1750, 2000, 2250, 2500};
    int replicas = 100;
    std::uint64_t base_seed = 20240501;
    int threads = 1;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Applies one key=value override (same keys as the file). Throws on unknown
/// keys or unparsable values.
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

/// Re-validates every domain constraint the owning modules impose.
void validate_config(const RunConfig& cfg);

/// The opt-out model the config denotes: the direct coefficients, or the
/// calibrated solution when anchors are selected.
OptOutModel resolve_optout(const RunConfig& cfg);

ChanceParams resolve_chance(const RunConfig& cfg);

/// Canonical serialization of the semantic fields (thread count excluded:
/// it cannot change any output byte).
std::string canonical_config(const RunConfig& cfg);

/// FNV-1a 64 over the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace sbrp
