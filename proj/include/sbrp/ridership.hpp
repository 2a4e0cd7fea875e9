#pragma once

#include <string>
#include <vector>

namespace sbrp {

enum class GKind { identity, log1p };

double apply_g(GKind g, double d);
GKind g_kind_from_string(const std::string& s);
std::string to_string(GKind g);

// Affine model rho(d) = rho0 + rho1 * g(d), fitted so the slope is maximal
// subject to every fitted probability staying in [0,1] and the fitted mean
// matching the school average.
struct RidershipModel {
    double rho0 = 0.0;
    double rho1 = 0.0;  // >= 0
    GKind g_kind = GKind::identity;
};

/// Closed-form fit: rho1 = min(rbar/(gbar - min g), (1-rbar)/(max g - gbar)),
/// rho0 = rbar - rho1*gbar, with rho1 = 0 when all transformed distances are
/// equal. Throws InvalidMeanRidership unless 0 < mean_ridership < 1.
RidershipModel fit_ridership(const std::vector<double>& distances, double mean_ridership,
                             GKind g_kind = GKind::identity);

/// rho0 + rho1*g(d) clamped to [0,1]; the clamp only engages outside the
/// fitted distance range.
double individual_ridership(const RidershipModel& model, double d);

}  // namespace sbrp
