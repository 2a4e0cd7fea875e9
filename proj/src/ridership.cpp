#include "sbrp/ridership.hpp"

#include <algorithm>
#include <cmath>

#include "sbrp/errors.hpp"

namespace sbrp {

double apply_g(GKind g, double d) {
    switch (g) {
        case GKind::identity: return d;
        case GKind::log1p: return std::log1p(d);
    }
    return d;
}

GKind g_kind_from_string(const std::string& s) {
    if (s == "identity") return GKind::identity;
    if (s == "log1p") return GKind::log1p;
    fail("DomainError", "unknown g transform \"" + s + "\" (expected identity or log1p)");
}

std::string to_string(GKind g) {
    return g == GKind::identity ? "identity" : "log1p";
}

RidershipModel fit_ridership(const std::vector<double>& distances, double mean_ridership,
                             GKind g_kind) {
    if (!(mean_ridership > 0.0) || !(mean_ridership < 1.0))
        fail("InvalidMeanRidership", "mean ridership must lie strictly in (0,1)");
    if (distances.empty()) fail("DomainError", "fit_ridership needs at least one distance");

    double gmin = apply_g(g_kind, distances[0]);
    double gmax = gmin;
    double gsum = 0.0;
    for (double d : distances) {
        const double g = apply_g(g_kind, d);
        gmin = std::min(gmin, g);
        gmax = std::max(gmax, g);
        gsum += g;
    }
    const double gbar = gsum / static_cast<double>(distances.size());

    RidershipModel m;
    m.g_kind = g_kind;
    if (gmax == gmin) {
        // Degenerate spread: every slope keeps rho_i == rbar; report 0.
        m.rho1 = 0.0;
        m.rho0 = mean_ridership;
        return m;
    }
    m.rho1 = std::min(mean_ridership / (gbar - gmin), (1.0 - mean_ridership) / (gmax - gbar));
    m.rho0 = mean_ridership - m.rho1 * gbar;
    return m;
}

double individual_ridership(const RidershipModel& model, double d) {
    const double rho = model.rho0 + model.rho1 * apply_g(model.g_kind, d);
    return std::clamp(rho, 0.0, 1.0);
}

}  // namespace sbrp
