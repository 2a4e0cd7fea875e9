#include "sbrp/milp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sbrp/errors.hpp"
#include "sbrp/overbooking.hpp"

namespace sbrp {

namespace {

std::string loc_name(const TravelModel& tm, int loc) {
    if (loc < tm.num_depots) return "d" + std::to_string(loc);
    if (loc == tm.school_loc()) return "s";
    return "p" + std::to_string(loc - tm.num_depots);
}

std::string arc_var(const TravelModel& tm, int i, int j, int k) {
    return "x_" + loc_name(tm, i) + "_" + loc_name(tm, j) + "_k" + std::to_string(k);
}

std::string w_var(int k, int j) { return "w_k" + std::to_string(k) + "_p" + std::to_string(j); }
std::string z_var(int k, int v) { return "z_k" + std::to_string(k) + "_v" + std::to_string(v); }
std::string st_var(int k) { return "st_k" + std::to_string(k); }
std::string u_var(const TravelModel& tm, int loc, int k) {
    return "u_" + loc_name(tm, loc) + "_k" + std::to_string(k);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

lp::Model build_routing_milp(const std::vector<StopDemand>& demands, const TravelModel& tm,
                             const ChanceParams& chance, double dt_max,
                             const std::vector<int>& fleet) {
    const int P = static_cast<int>(demands.size());
    if (P > 30) fail("TooLarge", "MILP export capped at 30 stops");
    if (P != tm.num_stops) fail("DomainError", "travel model does not match the demand set");
    if (fleet.empty()) fail("DomainError", "MILP export needs at least one bus");
    const int B = static_cast<int>(fleet.size());
    const int D = tm.num_depots;
    const int school = tm.school_loc();

    std::vector<double> mu(static_cast<std::size_t>(P), 0.0);
    std::vector<double> var(static_cast<std::size_t>(P), 0.0);
    for (int j = 0; j < P; ++j) {
        for (const auto& [id, rho] : demands[static_cast<std::size_t>(j)].students) {
            mu[static_cast<std::size_t>(j)] += rho;
            var[static_cast<std::size_t>(j)] += rho * (1.0 - rho);
        }
    }

    // arcs: depot->stop, stop->stop, stop->school
    std::vector<std::pair<int, int>> arcs;
    for (int d = 0; d < D; ++d)
        for (int j = 0; j < P; ++j) arcs.push_back({tm.depot_loc(d), tm.stop_loc(j)});
    for (int i = 0; i < P; ++i)
        for (int j = 0; j < P; ++j)
            if (i != j) arcs.push_back({tm.stop_loc(i), tm.stop_loc(j)});
    for (int i = 0; i < P; ++i) arcs.push_back({tm.stop_loc(i), school});

    auto arc_time = [&](int i, int j) { return tm.between(i, j) + tm.dwell[static_cast<std::size_t>(i)]; };

    double max_deadhead = 0.0;
    for (int d = 0; d < D; ++d)
        for (int j = 0; j < P; ++j)
            max_deadhead = std::max(max_deadhead, tm.between(tm.depot_loc(d), tm.stop_loc(j)));
    const double time_ub = B * (dt_max + max_deadhead);
    const double W = 1.0 + time_ub;

    lp::Model model;
    model.comments = {
        "single-school bus routing MILP",
        "weighted lexicographic objective: W * depot departures + expected total time",
        "W = " + fmt(W) + " (1 + upper bound " + fmt(time_ub) + " on total time)",
        "arc variables exist only for depot->stop, stop->stop and stop->school",
        "sigma levels v = 0.." + std::to_string(chance.v_plus) +
            "; rows varsel/sigdef/selone pick the integer sigma for the capacity row",
        "stops=" + std::to_string(P) + " buses=" + std::to_string(B) +
            " depots=" + std::to_string(D) + " capacity=" + std::to_string(chance.capacity) +
            " alpha=" + fmt(chance.alpha) + " v_plus=" + std::to_string(chance.v_plus) +
            " dt_max=" + fmt(dt_max),
    };

    const double z975 = inv_norm_cdf(1.0 - chance.alpha);

    for (int k = 0; k < B; ++k) {
        for (const auto& [i, j] : arcs) {
            double coef = arc_time(i, j);
            if (i < D) coef += W;  // departing a depot opens a bus
            model.objective.push_back({coef, arc_var(tm, i, j, k)});
            model.binaries.push_back(arc_var(tm, i, j, k));
        }
    }
    for (int k = 0; k < B; ++k)
        for (int j = 0; j < P; ++j) model.binaries.push_back(w_var(k, j));
    for (int k = 0; k < B; ++k)
        for (int v = 0; v <= chance.v_plus; ++v) model.binaries.push_back(z_var(k, v));

    auto in_arcs_of_stop = [&](int j) {
        std::vector<int> ins;
        for (int d = 0; d < D; ++d) ins.push_back(tm.depot_loc(d));
        for (int i = 0; i < P; ++i)
            if (i != j) ins.push_back(tm.stop_loc(i));
        return ins;
    };
    auto out_targets_of_stop = [&](int j) {
        std::vector<int> outs;
        for (int i = 0; i < P; ++i)
            if (i != j) outs.push_back(tm.stop_loc(i));
        outs.push_back(school);
        return outs;
    };

    // every demanded stop is entered exactly once, and assigned exactly once
    for (int j = 0; j < P; ++j) {
        lp::Constraint c;
        c.name = "visit_p" + std::to_string(j);
        for (int k = 0; k < B; ++k)
            for (int i : in_arcs_of_stop(j)) c.terms.push_back({1.0, arc_var(tm, i, tm.stop_loc(j), k)});
        c.sense = '=';
        c.rhs = 1.0;
        model.constraints.push_back(c);
    }
    for (int j = 0; j < P; ++j) {
        lp::Constraint c;
        c.name = "assign_p" + std::to_string(j);
        for (int k = 0; k < B; ++k) c.terms.push_back({1.0, w_var(k, j)});
        c.sense = '=';
        c.rhs = 1.0;
        model.constraints.push_back(c);
    }
    // a bus may enter a stop only when the stop is assigned to it
    for (int k = 0; k < B; ++k) {
        for (int j = 0; j < P; ++j) {
            lp::Constraint c;
            c.name = "link_k" + std::to_string(k) + "_p" + std::to_string(j);
            for (int i : in_arcs_of_stop(j)) c.terms.push_back({1.0, arc_var(tm, i, tm.stop_loc(j), k)});
            c.terms.push_back({-1.0, w_var(k, j)});
            c.sense = '<';
            c.rhs = 0.0;
            model.constraints.push_back(c);
        }
    }
    // at most one arrival and one departure per stop
    for (int j = 0; j < P; ++j) {
        lp::Constraint c;
        c.name = "arrive_p" + std::to_string(j);
        for (int k = 0; k < B; ++k)
            for (int i : in_arcs_of_stop(j)) c.terms.push_back({1.0, arc_var(tm, i, tm.stop_loc(j), k)});
        c.sense = '<';
        c.rhs = 1.0;
        model.constraints.push_back(c);
    }
    for (int j = 0; j < P; ++j) {
        lp::Constraint c;
        c.name = "depart_p" + std::to_string(j);
        for (int k = 0; k < B; ++k)
            for (int t : out_targets_of_stop(j)) c.terms.push_back({1.0, arc_var(tm, tm.stop_loc(j), t, k)});
        c.sense = '<';
        c.rhs = 1.0;
        model.constraints.push_back(c);
    }
    // flow conservation per bus and stop
    for (int k = 0; k < B; ++k) {
        for (int j = 0; j < P; ++j) {
            lp::Constraint c;
            c.name = "flow_k" + std::to_string(k) + "_p" + std::to_string(j);
            for (int i : in_arcs_of_stop(j)) c.terms.push_back({1.0, arc_var(tm, i, tm.stop_loc(j), k)});
            for (int t : out_targets_of_stop(j)) c.terms.push_back({-1.0, arc_var(tm, tm.stop_loc(j), t, k)});
            c.sense = '=';
            c.rhs = 0.0;
            model.constraints.push_back(c);
        }
    }
    // a bus can visit stops only after leaving some depot
    for (int k = 0; k < B; ++k) {
        for (int j = 0; j < P; ++j) {
            lp::Constraint c;
            c.name = "gate_k" + std::to_string(k) + "_p" + std::to_string(j);
            for (int i : in_arcs_of_stop(j)) c.terms.push_back({1.0, arc_var(tm, i, tm.stop_loc(j), k)});
            for (int d = 0; d < D; ++d)
                for (int jp = 0; jp < P; ++jp)
                    c.terms.push_back({-1.0, arc_var(tm, tm.depot_loc(d), tm.stop_loc(jp), k)});
            c.sense = '<';
            c.rhs = 0.0;
            model.constraints.push_back(c);
        }
    }
    // buses depart only from their own depot
    for (int k = 0; k < B; ++k) {
        for (int d = 0; d < D; ++d) {
            lp::Constraint c;
            c.name = "start_k" + std::to_string(k) + "_d" + std::to_string(d);
            for (int j = 0; j < P; ++j) c.terms.push_back({1.0, arc_var(tm, tm.depot_loc(d), tm.stop_loc(j), k)});
            c.sense = '<';
            c.rhs = (fleet[static_cast<std::size_t>(k)] == d) ? 1.0 : 0.0;
            model.constraints.push_back(c);
        }
    }
    // expected ride time cap; depot-origin arcs carry no ride time
    for (int k = 0; k < B; ++k) {
        lp::Constraint c;
        c.name = "ride_k" + std::to_string(k);
        for (int j = 0; j < P; ++j)
            for (int t : out_targets_of_stop(j))
                c.terms.push_back({arc_time(tm.stop_loc(j), t), arc_var(tm, tm.stop_loc(j), t, k)});
        c.sense = '<';
        c.rhs = dt_max;
        model.constraints.push_back(c);
    }
    // MTZ ordering rows, one per arc and bus
    const double big = static_cast<double>(P) + 2.0;
    for (int k = 0; k < B; ++k) {
        for (const auto& [i, j] : arcs) {
            lp::Constraint c;
            c.name = "mtz_k" + std::to_string(k) + "_" + loc_name(tm, i) + "_" + loc_name(tm, j);
            c.terms.push_back({1.0, u_var(tm, i, k)});
            c.terms.push_back({-1.0, u_var(tm, j, k)});
            c.terms.push_back({big, arc_var(tm, i, j, k)});
            c.sense = '<';
            c.rhs = big - 1.0;
            model.constraints.push_back(c);
        }
    }
    // chance capacity with the integer sigma selection
    for (int k = 0; k < B; ++k) {
        {
            lp::Constraint c;
            c.name = "cap_k" + std::to_string(k);
            for (int j = 0; j < P; ++j)
                c.terms.push_back({mu[static_cast<std::size_t>(j)], w_var(k, j)});
            c.terms.push_back({z975, st_var(k)});
            c.sense = '<';
            c.rhs = static_cast<double>(chance.capacity) + 0.5;
            model.constraints.push_back(c);
        }
        {
            lp::Constraint c;
            c.name = "varsel_k" + std::to_string(k);
            for (int v = 1; v <= chance.v_plus; ++v)
                c.terms.push_back({static_cast<double>(v) * v, z_var(k, v)});
            for (int j = 0; j < P; ++j)
                c.terms.push_back({-var[static_cast<std::size_t>(j)], w_var(k, j)});
            c.sense = '>';
            c.rhs = 0.0;
            model.constraints.push_back(c);
        }
        {
            lp::Constraint c;
            c.name = "sigdef_k" + std::to_string(k);
            for (int v = 1; v <= chance.v_plus; ++v)
                c.terms.push_back({static_cast<double>(v), z_var(k, v)});
            c.terms.push_back({-1.0, st_var(k)});
            c.sense = '=';
            c.rhs = 0.0;
            model.constraints.push_back(c);
        }
        {
            lp::Constraint c;
            c.name = "selone_k" + std::to_string(k);
            for (int v = 0; v <= chance.v_plus; ++v) c.terms.push_back({1.0, z_var(k, v)});
            c.sense = '=';
            c.rhs = 1.0;
            model.constraints.push_back(c);
        }
    }

    for (int k = 0; k < B; ++k) {
        for (int loc = 0; loc < tm.locations(); ++loc)
            model.bounds.push_back({u_var(tm, loc, k), 1.0, big, true, true});
        model.bounds.push_back({st_var(k), 0.0, static_cast<double>(chance.v_plus), true, true});
    }
    return model;
}

std::string milp_to_string(const std::vector<StopDemand>& demands, const TravelModel& tm,
                           const ChanceParams& chance, double dt_max,
                           const std::vector<int>& fleet, const std::string& config_hash) {
    lp::Model model = build_routing_milp(demands, tm, chance, dt_max, fleet);
    if (!config_hash.empty()) model.comments.push_back("config_hash=" + config_hash);
    return model.to_string();
}

void export_milp(const std::vector<StopDemand>& demands, const TravelModel& tm,
                 const ChanceParams& chance, double dt_max, const std::vector<int>& fleet,
                 const std::string& path, const std::string& config_hash) {
    std::ofstream out(path);
    if (!out) fail("IoError", "cannot write " + path);
    out << milp_to_string(demands, tm, chance, dt_max, fleet, config_hash);
}

std::map<std::string, double> plan_to_milp_solution(const RoutePlan& plan,
                                                    const std::vector<StopDemand>& demands,
                                                    const TravelModel& tm,
                                                    const ChanceParams& chance,
                                                    const std::vector<int>& fleet) {
    std::map<std::string, double> vals;
    const int B = static_cast<int>(fleet.size());
    // defaults: ordering anchors at 1, zero-sigma level selected
    for (int k = 0; k < B; ++k) {
        for (int loc = 0; loc < tm.locations(); ++loc) vals[u_var(tm, loc, k)] = 1.0;
        vals[z_var(k, 0)] = 1.0;
        vals[st_var(k)] = 0.0;
    }
    for (const auto& r : plan.routes) {
        const int k = r.bus;
        if (k < 0 || k >= B) fail("DomainError", "plan references a bus outside the fleet");
        int prev = tm.depot_loc(r.depot);
        double order = 1.0;
        for (int s : r.stops) {
            const int loc = tm.stop_loc(s);
            vals[arc_var(tm, prev, loc, k)] = 1.0;
            vals[w_var(k, s)] = 1.0;
            order += 1.0;
            vals[u_var(tm, loc, k)] = order;
            prev = loc;
        }
        vals[arc_var(tm, prev, tm.school_loc(), k)] = 1.0;
        vals[u_var(tm, tm.school_loc(), k)] = order + 1.0;

        LoadMoments load;
        for (int s : r.stops)
            for (const auto& [id, rho] : demands[static_cast<std::size_t>(s)].students) {
                load.mu += rho;
                load.var += rho * (1.0 - rho);
            }
        const int v = sigma_tilde(load.var, chance);
        vals[z_var(k, 0)] = 0.0;
        vals[z_var(k, v)] = 1.0;
        vals[st_var(k)] = static_cast<double>(v);
    }
    return vals;
}

}  // namespace sbrp
