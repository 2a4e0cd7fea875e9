#include "sbrp/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <thread>

#include "sbrp/errors.hpp"
#include "sbrp/rng.hpp"

namespace sbrp {

SimulationSetup make_setup(const Instance& inst, double mean_ridership, GKind g_kind,
                           const OptOutModel& optout, const TravelParams& travel,
                           const ChanceParams& chance, double dt_max, const CostParams& cost) {
    if (!(cost.bus_cost > 0.0)) fail("DomainError", "bus_cost must be > 0");
    if (cost.time_cost < 0.0) fail("DomainError", "time_cost must be >= 0");

    SimulationSetup s;
    s.instance = &inst;
    s.cand = build_candidate_sets(inst);
    std::vector<double> distances;
    distances.reserve(inst.students.size());
    for (const auto& st : inst.students) distances.push_back(st.dist_school);
    s.ridership = fit_ridership(distances, mean_ridership, g_kind);
    s.rho.reserve(distances.size());
    for (double d : distances) s.rho.push_back(individual_ridership(s.ridership, d));
    s.optout = optout;
    s.travel = travel;
    s.chance = chance;
    s.dt_max = dt_max;
    s.cost = cost;
    return s;
}

namespace {

struct PipelineResult {
    Allocation alloc;
    RoutePlan plan;
    int open_stops = 0;
    double operating_cost = 0.0;
};

PipelineResult run_pipeline(const SimulationSetup& setup, const std::vector<int>& keep) {
    PipelineResult out;
    if (keep.empty()) return out;

    const AllocationProblem prob =
        make_allocation_problem(*setup.instance, setup.cand, keep);
    out.alloc = solve_allocation(prob, setup.alloc_opts);

    std::vector<double> rho_rows;
    rho_rows.reserve(keep.size());
    for (int i : keep) rho_rows.push_back(setup.rho[static_cast<std::size_t>(i)]);

    const std::vector<StopDemand> demands = build_stop_demands(prob, out.alloc, rho_rows);
    const TravelModel tm = make_travel_model(*setup.instance, demands, setup.travel);
    const std::vector<int> fleet = make_default_fleet(
        static_cast<int>(demands.size()), static_cast<int>(setup.instance->depots.size()));
    out.plan = solve_routing(demands, tm, setup.chance, setup.dt_max, fleet, setup.routing_opts);
    out.open_stops = static_cast<int>(demands.size());
    out.operating_cost =
        setup.cost.bus_cost * out.plan.bus_count + setup.cost.time_cost * out.plan.total_time;
    return out;
}

}  // namespace

Baseline compute_baseline(const SimulationSetup& setup) {
    std::vector<int> all(setup.instance->students.size());
    std::iota(all.begin(), all.end(), 0);
    PipelineResult r = run_pipeline(setup, all);
    return Baseline{std::move(r.alloc), std::move(r.plan), r.operating_cost};
}

Scenario run_replica(const SimulationSetup& setup, const Baseline& baseline, double tau,
                     int replica_index, std::uint64_t base_seed) {
    if (tau < 0.0) fail("DomainError", "incentive must be >= 0");

    Scenario sc;
    sc.tau = tau;
    sc.replica_seed = mix_seed(base_seed, static_cast<std::uint64_t>(replica_index));

    Rng rng(sc.replica_seed);
    const auto uniforms = draw_optout_uniforms(setup.instance->students.size(), rng);
    const std::vector<int> optout_indices =
        optouts_from_uniforms(*setup.instance, setup.optout, tau, uniforms);

    std::vector<char> out(setup.instance->students.size(), 0);
    for (int i : optout_indices) {
        out[static_cast<std::size_t>(i)] = 1;
        sc.optout_ids.push_back(setup.instance->students[static_cast<std::size_t>(i)].id);
    }
    std::sort(sc.optout_ids.begin(), sc.optout_ids.end());

    std::vector<int> keep;
    keep.reserve(setup.instance->students.size() - optout_indices.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!out[i]) keep.push_back(static_cast<int>(i));

    PipelineResult r = run_pipeline(setup, keep);
    sc.plan = std::move(r.plan);
    sc.open_stops = r.open_stops;
    sc.operating_cost = r.operating_cost;
    sc.incentive_paid = tau * static_cast<double>(sc.optout_ids.size());
    sc.savings = baseline.operating_cost - (sc.incentive_paid + sc.operating_cost);
    sc.max_incentive_per_student =
        sc.optout_ids.empty()
            ? std::numeric_limits<double>::infinity()
            : (baseline.operating_cost - sc.operating_cost) /
                  static_cast<double>(sc.optout_ids.size());
    return sc;
}

SavingsCurve sweep(const SimulationSetup& setup, const Baseline& baseline,
                   const std::vector<double>& tau_grid, int replicas, std::uint64_t base_seed,
                   int threads, const SweepProgress& progress) {
    if (replicas < 1) fail("DomainError", "sweep needs at least one replica");
    if (tau_grid.empty()) fail("DomainError", "sweep needs a non-empty tau grid");
    for (std::size_t i = 0; i + 1 < tau_grid.size(); ++i)
        if (!(tau_grid[i] < tau_grid[i + 1]))
            fail("DomainError", "tau grid must be strictly ascending");

    SavingsCurve curve;
    curve.replicas = replicas;
    curve.degenerate_std = (replicas == 1);

    const int workers = std::max(1, std::min(threads, replicas));
    for (double tau : tau_grid) {
        std::vector<Scenario> scenarios(static_cast<std::size_t>(replicas));
        if (workers == 1) {
            for (int r = 0; r < replicas; ++r)
                scenarios[static_cast<std::size_t>(r)] =
                    run_replica(setup, baseline, tau, r, base_seed);
        } else {
            std::atomic<int> next{0};
            auto work = [&]() {
                for (;;) {
                    const int r = next.fetch_add(1);
                    if (r >= replicas) return;
                    scenarios[static_cast<std::size_t>(r)] =
                        run_replica(setup, baseline, tau, r, base_seed);
                }
            };
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(workers));
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (auto& t : pool) t.join();
        }

        SweepPoint pt;
        pt.tau = tau;
        pt.replicas = replicas;
        int fails = 0;
        for (const Scenario& sc : scenarios) {
            pt.mean_savings += sc.savings;
            pt.mean_buses += sc.plan.bus_count;
            pt.mean_optouts += static_cast<double>(sc.optout_ids.size());
            if (sc.savings < 0.0) ++fails;
        }
        pt.mean_savings /= replicas;
        pt.mean_buses /= replicas;
        pt.mean_optouts /= replicas;
        pt.p_fail = static_cast<double>(fails) / replicas;
        if (replicas > 1) {
            double ss = 0.0;
            for (const Scenario& sc : scenarios) {
                const double d = sc.savings - pt.mean_savings;
                ss += d * d;
            }
            pt.std_savings = std::sqrt(ss / (replicas - 1));
        }
        curve.points.push_back(pt);
        if (progress) progress(pt);
    }
    return curve;
}

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string curve_to_csv(const SavingsCurve& curve, const std::string& config_hash,
                         std::uint64_t base_seed) {
    std::string out = "# sbrp sweep config_hash=" + config_hash +
                      " base_seed=" + std::to_string(base_seed) + "\n";
    out += "tau,replicas,mean_savings,std_savings,p_fail,mean_buses,mean_optouts\n";
    for (const auto& p : curve.points) {
        out += fixed6(p.tau) + "," + std::to_string(p.replicas) + "," + fixed6(p.mean_savings) +
               "," + fixed6(p.std_savings) + "," + fixed6(p.p_fail) + "," + fixed6(p.mean_buses) +
               "," + fixed6(p.mean_optouts) + "\n";
    }
    return out;
}

std::string curve_to_plot_data(const SavingsCurve& curve, const std::string& config_hash,
                               std::uint64_t base_seed) {
    std::string out = "# sbrp plot-data config_hash=" + config_hash +
                      " base_seed=" + std::to_string(base_seed) + "\n";
    const std::vector<std::pair<std::string, double SweepPoint::*>> series = {
        {"mean_savings", &SweepPoint::mean_savings},
        {"std_savings", &SweepPoint::std_savings},
        {"p_fail", &SweepPoint::p_fail},
        {"mean_buses", &SweepPoint::mean_buses},
        {"mean_optouts", &SweepPoint::mean_optouts},
    };
    for (const auto& [name, member] : series) {
        out += "\n# series " + name + "\n";
        for (const auto& p : curve.points)
            out += fixed6(p.tau) + " " + fixed6(p.*member) + "\n";
    }
    return out;
}

}  // namespace sbrp
