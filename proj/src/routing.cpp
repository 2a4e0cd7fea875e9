#include "sbrp/routing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "sbrp/errors.hpp"

namespace sbrp {

TravelModel make_travel_model(const Instance& inst, const std::vector<StopDemand>& demands,
                              const TravelParams& params) {
    if (!(params.bus_speed_mph > 0.0)) fail("DomainError", "bus speed must be > 0");
    if (params.stop_dwell_min < 0.0 || params.board_min_per_student < 0.0)
        fail("DomainError", "dwell parameters must be >= 0");

    TravelModel tm;
    tm.num_depots = static_cast<int>(inst.depots.size());
    tm.num_stops = static_cast<int>(demands.size());
    const int L = tm.locations();
    tm.travel.assign(static_cast<std::size_t>(L) * static_cast<std::size_t>(L), 0.0);
    tm.dwell.assign(static_cast<std::size_t>(L), 0.0);

    for (std::size_t s = 0; s < demands.size(); ++s) {
        double expected = 0.0;
        for (const auto& [id, rho] : demands[s].students) expected += rho;
        tm.dwell[static_cast<std::size_t>(tm.stop_loc(static_cast<int>(s)))] =
            params.stop_dwell_min + params.board_min_per_student * expected;
    }

    // Location -> instance travel-matrix row (depots, all stops, school).
    auto matrix_row = [&](int loc) -> int {
        if (loc < tm.num_depots) return loc;
        if (loc == tm.school_loc())
            return tm.num_depots + static_cast<int>(inst.stops.size());
        return tm.num_depots + demands[static_cast<std::size_t>(loc - tm.num_depots)].stop;
    };
    auto position = [&](int loc) -> Point {
        if (loc < tm.num_depots)
            return {inst.depots[static_cast<std::size_t>(loc)].x,
                    inst.depots[static_cast<std::size_t>(loc)].y};
        if (loc == tm.school_loc()) return {inst.school.x, inst.school.y};
        const Stop& st =
            inst.stops[static_cast<std::size_t>(demands[static_cast<std::size_t>(loc - tm.num_depots)].stop)];
        return {st.x, st.y};
    };

    const double minutes_per_mile = 60.0 / params.bus_speed_mph;
    for (int a = 0; a < L; ++a) {
        for (int b = 0; b < L; ++b) {
            if (a == b) continue;
            double minutes;
            if (!inst.travel_matrix.empty())
                minutes = inst.travel_matrix[static_cast<std::size_t>(matrix_row(a))]
                                            [static_cast<std::size_t>(matrix_row(b))];
            else
                minutes = walk_distance(position(a), position(b)) * minutes_per_mile;
            tm.travel[static_cast<std::size_t>(a) * static_cast<std::size_t>(L) +
                      static_cast<std::size_t>(b)] = minutes;
        }
    }
    return tm;
}

std::vector<StopDemand> build_stop_demands(const AllocationProblem& prob, const Allocation& alloc,
                                           const std::vector<double>& rho_by_row) {
    if (rho_by_row.size() != static_cast<std::size_t>(prob.num_students))
        fail("DomainError", "ridership row count != student count");
    std::map<int, StopDemand> by_stop;
    for (int i = 0; i < prob.num_students; ++i) {
        const int j = alloc.stop_of_student[static_cast<std::size_t>(i)];
        if (j < 0) fail("DomainError", "allocation leaves a student unassigned");
        auto& d = by_stop[j];
        d.stop = j;
        d.students.push_back({prob.student_ids[static_cast<std::size_t>(i)],
                              rho_by_row[static_cast<std::size_t>(i)]});
    }
    std::vector<StopDemand> demands;
    for (auto& [stop, d] : by_stop) {
        std::sort(d.students.begin(), d.students.end());
        d.count = static_cast<int>(d.students.size());
        demands.push_back(std::move(d));
    }
    return demands;
}

std::pair<double, double> route_duration(const std::vector<int>& stops, int depot,
                                         const TravelModel& tm) {
    if (stops.empty()) return {0.0, 0.0};
    double duration = tm.between(tm.depot_loc(depot), tm.stop_loc(stops.front()));
    const double deadhead = duration;
    for (std::size_t i = 0; i < stops.size(); ++i) {
        duration += tm.dwell[static_cast<std::size_t>(tm.stop_loc(stops[i]))];
        const int next = (i + 1 < stops.size()) ? tm.stop_loc(stops[i + 1]) : tm.school_loc();
        duration += tm.between(tm.stop_loc(stops[i]), next);
    }
    return {duration, duration - deadhead};
}

bool route_feasible(const Route& r, const ChanceParams& chance, double dt_max) {
    return normal_feasible(r.load, chance) && r.ride_time <= dt_max + 1e-9;
}

std::vector<int> make_default_fleet(int num_buses, int num_depots) {
    if (num_depots < 1) fail("DomainError", "fleet needs at least one depot");
    std::vector<int> fleet(static_cast<std::size_t>(std::max(0, num_buses)));
    for (std::size_t k = 0; k < fleet.size(); ++k)
        fleet[k] = static_cast<int>(k) % num_depots;
    return fleet;
}

namespace {

struct StopMoments {
    double mu = 0.0;
    double var = 0.0;
};

struct Ctx {
    const std::vector<StopDemand>* demands;
    const TravelModel* tm;
    ChanceParams chance;
    double dt_max;
    RoutingOptions opts;
    std::vector<StopMoments> moments;  // per demand stop

    LoadMoments load_of(const std::vector<int>& stops) const {
        LoadMoments m;
        for (int s : stops) {
            m.mu += moments[static_cast<std::size_t>(s)].mu;
            m.var += moments[static_cast<std::size_t>(s)].var;
        }
        return m;
    }

    int best_depot(int first_stop) const {
        int best = 0;
        double bt = tm->between(tm->depot_loc(0), tm->stop_loc(first_stop));
        for (int d = 1; d < tm->num_depots; ++d) {
            const double t = tm->between(tm->depot_loc(d), tm->stop_loc(first_stop));
            if (t < bt - 1e-12) {
                bt = t;
                best = d;
            }
        }
        return best;
    }

    // duration with the cheapest deadhead; ride time is depot-independent
    std::pair<double, double> timed(const std::vector<int>& order) const {
        return route_duration(order, best_depot(order.front()), *tm);
    }
};

struct Column {
    std::vector<int> set;    // sorted stop indices
    std::vector<int> order;  // visit order
    double duration = 0.0;
    double ride = 0.0;
    LoadMoments load;
};

// Exhaustive visit-order search for small sets, nearest-neighbor + 2-opt
// beyond; returns nothing when no order meets the ride-time cap.
std::optional<Column> best_feasible_order(const Ctx& ctx, std::vector<int> stops) {
    std::sort(stops.begin(), stops.end());
    Column col;
    col.set = stops;
    col.load = ctx.load_of(stops);
    if (!normal_feasible(col.load, ctx.chance)) return std::nullopt;

    const int k = static_cast<int>(stops.size());
    if (k <= ctx.opts.order_exact_limit) {
        std::vector<int> perm = stops;
        bool found = false;
        do {
            const auto [dur, ride] = ctx.timed(perm);
            if (ride <= ctx.dt_max + 1e-9 && (!found || dur < col.duration - 1e-12)) {
                found = true;
                col.order = perm;
                col.duration = dur;
                col.ride = ride;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (!found) return std::nullopt;
        return col;
    }

    // nearest-neighbor chain from the cheapest deadhead
    std::vector<int> order;
    std::vector<char> used(stops.size(), 0);
    {
        int first = 0;
        double bt = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < stops.size(); ++i) {
            const int d = ctx.best_depot(stops[i]);
            const double t = ctx.tm->between(ctx.tm->depot_loc(d), ctx.tm->stop_loc(stops[i]));
            if (t < bt - 1e-12) {
                bt = t;
                first = static_cast<int>(i);
            }
        }
        order.push_back(stops[static_cast<std::size_t>(first)]);
        used[static_cast<std::size_t>(first)] = 1;
    }
    while (static_cast<int>(order.size()) < k) {
        int pick = -1;
        double bt = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < stops.size(); ++i) {
            if (used[i]) continue;
            const double t =
                ctx.tm->between(ctx.tm->stop_loc(order.back()), ctx.tm->stop_loc(stops[i]));
            if (t < bt - 1e-12) {
                bt = t;
                pick = static_cast<int>(i);
            }
        }
        order.push_back(stops[static_cast<std::size_t>(pick)]);
        used[static_cast<std::size_t>(pick)] = 1;
    }

    // 2-opt segment reversals on total duration
    auto [dur, ride] = ctx.timed(order);
    for (int pass = 0; pass < 30; ++pass) {
        bool improved = false;
        for (std::size_t i = 0; i + 1 < order.size() && !improved; ++i) {
            for (std::size_t j = i + 1; j < order.size() && !improved; ++j) {
                std::vector<int> cand = order;
                std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                             cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                const auto [cd, cr] = ctx.timed(cand);
                if (cd < dur - 1e-9) {
                    order = std::move(cand);
                    dur = cd;
                    ride = cr;
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    if (ride > ctx.dt_max + 1e-9) return std::nullopt;
    col.order = order;
    col.duration = dur;
    col.ride = ride;
    return col;
}

std::optional<Column> column_for_order(const Ctx& ctx, const std::vector<int>& order) {
    Column col;
    col.set = order;
    std::sort(col.set.begin(), col.set.end());
    col.load = ctx.load_of(col.set);
    if (!normal_feasible(col.load, ctx.chance)) return std::nullopt;
    const auto [dur, ride] = ctx.timed(order);
    if (ride > ctx.dt_max + 1e-9) return std::nullopt;
    col.order = order;
    col.duration = dur;
    col.ride = ride;
    return col;
}

void require_singles_feasible(const Ctx& ctx) {
    for (std::size_t s = 0; s < ctx.demands->size(); ++s) {
        if (!best_feasible_order(ctx, {static_cast<int>(s)})) {
            fail("StopUnroutable",
                 "stop " + std::to_string((*ctx.demands)[s].stop) +
                     " violates constraints even on a dedicated bus");
        }
    }
}

struct Pool {
    std::vector<Column> cols;
    std::map<std::vector<int>, std::size_t> by_set;

    void add(const Column& c) {
        auto it = by_set.find(c.set);
        if (it == by_set.end()) {
            by_set[c.set] = cols.size();
            cols.push_back(c);
        } else if (c.duration < cols[it->second].duration - 1e-12) {
            cols[it->second] = c;
        }
    }
};

void seed_nearest_neighbor(const Ctx& ctx, Pool& pool) {
    const int P = static_cast<int>(ctx.demands->size());
    for (int seed = 0; seed < P; ++seed) {
        std::vector<int> order{seed};
        auto col = column_for_order(ctx, order);
        if (!col) continue;
        pool.add(*col);
        std::vector<char> used(static_cast<std::size_t>(P), 0);
        used[static_cast<std::size_t>(seed)] = 1;
        for (;;) {
            // candidates by travel time from the current tail
            std::vector<std::pair<double, int>> cands;
            for (int t = 0; t < P; ++t)
                if (!used[static_cast<std::size_t>(t)])
                    cands.push_back({ctx.tm->between(ctx.tm->stop_loc(order.back()),
                                                     ctx.tm->stop_loc(t)),
                                     t});
            std::sort(cands.begin(), cands.end());
            bool extended = false;
            for (const auto& [tt, t] : cands) {
                std::vector<int> next = order;
                next.push_back(t);
                auto ext = column_for_order(ctx, next);
                if (ext) {
                    order = std::move(next);
                    used[static_cast<std::size_t>(t)] = 1;
                    pool.add(*ext);
                    extended = true;
                    break;
                }
            }
            if (!extended) break;
        }
    }
}

void seed_cheapest_insertion(const Ctx& ctx, Pool& pool) {
    const int P = static_cast<int>(ctx.demands->size());
    for (int seed = 0; seed < P; ++seed) {
        std::vector<int> order{seed};
        auto col = column_for_order(ctx, order);
        if (!col) continue;
        double dur = col->duration;
        std::vector<char> used(static_cast<std::size_t>(P), 0);
        used[static_cast<std::size_t>(seed)] = 1;
        for (;;) {
            // all (stop, position) insertions ranked by duration increase
            std::vector<std::tuple<double, int, int>> cands;
            for (int t = 0; t < P; ++t) {
                if (used[static_cast<std::size_t>(t)]) continue;
                for (std::size_t pos = 0; pos <= order.size(); ++pos) {
                    std::vector<int> next = order;
                    next.insert(next.begin() + static_cast<std::ptrdiff_t>(pos), t);
                    const auto [cd, cr] = ctx.timed(next);
                    cands.push_back({cd - dur, t, static_cast<int>(pos)});
                }
            }
            std::sort(cands.begin(), cands.end());
            bool inserted = false;
            for (const auto& [delta, t, pos] : cands) {
                std::vector<int> next = order;
                next.insert(next.begin() + pos, t);
                auto ext = column_for_order(ctx, next);
                if (ext) {
                    order = std::move(next);
                    dur = ext->duration;
                    used[static_cast<std::size_t>(t)] = 1;
                    pool.add(*ext);
                    inserted = true;
                    break;
                }
            }
            if (!inserted) break;
        }
    }
}

// Feasible merge of two ordered routes: best of the four concatenations.
std::optional<Column> merge_columns(const Ctx& ctx, const Column& a, const Column& b) {
    std::optional<Column> best;
    const std::vector<std::vector<int>> variants = {
        [&] { auto v = a.order; v.insert(v.end(), b.order.begin(), b.order.end()); return v; }(),
        [&] { auto v = b.order; v.insert(v.end(), a.order.begin(), a.order.end()); return v; }(),
        [&] {
            auto v = a.order;
            v.insert(v.end(), b.order.rbegin(), b.order.rend());
            return v;
        }(),
        [&] {
            auto v = b.order;
            v.insert(v.end(), a.order.rbegin(), a.order.rend());
            return v;
        }()};
    for (const auto& v : variants) {
        auto col = column_for_order(ctx, v);
        if (col && (!best || col->duration < best->duration - 1e-12)) best = col;
    }
    return best;
}

std::vector<Column> savings_partition(const Ctx& ctx, Pool& pool) {
    std::vector<Column> routes;
    for (std::size_t s = 0; s < ctx.demands->size(); ++s)
        routes.push_back(*best_feasible_order(ctx, {static_cast<int>(s)}));

    while (routes.size() > 1) {
        double best_saving = -std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        std::optional<Column> best_col;
        for (std::size_t i = 0; i < routes.size(); ++i) {
            for (std::size_t j = i + 1; j < routes.size(); ++j) {
                auto merged = merge_columns(ctx, routes[i], routes[j]);
                if (!merged) continue;
                const double saving = routes[i].duration + routes[j].duration - merged->duration;
                if (saving > best_saving + 1e-12) {
                    best_saving = saving;
                    bi = i;
                    bj = j;
                    best_col = merged;
                }
            }
        }
        if (!best_col) break;  // no feasible merge left; count cannot drop further here
        // exact re-ordering pays off once per accepted merge
        if (static_cast<int>(best_col->set.size()) <= ctx.opts.order_exact_limit) {
            auto better = best_feasible_order(ctx, best_col->set);
            if (better && better->duration < best_col->duration - 1e-12) best_col = better;
        }
        pool.add(*best_col);
        routes[bi] = *best_col;
        routes.erase(routes.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return routes;
}

void enrich_all_subsets(const Ctx& ctx, Pool& pool) {
    const int P = static_cast<int>(ctx.demands->size());
    for (std::uint32_t mask = 1; mask < (1u << P); ++mask) {
        std::vector<int> stops;
        for (int s = 0; s < P; ++s)
            if (mask & (1u << s)) stops.push_back(s);
        auto col = best_feasible_order(ctx, stops);
        if (col) pool.add(*col);
    }
}

struct PartitionResult {
    std::vector<std::size_t> chosen;  // column ids
    int count = std::numeric_limits<int>::max();
    double time = std::numeric_limits<double>::infinity();
};

// Lexicographic (cardinality, cost) exact cover over the pool.
PartitionResult set_partition_branch_and_bound(const Ctx& ctx, const Pool& pool,
                                               const std::vector<Column>& incumbent_routes) {
    const int P = static_cast<int>(ctx.demands->size());

    std::vector<std::vector<std::size_t>> cols_of_stop(static_cast<std::size_t>(P));
    for (std::size_t c = 0; c < pool.cols.size(); ++c)
        cols_of_stop[static_cast<std::size_t>(pool.cols[c].set.front())].push_back(c);
    // larger, cheaper columns first gets good incumbents early
    for (auto& lst : cols_of_stop)
        std::sort(lst.begin(), lst.end(), [&](std::size_t x, std::size_t y) {
            const auto& cx = pool.cols[x];
            const auto& cy = pool.cols[y];
            if (cx.set.size() != cy.set.size()) return cx.set.size() > cy.set.size();
            if (cx.duration != cy.duration) return cx.duration < cy.duration;
            return cx.set < cy.set;
        });

    std::size_t max_col = 1;
    std::vector<double> min_share(static_cast<std::size_t>(P),
                                  std::numeric_limits<double>::infinity());
    for (const auto& c : pool.cols) {
        max_col = std::max(max_col, c.set.size());
        const double share = c.duration / static_cast<double>(c.set.size());
        for (int s : c.set)
            min_share[static_cast<std::size_t>(s)] =
                std::min(min_share[static_cast<std::size_t>(s)], share);
    }

    PartitionResult best;
    // incumbent from the savings construction
    {
        best.count = static_cast<int>(incumbent_routes.size());
        best.time = 0.0;
        for (const auto& r : incumbent_routes) best.time += r.duration;
        best.chosen.clear();  // filled only when the search proves something better
    }

    std::vector<char> covered(static_cast<std::size_t>(P), 0);
    std::vector<std::size_t> chosen;
    long nodes = 0;
    double share_left = 0.0;
    for (int s = 0; s < P; ++s) share_left += min_share[static_cast<std::size_t>(s)];

    std::function<void(int, double, double)> dfs = [&](int uncovered, double time,
                                                       double share) {
        if (nodes++ > ctx.opts.partition_node_cap) return;
        if (uncovered == 0) {
            const int cnt = static_cast<int>(chosen.size());
            if (cnt < best.count || (cnt == best.count && time < best.time - 1e-9)) {
                best.count = cnt;
                best.time = time;
                best.chosen = chosen;
            }
            return;
        }
        // bounds
        const int cnt = static_cast<int>(chosen.size());
        const int lb_count = cnt + static_cast<int>((static_cast<std::size_t>(uncovered) +
                                                     max_col - 1) / max_col);
        if (lb_count > best.count) return;
        if (lb_count == best.count && time + share >= best.time - 1e-9 && !best.chosen.empty())
            return;
        if (cnt >= best.count) return;

        int first = 0;
        while (covered[static_cast<std::size_t>(first)]) ++first;
        for (std::size_t cid : cols_of_stop[static_cast<std::size_t>(first)]) {
            const Column& col = pool.cols[cid];
            bool clash = false;
            for (int s : col.set)
                if (covered[static_cast<std::size_t>(s)]) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            double taken_share = 0.0;
            for (int s : col.set) {
                covered[static_cast<std::size_t>(s)] = 1;
                taken_share += min_share[static_cast<std::size_t>(s)];
            }
            chosen.push_back(cid);
            dfs(uncovered - static_cast<int>(col.set.size()), time + col.duration,
                share - taken_share);
            chosen.pop_back();
            for (int s : col.set) covered[static_cast<std::size_t>(s)] = 0;
            if (nodes > ctx.opts.partition_node_cap) return;
        }
    };
    dfs(P, 0.0, share_left);
    return best;
}

std::vector<Column> improve(const Ctx& ctx, std::vector<Column> routes) {
    auto recompute = [&](Column& r) {
        r.set = r.order;
        std::sort(r.set.begin(), r.set.end());
        r.load = ctx.load_of(r.set);
        const auto [d, t] = ctx.timed(r.order);
        r.duration = d;
        r.ride = t;
    };

    for (int pass = 0; pass < ctx.opts.improvement_pass_cap; ++pass) {
        bool improved = false;

        // intra-route reordering
        for (auto& r : routes) {
            auto better = best_feasible_order(ctx, r.set);
            if (better && better->duration < r.duration - 1e-9) {
                r = *better;
                improved = true;
            }
        }

        // relocate: move one stop to another route (or empty its route)
        for (std::size_t a = 0; a < routes.size() && !improved; ++a) {
            for (std::size_t pos = 0; pos < routes[a].order.size() && !improved; ++pos) {
                const int s = routes[a].order[pos];
                std::vector<int> rest = routes[a].order;
                rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(pos));
                std::optional<Column> new_a;
                if (!rest.empty()) {
                    new_a = column_for_order(ctx, rest);
                    if (!new_a) continue;  // removal broke ride feasibility (matrix data)
                }
                for (std::size_t b = 0; b < routes.size() && !improved; ++b) {
                    if (b == a) continue;
                    std::optional<Column> best_b;
                    for (std::size_t ins = 0; ins <= routes[b].order.size(); ++ins) {
                        std::vector<int> cand = routes[b].order;
                        cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(ins), s);
                        auto col = column_for_order(ctx, cand);
                        if (col && (!best_b || col->duration < best_b->duration - 1e-12))
                            best_b = col;
                    }
                    if (!best_b) continue;
                    const double old_t = routes[a].duration + routes[b].duration;
                    const double new_t = (new_a ? new_a->duration : 0.0) + best_b->duration;
                    const bool drops_bus = !new_a;
                    if (drops_bus || new_t < old_t - 1e-9) {
                        routes[b] = *best_b;
                        if (new_a) {
                            routes[a] = *new_a;
                        } else {
                            routes.erase(routes.begin() + static_cast<std::ptrdiff_t>(a));
                        }
                        improved = true;
                    }
                }
            }
        }

        // swap stops between two routes, positions preserved
        for (std::size_t a = 0; a < routes.size() && !improved; ++a) {
            for (std::size_t b = a + 1; b < routes.size() && !improved; ++b) {
                for (std::size_t i = 0; i < routes[a].order.size() && !improved; ++i) {
                    for (std::size_t j = 0; j < routes[b].order.size() && !improved; ++j) {
                        std::vector<int> oa = routes[a].order;
                        std::vector<int> ob = routes[b].order;
                        std::swap(oa[i], ob[j]);
                        auto ca = column_for_order(ctx, oa);
                        if (!ca) continue;
                        auto cb = column_for_order(ctx, ob);
                        if (!cb) continue;
                        const double old_t = routes[a].duration + routes[b].duration;
                        if (ca->duration + cb->duration < old_t - 1e-9) {
                            routes[a] = *ca;
                            routes[b] = *cb;
                            improved = true;
                        }
                    }
                }
            }
        }

        if (!improved) break;
    }
    for (auto& r : routes) recompute(r);
    return routes;
}

std::vector<Column> solve_exact(const Ctx& ctx) {
    const int P = static_cast<int>(ctx.demands->size());
    std::map<std::uint32_t, std::optional<Column>> block_memo;
    auto eval_block = [&](std::uint32_t mask) -> const std::optional<Column>& {
        auto it = block_memo.find(mask);
        if (it != block_memo.end()) return it->second;
        std::vector<int> stops;
        for (int s = 0; s < P; ++s)
            if (mask & (1u << s)) stops.push_back(s);
        return block_memo.emplace(mask, best_feasible_order(ctx, stops)).first->second;
    };

    std::vector<std::uint32_t> blocks;
    std::vector<std::uint32_t> best_blocks;
    int best_count = std::numeric_limits<int>::max();
    double best_time = std::numeric_limits<double>::infinity();

    std::function<void(int, double)> rec = [&](int next_stop, double time) {
        if (next_stop == P) {
            const int cnt = static_cast<int>(blocks.size());
            if (cnt < best_count || (cnt == best_count && time < best_time - 1e-12)) {
                best_count = cnt;
                best_time = time;
                best_blocks = blocks;
            }
            return;
        }
        // place next_stop into each existing block, then a fresh one
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const std::uint32_t grown = blocks[b] | (1u << next_stop);
            const auto& col = eval_block(grown);
            if (!col) continue;
            const auto& old_col = eval_block(blocks[b]);
            const std::uint32_t saved = blocks[b];
            blocks[b] = grown;
            rec(next_stop + 1, time - old_col->duration + col->duration);
            blocks[b] = saved;
        }
        const std::uint32_t single = (1u << next_stop);
        const auto& col = eval_block(single);
        if (col) {
            blocks.push_back(single);
            rec(next_stop + 1, time + col->duration);
            blocks.pop_back();
        }
    };
    rec(0, 0.0);

    if (best_count == std::numeric_limits<int>::max())
        fail("StopUnroutable", "no feasible partition of stops into routes");

    std::vector<Column> routes;
    for (std::uint32_t mask : best_blocks) routes.push_back(*eval_block(mask));
    return routes;
}

RoutePlan finalize_plan(const Ctx& ctx, std::vector<Column> routes,
                        const std::vector<int>& fleet) {
    std::sort(routes.begin(), routes.end(),
              [](const Column& a, const Column& b) { return a.set < b.set; });

    std::vector<char> bus_used(fleet.size(), 0);
    RoutePlan plan;
    for (const auto& col : routes) {
        // prefer the cheapest deadhead among depots that still have a bus
        std::vector<std::pair<double, int>> depots;
        for (int d = 0; d < ctx.tm->num_depots; ++d)
            depots.push_back(
                {ctx.tm->between(ctx.tm->depot_loc(d), ctx.tm->stop_loc(col.order.front())), d});
        std::sort(depots.begin(), depots.end());
        int bus = -1, depot = -1;
        for (const auto& [dh, d] : depots) {
            for (std::size_t k = 0; k < fleet.size(); ++k) {
                if (!bus_used[k] && fleet[k] == d) {
                    bus = static_cast<int>(k);
                    depot = d;
                    break;
                }
            }
            if (bus >= 0) break;
        }
        if (bus < 0) fail("FleetExhausted", "not enough buses for the selected routes");
        bus_used[static_cast<std::size_t>(bus)] = 1;

        Route r;
        r.bus = bus;
        r.depot = depot;
        r.stops = col.order;
        const auto [dur, ride] = route_duration(col.order, depot, *ctx.tm);
        r.duration = dur;
        r.ride_time = ride;
        r.load = col.load;
        plan.routes.push_back(std::move(r));
    }
    plan.bus_count = static_cast<int>(plan.routes.size());
    for (const auto& r : plan.routes) plan.total_time += r.duration;
    return plan;
}

}  // namespace

RoutePlan solve_routing(const std::vector<StopDemand>& demands, const TravelModel& tm,
                        const ChanceParams& chance, double dt_max,
                        const std::vector<int>& fleet, const RoutingOptions& opts) {
    if (static_cast<int>(demands.size()) != tm.num_stops)
        fail("DomainError", "travel model does not match the demand set");
    if (!(dt_max > 0.0)) fail("DomainError", "max ride time must be > 0");
    for (int d : fleet)
        if (d < 0 || d >= tm.num_depots) fail("DomainError", "fleet references unknown depot");

    RoutePlan plan;
    if (demands.empty()) return plan;
    if (fleet.size() < demands.size())
        fail("DomainError", "fleet smaller than the stop count bound");

    Ctx ctx{&demands, &tm, chance, dt_max, opts, {}};
    ctx.moments.resize(demands.size());
    for (std::size_t s = 0; s < demands.size(); ++s) {
        for (const auto& [id, rho] : demands[s].students) {
            if (!(rho >= 0.0 && rho <= 1.0)) fail("DomainError", "ridership outside [0,1]");
            ctx.moments[s].mu += rho;
            ctx.moments[s].var += rho * (1.0 - rho);
        }
    }

    require_singles_feasible(ctx);

    const int P = static_cast<int>(demands.size());
    if (P <= opts.exact_stop_limit && P <= 20)
        return finalize_plan(ctx, solve_exact(ctx), fleet);

    Pool pool;
    seed_nearest_neighbor(ctx, pool);
    seed_cheapest_insertion(ctx, pool);
    std::vector<Column> incumbent = savings_partition(ctx, pool);
    if (P <= 10) enrich_all_subsets(ctx, pool);

    PartitionResult part = set_partition_branch_and_bound(ctx, pool, incumbent);
    std::vector<Column> routes;
    if (!part.chosen.empty()) {
        for (std::size_t cid : part.chosen) routes.push_back(pool.cols[cid]);
    } else {
        routes = incumbent;
    }
    routes = improve(ctx, std::move(routes));
    return finalize_plan(ctx, std::move(routes), fleet);
}

PlanDiagnostics check_plan(const RoutePlan& plan, const std::vector<StopDemand>& demands,
                           const TravelModel& tm, const ChanceParams& chance, double dt_max) {
    PlanDiagnostics diag;
    auto report = [&](const std::string& v) {
        diag.ok = false;
        diag.violations.push_back(v);
    };

    std::vector<int> visits(demands.size(), 0);
    std::set<int> bus_seen;
    double total = 0.0;
    for (const auto& r : plan.routes) {
        if (r.stops.empty()) {
            report("route on bus " + std::to_string(r.bus) + " is empty");
            continue;
        }
        if (!bus_seen.insert(r.bus).second)
            report("bus " + std::to_string(r.bus) + " drives two routes");
        std::vector<int> sorted = r.stops;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            report("route on bus " + std::to_string(r.bus) + " repeats a stop");
        LoadMoments load;
        for (int s : r.stops) {
            if (s < 0 || s >= static_cast<int>(demands.size())) {
                report("route on bus " + std::to_string(r.bus) + " visits unknown stop index " +
                       std::to_string(s));
                continue;
            }
            ++visits[static_cast<std::size_t>(s)];
            for (const auto& [id, rho] : demands[static_cast<std::size_t>(s)].students) {
                load.mu += rho;
                load.var += rho * (1.0 - rho);
            }
        }
        const auto [dur, ride] = route_duration(r.stops, r.depot, tm);
        if (std::abs(dur - r.duration) > 1e-6)
            report("route on bus " + std::to_string(r.bus) + " duration mismatch");
        if (std::abs(ride - r.ride_time) > 1e-6)
            report("route on bus " + std::to_string(r.bus) + " ride_time mismatch");
        if (std::abs(load.mu - r.load.mu) > 1e-9 || std::abs(load.var - r.load.var) > 1e-9)
            report("route on bus " + std::to_string(r.bus) + " load moments mismatch");
        if (!normal_feasible(load, chance))
            report("route on bus " + std::to_string(r.bus) + " violates the chance constraint");
        if (ride > dt_max + 1e-9)
            report("route on bus " + std::to_string(r.bus) + " exceeds the ride-time limit");
        total += dur;
    }
    for (std::size_t s = 0; s < demands.size(); ++s)
        if (visits[s] != 1)
            report("stop " + std::to_string(demands[s].stop) + " visited " +
                   std::to_string(visits[s]) + " times");
    if (plan.bus_count != static_cast<int>(plan.routes.size()))
        report("bus_count != number of routes");
    if (std::abs(total - plan.total_time) > 1e-6) report("total_time mismatch");
    return diag;
}

}  // namespace sbrp
