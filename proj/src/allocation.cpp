#include "sbrp/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sbrp/errors.hpp"
#include "sbrp/flow.hpp"

namespace sbrp {

AllocationProblem make_allocation_problem(const Instance& inst, const CandidateSets& cand) {
    std::vector<int> all(inst.students.size());
    std::iota(all.begin(), all.end(), 0);
    return make_allocation_problem(inst, cand, all);
}

AllocationProblem make_allocation_problem(const Instance& inst, const CandidateSets& cand,
                                          const std::vector<int>& student_indices) {
    AllocationProblem prob;
    prob.num_students = static_cast<int>(student_indices.size());
    prob.num_stops = static_cast<int>(inst.stops.size());
    prob.stop_capacity = inst.stop_capacity;
    prob.candidates.resize(student_indices.size());
    prob.walk.resize(student_indices.size());
    prob.student_ids.resize(student_indices.size());
    for (std::size_t r = 0; r < student_indices.size(); ++r) {
        const int i = student_indices[r];
        prob.student_ids[r] = inst.students[static_cast<std::size_t>(i)].id;
        for (int j : cand.stops_of_student[static_cast<std::size_t>(i)]) {
            prob.candidates[r].push_back(j);
            prob.walk[r].push_back(inst.student_stop_walk(i, j));
        }
    }
    return prob;
}

namespace {

struct AssignResult {
    int flow = 0;
    double cost = 0.0;
    std::vector<int> assign;  // row -> stop index or -1
};

// Shared network layout: source, students, stops, sink.
AssignResult run_flow(const AllocationProblem& prob, const std::vector<char>& open,
                      bool min_cost) {
    const int n = prob.num_students;
    const int P = prob.num_stops;
    const int source = 0;
    const int sink = 1 + n + P;
    FlowNetwork net(sink + 1);
    std::vector<std::vector<std::pair<int, int>>> edge_of_row(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) net.add_edge(source, 1 + i, 1);
    for (int i = 0; i < n; ++i) {
        const auto& cands = prob.candidates[static_cast<std::size_t>(i)];
        for (std::size_t c = 0; c < cands.size(); ++c) {
            const int j = cands[c];
            if (!open[static_cast<std::size_t>(j)]) continue;
            const int id = net.add_edge(1 + i, 1 + n + j, 1,
                                        min_cost ? prob.walk[static_cast<std::size_t>(i)][c] : 0.0);
            edge_of_row[static_cast<std::size_t>(i)].push_back({id, j});
        }
    }
    for (int j = 0; j < P; ++j)
        if (open[static_cast<std::size_t>(j)]) net.add_edge(1 + n + j, sink, prob.stop_capacity);

    AssignResult res;
    if (min_cost) {
        auto [flow, cost] = net.min_cost_max_flow(source, sink);
        res.flow = flow;
        res.cost = cost;
    } else {
        res.flow = net.max_flow(source, sink);
    }
    res.assign.assign(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i)
        for (const auto& [id, j] : edge_of_row[static_cast<std::size_t>(i)])
            if (net.edge_flow(id) > 0) res.assign[static_cast<std::size_t>(i)] = j;
    return res;
}

int capacity_lb(const AllocationProblem& prob) {
    if (prob.num_students == 0) return 0;
    return (prob.num_students + prob.stop_capacity - 1) / prob.stop_capacity;
}

// Students whose candidate sets are pairwise disjoint each need their own
// open stop.
int packing_lb(const AllocationProblem& prob) {
    std::vector<char> used(static_cast<std::size_t>(prob.num_stops), 0);
    int lb = 0;
    for (const auto& cands : prob.candidates) {
        bool hits = false;
        for (int j : cands)
            if (used[static_cast<std::size_t>(j)]) {
                hits = true;
                break;
            }
        if (!hits) {
            ++lb;
            for (int j : cands) used[static_cast<std::size_t>(j)] = 1;
        }
    }
    return lb;
}

void require_nonempty_candidates(const AllocationProblem& prob) {
    std::vector<int> empty;
    for (std::size_t r = 0; r < prob.candidates.size(); ++r)
        if (prob.candidates[r].empty()) empty.push_back(prob.student_ids[r]);
    if (!empty.empty()) {
        std::ostringstream msg;
        msg << "students without reachable stops:";
        for (int id : empty) msg << ' ' << id;
        fail("StudentUnreachable", msg.str());
    }
}

void require_capacity_feasible(const AllocationProblem& prob) {
    std::vector<char> all_open(static_cast<std::size_t>(prob.num_stops), 1);
    const AssignResult full = run_flow(prob, all_open, false);
    if (full.flow == prob.num_students) return;
    std::ostringstream msg;
    msg << "capacity " << prob.stop_capacity << " cannot place students:";
    for (std::size_t r = 0; r < full.assign.size(); ++r)
        if (full.assign[r] < 0) msg << ' ' << prob.student_ids[r];
    fail("Infeasible", msg.str());
}

Allocation finalize(const AllocationProblem& prob, const std::vector<char>& open, bool exact) {
    AssignResult best = run_flow(prob, open, true);
    Allocation alloc;
    alloc.stop_of_student = best.assign;
    std::vector<char> used(static_cast<std::size_t>(prob.num_stops), 0);
    for (int j : best.assign)
        if (j >= 0) used[static_cast<std::size_t>(j)] = 1;
    for (int j = 0; j < prob.num_stops; ++j)
        if (used[static_cast<std::size_t>(j)]) alloc.open_stops.push_back(j);
    alloc.open_count = static_cast<int>(alloc.open_stops.size());
    alloc.total_walk = best.cost;
    alloc.exact = exact;
    alloc.lower_bound_open = std::max(capacity_lb(prob), exact ? alloc.open_count : packing_lb(prob));
    return alloc;
}

Allocation solve_exact(const AllocationProblem& prob) {
    const int P = prob.num_stops;
    const int n = prob.num_students;

    std::vector<std::uint32_t> cand_mask(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
        for (int j : prob.candidates[static_cast<std::size_t>(i)])
            cand_mask[static_cast<std::size_t>(i)] |= (1u << j);

    const int lb = std::max(capacity_lb(prob), packing_lb(prob));
    for (int k = std::max(lb, n > 0 ? 1 : 0); k <= P; ++k) {
        double best_walk = 0.0;
        std::vector<char> best_open;
        bool found = false;

        // Size-k subsets in lexicographic order; ties in walk resolve to the
        // lowest stop ids automatically.
        std::vector<int> pick(static_cast<std::size_t>(k));
        std::iota(pick.begin(), pick.end(), 0);
        for (;;) {
            std::uint32_t mask = 0;
            for (int j : pick) mask |= (1u << j);
            bool covers = true;
            for (int i = 0; i < n && covers; ++i)
                covers = (cand_mask[static_cast<std::size_t>(i)] & mask) != 0;
            if (covers) {
                std::vector<char> open(static_cast<std::size_t>(P), 0);
                for (int j : pick) open[static_cast<std::size_t>(j)] = 1;
                const AssignResult feas = run_flow(prob, open, false);
                if (feas.flow == n) {
                    const AssignResult mc = run_flow(prob, open, true);
                    if (!found || mc.cost < best_walk - 1e-12) {
                        found = true;
                        best_walk = mc.cost;
                        best_open = open;
                    }
                }
            }
            // next combination
            int pos = k - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == P - k + pos) --pos;
            if (pos < 0) break;
            ++pick[static_cast<std::size_t>(pos)];
            for (int q = pos + 1; q < k; ++q)
                pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(q - 1)] + 1;
        }

        if (found) {
            Allocation a = finalize(prob, best_open, true);
            a.lower_bound_open = a.open_count;
            return a;
        }
    }
    fail("Infeasible", "no stop subset admits a feasible assignment");
}

Allocation solve_heuristic(const AllocationProblem& prob) {
    const int P = prob.num_stops;
    const int n = prob.num_students;
    std::vector<char> open(static_cast<std::size_t>(P), 0);

    // Greedy cover weighted by remaining capacity.
    for (;;) {
        const AssignResult cur = run_flow(prob, open, false);
        if (cur.flow == n) break;
        std::vector<int> gain(static_cast<std::size_t>(P), 0);
        for (int i = 0; i < n; ++i) {
            if (cur.assign[static_cast<std::size_t>(i)] >= 0) continue;
            for (int j : prob.candidates[static_cast<std::size_t>(i)])
                if (!open[static_cast<std::size_t>(j)]) ++gain[static_cast<std::size_t>(j)];
        }
        int best = -1, best_gain = 0;
        for (int j = 0; j < P; ++j) {
            const int g = std::min(gain[static_cast<std::size_t>(j)], prob.stop_capacity);
            if (g > best_gain) {
                best_gain = g;
                best = j;
            }
        }
        if (best < 0) {
            // No stop directly reaches an unmatched student; max flow is
            // submodular in the open set, so some single stop must raise it.
            for (int j = 0; j < P && best < 0; ++j) {
                if (open[static_cast<std::size_t>(j)]) continue;
                open[static_cast<std::size_t>(j)] = 1;
                if (run_flow(prob, open, false).flow > cur.flow)
                    best = j;
                open[static_cast<std::size_t>(j)] = 0;
            }
            if (best < 0) fail("Infeasible", "greedy cover stalled below full assignment");
        }
        open[static_cast<std::size_t>(best)] = 1;
    }

    // Closing local search: drop any stop whose removal keeps feasibility.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int j = 0; j < P; ++j) {
            if (!open[static_cast<std::size_t>(j)]) continue;
            open[static_cast<std::size_t>(j)] = 0;
            if (run_flow(prob, open, false).flow == n) {
                changed = true;
                break;
            }
            open[static_cast<std::size_t>(j)] = 1;
        }
    }

    return finalize(prob, open, false);
}

}  // namespace

Allocation solve_allocation(const AllocationProblem& prob, const AllocationOptions& opts) {
    if (prob.num_students == 0) {
        Allocation a;
        a.exact = true;
        return a;
    }
    require_nonempty_candidates(prob);
    require_capacity_feasible(prob);
    if (prob.num_stops <= opts.exact_stop_limit && prob.num_stops <= 31)
        return solve_exact(prob);
    return solve_heuristic(prob);
}

AllocationDiagnostics check_allocation(const AllocationProblem& prob, const Allocation& alloc) {
    AllocationDiagnostics diag;
    auto report = [&](const std::string& v) {
        diag.ok = false;
        diag.violations.push_back(v);
    };

    if (static_cast<int>(alloc.stop_of_student.size()) != prob.num_students) {
        report("assignment row count != student count");
        return diag;
    }
    std::vector<int> load(static_cast<std::size_t>(prob.num_stops), 0);
    std::vector<char> open(static_cast<std::size_t>(prob.num_stops), 0);
    for (int j : alloc.open_stops)
        if (j >= 0 && j < prob.num_stops) open[static_cast<std::size_t>(j)] = 1;

    double walk = 0.0;
    for (int i = 0; i < prob.num_students; ++i) {
        const int j = alloc.stop_of_student[static_cast<std::size_t>(i)];
        const int sid = prob.student_ids[static_cast<std::size_t>(i)];
        if (j < 0 || j >= prob.num_stops) {
            report("student " + std::to_string(sid) + " unassigned");
            continue;
        }
        const auto& cands = prob.candidates[static_cast<std::size_t>(i)];
        const auto it = std::find(cands.begin(), cands.end(), j);
        if (it == cands.end()) {
            report("student " + std::to_string(sid) + " assigned out-of-reach stop " +
                   std::to_string(j));
        } else {
            walk += prob.walk[static_cast<std::size_t>(i)]
                             [static_cast<std::size_t>(it - cands.begin())];
        }
        if (!open[static_cast<std::size_t>(j)])
            report("student " + std::to_string(sid) + " assigned to closed stop " +
                   std::to_string(j));
        ++load[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < prob.num_stops; ++j)
        if (load[static_cast<std::size_t>(j)] > prob.stop_capacity)
            report("stop " + std::to_string(j) + " over capacity: " +
                   std::to_string(load[static_cast<std::size_t>(j)]) + " > " +
                   std::to_string(prob.stop_capacity));
    if (alloc.open_count != static_cast<int>(alloc.open_stops.size()))
        report("open_count mismatch with open_stops size");
    if (std::abs(walk - alloc.total_walk) > 1e-9)
        report("total_walk mismatch: reported " + std::to_string(alloc.total_walk) +
               " recomputed " + std::to_string(walk));
    return diag;
}

}  // namespace sbrp
