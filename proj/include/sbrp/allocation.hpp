#pragma once

#include <string>
#include <vector>

#include "sbrp/instance.hpp"

namespace sbrp {

// Self-contained assignment problem: rows are students (possibly a subset of
// an instance), columns are stops. candidates[i] lists reachable stop
// indices, walk[i] the matching distances.
struct AllocationProblem {
    int num_students = 0;
    int num_stops = 0;
    std::vector<std::vector<int>> candidates;
    std::vector<std::vector<double>> walk;
    int stop_capacity = 1;
    std::vector<int> student_ids;  // for diagnostics; defaults to row index
};

AllocationProblem make_allocation_problem(const Instance& inst, const CandidateSets& cand);
AllocationProblem make_allocation_problem(const Instance& inst, const CandidateSets& cand,
                                          const std::vector<int>& student_indices);

struct Allocation {
    std::vector<int> stop_of_student;  // per problem row
    std::vector<int> open_stops;       // sorted
    int open_count = 0;
    double total_walk = 0.0;
    bool exact = false;        // solver mode certificate
    int lower_bound_open = 0;  // proven lower bound on open stops
};

struct AllocationOptions {
    int exact_stop_limit = 12;  // exhaustive lexicographic search up to here
};

/// Lexicographic minimum open stops, then minimum total walk. Exact for
/// small stop counts, greedy cover + closing local search + min-cost
/// reassignment beyond. Throws Infeasible naming unassignable students when
/// capacity blocks assignment even with every stop open.
Allocation solve_allocation(const AllocationProblem& prob, const AllocationOptions& opts = {});

struct AllocationDiagnostics {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Names every violated constraint: assignment completeness, reach, open
/// stops, per-stop capacity, and the reported totals.
AllocationDiagnostics check_allocation(const AllocationProblem& prob, const Allocation& alloc);

}  // namespace sbrp
