#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sbrp/geometry.hpp"

namespace sbrp {

struct Student {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double dist_school = 0.0;  // miles from home to school
};

struct Stop {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
};

enum class SiteKind { school, depot };

struct Site {
    SiteKind kind = SiteKind::school;
    int id = 0;
    double x = 0.0;
    double y = 0.0;
};

// Immutable after construction; safe for concurrent reads.
struct Instance {
    std::vector<Student> students;
    std::vector<Stop> stops;
    Site school;
    std::vector<Site> depots;
    double walk_limit = 0.5;  // miles
    int stop_capacity = 15;   // students per stop
    std::uint64_t seed = 0;

    // Optional explicit metrics for real data. When empty, distances are
    // Euclidean. walk_matrix is students x stops (miles); travel_matrix is
    // locations x locations (minutes) ordered depots, stops, school.
    std::vector<std::vector<double>> walk_matrix;
    std::vector<std::vector<double>> travel_matrix;

    /// Walking distance from student index `si` to stop index `pj`.
    double student_stop_walk(int si, int pj) const {
        if (!walk_matrix.empty())
            return walk_matrix[static_cast<std::size_t>(si)][static_cast<std::size_t>(pj)];
        return walk_distance({students[static_cast<std::size_t>(si)].x,
                              students[static_cast<std::size_t>(si)].y},
                             {stops[static_cast<std::size_t>(pj)].x,
                              stops[static_cast<std::size_t>(pj)].y});
    }
};

// Threshold sets of Problem-style reach relations, by index into
// Instance::students / Instance::stops. Duality: j in stops_of_student[i]
// iff i in students_of_stop[j].
struct CandidateSets {
    std::vector<std::vector<int>> stops_of_student;
    std::vector<std::vector<int>> students_of_stop;
};

struct SyntheticParams {
    int n = 400;
    double alpha = 1.0;
    double beta = 1.0;
    double side = 3.0;  // miles
    std::uint64_t seed = 0;
    double walk_limit = 0.5;
    int stop_capacity = 15;
    double stop_spacing = 0.0;  // <= 0 selects walk_limit / sqrt(2)
};

/// Students placed with coordinates side*Beta(alpha,beta) i.i.d., school at
/// the square center with one co-located depot, candidate stops on a uniform
/// grid whose spacing guarantees every point of the square is within
/// walk_limit of some stop. Deterministic given the seed.
Instance generate_synthetic(const SyntheticParams& params);

/// Exact threshold sets under walk_limit. Throws StudentUnreachable if any
/// student has no stop in reach.
CandidateSets build_candidate_sets(const Instance& inst);

/// Throws with field-level context on any violated instance invariant.
void validate_instance(const Instance& inst);

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path,
                   const std::string& config_hash = "");

/// The JSON document save_instance writes, as a string (used for
/// byte-identity checks and by the CLI).
std::string instance_to_json(const Instance& inst, const std::string& config_hash = "");
Instance instance_from_json(const std::string& text, const std::string& origin = "<string>");

}  // namespace sbrp
