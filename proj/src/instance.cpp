#include "sbrp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sbrp/errors.hpp"
#include "sbrp/rng.hpp"

namespace sbrp {

using nlohmann::json;

Instance generate_synthetic(const SyntheticParams& params) {
    if (params.n < 1) fail("DomainError", "n must be >= 1");
    if (!(params.alpha > 0.0) || !(params.beta > 0.0))
        fail("DomainError", "beta-distribution shapes must be > 0");
    if (!(params.side > 0.0)) fail("DomainError", "side must be > 0");
    if (!(params.walk_limit > 0.0)) fail("DomainError", "walk_limit must be > 0");
    if (params.stop_capacity < 1) fail("DomainError", "stop_capacity must be >= 1");

    Instance inst;
    inst.walk_limit = params.walk_limit;
    inst.stop_capacity = params.stop_capacity;
    inst.seed = params.seed;
    inst.school = Site{SiteKind::school, 0, params.side / 2.0, params.side / 2.0};
    inst.depots = {Site{SiteKind::depot, 0, inst.school.x, inst.school.y}};

    Rng rng(params.seed);
    inst.students.reserve(static_cast<std::size_t>(params.n));
    for (int i = 0; i < params.n; ++i) {
        Student s;
        s.id = i;
        s.x = params.side * rng.beta(params.alpha, params.beta);
        s.y = params.side * rng.beta(params.alpha, params.beta);
        s.dist_school = walk_distance({s.x, s.y}, {inst.school.x, inst.school.y});
        inst.students.push_back(s);
    }

    double spacing = params.stop_spacing > 0.0 ? params.stop_spacing
                                               : params.walk_limit / std::sqrt(2.0);
    // Grid nodes at i*step, step <= spacing, so the farthest interior point
    // sits at step*sqrt(2)/2 <= walk_limit/2 from a node.
    const int cells = std::max(1, static_cast<int>(std::ceil(params.side / spacing)));
    const double step = params.side / cells;
    int id = 0;
    for (int gy = 0; gy <= cells; ++gy)
        for (int gx = 0; gx <= cells; ++gx)
            inst.stops.push_back(Stop{id++, gx * step, gy * step});

    return inst;
}

CandidateSets build_candidate_sets(const Instance& inst) {
    CandidateSets cs;
    cs.stops_of_student.resize(inst.students.size());
    cs.students_of_stop.resize(inst.stops.size());
    std::vector<int> unreachable;
    for (int i = 0; i < static_cast<int>(inst.students.size()); ++i) {
        for (int j = 0; j < static_cast<int>(inst.stops.size()); ++j) {
            if (inst.student_stop_walk(i, j) <= inst.walk_limit) {
                cs.stops_of_student[static_cast<std::size_t>(i)].push_back(j);
                cs.students_of_stop[static_cast<std::size_t>(j)].push_back(i);
            }
        }
        if (cs.stops_of_student[static_cast<std::size_t>(i)].empty())
            unreachable.push_back(inst.students[static_cast<std::size_t>(i)].id);
    }
    if (!unreachable.empty()) {
        std::ostringstream msg;
        msg << "students with no stop within walk_limit:";
        for (int sid : unreachable) msg << ' ' << sid;
        fail("StudentUnreachable", msg.str());
    }
    return cs;
}

void validate_instance(const Instance& inst) {
    if (!(inst.walk_limit > 0.0)) fail("DomainError", "walk_limit must be > 0");
    if (inst.stop_capacity < 1) fail("DomainError", "stop_capacity must be >= 1");
    if (inst.depots.empty()) fail("DomainError", "instance needs at least one depot");
    if (inst.school.kind != SiteKind::school) fail("DomainError", "school site has wrong kind");

    std::set<int> ids;
    for (const auto& s : inst.students) {
        if (!ids.insert(s.id).second)
            fail("DomainError", "duplicate student id " + std::to_string(s.id));
        if (s.dist_school < 0.0)
            fail("DomainError", "student " + std::to_string(s.id) + " has negative dist_school");
        if (!std::isfinite(s.x) || !std::isfinite(s.y))
            fail("DomainError", "student " + std::to_string(s.id) + " has non-finite coordinates");
    }
    ids.clear();
    for (const auto& p : inst.stops)
        if (!ids.insert(p.id).second)
            fail("DomainError", "duplicate stop id " + std::to_string(p.id));

    if (!inst.walk_matrix.empty()) {
        if (inst.walk_matrix.size() != inst.students.size())
            fail("DomainError", "walk matrix row count != student count");
        for (const auto& row : inst.walk_matrix)
            if (row.size() != inst.stops.size())
                fail("DomainError", "walk matrix column count != stop count");
    }
    const std::size_t n_loc = inst.depots.size() + inst.stops.size() + 1;
    if (!inst.travel_matrix.empty()) {
        if (inst.travel_matrix.size() != n_loc)
            fail("DomainError", "travel matrix row count != depot+stop+school count");
        for (const auto& row : inst.travel_matrix)
            if (row.size() != n_loc)
                fail("DomainError", "travel matrix column count != depot+stop+school count");
    }

    // Reachability is a stated invariant, not an assumption.
    build_candidate_sets(inst);
}

namespace {

const json& require_field(const json& j, const char* key, const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) fail("ParseError", ctx + ": missing field \"" + key + "\"");
    return *it;
}

double require_number(const json& j, const char* key, const std::string& ctx) {
    const json& v = require_field(j, key, ctx);
    if (!v.is_number()) fail("ParseError", ctx + ": field \"" + key + "\" must be a number");
    return v.get<double>();
}

int require_int(const json& j, const char* key, const std::string& ctx) {
    const json& v = require_field(j, key, ctx);
    if (!v.is_number_integer()) fail("ParseError", ctx + ": field \"" + key + "\" must be an integer");
    return v.get<int>();
}

json site_to_json(const Site& s) {
    return json{{"id", s.id}, {"x", s.x}, {"y", s.y}};
}

std::vector<std::vector<double>> parse_matrix(const json& j, const char* key,
                                              const std::string& ctx) {
    if (!j.is_array()) fail("ParseError", ctx + ": \"" + key + "\" must be an array of rows");
    std::vector<std::vector<double>> m;
    for (std::size_t r = 0; r < j.size(); ++r) {
        const json& row = j[r];
        if (!row.is_array())
            fail("ParseError", ctx + ": \"" + key + "\" row " + std::to_string(r) + " is not an array");
        std::vector<double> out;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (!row[c].is_number())
                fail("ParseError", ctx + ": \"" + key + "\"[" + std::to_string(r) + "][" +
                                       std::to_string(c) + "] is not a number");
            out.push_back(row[c].get<double>());
        }
        m.push_back(std::move(out));
    }
    return m;
}

}  // namespace

std::string instance_to_json(const Instance& inst, const std::string& config_hash) {
    json j;
    j["school"] = site_to_json(inst.school);
    json deps = json::array();
    for (const auto& d : inst.depots) deps.push_back(site_to_json(d));
    j["depots"] = deps;
    json studs = json::array();
    for (const auto& s : inst.students)
        studs.push_back(json{{"id", s.id}, {"x", s.x}, {"y", s.y}, {"dist_school", s.dist_school}});
    j["students"] = studs;
    json stops = json::array();
    for (const auto& p : inst.stops) stops.push_back(json{{"id", p.id}, {"x", p.x}, {"y", p.y}});
    j["stops"] = stops;
    j["walk_limit"] = inst.walk_limit;
    j["stop_capacity"] = inst.stop_capacity;
    j["seed"] = inst.seed;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    if (!inst.walk_matrix.empty() || !inst.travel_matrix.empty()) {
        json m;
        if (!inst.walk_matrix.empty()) m["walk"] = inst.walk_matrix;
        if (!inst.travel_matrix.empty()) m["travel"] = inst.travel_matrix;
        j["matrices"] = m;
    }
    return j.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("ParseError", origin + ": " + e.what());
    }
    if (!j.is_object()) fail("ParseError", origin + ": top level must be an object");

    static const std::set<std::string> known = {"school", "depots",       "students",
                                                "stops",  "walk_limit",   "stop_capacity",
                                                "seed",   "config_hash",  "matrices"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            fail("ParseError", origin + ": unknown field \"" + it.key() + "\"");

    Instance inst;
    {
        const json& js = require_field(j, "school", origin);
        inst.school = Site{SiteKind::school, require_int(js, "id", origin + ".school"),
                           require_number(js, "x", origin + ".school"),
                           require_number(js, "y", origin + ".school")};
    }
    {
        const json& jd = require_field(j, "depots", origin);
        if (!jd.is_array() || jd.empty())
            fail("ParseError", origin + ": \"depots\" must be a non-empty array");
        for (std::size_t i = 0; i < jd.size(); ++i) {
            const std::string ctx = origin + ".depots[" + std::to_string(i) + "]";
            inst.depots.push_back(Site{SiteKind::depot, require_int(jd[i], "id", ctx),
                                       require_number(jd[i], "x", ctx),
                                       require_number(jd[i], "y", ctx)});
        }
    }
    {
        const json& ja = require_field(j, "students", origin);
        if (!ja.is_array()) fail("ParseError", origin + ": \"students\" must be an array");
        for (std::size_t i = 0; i < ja.size(); ++i) {
            const std::string ctx = origin + ".students[" + std::to_string(i) + "]";
            Student s;
            s.id = require_int(ja[i], "id", ctx);
            s.x = require_number(ja[i], "x", ctx);
            s.y = require_number(ja[i], "y", ctx);
            if (ja[i].contains("dist_school"))
                s.dist_school = require_number(ja[i], "dist_school", ctx);
            else
                s.dist_school = walk_distance({s.x, s.y}, {inst.school.x, inst.school.y});
            inst.students.push_back(s);
        }
    }
    {
        const json& jp = require_field(j, "stops", origin);
        if (!jp.is_array()) fail("ParseError", origin + ": \"stops\" must be an array");
        for (std::size_t i = 0; i < jp.size(); ++i) {
            const std::string ctx = origin + ".stops[" + std::to_string(i) + "]";
            inst.stops.push_back(Stop{require_int(jp[i], "id", ctx),
                                      require_number(jp[i], "x", ctx),
                                      require_number(jp[i], "y", ctx)});
        }
    }
    inst.walk_limit = require_number(j, "walk_limit", origin);
    {
        const json& v = require_field(j, "stop_capacity", origin);
        if (!v.is_number_integer())
            fail("ParseError", origin + ": field \"stop_capacity\" must be an integer");
        inst.stop_capacity = v.get<int>();
    }
    if (j.contains("seed")) inst.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("matrices")) {
        const json& m = j["matrices"];
        if (!m.is_object()) fail("ParseError", origin + ": \"matrices\" must be an object");
        if (m.contains("walk")) inst.walk_matrix = parse_matrix(m["walk"], "walk", origin);
        if (m.contains("travel")) inst.travel_matrix = parse_matrix(m["travel"], "travel", origin);
    }

    validate_instance(inst);
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str(), path);
}

void save_instance(const Instance& inst, const std::string& path,
                   const std::string& config_hash) {
    std::ofstream out(path);
    if (!out) fail("IoError", "cannot write " + path);
    out << instance_to_json(inst, config_hash);
}

}  // namespace sbrp
