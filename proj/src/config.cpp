#include "sbrp/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sbrp/errors.hpp"

namespace sbrp {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail("InvalidConfig", "key " + key + ": \"" + v + "\" is not a number");
    }
}

long long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail("InvalidConfig", "key " + key + ": \"" + v + "\" is not an integer");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail("InvalidConfig", "key " + key + ": \"" + v + "\" is not a boolean");
}

std::vector<double> to_grid(const std::string& key, const std::string& v) {
    std::vector<double> grid;
    std::istringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) fail("InvalidConfig", "key " + key + ": empty grid entry");
        grid.push_back(to_double(key, item));
    }
    if (grid.empty()) fail("InvalidConfig", "key " + key + ": empty grid");
    return grid;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "instance.walk_limit") cfg.walk_limit = to_double(key, value);
    else if (key == "instance.stop_capacity") cfg.stop_capacity = static_cast<int>(to_int(key, value));
    else if (key == "instance.stop_spacing") cfg.stop_spacing = to_double(key, value);
    else if (key == "ridership.mean") cfg.mean_ridership = to_double(key, value);
    else if (key == "ridership.g") cfg.g_kind = g_kind_from_string(value);
    else if (key == "optout.a") cfg.optout.a = to_double(key, value);
    else if (key == "optout.b") cfg.optout.b = to_double(key, value);
    else if (key == "optout.c") cfg.optout.c = to_double(key, value);
    else if (key == "optout.use_anchors") cfg.optout_use_anchors = to_bool(key, value);
    else if (key == "optout.anchors.d_close") cfg.anchors.d_close = to_double(key, value);
    else if (key == "optout.anchors.p_high") cfg.anchors.p_high = to_double(key, value);
    else if (key == "optout.anchors.tau_high") cfg.anchors.tau_high = to_double(key, value);
    else if (key == "optout.anchors.d_far") cfg.anchors.d_far = to_double(key, value);
    else if (key == "optout.anchors.p_low") cfg.anchors.p_low = to_double(key, value);
    else if (key == "optout.anchors.tau_low") cfg.anchors.tau_low = to_double(key, value);
    else if (key == "optout.anchors.epsilon0") cfg.anchors.epsilon0 = to_double(key, value);
    else if (key == "routing.bus_capacity") cfg.bus_capacity = static_cast<int>(to_int(key, value));
    else if (key == "routing.alpha") cfg.alpha = to_double(key, value);
    else if (key == "routing.v_plus") cfg.v_plus = static_cast<int>(to_int(key, value));
    else if (key == "routing.max_ride_time") cfg.max_ride_time = to_double(key, value);
    else if (key == "routing.bus_speed_mph") cfg.travel.bus_speed_mph = to_double(key, value);
    else if (key == "routing.stop_dwell_min") cfg.travel.stop_dwell_min = to_double(key, value);
    else if (key == "routing.board_min_per_student")
        cfg.travel.board_min_per_student = to_double(key, value);
    else if (key == "cost.bus_cost") cfg.cost.bus_cost = to_double(key, value);
    else if (key == "cost.time_cost") cfg.cost.time_cost = to_double(key, value);
    else if (key == "sweep.tau_grid") cfg.tau_grid = to_grid(key, value);
    else if (key == "sweep.replicas") cfg.replicas = static_cast<int>(to_int(key, value));
    else if (key == "sweep.base_seed")
        cfg.base_seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "sweep.threads") cfg.threads = static_cast<int>(to_int(key, value));
    else fail("InvalidConfig", "unknown config key \"" + key + "\"");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail("InvalidConfig",
                 origin + ":" + std::to_string(lineno) + ": expected key = value");
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IoError", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

OptOutModel resolve_optout(const RunConfig& cfg) {
    if (cfg.optout_use_anchors) return calibrate(cfg.anchors);
    return cfg.optout;
}

ChanceParams resolve_chance(const RunConfig& cfg) {
    return make_chance_params(cfg.bus_capacity, cfg.alpha, cfg.v_plus);
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.walk_limit > 0.0)) fail("InvalidConfig", "instance.walk_limit must be > 0");
    if (cfg.stop_capacity < 1) fail("InvalidConfig", "instance.stop_capacity must be >= 1");
    if (cfg.stop_spacing < 0.0) fail("InvalidConfig", "instance.stop_spacing must be >= 0");
    if (!(cfg.mean_ridership > 0.0 && cfg.mean_ridership < 1.0))
        fail("InvalidConfig", "ridership.mean must lie strictly in (0,1)");
    const OptOutModel m = resolve_optout(cfg);
    if (!(m.a > 0.0)) fail("InvalidConfig", "optout.a must be > 0");
    if (!(m.b < 0.0)) fail("InvalidConfig", "optout.b must be < 0");
    if (!(m.c > 0.0)) fail("InvalidConfig", "optout.c must be > 0");
    resolve_chance(cfg);  // validates capacity, alpha, v_plus
    if (!(cfg.max_ride_time > 0.0)) fail("InvalidConfig", "routing.max_ride_time must be > 0");
    if (!(cfg.travel.bus_speed_mph > 0.0))
        fail("InvalidConfig", "routing.bus_speed_mph must be > 0");
    if (cfg.travel.stop_dwell_min < 0.0)
        fail("InvalidConfig", "routing.stop_dwell_min must be >= 0");
    if (cfg.travel.board_min_per_student < 0.0)
        fail("InvalidConfig", "routing.board_min_per_student must be >= 0");
    if (!(cfg.cost.bus_cost > 0.0)) fail("InvalidConfig", "cost.bus_cost must be > 0");
    if (cfg.cost.time_cost < 0.0) fail("InvalidConfig", "cost.time_cost must be >= 0");
    if (cfg.tau_grid.empty()) fail("InvalidConfig", "sweep.tau_grid must be non-empty");
    for (std::size_t i = 0; i < cfg.tau_grid.size(); ++i) {
        if (cfg.tau_grid[i] < 0.0) fail("InvalidConfig", "sweep.tau_grid entries must be >= 0");
        if (i > 0 && !(cfg.tau_grid[i - 1] < cfg.tau_grid[i]))
            fail("InvalidConfig", "sweep.tau_grid must be strictly ascending");
    }
    if (cfg.replicas < 1) fail("InvalidConfig", "sweep.replicas must be >= 1");
    if (cfg.threads < 1) fail("InvalidConfig", "sweep.threads must be >= 1");
}

std::string canonical_config(const RunConfig& cfg) {
    std::string out;
    out += "cost.bus_cost=" + num(cfg.cost.bus_cost) + "\n";
    out += "cost.time_cost=" + num(cfg.cost.time_cost) + "\n";
    out += "instance.stop_capacity=" + std::to_string(cfg.stop_capacity) + "\n";
    out += "instance.stop_spacing=" + num(cfg.stop_spacing) + "\n";
    out += "instance.walk_limit=" + num(cfg.walk_limit) + "\n";
    if (cfg.optout_use_anchors) {
        out += "optout.anchors.d_close=" + num(cfg.anchors.d_close) + "\n";
        out += "optout.anchors.d_far=" + num(cfg.anchors.d_far) + "\n";
        out += "optout.anchors.epsilon0=" + num(cfg.anchors.epsilon0) + "\n";
        out += "optout.anchors.p_high=" + num(cfg.anchors.p_high) + "\n";
        out += "optout.anchors.p_low=" + num(cfg.anchors.p_low) + "\n";
        out += "optout.anchors.tau_high=" + num(cfg.anchors.tau_high) + "\n";
        out += "optout.anchors.tau_low=" + num(cfg.anchors.tau_low) + "\n";
        out += "optout.use_anchors=true\n";
    } else {
        out += "optout.a=" + num(cfg.optout.a) + "\n";
        out += "optout.b=" + num(cfg.optout.b) + "\n";
        out += "optout.c=" + num(cfg.optout.c) + "\n";
        out += "optout.use_anchors=false\n";
    }
    out += "ridership.g=" + to_string(cfg.g_kind) + "\n";
    out += "ridership.mean=" + num(cfg.mean_ridership) + "\n";
    out += "routing.alpha=" + num(cfg.alpha) + "\n";
    out += "routing.board_min_per_student=" + num(cfg.travel.board_min_per_student) + "\n";
    out += "routing.bus_capacity=" + std::to_string(cfg.bus_capacity) + "\n";
    out += "routing.bus_speed_mph=" + num(cfg.travel.bus_speed_mph) + "\n";
    out += "routing.max_ride_time=" + num(cfg.max_ride_time) + "\n";
    out += "routing.stop_dwell_min=" + num(cfg.travel.stop_dwell_min) + "\n";
    out += "routing.v_plus=" + std::to_string(cfg.v_plus) + "\n";
    out += "sweep.base_seed=" + std::to_string(cfg.base_seed) + "\n";
    out += "sweep.replicas=" + std::to_string(cfg.replicas) + "\n";
    out += "sweep.tau_grid=";
    for (std::size_t i = 0; i < cfg.tau_grid.size(); ++i) {
        if (i) out += ",";
        out += num(cfg.tau_grid[i]);
    }
    out += "\n";
    return out;
}

std::string config_hash(const RunConfig& cfg) {
    const std::string canon = canonical_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sbrp
