#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <string>

#include "pedflow/errors.hpp"
#include "pedflow/simulator.hpp"

namespace pedflow::sim {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(const std::string& key, std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& key, std::string_view text, std::size_t expected) {
    std::vector<double> values;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        values.push_back(parse_number(key, text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (values.size() != expected) {
        throw ConfigError(key, "expected " + std::to_string(expected) + " comma-separated numbers, got " +
                                   std::to_string(values.size()));
    }
    return values;
}

Vec2 parse_pair(const std::string& key, std::string_view text) {
    const auto v = parse_list(key, text, 2);
    return {v[0], v[1]};
}

bool is_multiple(double value, double unit) {
    const double k = std::round(value / unit);
    return k >= 1.0 && std::abs(value - k * unit) <= kTimeTolerance;
}

void require_positive(const char* key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be > 0");
}

}  // namespace

std::string_view to_string(Edge e) noexcept {
    switch (e) {
        case Edge::north: return "north";
        case Edge::south: return "south";
        case Edge::east: return "east";
        case Edge::west: return "west";
    }
    return "north";
}

Edge parse_edge(std::string_view text) {
    if (text == "north") return Edge::north;
    if (text == "south") return Edge::south;
    if (text == "east") return Edge::east;
    if (text == "west") return Edge::west;
    throw ConfigError("edge", "expected north, south, east or west, got '" + std::string(text) + "'");
}

std::int64_t Scenario::steps_per_sample() const { return static_cast<std::int64_t>(std::llround(theta / dt)); }

void Scenario::validate() const {
    if (!trap.valid()) throw ConfigError("trap_max", "trap_max must exceed trap_min in both coordinates");
    if (entry_edge == exit_edge) throw ConfigError("exit_edge", "must differ from entry_edge");
    if (!std::isfinite(arrival_rate) || arrival_rate < 0.0) throw ConfigError("arrival_rate", "must be >= 0");
    require_positive("speed_min", speed_min);
    if (!std::isfinite(speed_max) || speed_max < speed_min) throw ConfigError("speed_max", "must be >= speed_min");
    require_positive("duration", duration);
    require_positive("theta", theta);
    require_positive("dt", dt);
    if (dt > theta + kTimeTolerance) throw ConfigError("dt", "must not exceed theta");
    if (!is_multiple(theta, dt)) throw ConfigError("dt", "theta must be an integer multiple of dt");

    require_positive("tau", forces.relaxation_time);
    require_positive("agent_strength", forces.agent_strength);
    require_positive("agent_range", forces.agent_range);
    require_positive("obstacle_strength", forces.obstacle_strength);
    require_positive("obstacle_range", forces.obstacle_range);
    require_positive("radius", forces.radius);
    if (!(forces.speed_cap_factor >= 1.0)) throw ConfigError("speed_cap", "must be >= 1");

    for (const Rect& o : obstacles) {
        if (!o.valid()) throw ConfigError("obstacle", "min corner must be below and left of max corner");
        if (!trap.contains(o)) throw ConfigError("obstacle", "obstacle lies outside the trap");
    }
    for (const ScriptedSpawn& s : spawns) {
        if (!(s.time >= 0.0 && s.time <= duration)) throw ConfigError("spawn", "time must lie in [0, duration]");
        if (!trap.contains(s.position)) throw ConfigError("spawn", "position lies outside the trap");
        require_positive("spawn", s.desired_speed);
    }
}

Scenario load_scenario(std::istream& in) {
    Scenario sc;
    sc.obstacles.clear();
    std::set<std::string> seen;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const bool repeatable = key == "obstacle" || key == "spawn";
        if (!repeatable && !seen.insert(key).second) throw ConfigError(key, "duplicate key");

        if (key == "trap_min") {
            sc.trap.min = parse_pair(key, value);
        } else if (key == "trap_max") {
            sc.trap.max = parse_pair(key, value);
        } else if (key == "entry_edge" || key == "exit_edge") {
            Edge e{};
            try {
                e = parse_edge(value);
            } catch (const ConfigError&) {
                throw ConfigError(key, "expected north, south, east or west, got '" + std::string(value) + "'");
            }
            (key == "entry_edge" ? sc.entry_edge : sc.exit_edge) = e;
        } else if (key == "arrival_rate") {
            sc.arrival_rate = parse_number(key, value);
        } else if (key == "speed_min") {
            sc.speed_min = parse_number(key, value);
        } else if (key == "speed_max") {
            sc.speed_max = parse_number(key, value);
        } else if (key == "duration") {
            sc.duration = parse_number(key, value);
        } else if (key == "theta") {
            sc.theta = parse_number(key, value);
        } else if (key == "dt") {
            sc.dt = parse_number(key, value);
        } else if (key == "seed") {
            std::uint64_t seed = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), seed);
            if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
                throw ConfigError(key, "expected a non-negative 64-bit integer, got '" + std::string(value) + "'");
            }
            sc.seed = seed;
        } else if (key == "obstacle") {
            const auto v = parse_list(key, value, 4);
            sc.obstacles.push_back({{v[0], v[1]}, {v[2], v[3]}});
        } else if (key == "spawn") {
            const auto v = parse_list(key, value, 4);
            sc.spawns.push_back({v[0], {v[1], v[2]}, v[3]});
        } else if (key == "tau") {
            sc.forces.relaxation_time = parse_number(key, value);
        } else if (key == "agent_strength") {
            sc.forces.agent_strength = parse_number(key, value);
        } else if (key == "agent_range") {
            sc.forces.agent_range = parse_number(key, value);
        } else if (key == "obstacle_strength") {
            sc.forces.obstacle_strength = parse_number(key, value);
        } else if (key == "obstacle_range") {
            sc.forces.obstacle_range = parse_number(key, value);
        } else if (key == "radius") {
            sc.forces.radius = parse_number(key, value);
        } else if (key == "speed_cap") {
            sc.forces.speed_cap_factor = parse_number(key, value);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    for (const char* required : {"trap_min", "trap_max", "duration", "seed"}) {
        if (!seen.contains(required)) throw ConfigError(required, "required key missing");
    }
    sc.validate();
    return sc;
}

Scenario load_scenario(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_scenario(in);
}

}  // namespace pedflow::sim
