#pragma once

// Deterministic force-based pedestrian simulator. Its only output contract
// is an NTXY dataset sampled at the scenario's frame interval.

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "pedflow/geometry.hpp"
#include "pedflow/ntxy.hpp"

namespace pedflow::sim {

enum class Edge { north, south, east, west };

std::string_view to_string(Edge e) noexcept;
Edge parse_edge(std::string_view text);

/// Force model constants. Defaults are conventional social-force magnitudes.
struct ForceParameters {
    double relaxation_time = 0.5;    ///< tau [s]
    double agent_strength = 2.0;     ///< A_rep [length/s^2]
    double agent_range = 0.3;        ///< B_rep [length]
    double obstacle_strength = 4.0;  ///< [length/s^2]
    double obstacle_range = 0.2;     ///< [length]
    double radius = 0.25;            ///< agent body radius [length]
    double speed_cap_factor = 1.3;   ///< |v| <= factor * desired speed
};

/// Agent injected at a fixed time in addition to the Poisson arrivals.
struct ScriptedSpawn {
    double time = 0.0;
    Vec2 position;
    double desired_speed = 1.0;
};

struct Scenario {
    Rect trap{{0.0, 0.0}, {4.0, 20.0}};
    Edge entry_edge = Edge::south;
    Edge exit_edge = Edge::north;
    double arrival_rate = 0.5;  ///< pedestrians per second
    double speed_min = 1.0;
    double speed_max = 1.5;
    std::vector<Rect> obstacles;
    std::vector<ScriptedSpawn> spawns;
    double duration = 60.0;
    double theta = 0.5;  ///< sampling interval
    double dt = 0.1;     ///< physics timestep
    std::uint64_t seed = 0;
    ForceParameters forces;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    /// Number of physics steps per sampling interval.
    std::int64_t steps_per_sample() const;
};

/// Parses "key = value" lines. trap_min, trap_max, duration and seed are
/// required; everything else has a default.
Scenario load_scenario(std::istream& in);
Scenario load_scenario(std::string_view text);

struct AgentState {
    std::uint64_t id = 0;  ///< spawn order, starting at 1
    Vec2 position;
    Vec2 velocity;
    double desired_speed = 1.0;
    Vec2 goal;
    double radius = 0.25;
};

/// Unit vector the agent currently wants to walk along: straight at its goal,
/// or at the next corner of a route around the obstacles when they block the
/// direct line.
Vec2 desired_direction(const AgentState& agent, const Scenario& scenario);

/// One physics step of length scenario.dt. Forces are evaluated on the
/// incoming state, then agents are integrated in ascending id order with
/// semi-implicit Euler. Agents that cross the exit edge are dropped.
std::vector<AgentState> step(const std::vector<AgentState>& agents, const Scenario& scenario);

struct SimulationResult {
    NtxyDataset dataset;
    std::size_t spawned = 0;
    std::size_t completed = 0;  ///< agents that left through the exit edge
    std::size_t frames = 0;     ///< sampling instants taken
};

SimulationResult simulate(const Scenario& scenario);
NtxyDataset run_to_ntxy(const Scenario& scenario);

}  // namespace pedflow::sim
