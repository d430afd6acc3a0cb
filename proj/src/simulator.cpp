#include "pedflow/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace pedflow::sim {

namespace {

// Routing treats each obstacle as a square grown by this fraction of the
// agent radius. Below 1/sqrt(2) so that an agent kept at distance >= radius
// from the obstacle never starts inside its own blocking shape.
constexpr double kBlockingInflation = 0.7;
// Route corners sit this far beyond radius from the obstacle.
constexpr double kCornerClearance = 0.1;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool opposite(Edge a, Edge b) {
    return (a == Edge::north && b == Edge::south) || (a == Edge::south && b == Edge::north) ||
           (a == Edge::east && b == Edge::west) || (a == Edge::west && b == Edge::east);
}

bool horizontal(Edge e) { return e == Edge::north || e == Edge::south; }

// Range of the coordinate that runs along the edge.
std::pair<double, double> edge_span(const Rect& trap, Edge e) {
    return horizontal(e) ? std::pair{trap.min.x, trap.max.x} : std::pair{trap.min.y, trap.max.y};
}

Vec2 point_on_edge(const Rect& trap, Edge e, double along) {
    switch (e) {
        case Edge::north: return {along, trap.max.y};
        case Edge::south: return {along, trap.min.y};
        case Edge::east: return {trap.max.x, along};
        case Edge::west: return {trap.min.x, along};
    }
    return {};
}

double along_edge(Edge e, Vec2 p) { return horizontal(e) ? p.x : p.y; }

Vec2 outward_normal(Edge e) {
    switch (e) {
        case Edge::north: return {0.0, 1.0};
        case Edge::south: return {0.0, -1.0};
        case Edge::east: return {1.0, 0.0};
        case Edge::west: return {-1.0, 0.0};
    }
    return {};
}

bool reached_exit(const Rect& trap, Edge e, Vec2 p) {
    switch (e) {
        case Edge::north: return p.y >= trap.max.y;
        case Edge::south: return p.y <= trap.min.y;
        case Edge::east: return p.x >= trap.max.x;
        case Edge::west: return p.x <= trap.min.x;
    }
    return false;
}

// Lateral draw range: the edge span inset by the body radius.
std::pair<double, double> spawn_span(const Rect& trap, Edge e, double radius) {
    auto [lo, hi] = edge_span(trap, e);
    if (hi - lo > 2.0 * radius) return {lo + radius, hi - radius};
    const double mid = 0.5 * (lo + hi);
    return {mid, mid};
}

// True when the open segment a-b passes through the interior of `r`.
bool segment_hits(Vec2 a, Vec2 b, const Rect& r) {
    constexpr double eps = 1e-9;
    const Rect inner{{r.min.x + eps, r.min.y + eps}, {r.max.x - eps, r.max.y - eps}};
    double t0 = 0.0;
    double t1 = 1.0;
    const Vec2 d = b - a;
    const double p[4] = {-d.x, d.x, -d.y, d.y};
    const double q[4] = {a.x - inner.min.x, inner.max.x - a.x, a.y - inner.min.y, inner.max.y - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] <= 0.0) return false;
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
        if (t0 >= t1) return false;
    }
    return t0 < t1;
}

bool visible(Vec2 a, Vec2 b, const std::vector<Rect>& blockers) {
    return std::none_of(blockers.begin(), blockers.end(), [&](const Rect& r) { return segment_hits(a, b, r); });
}

Vec2 unit_or(Vec2 v, Vec2 fallback) {
    const double len = norm(v);
    return len > 1e-12 ? v / len : fallback;
}

// Outward unit normal from `r` at p, for p inside or outside the rectangle.
Vec2 obstacle_normal(const Rect& r, Vec2 p, double& distance) {
    const Vec2 cp = r.closest_point(p);
    const Vec2 diff = p - cp;
    distance = norm(diff);
    if (distance > 0.0) return diff / distance;
    const double gaps[4] = {p.x - r.min.x, r.max.x - p.x, p.y - r.min.y, r.max.y - p.y};
    const Vec2 normals[4] = {{-1.0, 0.0}, {1.0, 0.0}, {0.0, -1.0}, {0.0, 1.0}};
    const auto i = std::min_element(gaps, gaps + 4) - gaps;
    distance = -gaps[i];
    return normals[i];
}

struct PendingSpawn {
    std::int64_t tick = 0;
    Vec2 position;
    Vec2 goal;
    double desired_speed = 1.0;
};

std::vector<PendingSpawn> plan_spawns(const Scenario& sc) {
    const double r = sc.forces.radius;
    std::vector<PendingSpawn> pending;
    auto tick_of = [&](double t) { return static_cast<std::int64_t>(std::ceil(t / sc.dt - 1e-9)); };
    auto [exit_lo, exit_hi] = spawn_span(sc.trap, sc.exit_edge, r);

    for (const ScriptedSpawn& s : sc.spawns) {
        const double lateral = std::clamp(along_edge(sc.exit_edge, s.position), exit_lo, exit_hi);
        pending.push_back({tick_of(s.time), s.position, point_on_edge(sc.trap, sc.exit_edge, lateral),
                           s.desired_speed});
    }

    // Draw order is fixed: every arrival time first, then per-agent attributes.
    std::mt19937_64 rng(sc.seed);
    std::vector<double> arrivals;
    if (sc.arrival_rate > 0.0) {
        double t = 0.0;
        while (true) {
            t += -std::log1p(-uniform01(rng)) / sc.arrival_rate;
            if (t >= sc.duration) break;
            arrivals.push_back(t);
        }
    }
    auto [entry_lo, entry_hi] = spawn_span(sc.trap, sc.entry_edge, r);
    const bool straight_lanes = opposite(sc.entry_edge, sc.exit_edge);
    for (double t : arrivals) {
        const double lateral = entry_lo + uniform01(rng) * (entry_hi - entry_lo);
        const double speed = sc.speed_min + uniform01(rng) * (sc.speed_max - sc.speed_min);
        const double goal_lateral =
            straight_lanes ? std::clamp(lateral, exit_lo, exit_hi) : exit_lo + uniform01(rng) * (exit_hi - exit_lo);
        pending.push_back({tick_of(t), point_on_edge(sc.trap, sc.entry_edge, lateral),
                           point_on_edge(sc.trap, sc.exit_edge, goal_lateral), speed});
    }
    std::stable_sort(pending.begin(), pending.end(),
                     [](const PendingSpawn& a, const PendingSpawn& b) { return a.tick < b.tick; });
    return pending;
}

double sample_time(std::int64_t sample_index, double theta) {
    return std::round(static_cast<double>(sample_index) * theta * 1e9) / 1e9;
}

}  // namespace

Vec2 desired_direction(const AgentState& agent, const Scenario& sc) {
    const Vec2 fallback = outward_normal(sc.exit_edge);
    const Vec2 to_goal = agent.goal - agent.position;
    if (sc.obstacles.empty()) return unit_or(to_goal, fallback);

    std::vector<Rect> blockers;
    blockers.reserve(sc.obstacles.size());
    for (const Rect& o : sc.obstacles) blockers.push_back(o.inflated(kBlockingInflation * agent.radius));
    if (visible(agent.position, agent.goal, blockers)) return unit_or(to_goal, fallback);

    // Shortest route over obstacle corners (visibility graph, Dijkstra).
    const Rect inner_trap = sc.trap.inflated(-agent.radius);
    std::vector<Vec2> nodes{agent.position};
    for (const Rect& o : sc.obstacles) {
        const Rect g = o.inflated(agent.radius + kCornerClearance);
        for (Vec2 c : {g.min, Vec2{g.max.x, g.min.y}, g.max, Vec2{g.min.x, g.max.y}}) {
            const bool inside_blocker =
                std::any_of(blockers.begin(), blockers.end(), [&](const Rect& b) { return b.contains(c); });
            if (inner_trap.contains(c) && !inside_blocker) nodes.push_back(c);
        }
    }
    nodes.push_back(agent.goal);
    const std::size_t goal = nodes.size() - 1;

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(nodes.size(), inf);
    std::vector<std::size_t> prev(nodes.size(), 0);
    std::vector<bool> done(nodes.size(), false);
    dist[0] = 0.0;
    for (std::size_t iter = 0; iter < nodes.size(); ++iter) {
        std::size_t u = nodes.size();
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!done[i] && dist[i] < inf && (u == nodes.size() || dist[i] < dist[u])) u = i;
        }
        if (u == nodes.size() || u == goal) break;
        done[u] = true;
        for (std::size_t v = 1; v < nodes.size(); ++v) {
            if (done[v] || !visible(nodes[u], nodes[v], blockers)) continue;
            const double alt = dist[u] + norm(nodes[v] - nodes[u]);
            if (alt < dist[v]) {
                dist[v] = alt;
                prev[v] = u;
            }
        }
    }
    if (!(dist[goal] < inf)) return unit_or(to_goal, fallback);

    std::size_t hop = goal;
    while (prev[hop] != 0) hop = prev[hop];
    return unit_or(nodes[hop] - agent.position, unit_or(to_goal, fallback));
}

std::vector<AgentState> step(const std::vector<AgentState>& agents, const Scenario& sc) {
    const ForceParameters& fp = sc.forces;
    std::vector<std::size_t> order(agents.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return agents[a].id < agents[b].id; });

    std::vector<Vec2> accel(agents.size());
    for (std::size_t i : order) {
        const AgentState& a = agents[i];
        Vec2 acc = (a.desired_speed * desired_direction(a, sc) - a.velocity) / fp.relaxation_time;
        for (std::size_t j : order) {
            if (j == i) continue;
            const Vec2 d = a.position - agents[j].position;
            const double dist = norm(d);
            if (dist == 0.0) continue;
            acc += fp.agent_strength * std::exp((a.radius + agents[j].radius - dist) / fp.agent_range) * (d / dist);
        }
        for (const Rect& o : sc.obstacles) {
            double dist = 0.0;
            const Vec2 n = obstacle_normal(o, a.position, dist);
            acc += fp.obstacle_strength * std::exp((a.radius - dist) / fp.obstacle_range) * n;
        }
        accel[i] = acc;
    }

    std::vector<AgentState> next;
    next.reserve(agents.size());
    for (std::size_t i : order) {
        AgentState a = agents[i];
        a.velocity += accel[i] * sc.dt;
        const double cap = fp.speed_cap_factor * a.desired_speed;
        if (const double speed = norm(a.velocity); speed > cap) a.velocity *= cap / speed;
        a.position += a.velocity * sc.dt;

        if (reached_exit(sc.trap, sc.exit_edge, a.position)) continue;

        // Non-exit trap edges act as hard walls.
        const Vec2 clamped{std::clamp(a.position.x, sc.trap.min.x, sc.trap.max.x),
                           std::clamp(a.position.y, sc.trap.min.y, sc.trap.max.y)};
        if (clamped.x != a.position.x) a.velocity.x = 0.0;
        if (clamped.y != a.position.y) a.velocity.y = 0.0;
        a.position = clamped;

        // Obstacles are solid: push the body back out to contact distance.
        for (const Rect& o : sc.obstacles) {
            double dist = 0.0;
            const Vec2 n = obstacle_normal(o, a.position, dist);
            if (dist < a.radius) {
                a.position += (a.radius - dist) * n;
                const double into = dot(a.velocity, n);
                if (into < 0.0) a.velocity -= into * n;
            }
        }
        next.push_back(a);
    }
    return next;
}

SimulationResult simulate(const Scenario& sc) {
    sc.validate();
    SimulationResult result;
    result.dataset.frame_interval = sc.theta;
    result.dataset.source_label = "simulator seed=" + std::to_string(sc.seed);

    const std::vector<PendingSpawn> pending = plan_spawns(sc);
    const std::int64_t stride = sc.steps_per_sample();
    const auto last_tick = static_cast<std::int64_t>(std::floor(sc.duration / sc.dt + 1e-9));

    std::vector<AgentState> agents;
    std::vector<PedestrianId> ntxy_ids;  // indexed by agent id - 1; 0 = not yet sampled
    PedestrianId next_ntxy_id = 1;
    std::size_t next_spawn = 0;

    for (std::int64_t tick = 0; tick <= last_tick; ++tick) {
        while (next_spawn < pending.size() && pending[next_spawn].tick <= tick) {
            const PendingSpawn& p = pending[next_spawn++];
            AgentState a;
            a.id = ++result.spawned;
            a.position = p.position;
            a.goal = p.goal;
            a.desired_speed = p.desired_speed;
            a.radius = sc.forces.radius;
            a.velocity = a.desired_speed * desired_direction(a, sc);
            agents.push_back(a);
            ntxy_ids.push_back(0);
        }

        if (tick % stride == 0) {
            const double t = sample_time(tick / stride, sc.theta);
            ++result.frames;
            for (const AgentState& a : agents) {
                PedestrianId& pid = ntxy_ids[a.id - 1];
                if (pid == 0) pid = next_ntxy_id++;
                Trajectory& traj = result.dataset.trajectories[pid];
                traj.pedestrian_id = pid;
                traj.points.push_back({t, a.position});
            }
        }

        if (tick == last_tick) break;
        const std::size_t before = agents.size();
        agents = step(agents, sc);
        result.completed += before - agents.size();
    }
    return result;
}

NtxyDataset run_to_ntxy(const Scenario& scenario) { return simulate(scenario).dataset; }

}  // namespace pedflow::sim
