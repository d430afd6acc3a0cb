#include "pedflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pedflow/errors.hpp"

namespace pedflow {

std::string_view to_string(VarianceMode mode) noexcept {
    switch (mode) {
        case VarianceMode::componentwise: return "componentwise";
        case VarianceMode::trace: return "trace";
    }
    return "componentwise";
}

VarianceMode parse_variance_mode(std::string_view text) {
    if (text == "componentwise") return VarianceMode::componentwise;
    if (text == "trace") return VarianceMode::trace;
    throw ConfigError("variance_mode", "expected componentwise or trace, got '" + std::string(text) + "'");
}

PiWeights PiWeights::make(double a, double b) {
    if (!std::isfinite(a) || a < 0.0) throw ConfigError("weight_a", "must be finite and >= 0");
    if (!std::isfinite(b) || b < 0.0) throw ConfigError("weight_b", "must be finite and >= 0");
    if (!(a + b > 0.0)) throw ConfigError("weights", "a + b must be > 0");
    return {a, b};
}

StepKinematics step_kinematics(const Trajectory& trajectory) {
    const auto& pts = trajectory.points;
    if (pts.size() < 2) {
        throw InsufficientObservationsError("pedestrian " + std::to_string(trajectory.pedestrian_id) +
                                            ": need at least 2 observations, got " + std::to_string(pts.size()));
    }
    StepKinematics k;
    k.displacements.reserve(pts.size() - 1);
    k.distances.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Vec2 d = pts[i + 1].position - pts[i].position;
        k.displacements.push_back(d);
        k.distances.push_back(norm(d));
    }
    return k;
}

PedestrianMetrics pedestrian_metrics(const Trajectory& trajectory, const MetricsConfig& config) {
    const StepKinematics steps = step_kinematics(trajectory);
    const auto& pts = trajectory.points;
    const std::size_t rho = pts.size();
    const double samples = static_cast<double>(rho - 1);

    PedestrianMetrics m;
    m.pedestrian_id = trajectory.pedestrian_id;
    m.observation_count = rho;
    m.t_in = trajectory.first_time();
    m.t_out = trajectory.last_time();

    const double duration = m.t_out - m.t_in;
    if (!(duration > kTimeTolerance)) {
        throw CadenceError("pedestrian " + std::to_string(m.pedestrian_id) + ": last time must exceed first time");
    }
    const double step = duration / samples;
    for (std::size_t i = 1; i < rho; ++i) {
        if (std::abs((pts[i].time - pts[i - 1].time) - step) > kTimeTolerance) {
            throw CadenceError("pedestrian " + std::to_string(m.pedestrian_id) + ": non-uniform time step at t=" +
                               format_time(pts[i].time));
        }
    }

    for (double d : steps.distances) m.total_distance += d;
    m.average_speed = m.total_distance / duration;
    m.straight_displacement = pts.back().position - pts.front().position;
    m.straight_distance = norm(m.straight_displacement);
    m.mean_displacement = m.straight_displacement / samples;

    Vec2 sq;
    for (const Vec2& d : steps.displacements) {
        const Vec2 dev = d - m.mean_displacement;
        sq += Vec2{dev.x * dev.x, dev.y * dev.y};
    }
    m.displacement_variance = sq / samples;
    m.variance_trace = m.displacement_variance.x + m.displacement_variance.y;

    if (m.total_distance == 0.0) {
        m.stationary = true;
        if (config.undefined_policy == UndefinedPolicy::raise) {
            throw UndefinedMetricError("pedestrian " + std::to_string(m.pedestrian_id) +
                                       " is stationary; uncomfortability and delay are undefined");
        }
        return m;
    }

    const double spread = config.variance_mode == VarianceMode::componentwise ? norm(m.displacement_variance)
                                                                               : m.variance_trace;
    m.uncomfortability = spread / m.total_distance;
    // omega >= Omega holds exactly in real arithmetic; rounding can flip the sign on straight paths.
    const double detour = std::max(0.0, m.total_distance - m.straight_distance);
    m.delay = detour / (m.total_distance * m.average_speed);
    return m;
}

double individual_pi(const PedestrianMetrics& metrics, const PiWeights& weights) {
    if (!metrics.defined()) {
        throw UndefinedMetricError("pedestrian " + std::to_string(metrics.pedestrian_id) +
                                   ": performance index undefined (stationary pedestrian)");
    }
    return weights.a * *metrics.uncomfortability + weights.b * *metrics.delay;
}

}  // namespace pedflow
