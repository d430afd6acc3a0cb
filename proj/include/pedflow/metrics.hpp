#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "pedflow/geometry.hpp"
#include "pedflow/ntxy.hpp"

namespace pedflow {

/// How the spread of walking displacements is reduced to the scalar that
/// feeds the uncomfortability index.
enum class VarianceMode {
    /// gamma = |(var_x, var_y)| / omega
    componentwise,
    /// gamma = (var_x + var_y) / omega; rotation invariant
    trace,
};

/// What pedestrian_metrics does with a pedestrian that never moved.
enum class UndefinedPolicy {
    /// Return metrics with gamma/lambda unset and `stationary` set.
    flag,
    /// Throw UndefinedMetricError.
    raise,
};

std::string_view to_string(VarianceMode mode) noexcept;
VarianceMode parse_variance_mode(std::string_view text);

struct MetricsConfig {
    VarianceMode variance_mode = VarianceMode::componentwise;
    UndefinedPolicy undefined_policy = UndefinedPolicy::flag;
};

struct PiWeights {
    double a = 1.0;  ///< weight on uncomfortability
    double b = 1.0;  ///< weight on delay

    /// Throws ConfigError unless a >= 0, b >= 0 and a + b > 0.
    static PiWeights make(double a, double b);

    friend bool operator==(const PiWeights&, const PiWeights&) = default;
};

struct StepKinematics {
    std::vector<Vec2> displacements;
    std::vector<double> distances;
};

struct PedestrianMetrics {
    PedestrianId pedestrian_id = 0;
    std::size_t observation_count = 0;
    double t_in = 0.0;
    double t_out = 0.0;

    double total_distance = 0.0;     ///< omega
    double average_speed = 0.0;      ///< psi = omega / (t_out - t_in)
    double straight_distance = 0.0;  ///< |x(t_out) - x(t_in)|
    Vec2 straight_displacement;      ///< x(t_out) - x(t_in)
    Vec2 mean_displacement;          ///< straight_displacement / (rho - 1)
    Vec2 displacement_variance;      ///< per-component population variance
    double variance_trace = 0.0;     ///< var_x + var_y

    std::optional<double> uncomfortability;  ///< gamma, unset when stationary
    std::optional<double> delay;             ///< lambda, unset when stationary
    std::optional<double> pi;                ///< filled in by callers that know the weights

    bool stationary = false;

    bool defined() const noexcept { return uncomfortability.has_value() && delay.has_value(); }
};

/// Per-step displacement vectors and their norms. Requires rho >= 2.
StepKinematics step_kinematics(const Trajectory& trajectory);

/// Every individual flow-performance quantity except PI. Requires rho >= 2
/// and uniformly spaced times.
PedestrianMetrics pedestrian_metrics(const Trajectory& trajectory, const MetricsConfig& config = {});

/// a * gamma + b * lambda. Throws UndefinedMetricError for a stationary pedestrian.
double individual_pi(const PedestrianMetrics& metrics, const PiWeights& weights);

}  // namespace pedflow
