#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pedflow/geometry.hpp"
#include "pedflow/metrics.hpp"
#include "pedflow/ntxy.hpp"

namespace pedflow {

struct AnalysisWindow {
    double t_start = 0.0;
    double t_end = 0.0;

    /// Throws WindowError unless t_start < t_end.
    static AnalysisWindow make(double t_start, double t_end);
    double length() const noexcept { return t_end - t_start; }
};

struct TrapGeometry {
    double area = 0.0;
    /// Extent along the travel axis. Metadata only: it cancels out of the
    /// space mean speed.
    std::optional<double> length;
    std::optional<Rect> bounds;

    /// Throws ConfigError unless area > 0, length (when given) > 0 and, when
    /// bounds are given, area matches the rectangle and length matches one
    /// of its sides.
    static TrapGeometry make(double area, std::optional<double> length = std::nullopt,
                             std::optional<Rect> bounds = std::nullopt);
    static TrapGeometry from_rect(const Rect& bounds, bool travel_along_y = true);
};

struct WindowSelection {
    std::vector<Trajectory> trajectories;  ///< rho >= 2 inside the window, ascending id
    std::size_t single_observation = 0;    ///< seen in the window exactly once
};

/// Clips each trajectory to the window and keeps those with at least two
/// in-window observations.
WindowSelection select_window_pedestrians(const NtxyDataset& dataset, const AnalysisWindow& window);

/// Arithmetic mean. Throws UndefinedMetricError on an empty list.
double performance_index(std::span<const double> per_pedestrian_pi);

struct FlowVariables {
    std::size_t n = 0;
    double flow_rate = 0.0;
    std::optional<double> time_mean_speed;
    std::optional<double> space_mean_speed;
    std::optional<double> area_module;
};

/// Flow rate, time/space mean speed and area module. `metrics` holds one
/// entry per counted pedestrian; stationary ones count towards n but are
/// left out of the speed means. `trap` may be omitted, leaving M unset.
FlowVariables traffic_flow_variables(std::span<const PedestrianMetrics> metrics, const AnalysisWindow& window,
                                     const std::optional<TrapGeometry>& trap);

/// Unit vector of the net displacement. Throws UndefinedMetricError when the
/// pedestrian ends where it started.
Vec2 moving_direction(const Trajectory& trajectory);

struct AggregateReport {
    AnalysisWindow window;
    PiWeights weights;
    VarianceMode variance_mode = VarianceMode::componentwise;

    std::size_t n = 0;
    std::size_t excluded_single_observation = 0;
    std::size_t excluded_undefined = 0;
    std::optional<double> pi;
    double flow_rate = 0.0;
    std::optional<double> time_mean_speed;
    std::optional<double> space_mean_speed;
    std::optional<double> area_module;
    std::map<PedestrianId, Vec2> directions;

    std::size_t excluded() const noexcept { return excluded_single_observation + excluded_undefined; }
};

struct Analysis {
    std::vector<PedestrianMetrics> pedestrians;  ///< ascending id, pi filled when defined
    AggregateReport report;
};

/// Whole pipeline for one window: select, per-pedestrian metrics, PI and flow variables.
Analysis analyze_window(const NtxyDataset& dataset, const AnalysisWindow& window,
                        const std::optional<TrapGeometry>& trap, const PiWeights& weights,
                        const MetricsConfig& config = {});

enum class Verdict { after_better, before_better, tie };
std::string_view to_string(Verdict v) noexcept;

struct DesignComparison {
    AggregateReport before;
    AggregateReport after;
    double delta_pi = 0.0;  ///< after - before
    double delta_flow_rate = 0.0;
    std::optional<double> delta_tms;
    std::optional<double> delta_sms;
    std::optional<double> delta_area_module;
    Verdict verdict = Verdict::tie;
};

/// Lower PI is the better design. Throws IncomparableReportsError when the
/// reports differ in weights, variance mode or window length, or either has
/// no PI.
DesignComparison compare_designs(const AggregateReport& before, const AggregateReport& after);

}  // namespace pedflow
