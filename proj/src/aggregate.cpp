#include "pedflow/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pedflow/errors.hpp"

namespace pedflow {

namespace {

bool close_rel(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

std::optional<double> delta(const std::optional<double>& before, const std::optional<double>& after) {
    if (before && after) return *after - *before;
    return std::nullopt;
}

}  // namespace

AnalysisWindow AnalysisWindow::make(double t_start, double t_end) {
    if (!std::isfinite(t_start) || !std::isfinite(t_end) || !(t_start < t_end)) {
        throw WindowError("invalid window [" + format_time(t_start) + ", " + format_time(t_end) + "]");
    }
    return {t_start, t_end};
}

TrapGeometry TrapGeometry::make(double area, std::optional<double> length, std::optional<Rect> bounds) {
    if (!std::isfinite(area) || area <= 0.0) throw ConfigError("area", "must be > 0");
    if (length && (!std::isfinite(*length) || *length <= 0.0)) throw ConfigError("length", "must be > 0");
    if (bounds) {
        if (!bounds->valid()) throw ConfigError("bounds", "rectangle must have min < max");
        if (!close_rel(area, bounds->area(), 1e-6)) throw ConfigError("area", "inconsistent with trap rectangle");
        if (length && !close_rel(*length, bounds->width(), 1e-6) && !close_rel(*length, bounds->height(), 1e-6)) {
            throw ConfigError("length", "matches neither side of the trap rectangle");
        }
    }
    return {area, length, bounds};
}

TrapGeometry TrapGeometry::from_rect(const Rect& bounds, bool travel_along_y) {
    return make(bounds.area(), travel_along_y ? bounds.height() : bounds.width(), bounds);
}

WindowSelection select_window_pedestrians(const NtxyDataset& dataset, const AnalysisWindow& window) {
    WindowSelection sel;
    const NtxyDataset clipped = clip_window(dataset, window.t_start, window.t_end);
    for (const auto& [id, traj] : clipped.trajectories) {
        if (traj.points.size() >= 2) {
            sel.trajectories.push_back(traj);
        } else {
            ++sel.single_observation;
        }
    }
    return sel;
}

double performance_index(std::span<const double> per_pedestrian_pi) {
    if (per_pedestrian_pi.empty()) throw UndefinedMetricError("performance index undefined: no pedestrians");
    double sum = 0.0;
    for (double v : per_pedestrian_pi) sum += v;
    return sum / static_cast<double>(per_pedestrian_pi.size());
}

FlowVariables traffic_flow_variables(std::span<const PedestrianMetrics> metrics, const AnalysisWindow& window,
                                     const std::optional<TrapGeometry>& trap) {
    FlowVariables fv;
    fv.n = metrics.size();
    fv.flow_rate = static_cast<double>(fv.n) / window.length();
    if (fv.n == 0) return fv;
    if (trap) fv.area_module = trap->area / static_cast<double>(fv.n);

    std::size_t moving = 0;
    double speed_sum = 0.0;
    double inverse_sum = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    double highest = 0.0;
    for (const auto& m : metrics) {
        if (m.stationary || !(m.average_speed > 0.0)) continue;
        ++moving;
        speed_sum += m.average_speed;
        inverse_sum += 1.0 / m.average_speed;
        lowest = std::min(lowest, m.average_speed);
        highest = std::max(highest, m.average_speed);
    }
    if (moving > 0) {
        if (lowest == highest) {
            // Both means are exactly the common speed; skip the rounding of the sums.
            fv.time_mean_speed = lowest;
            fv.space_mean_speed = lowest;
        } else {
            // Rounding must not break the harmonic <= arithmetic ordering.
            const double tms = std::clamp(speed_sum / static_cast<double>(moving), lowest, highest);
            fv.time_mean_speed = tms;
            fv.space_mean_speed = std::clamp(static_cast<double>(moving) / inverse_sum, lowest, tms);
        }
    }
    return fv;
}

Vec2 moving_direction(const Trajectory& trajectory) {
    if (trajectory.points.empty()) {
        throw InsufficientObservationsError("pedestrian " + std::to_string(trajectory.pedestrian_id) +
                                            " has no observations");
    }
    const Vec2 net = trajectory.points.back().position - trajectory.points.front().position;
    const double len = norm(net);
    if (len == 0.0) {
        throw UndefinedMetricError("pedestrian " + std::to_string(trajectory.pedestrian_id) +
                                   ": zero net displacement, direction undefined");
    }
    return net / len;
}

Analysis analyze_window(const NtxyDataset& dataset, const AnalysisWindow& window,
                        const std::optional<TrapGeometry>& trap, const PiWeights& weights,
                        const MetricsConfig& config) {
    Analysis out;
    AggregateReport& r = out.report;
    r.window = window;
    r.weights = weights;
    r.variance_mode = config.variance_mode;

    const WindowSelection sel = select_window_pedestrians(dataset, window);
    r.excluded_single_observation = sel.single_observation;

    std::vector<double> pis;
    for (const auto& traj : sel.trajectories) {
        PedestrianMetrics m = pedestrian_metrics(traj, config);
        if (m.defined()) {
            m.pi = individual_pi(m, weights);
            pis.push_back(*m.pi);
        } else {
            ++r.excluded_undefined;
        }
        if (m.straight_distance > 0.0) r.directions.emplace(m.pedestrian_id, moving_direction(traj));
        out.pedestrians.push_back(std::move(m));
    }
    if (!pis.empty()) r.pi = performance_index(pis);

    const FlowVariables fv = traffic_flow_variables(out.pedestrians, window, trap);
    r.n = fv.n;
    r.flow_rate = fv.flow_rate;
    r.time_mean_speed = fv.time_mean_speed;
    r.space_mean_speed = fv.space_mean_speed;
    r.area_module = fv.area_module;
    return out;
}

std::string_view to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::after_better: return "after better";
        case Verdict::before_better: return "before better";
        case Verdict::tie: return "tie";
    }
    return "tie";
}

DesignComparison compare_designs(const AggregateReport& before, const AggregateReport& after) {
    if (before.weights != after.weights) throw IncomparableReportsError("reports use different PI weights");
    if (before.variance_mode != after.variance_mode) {
        throw IncomparableReportsError("reports use different variance modes");
    }
    if (std::abs(before.window.length() - after.window.length()) > kTimeTolerance) {
        throw IncomparableReportsError("reports use different window lengths");
    }
    if (!before.pi || !after.pi) throw IncomparableReportsError("performance index undefined in one of the reports");

    DesignComparison c;
    c.before = before;
    c.after = after;
    c.delta_pi = *after.pi - *before.pi;
    c.delta_flow_rate = after.flow_rate - before.flow_rate;
    c.delta_tms = delta(before.time_mean_speed, after.time_mean_speed);
    c.delta_sms = delta(before.space_mean_speed, after.space_mean_speed);
    c.delta_area_module = delta(before.area_module, after.area_module);
    if (*after.pi < *before.pi) {
        c.verdict = Verdict::after_better;
    } else if (*after.pi > *before.pi) {
        c.verdict = Verdict::before_better;
    } else {
        c.verdict = Verdict::tie;
    }
    return c;
}

}  // namespace pedflow
