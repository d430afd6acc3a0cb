#include "pedflow/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include <json.hpp>

namespace pedflow {

namespace {

using nlohmann::ordered_json;

ordered_json num(double v) { return round_sig6(v); }

ordered_json num(const std::optional<double>& v) {
    if (!v) return nullptr;
    return round_sig6(*v);
}

ordered_json report_object(const AggregateReport& r) {
    ordered_json j;
    j["window"] = {{"t_start", num(r.window.t_start)}, {"t_end", num(r.window.t_end)}};
    j["n"] = r.n;
    j["excluded"] = r.excluded();
    j["excluded_single_observation"] = r.excluded_single_observation;
    j["excluded_undefined"] = r.excluded_undefined;
    j["pi"] = num(r.pi);
    j["q"] = num(r.flow_rate);
    j["tms"] = num(r.time_mean_speed);
    j["sms"] = num(r.space_mean_speed);
    j["area_module"] = num(r.area_module);
    j["weights"] = {{"a", num(r.weights.a)}, {"b", num(r.weights.b)}};
    j["variance_mode"] = std::string(to_string(r.variance_mode));
    ordered_json dirs = ordered_json::object();
    for (const auto& [id, d] : r.directions) dirs[std::to_string(id)] = {num(d.x), num(d.y)};
    j["directions"] = std::move(dirs);
    return j;
}

ordered_json pedestrian_object(const PedestrianMetrics& m) {
    return {{"id", m.pedestrian_id},
            {"rho", m.observation_count},
            {"t_in", num(m.t_in)},
            {"t_out", num(m.t_out)},
            {"omega", num(m.total_distance)},
            {"psi", num(m.average_speed)},
            {"omega_straight", num(m.straight_distance)},
            {"xi", {num(m.mean_displacement.x), num(m.mean_displacement.y)}},
            {"variance", {num(m.displacement_variance.x), num(m.displacement_variance.y)}},
            {"gamma", num(m.uncomfortability)},
            {"lambda", num(m.delay)},
            {"pi", num(m.pi)},
            {"stationary", m.stationary}};
}

void csv_row(std::ostream& out, std::string_view field, const std::optional<double>& before,
             const std::optional<double>& after, const std::optional<double>& delta) {
    out << field << ',' << format_sig6(before) << ',' << format_sig6(after) << ',' << format_sig6(delta) << '\n';
}

}  // namespace

double round_sig6(double v) {
    if (v == 0.0) return 0.0;
    if (!std::isfinite(v)) return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::strtod(buf, nullptr);
}

std::string format_sig6(std::optional<double> v) {
    if (!v) return {};
    if (*v == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", *v);
    return buf;
}

void write_pedestrian_csv(std::span<const PedestrianMetrics> metrics, std::ostream& out) {
    out << "id,rho,t_in,t_out,omega,psi,omega_straight,xi_x,xi_y,var_x,var_y,gamma,lambda,pi,flags\n";
    for (const auto& m : metrics) {
        out << m.pedestrian_id << ',' << m.observation_count << ',' << format_sig6(m.t_in) << ','
            << format_sig6(m.t_out) << ',' << format_sig6(m.total_distance) << ',' << format_sig6(m.average_speed)
            << ',' << format_sig6(m.straight_distance) << ',' << format_sig6(m.mean_displacement.x) << ','
            << format_sig6(m.mean_displacement.y) << ',' << format_sig6(m.displacement_variance.x) << ','
            << format_sig6(m.displacement_variance.y) << ',' << format_sig6(m.uncomfortability) << ','
            << format_sig6(m.delay) << ',' << format_sig6(m.pi) << ',' << (m.stationary ? "stationary" : "")
            << '\n';
    }
}

std::string aggregate_json(const AggregateReport& report, int indent) { return report_object(report).dump(indent); }

void write_aggregate_csv(const AggregateReport& r, std::ostream& out) {
    out << "key,value\n";
    out << "t_start," << format_sig6(r.window.t_start) << '\n';
    out << "t_end," << format_sig6(r.window.t_end) << '\n';
    out << "n," << r.n << '\n';
    out << "excluded," << r.excluded() << '\n';
    out << "pi," << format_sig6(r.pi) << '\n';
    out << "q," << format_sig6(r.flow_rate) << '\n';
    out << "tms," << format_sig6(r.time_mean_speed) << '\n';
    out << "sms," << format_sig6(r.space_mean_speed) << '\n';
    out << "area_module," << format_sig6(r.area_module) << '\n';
    out << "weight_a," << format_sig6(r.weights.a) << '\n';
    out << "weight_b," << format_sig6(r.weights.b) << '\n';
    out << "variance_mode," << to_string(r.variance_mode) << '\n';
}

std::string analysis_json(const Analysis& analysis, int indent) {
    ordered_json j;
    ordered_json peds = ordered_json::array();
    for (const auto& m : analysis.pedestrians) peds.push_back(pedestrian_object(m));
    j["pedestrians"] = std::move(peds);
    j["aggregate"] = report_object(analysis.report);
    return j.dump(indent);
}

std::string comparison_json(const DesignComparison& c, int indent) {
    ordered_json j;
    j["before"] = report_object(c.before);
    j["after"] = report_object(c.after);
    j["delta"] = {{"pi", num(c.delta_pi)},
                  {"q", num(c.delta_flow_rate)},
                  {"tms", num(c.delta_tms)},
                  {"sms", num(c.delta_sms)},
                  {"area_module", num(c.delta_area_module)}};
    j["verdict"] = std::string(to_string(c.verdict));
    return j.dump(indent);
}

void write_comparison_csv(const DesignComparison& c, std::ostream& out) {
    out << "field,before,after,delta\n";
    csv_row(out, "pi", c.before.pi, c.after.pi, c.delta_pi);
    csv_row(out, "q", c.before.flow_rate, c.after.flow_rate, c.delta_flow_rate);
    csv_row(out, "tms", c.before.time_mean_speed, c.after.time_mean_speed, c.delta_tms);
    csv_row(out, "sms", c.before.space_mean_speed, c.after.space_mean_speed, c.delta_sms);
    csv_row(out, "area_module", c.before.area_module, c.after.area_module, c.delta_area_module);
    out << "verdict,,," << to_string(c.verdict) << '\n';
}

}  // namespace pedflow
