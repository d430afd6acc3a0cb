#include "pedflow/ntxy.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pedflow/errors.hpp"

namespace pedflow {

namespace {

constexpr std::string_view kHeader = "N\tT\tX\tY";
constexpr double kDefaultFrameInterval = 0.5;

bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i == line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        fields.push_back(line.substr(i, j - i));
        i = j;
    }
    return fields;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// [+-]? ( digits ( '.' digits* )? | '.' digits )
bool is_decimal_literal(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t int_digits = 0;
    while (i < s.size() && is_digit(s[i])) { ++i; ++int_digits; }
    std::size_t frac_digits = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && is_digit(s[i])) { ++i; ++frac_digits; }
    }
    return i == s.size() && (int_digits + frac_digits) > 0;
}

double parse_decimal(std::string_view field, std::size_t line, const char* name) {
    if (!is_decimal_literal(field)) {
        throw ParseError(line, std::string("field ") + name + " is not a decimal number: '" +
                                   std::string(field) + "'");
    }
    if (field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        throw ParseError(line, std::string("field ") + name + " is out of range: '" +
                                   std::string(field) + "'");
    }
    return value;
}

PedestrianId parse_id(std::string_view field, std::size_t line) {
    if (field.empty() || !std::all_of(field.begin(), field.end(), is_digit)) {
        throw ParseError(line, "field N is not a positive integer: '" + std::string(field) + "'");
    }
    PedestrianId id = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), id);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError(line, "field N is out of range: '" + std::string(field) + "'");
    }
    if (id == 0) throw ParseError(line, "pedestrian number must be >= 1");
    return id;
}

// Number of frame intervals spanned by `delta`, or nullopt when delta is not
// a positive integer multiple of theta.
std::optional<long long> frames_between(double delta, double theta) {
    const double k = std::round(delta / theta);
    if (k < 1.0 || std::abs(delta - k * theta) > kTimeTolerance) return std::nullopt;
    return static_cast<long long>(k);
}

}  // namespace

std::size_t NtxyDataset::observation_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [id, traj] : trajectories) n += traj.points.size();
    return n;
}

std::optional<std::pair<double, double>> NtxyDataset::time_span() const {
    std::optional<std::pair<double, double>> span;
    for (const auto& [id, traj] : trajectories) {
        for (const auto& p : traj.points) {
            if (!span) {
                span.emplace(p.time, p.time);
            } else {
                span->first = std::min(span->first, p.time);
                span->second = std::max(span->second, p.time);
            }
        }
    }
    return span;
}

std::vector<ObservationRecord> NtxyDataset::records() const {
    std::vector<ObservationRecord> out;
    out.reserve(observation_count());
    for (const auto& [id, traj] : trajectories) {
        for (const auto& p : traj.points) out.push_back({id, p.time, p.position.x, p.position.y});
    }
    return out;
}

std::vector<ObservationRecord> parse_records(std::istream& in) {
    std::vector<ObservationRecord> records;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (line_no == 1 && line == kHeader) continue;
        if (line.starts_with('#') || is_blank(line)) continue;

        const auto fields = split_fields(line);
        if (fields.size() != 4) {
            throw ParseError(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
        }
        ObservationRecord r;
        r.pedestrian_id = parse_id(fields[0], line_no);
        r.time = parse_decimal(fields[1], line_no, "T");
        r.x = parse_decimal(fields[2], line_no, "X");
        r.y = parse_decimal(fields[3], line_no, "Y");
        if (r.time < 0.0) throw ParseError(line_no, "time must be non-negative");
        records.push_back(r);
    }
    if (in.bad()) throw Error("read failure after line " + std::to_string(line_no));
    return records;
}

NtxyDataset group_records(const std::vector<ObservationRecord>& records,
                          std::optional<double> frame_interval_hint) {
    NtxyDataset ds;
    for (const auto& r : records) {
        auto& traj = ds.trajectories[r.pedestrian_id];
        traj.pedestrian_id = r.pedestrian_id;
        traj.points.push_back({r.time, {r.x, r.y}});
    }
    for (auto& [id, traj] : ds.trajectories) {
        std::stable_sort(traj.points.begin(), traj.points.end(),
                         [](const TrajectoryPoint& a, const TrajectoryPoint& b) { return a.time < b.time; });
    }

    if (frame_interval_hint) {
        if (!std::isfinite(*frame_interval_hint) || *frame_interval_hint <= 0.0) {
            throw Error("frame interval must be positive");
        }
        ds.frame_interval = *frame_interval_hint;
        return ds;
    }
    double theta = std::numeric_limits<double>::infinity();
    for (const auto& [id, traj] : ds.trajectories) {
        for (std::size_t i = 1; i < traj.points.size(); ++i) {
            const double delta = traj.points[i].time - traj.points[i - 1].time;
            if (delta > kTimeTolerance) theta = std::min(theta, delta);
        }
    }
    ds.frame_interval = std::isfinite(theta) ? theta : kDefaultFrameInterval;
    return ds;
}

NtxyDataset parse_ntxy(std::istream& in, std::optional<double> frame_interval_hint) {
    NtxyDataset ds = group_records(parse_records(in), frame_interval_hint);
    for (const auto& [id, traj] : ds.trajectories) {
        for (std::size_t i = 1; i < traj.points.size(); ++i) {
            const double t0 = traj.points[i - 1].time;
            const double t1 = traj.points[i].time;
            if (t1 - t0 <= kTimeTolerance) {
                throw DuplicateObservationError("pedestrian " + std::to_string(id) +
                                                " has more than one observation at t=" + format_time(t1));
            }
            if (!frames_between(t1 - t0, ds.frame_interval)) {
                throw CadenceError("pedestrian " + std::to_string(id) + ": time step " +
                                   format_time(t0) + " -> " + format_time(t1) +
                                   " is not a multiple of theta=" + format_time(ds.frame_interval));
            }
        }
    }
    return ds;
}

NtxyDataset parse_ntxy(std::string_view text, std::optional<double> frame_interval_hint) {
    std::istringstream in{std::string(text)};
    return parse_ntxy(in, frame_interval_hint);
}

std::string format_time(double t) {
    if (t == 0.0) return "0.0";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t, std::chars_format::fixed);
    std::string s(buf, ec == std::errc{} ? ptr : buf);
    if (s.find('.') == std::string::npos) s += ".0";
    return s;
}

std::string format_coordinate(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (auto dot = s.find('.'); dot != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

void write_ntxy(const NtxyDataset& dataset, std::ostream& out, WriteOptions options) {
    if (options.header) out << kHeader << '\n';
    for (const auto& [id, traj] : dataset.trajectories) {
        for (const auto& p : traj.points) {
            out << id << '\t' << format_time(p.time) << '\t' << format_coordinate(p.position.x) << '\t'
                << format_coordinate(p.position.y) << '\n';
        }
    }
    if (!out) throw Error("write failure");
}

std::string to_ntxy_string(const NtxyDataset& dataset, WriteOptions options) {
    std::ostringstream out;
    write_ntxy(dataset, out, options);
    return std::move(out).str();
}

std::vector<Diagnostic> validate_dataset(const NtxyDataset& dataset) {
    std::vector<Diagnostic> diags;
    const double theta = dataset.frame_interval;
    const bool theta_ok = std::isfinite(theta) && theta > 0.0;
    if (!theta_ok) {
        diags.push_back({0, 0.0, "frame_interval", "frame interval must be positive and finite"});
    }

    for (const auto& [key, traj] : dataset.trajectories) {
        const PedestrianId id = traj.pedestrian_id;
        if (id != key) {
            diags.push_back({key, 0.0, "id_mismatch",
                             "trajectory stored under " + std::to_string(key) + " carries id " + std::to_string(id)});
        }
        if (id == 0) diags.push_back({id, 0.0, "pedestrian_id", "pedestrian number must be >= 1"});
        if (traj.points.empty()) {
            diags.push_back({id, 0.0, "empty_trajectory", "trajectory has no observations"});
            continue;
        }
        for (const auto& p : traj.points) {
            if (!std::isfinite(p.time) || p.time < 0.0) {
                diags.push_back({id, p.time, "time", "time must be finite and non-negative"});
            }
            if (!std::isfinite(p.position.x) || !std::isfinite(p.position.y)) {
                diags.push_back({id, p.time, "coordinate", "coordinates must be finite"});
            }
        }
        for (std::size_t i = 1; i < traj.points.size(); ++i) {
            const double t0 = traj.points[i - 1].time;
            const double t1 = traj.points[i].time;
            const double delta = t1 - t0;
            if (std::abs(delta) <= kTimeTolerance) {
                diags.push_back({id, t1, "duplicate", "more than one observation at t=" + format_time(t1)});
            } else if (delta < 0.0) {
                diags.push_back({id, t1, "order", "times not increasing: " + format_time(t0) + " then " +
                                                      format_time(t1)});
            } else if (theta_ok && std::abs(delta - theta) > kTimeTolerance) {
                if (auto k = frames_between(delta, theta)) {
                    diags.push_back({id, t0 + theta, "cadence",
                                     "missing " + std::to_string(*k - 1) + " frame(s) between " + format_time(t0) +
                                         " and " + format_time(t1)});
                } else {
                    diags.push_back({id, t1, "cadence",
                                     "time step " + format_time(t0) + " -> " + format_time(t1) +
                                         " is not a multiple of theta=" + format_time(theta)});
                }
            }
        }
    }
    return diags;
}

std::string format_diagnostic(const Diagnostic& d) {
    return "pedestrian " + std::to_string(d.pedestrian_id) + " t=" + format_time(d.time) + " [" + d.rule + "] " +
           d.message;
}

NtxyDataset interpolate_gaps(const NtxyDataset& dataset, std::size_t max_gap_frames) {
    const double theta = dataset.frame_interval;
    if (!std::isfinite(theta) || theta <= 0.0) throw Error("frame interval must be positive");

    NtxyDataset out = dataset;
    for (auto& [id, traj] : out.trajectories) {
        std::vector<TrajectoryPoint> filled;
        filled.reserve(traj.points.size());
        for (std::size_t i = 0; i < traj.points.size(); ++i) {
            if (i > 0) {
                const auto& a = traj.points[i - 1];
                const auto& b = traj.points[i];
                const double delta = b.time - a.time;
                if (delta <= kTimeTolerance) {
                    throw DuplicateObservationError("pedestrian " + std::to_string(id) +
                                                    " has more than one observation at t=" + format_time(b.time));
                }
                const auto k = frames_between(delta, theta);
                if (!k) {
                    throw CadenceError("pedestrian " + std::to_string(id) + ": time step " + format_time(a.time) +
                                       " -> " + format_time(b.time) + " is not a multiple of theta");
                }
                const auto missing = static_cast<std::size_t>(*k - 1);
                if (missing > max_gap_frames) {
                    throw GapError("pedestrian " + std::to_string(id) + ": gap of " + std::to_string(missing) +
                                   " frame(s) between t=" + format_time(a.time) + " and t=" + format_time(b.time) +
                                   " exceeds max " + std::to_string(max_gap_frames));
                }
                for (std::size_t j = 1; j <= missing; ++j) {
                    const double f = static_cast<double>(j) / static_cast<double>(*k);
                    filled.push_back({a.time + static_cast<double>(j) * theta,
                                      a.position + (b.position - a.position) * f});
                }
            }
            filled.push_back(traj.points[i]);
        }
        traj.points = std::move(filled);
    }
    return out;
}

NtxyDataset clip_window(const NtxyDataset& dataset, double t_start, double t_end) {
    if (!(t_start < t_end)) {
        throw WindowError("invalid window [" + format_time(t_start) + ", " + format_time(t_end) + "]");
    }
    NtxyDataset out;
    out.frame_interval = dataset.frame_interval;
    out.source_label = dataset.source_label;
    out.length_unit = dataset.length_unit;
    for (const auto& [id, traj] : dataset.trajectories) {
        Trajectory kept{traj.pedestrian_id, {}};
        for (const auto& p : traj.points) {
            if (p.time >= t_start - kTimeTolerance && p.time <= t_end + kTimeTolerance) kept.points.push_back(p);
        }
        if (!kept.points.empty()) out.trajectories.emplace(id, std::move(kept));
    }
    return out;
}

}  // namespace pedflow
