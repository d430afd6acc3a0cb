#pragma once

// NTXY pedestrian movement database: one row per (pedestrian, frame) with
// planar position. Trajectories are grouped per pedestrian and must sample
// at a constant frame interval before metrics can be computed.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pedflow/geometry.hpp"

namespace pedflow {

using PedestrianId = std::uint64_t;

/// Absolute tolerance for comparing clock times.
inline constexpr double kTimeTolerance = 1e-9;

struct ObservationRecord {
    PedestrianId pedestrian_id = 0;
    double time = 0.0;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

struct TrajectoryPoint {
    double time = 0.0;
    Vec2 position;

    friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct Trajectory {
    PedestrianId pedestrian_id = 0;
    std::vector<TrajectoryPoint> points;

    std::size_t observation_count() const noexcept { return points.size(); }
    double first_time() const { return points.front().time; }
    double last_time() const { return points.back().time; }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct NtxyDataset {
    double frame_interval = 0.5;
    std::map<PedestrianId, Trajectory> trajectories;
    std::string source_label;
    /// Opaque length unit label; coordinates are never converted.
    std::string length_unit;

    std::size_t observation_count() const noexcept;
    bool empty() const noexcept { return trajectories.empty(); }
    /// Earliest and latest observation time; nullopt for an empty dataset.
    std::optional<std::pair<double, double>> time_span() const;
    std::vector<ObservationRecord> records() const;

    friend bool operator==(const NtxyDataset&, const NtxyDataset&) = default;
};

// ---------------------------------------------------------------------------
// Reading

/// Syntactic pass only: one record per data line, no grouping or cadence
/// checks. Throws ParseError with the 1-based line number.
std::vector<ObservationRecord> parse_records(std::istream& in);

/// Groups records into time-sorted trajectories without enforcing any rule
/// other than syntax. Used by `validate` so that violations can be listed
/// instead of thrown. The frame interval is the hint, else the minimum
/// positive intra-pedestrian delta, else 0.5.
NtxyDataset group_records(const std::vector<ObservationRecord>& records,
                          std::optional<double> frame_interval_hint = std::nullopt);

/// Strict read. Rejects duplicate (id, time) pairs and any intra-pedestrian
/// delta that is not an integer multiple of the frame interval. Gaps of
/// whole frames are accepted here; see interpolate_gaps.
NtxyDataset parse_ntxy(std::istream& in,
                       std::optional<double> frame_interval_hint = std::nullopt);
NtxyDataset parse_ntxy(std::string_view text,
                       std::optional<double> frame_interval_hint = std::nullopt);

// ---------------------------------------------------------------------------
// Writing

struct WriteOptions {
    bool header = true;
};

void write_ntxy(const NtxyDataset& dataset, std::ostream& out, WriteOptions options = {});
std::string to_ntxy_string(const NtxyDataset& dataset, WriteOptions options = {});

/// Shortest decimal that round-trips, always with a fractional part ("2.0").
std::string format_time(double t);
/// Fixed 6 fractional digits with trailing zeros (and a bare point) trimmed.
std::string format_coordinate(double v);

// ---------------------------------------------------------------------------
// Validation and repair

struct Diagnostic {
    PedestrianId pedestrian_id = 0;
    double time = 0.0;
    std::string rule;
    std::string message;
};

std::vector<Diagnostic> validate_dataset(const NtxyDataset& dataset);
std::string format_diagnostic(const Diagnostic& d);

/// Fills internal gaps of up to `max_gap_frames` missing frames with linearly
/// interpolated positions. Larger gaps throw GapError.
NtxyDataset interpolate_gaps(const NtxyDataset& dataset, std::size_t max_gap_frames);

/// Keeps observations with t_start <= time <= t_end; drops emptied pedestrians.
NtxyDataset clip_window(const NtxyDataset& dataset, double t_start, double t_end);

}  // namespace pedflow
