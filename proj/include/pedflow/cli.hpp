#pragma once

// Subcommand implementations behind the `pedflow` executable. Each returns
// the process exit status: 0 success, 1 domain error, 2 I/O error.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "pedflow/aggregate.hpp"
#include "pedflow/metrics.hpp"

namespace pedflow::cli {

enum class OutputFormat { csv, json };

struct AnalysisOptions {
    std::optional<AnalysisWindow> window;  ///< nullopt = full data span
    double weight_a = 1.0;
    double weight_b = 1.0;
    VarianceMode variance_mode = VarianceMode::componentwise;
    std::optional<double> area;
    std::optional<double> length;
    std::size_t max_gap = 0;
    OutputFormat format = OutputFormat::csv;
    std::optional<double> theta;
    std::optional<std::filesystem::path> out;
};

/// Per-side overrides for `compare`; unset fields fall back to the shared options.
struct AfterOverrides {
    std::optional<double> weight_a;
    std::optional<double> weight_b;
    std::optional<VarianceMode> variance_mode;
};

struct PlotOptions {
    double width = 800.0;
    double height = 800.0;
    std::optional<Rect> trap;
    std::optional<double> theta;
};

int cmd_validate(const std::filesystem::path& ntxy, std::optional<double> theta, std::ostream& out,
                 std::ostream& err);

int cmd_analyze(const std::filesystem::path& ntxy, const AnalysisOptions& options, std::ostream& out,
                std::ostream& err);

int cmd_simulate(const std::filesystem::path& scenario, const std::filesystem::path& out_ntxy, std::ostream& out,
                 std::ostream& err);

int cmd_compare(const std::filesystem::path& before, const std::filesystem::path& after,
                const AnalysisOptions& options, const AfterOverrides& overrides, std::ostream& out,
                std::ostream& err);

int cmd_plot(const std::filesystem::path& ntxy, const std::filesystem::path& svg, const PlotOptions& options,
             std::ostream& out, std::ostream& err);

/// SVG rendering used by cmd_plot; one polyline (or circle) per pedestrian.
std::string render_svg(const NtxyDataset& dataset, const PlotOptions& options);

/// "T1:T2" -> window. Throws WindowError.
AnalysisWindow parse_window(std::string_view text);

}  // namespace pedflow::cli
