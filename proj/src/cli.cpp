#include "pedflow/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "pedflow/errors.hpp"
#include "pedflow/ntxy.hpp"
#include "pedflow/report.hpp"
#include "pedflow/simulator.hpp"

namespace pedflow::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
    return text;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

void emit(const std::optional<fs::path>& target, const std::string& content, std::ostream& out) {
    if (target) {
        write_file(*target, content);
    } else {
        out << content;
    }
}

NtxyDataset load_dataset(const fs::path& path, std::optional<double> theta, std::size_t max_gap) {
    return interpolate_gaps(parse_ntxy(read_file(path), theta), max_gap);
}

AnalysisWindow full_window(const NtxyDataset& a, const NtxyDataset* b = nullptr) {
    auto span = a.time_span();
    if (b) {
        if (auto other = b->time_span()) {
            span = span ? std::pair{std::min(span->first, other->first), std::max(span->second, other->second)}
                        : other;
        }
    }
    if (!span || !(span->first < span->second)) throw WindowError("no pedestrians: dataset spans no time interval");
    return {span->first, span->second};
}

Analysis run_analysis(const NtxyDataset& ds, const AnalysisWindow& window, const AnalysisOptions& o, double a,
                      double b, VarianceMode mode) {
    std::optional<TrapGeometry> trap;
    if (o.area) trap = TrapGeometry::make(*o.area, o.length);
    MetricsConfig config;
    config.variance_mode = mode;
    Analysis analysis = analyze_window(ds, window, trap, PiWeights::make(a, b), config);
    if (analysis.report.n == 0) {
        throw WindowError("no pedestrians with at least two observations in window [" + format_time(window.t_start) +
                          ", " + format_time(window.t_end) + "]");
    }
    return analysis;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    return s == "-0.00" ? "0.00" : s;
}

// Golden-angle hue spacing keeps neighbouring ids visually distinct.
std::string stroke_for(PedestrianId id) {
    const double hue = std::fmod(static_cast<double>(id) * 137.508, 360.0);
    return "hsl(" + fmt2(hue) + ",65%,45%)";
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

AnalysisWindow parse_window(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw WindowError("window must be T1:T2, got '" + std::string(text) + "'");
    auto number = [&](std::string_view s) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
            throw WindowError("window bound is not a number: '" + std::string(s) + "'");
        }
        return v;
    };
    return AnalysisWindow::make(number(text.substr(0, colon)), number(text.substr(colon + 1)));
}

int cmd_validate(const fs::path& ntxy, std::optional<double> theta, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string text = read_file(ntxy);
        std::istringstream in(text);
        std::vector<ObservationRecord> records;
        try {
            records = parse_records(in);
        } catch (const ParseError& e) {
            out << e.what() << '\n';
            return 1;
        }
        const NtxyDataset ds = group_records(records, theta);
        const auto diags = validate_dataset(ds);
        if (!diags.empty()) {
            for (const auto& d : diags) out << format_diagnostic(d) << '\n';
            return 1;
        }
        out << "OK: " << ds.trajectories.size() << " pedestrians, " << ds.observation_count()
            << " observations, theta=" << format_time(ds.frame_interval) << '\n';
        return 0;
    });
}

int cmd_analyze(const fs::path& ntxy, const AnalysisOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const NtxyDataset ds = load_dataset(ntxy, o.theta, o.max_gap);
        const AnalysisWindow window = o.window ? *o.window : full_window(ds);
        const Analysis analysis = run_analysis(ds, window, o, o.weight_a, o.weight_b, o.variance_mode);

        std::ostringstream text;
        if (o.format == OutputFormat::json) {
            text << analysis_json(analysis) << '\n';
        } else {
            write_pedestrian_csv(analysis.pedestrians, text);
            text << '\n';
            write_aggregate_csv(analysis.report, text);
        }
        emit(o.out, text.str(), out);
        return 0;
    });
}

int cmd_simulate(const fs::path& scenario, const fs::path& out_ntxy, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const sim::Scenario sc = sim::load_scenario(read_file(scenario));
        const sim::SimulationResult result = sim::simulate(sc);
        write_file(out_ntxy, to_ntxy_string(result.dataset));
        out << result.spawned << " spawned, " << result.completed << " completed, " << result.frames << " frames\n";
        return 0;
    });
}

int cmd_compare(const fs::path& before, const fs::path& after, const AnalysisOptions& o,
                const AfterOverrides& overrides, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const NtxyDataset ds_before = load_dataset(before, o.theta, o.max_gap);
        const NtxyDataset ds_after = load_dataset(after, o.theta, o.max_gap);
        // Without an explicit window both designs are measured over the union of their spans.
        const AnalysisWindow window = o.window ? *o.window : full_window(ds_before, &ds_after);

        const Analysis a = run_analysis(ds_before, window, o, o.weight_a, o.weight_b, o.variance_mode);
        const Analysis b = run_analysis(ds_after, window, o, overrides.weight_a.value_or(o.weight_a),
                                        overrides.weight_b.value_or(o.weight_b),
                                        overrides.variance_mode.value_or(o.variance_mode));
        const DesignComparison cmp = compare_designs(a.report, b.report);

        std::ostringstream text;
        if (o.format == OutputFormat::json) {
            text << comparison_json(cmp) << '\n';
        } else {
            write_comparison_csv(cmp, text);
        }
        emit(o.out, text.str(), out);
        return 0;
    });
}

std::string render_svg(const NtxyDataset& ds, const PlotOptions& o) {
    constexpr double margin = 20.0;
    Rect box{{INFINITY, INFINITY}, {-INFINITY, -INFINITY}};
    auto extend = [&](Vec2 p) {
        box.min = {std::min(box.min.x, p.x), std::min(box.min.y, p.y)};
        box.max = {std::max(box.max.x, p.x), std::max(box.max.y, p.y)};
    };
    for (const auto& [id, traj] : ds.trajectories) {
        for (const auto& p : traj.points) extend(p.position);
    }
    if (o.trap) {
        extend(o.trap->min);
        extend(o.trap->max);
    }
    const double bw = box.width() > 0.0 ? box.width() : 1.0;
    const double bh = box.height() > 0.0 ? box.height() : 1.0;
    const double scale = std::min((o.width - 2.0 * margin) / bw, (o.height - 2.0 * margin) / bh);
    // Travel runs along +Y, drawn upwards.
    auto px = [&](double x) { return fmt2(margin + (x - box.min.x) * scale); };
    auto py = [&](double y) { return fmt2(o.height - margin - (y - box.min.y) * scale); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt2(o.width) << "\" height=\"" << fmt2(o.height)
        << "\" viewBox=\"0 0 " << fmt2(o.width) << ' ' << fmt2(o.height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (o.trap) {
        svg << "<rect class=\"trap\" x=\"" << px(o.trap->min.x) << "\" y=\"" << py(o.trap->max.y) << "\" width=\""
            << fmt2(o.trap->width() * scale) << "\" height=\"" << fmt2(o.trap->height() * scale)
            << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 2\"/>\n";
    }
    for (const auto& [id, traj] : ds.trajectories) {
        const std::string stroke = stroke_for(id);
        if (traj.points.size() == 1) {
            const Vec2 p = traj.points.front().position;
            svg << "<circle id=\"ped-" << id << "\" cx=\"" << px(p.x) << "\" cy=\"" << py(p.y)
                << "\" r=\"2.00\" fill=\"" << stroke << "\"/>\n";
            continue;
        }
        svg << "<polyline id=\"ped-" << id << "\" fill=\"none\" stroke=\"" << stroke
            << "\" stroke-width=\"1.50\" points=\"";
        for (std::size_t i = 0; i < traj.points.size(); ++i) {
            const Vec2 p = traj.points[i].position;
            svg << (i ? " " : "") << px(p.x) << ',' << py(p.y);
        }
        svg << "\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

int cmd_plot(const fs::path& ntxy, const fs::path& svg, const PlotOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!(o.width > 0.0) || !(o.height > 0.0)) throw ConfigError("size", "plot width and height must be > 0");
        const NtxyDataset ds = parse_ntxy(read_file(ntxy), o.theta);
        if (ds.empty()) throw Error("nothing to plot: dataset is empty");
        write_file(svg, render_svg(ds, o));
        out << "wrote " << svg.string() << ": " << ds.trajectories.size() << " pedestrians\n";
        return 0;
    });
}

}  // namespace pedflow::cli
