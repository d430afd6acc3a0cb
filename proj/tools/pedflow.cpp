// pedflow: validate, analyze, simulate, compare and plot NTXY pedestrian data.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pedflow/cli.hpp"
#include "pedflow/errors.hpp"

namespace {

using namespace pedflow;

struct AnalysisFlags {
    std::string window;
    bool full = false;
    double weight_a = 1.0;
    double weight_b = 1.0;
    std::string variance_mode = "componentwise";
    std::optional<double> area;
    std::optional<double> length;
    std::size_t max_gap = 0;
    std::string format = "csv";
    std::optional<double> theta;
    std::string out;

    void attach(CLI::App& app) {
        auto* w = app.add_option("--window", window, "Analysis window T1:T2");
        auto* f = app.add_flag("--full", full, "Use the full data span (default)");
        w->excludes(f);
        app.add_option("--weight-a", weight_a, "Weight on uncomfortability")->capture_default_str();
        app.add_option("--weight-b", weight_b, "Weight on delay")->capture_default_str();
        app.add_option("--variance-mode", variance_mode)
            ->check(CLI::IsMember({"componentwise", "trace"}))
            ->capture_default_str();
        app.add_option("--area", area, "Trap area A");
        app.add_option("--length", length, "Trap length L along the travel axis");
        app.add_option("--max-gap", max_gap, "Fill gaps of up to this many missing frames")->capture_default_str();
        app.add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        app.add_option("--theta", theta, "Frame interval; inferred when omitted");
        app.add_option("--out", out, "Write the report here instead of stdout");
    }

    cli::AnalysisOptions build() const {
        cli::AnalysisOptions o;
        if (!window.empty()) o.window = cli::parse_window(window);
        o.weight_a = weight_a;
        o.weight_b = weight_b;
        o.variance_mode = parse_variance_mode(variance_mode);
        o.area = area;
        o.length = length;
        o.max_gap = max_gap;
        o.format = format == "json" ? cli::OutputFormat::json : cli::OutputFormat::csv;
        o.theta = theta;
        if (!out.empty()) o.out = out;
        return o;
    }
};

std::optional<Rect> parse_trap(const std::vector<double>& v) {
    if (v.empty()) return std::nullopt;
    return Rect{{v[0], v[1]}, {v[2], v[3]}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pedestrian flow performance from NTXY trajectory data"};
    app.require_subcommand(1);

    std::string input;
    std::optional<double> theta;

    auto* validate = app.add_subcommand("validate", "Check an NTXY file");
    validate->add_option("ntxy", input)->required();
    validate->add_option("--theta", theta, "Frame interval; inferred when omitted");

    AnalysisFlags analyze_flags;
    auto* analyze = app.add_subcommand("analyze", "Per-pedestrian metrics and the aggregate report");
    analyze->add_option("ntxy", input)->required();
    analyze_flags.attach(*analyze);

    std::string scenario;
    std::string out_path;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write NTXY");
    simulate->add_option("scenario", scenario)->required();
    simulate->add_option("out", out_path, "Output NTXY path")->required();

    std::string before;
    std::string after;
    AnalysisFlags compare_flags;
    std::optional<double> after_a;
    std::optional<double> after_b;
    std::string after_mode;
    auto* compare = app.add_subcommand("compare", "Before/after design comparison");
    compare->add_option("before", before)->required();
    compare->add_option("after", after)->required();
    compare_flags.attach(*compare);
    compare->add_option("--after-weight-a", after_a, "Override --weight-a for the after file");
    compare->add_option("--after-weight-b", after_b, "Override --weight-b for the after file");
    compare->add_option("--after-variance-mode", after_mode, "Override --variance-mode for the after file")
        ->check(CLI::IsMember({"componentwise", "trace"}));

    std::string svg_path;
    cli::PlotOptions plot_opts;
    std::vector<double> trap;
    auto* plot = app.add_subcommand("plot", "Render trajectories as SVG");
    plot->add_option("ntxy", input)->required();
    plot->add_option("svg", svg_path)->required();
    plot->add_option("--width", plot_opts.width)->capture_default_str();
    plot->add_option("--height", plot_opts.height)->capture_default_str();
    plot->add_option("--trap", trap, "Trap rectangle xmin ymin xmax ymax")->expected(4)->delimiter(',');
    plot->add_option("--theta", plot_opts.theta, "Frame interval; inferred when omitted");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*validate) return cli::cmd_validate(input, theta, std::cout, std::cerr);
        if (*analyze) return cli::cmd_analyze(input, analyze_flags.build(), std::cout, std::cerr);
        if (*simulate) return cli::cmd_simulate(scenario, out_path, std::cout, std::cerr);
        if (*compare) {
            cli::AfterOverrides overrides{after_a, after_b, std::nullopt};
            if (!after_mode.empty()) overrides.variance_mode = parse_variance_mode(after_mode);
            return cli::cmd_compare(before, after, compare_flags.build(), overrides, std::cout, std::cerr);
        }
        if (*plot) {
            plot_opts.trap = parse_trap(trap);
            return cli::cmd_plot(input, svg_path, plot_opts, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
