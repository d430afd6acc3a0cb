#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "golden.hpp"
#include "pedflow/cli.hpp"
#include "pedflow/ntxy.hpp"

using namespace pedflow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("pedflow_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

template <typename Fn>
Run capture(Fn&& fn) {
    std::ostringstream out, err;
    Run r;
    r.status = fn(out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

int run_binary(const std::string& args) {
    const std::string cmd = std::string(PEDFLOW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

constexpr const char* kCorridor =
    "trap_min = 0, 0\ntrap_max = 4, 20\narrival_rate = 0.5\nduration = 60\nseed = 5\n";

}  // namespace

TEST_SUITE("cmd_validate") {
    TEST_CASE("sample table") {
        const auto r = capture([](auto& o, auto& e) { return cli::cmd_validate(golden::kSamplePath, 0.5, o, e); });
        CHECK(r.status == 0);
        CHECK(r.out == "OK: 4 pedestrians, 23 observations, theta=0.5\n");
    }

    TEST_CASE("duplicate row") {
        TempDir tmp;
        const auto f = tmp.file("dup.ntxy", "1\t0.0\t0\t0\n1\t0.5\t0\t1\n1\t0.5\t0\t1\n");
        const auto r = capture([&](auto& o, auto& e) { return cli::cmd_validate(f, std::nullopt, o, e); });
        CHECK(r.status == 1);
        CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
        CHECK(r.out.find("[duplicate]") != std::string::npos);
    }

    TEST_CASE("syntax error") {
        TempDir tmp;
        const auto f = tmp.file("bad.ntxy", "1\t0.0\t0\n");
        const auto r = capture([&](auto& o, auto& e) { return cli::cmd_validate(f, std::nullopt, o, e); });
        CHECK(r.status == 1);
        CHECK(r.out.find("line 1") != std::string::npos);
    }

    TEST_CASE("missing file") {
        const auto r = capture([](auto& o, auto& e) { return cli::cmd_validate("/nonexistent/x.ntxy", {}, o, e); });
        CHECK(r.status == 2);
    }
}

TEST_SUITE("cmd_analyze") {
    TEST_CASE("sample table, full window, json") {
        cli::AnalysisOptions o;
        o.area = 100.0;
        o.format = cli::OutputFormat::json;
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_analyze(golden::kSamplePath, o, out, e); });
        REQUIRE(r.status == 0);
        const auto j = nlohmann::json::parse(r.out);
        const auto& agg = j["aggregate"];
        CHECK(agg["n"] == 4);
        CHECK(agg["excluded"] == 0);
        CHECK(agg["pi"].get<double>() == doctest::Approx(golden::kSamplePi).epsilon(5e-6));
        CHECK(agg["area_module"].get<double>() == doctest::Approx(25.0));
        CHECK(agg["q"].get<double>() == doctest::Approx(2.0 / 7.0).epsilon(5e-6));
        CHECK(agg["window"]["t_start"] == 1.0);
        CHECK(agg["window"]["t_end"] == 15.0);
        CHECK(agg["variance_mode"] == "componentwise");
        CHECK(agg["weights"]["a"] == 1.0);
        CHECK(j["pedestrians"].size() == 4);
        CHECK(j["pedestrians"][1]["id"] == 4);
        // Six significant digits.
        CHECK(j["pedestrians"][1]["omega"].get<double>() == 298.762);
        CHECK(agg["pi"].get<double>() == 0.178376);
    }

    TEST_CASE("csv output") {
        cli::AnalysisOptions o;
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_analyze(golden::kSamplePath, o, out, e); });
        REQUIRE(r.status == 0);
        CHECK(r.out.starts_with("id,rho,t_in,t_out,omega,psi,omega_straight,xi_x,xi_y,var_x,var_y,gamma,lambda,pi,flags\n"));
        CHECK(r.out.find("\n4,5,2,4,298.762,149.381,297.002,-0.25,74.25,60.1875,92.1875,0.368506,3.94436e-05,0.368546,\n") !=
              std::string::npos);
        CHECK(r.out.find("\npi,0.178376\n") != std::string::npos);
        CHECK(r.out.find("\narea_module,\n") != std::string::npos);
    }

    TEST_CASE("straight walker gives zero PI") {
        TempDir tmp;
        const auto f = tmp.file("line.ntxy", "1\t0.0\t0\t0\n1\t0.5\t0\t1\n1\t1.0\t0\t2\n1\t1.5\t0\t3\n");
        cli::AnalysisOptions o;
        o.format = cli::OutputFormat::json;
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_analyze(f, o, out, e); });
        REQUIRE(r.status == 0);
        CHECK(nlohmann::json::parse(r.out)["aggregate"]["pi"] == 0.0);
    }

    TEST_CASE("window without pedestrians") {
        cli::AnalysisOptions o;
        o.window = cli::parse_window("100:200");
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_analyze(golden::kSamplePath, o, out, e); });
        CHECK(r.status == 1);
        CHECK(r.err.find("no pedestrians") != std::string::npos);
    }

    TEST_CASE("gaps need --max-gap") {
        TempDir tmp;
        const auto f = tmp.file("gap.ntxy", "1\t0.0\t0\t0\n1\t0.5\t0\t1\n1\t1.5\t0\t3\n");
        cli::AnalysisOptions o;
        o.theta = 0.5;
        CHECK(capture([&](auto& out, auto& e) { return cli::cmd_analyze(f, o, out, e); }).status == 1);
        o.max_gap = 1;
        CHECK(capture([&](auto& out, auto& e) { return cli::cmd_analyze(f, o, out, e); }).status == 0);
    }

    TEST_CASE("--out writes the file and unwritable targets exit 2") {
        TempDir tmp;
        cli::AnalysisOptions o;
        o.out = tmp.path / "report.csv";
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_analyze(golden::kSamplePath, o, out, e); });
        CHECK(r.status == 0);
        CHECK(r.out.empty());
        CHECK(slurp(*o.out).starts_with("id,rho"));
        o.out = tmp.path / "missing_dir" / "report.csv";
        CHECK(capture([&](auto& out, auto& e) { return cli::cmd_analyze(golden::kSamplePath, o, out, e); }).status == 2);
    }

    TEST_CASE("window parsing") {
        const auto w = cli::parse_window("1.5:9");
        CHECK(w.t_start == 1.5);
        CHECK(w.t_end == 9.0);
        CHECK_THROWS(cli::parse_window("9:1"));
        CHECK_THROWS(cli::parse_window("19"));
        CHECK_THROWS(cli::parse_window("a:b"));
    }
}

TEST_SUITE("cmd_simulate") {
    TEST_CASE("zero arrivals") {
        TempDir tmp;
        const auto sc = tmp.file("zero.cfg", "trap_min = 0, 0\ntrap_max = 4, 20\nduration = 10\nseed = 1\narrival_rate = 0\n");
        const auto out = tmp.path / "zero.ntxy";
        const auto r = capture([&](auto& o, auto& e) { return cli::cmd_simulate(sc, out, o, e); });
        CHECK(r.status == 0);
        CHECK(r.out.starts_with("0 spawned"));
        CHECK(slurp(out) == "N\tT\tX\tY\n");
    }

    TEST_CASE("fixed seed is byte identical and validates") {
        TempDir tmp;
        const auto sc = tmp.file("corridor.cfg", kCorridor);
        const auto a = tmp.path / "a.ntxy";
        const auto b = tmp.path / "b.ntxy";
        CHECK(capture([&](auto& o, auto& e) { return cli::cmd_simulate(sc, a, o, e); }).status == 0);
        CHECK(capture([&](auto& o, auto& e) { return cli::cmd_simulate(sc, b, o, e); }).status == 0);
        CHECK(slurp(a) == slurp(b));
        const auto v = capture([&](auto& o, auto& e) { return cli::cmd_validate(a, std::nullopt, o, e); });
        CHECK(v.status == 0);
        CHECK(v.out.starts_with("OK: "));
    }

    TEST_CASE("bad scenario names the key") {
        TempDir tmp;
        const auto sc = tmp.file("bad.cfg", "trap_min = 0, 0\ntrap_max = 4, 20\nduration = 10\nseed = 1\nwind = 3\n");
        const auto r = capture([&](auto& o, auto& e) { return cli::cmd_simulate(sc, tmp.path / "x.ntxy", o, e); });
        CHECK(r.status == 1);
        CHECK(r.err.find("wind") != std::string::npos);
        CHECK(capture([&](auto& o, auto& e) { return cli::cmd_simulate(tmp.path / "none.cfg", tmp.path / "x", o, e); })
                  .status == 2);
    }
}

TEST_SUITE("cmd_compare") {
    TEST_CASE("file against itself ties") {
        cli::AnalysisOptions o;
        o.format = cli::OutputFormat::json;
        o.area = 50.0;
        const auto r = capture([&](auto& out, auto& e) {
            return cli::cmd_compare(golden::kSamplePath, golden::kSamplePath, o, {}, out, e);
        });
        REQUIRE(r.status == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["verdict"] == "tie");
        for (const char* key : {"pi", "q", "tms", "sms", "area_module"}) CHECK(j["delta"][key] == 0.0);
        CHECK(j["before"]["pi"] == j["after"]["pi"]);
    }

    TEST_CASE("csv layout") {
        cli::AnalysisOptions o;
        const auto r = capture([&](auto& out, auto& e) {
            return cli::cmd_compare(golden::kSamplePath, golden::kSamplePath, o, {}, out, e);
        });
        REQUIRE(r.status == 0);
        CHECK(r.out.starts_with("field,before,after,delta\npi,0.178376,0.178376,0\n"));
        CHECK(r.out.ends_with("verdict,,,tie\n"));
    }

    TEST_CASE("mismatched variance mode") {
        cli::AnalysisOptions o;
        cli::AfterOverrides ov;
        ov.variance_mode = VarianceMode::trace;
        const auto r = capture([&](auto& out, auto& e) {
            return cli::cmd_compare(golden::kSamplePath, golden::kSamplePath, o, ov, out, e);
        });
        CHECK(r.status == 1);
    }

    TEST_CASE("walled corridor is worse than the empty one") {
        TempDir tmp;
        const auto empty_cfg = tmp.file("empty.cfg", kCorridor);
        const auto wall_cfg = tmp.file("wall.cfg", std::string(kCorridor) + "obstacle = 0, 9.5, 2, 10.5\n");
        const auto before = tmp.path / "before.ntxy";
        const auto after = tmp.path / "after.ntxy";
        REQUIRE(capture([&](auto& o, auto& e) { return cli::cmd_simulate(empty_cfg, before, o, e); }).status == 0);
        REQUIRE(capture([&](auto& o, auto& e) { return cli::cmd_simulate(wall_cfg, after, o, e); }).status == 0);
        cli::AnalysisOptions o;
        o.format = cli::OutputFormat::json;
        o.window = cli::parse_window("0:60");
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_compare(before, after, o, {}, out, e); });
        REQUIRE(r.status == 0);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(j["verdict"] == "before better");
        CHECK(j["delta"]["pi"].get<double>() > 0.0);
    }
}

TEST_SUITE("cmd_plot") {
    TEST_CASE("one polyline per pedestrian") {
        TempDir tmp;
        const auto svg = tmp.path / "sample.svg";
        cli::PlotOptions o;
        o.trap = Rect{{150, 100}, {650, 500}};
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_plot(golden::kSamplePath, svg, o, out, e); });
        REQUIRE(r.status == 0);
        const std::string text = slurp(svg);
        std::vector<std::size_t> counts;
        const std::regex poly(R"re(<polyline id="ped-(\d+)"[^>]*points="([^"]*)")re");
        for (auto it = std::sregex_iterator(text.begin(), text.end(), poly); it != std::sregex_iterator(); ++it) {
            const std::string pts = (*it)[2];
            counts.push_back(static_cast<std::size_t>(std::count(pts.begin(), pts.end(), ' ') + 1));
        }
        CHECK(counts == std::vector<std::size_t>{4, 5, 12, 2});
        CHECK(text.find("class=\"trap\"") != std::string::npos);
        CHECK(text.starts_with("<svg "));

        // Deterministic output.
        const auto svg2 = tmp.path / "t2.svg";
        REQUIRE(capture([&](auto& out, auto& e) { return cli::cmd_plot(golden::kSamplePath, svg2, o, out, e); }).status == 0);
        CHECK(slurp(svg2) == text);
    }

    TEST_CASE("travel direction points up the page") {
        NtxyDataset ds;
        ds.trajectories[1] = Trajectory{1, {{0.0, {0, 0}}, {0.5, {0, 10}}}};
        const std::string svg = cli::render_svg(ds, {});
        CHECK(svg.find("points=\"20.00,780.00 20.00,20.00\"") != std::string::npos);
    }

    TEST_CASE("single points become circles") {
        TempDir tmp;
        const auto f = tmp.file("dots.ntxy", "1\t0.0\t0\t0\n2\t0.0\t5\t5\n");
        const auto svg = tmp.path / "dots.svg";
        const auto r = capture([&](auto& out, auto& e) { return cli::cmd_plot(f, svg, {}, out, e); });
        REQUIRE(r.status == 0);
        const std::string text = slurp(svg);
        CHECK(text.find("<polyline") == std::string::npos);
        std::size_t circles = 0;
        for (auto pos = text.find("<circle"); pos != std::string::npos; pos = text.find("<circle", pos + 1)) ++circles;
        CHECK(circles == 2);
    }

    TEST_CASE("error paths") {
        TempDir tmp;
        const auto empty = tmp.file("empty.ntxy", "N\tT\tX\tY\n");
        CHECK(capture([&](auto& out, auto& e) { return cli::cmd_plot(empty, tmp.path / "e.svg", {}, out, e); }).status == 1);
        CHECK(capture([&](auto& out, auto& e) {
                  return cli::cmd_plot(golden::kSamplePath, tmp.path / "no" / "such" / "dir.svg", {}, out, e);
              }).status == 2);
    }
}

TEST_SUITE("executable") {
    TEST_CASE("exit codes") {
        CHECK(run_binary("validate " + golden::kSamplePath) == 0);
        CHECK(run_binary("validate /nonexistent.ntxy") == 2);
        CHECK(run_binary("analyze " + golden::kSamplePath + " --window 100:200") == 1);
        CHECK(run_binary("analyze " + golden::kSamplePath + " --full --area 100 --format json") == 0);
        CHECK(run_binary("compare " + golden::kSamplePath + " " + golden::kSamplePath + " --after-variance-mode trace") == 1);
        CHECK(run_binary("frobnicate") == 1);
    }
}
