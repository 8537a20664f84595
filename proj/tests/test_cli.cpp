#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmcf/cli.hpp"
#include "cmcf/config.hpp"
#include "cmcf/io.hpp"

#include <filesystem>
#include <random>
#include <sstream>

using namespace cmcf;
using doctest::Approx;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("cmcf_cli_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config_error(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

constexpr const char* kExample2 =
    "# five-fold star\n"
    "curve = radial\n"
    "folds = 5\n"
    "amplitude = 0.65\n"
    "model = area_preserving\n"
    "nodes = 200\n"
    "tau = 1e-4\n"
    "t_final = 0.5   # end time\n";

constexpr std::string_view kCircle = "curve = circle\nradius = 1\nmodel = csf\nt_final = 1\n";

std::string circle_with(std::string_view extra) { return std::string(kCircle) + std::string(extra); }

}  // namespace

TEST_CASE("parse the five-fold configuration") {
  const auto spec = parse_config(kExample2);
  const auto* radial = std::get_if<RadialCurveSpec>(&spec.curve);
  REQUIRE(radial);
  CHECK(radial->folds == 5);
  CHECK(radial->amplitude == 0.65);
  CHECK(spec.model == Model::area_preserving());
  CHECK(spec.nodes == 200);
  CHECK(spec.tau == 1e-4);
  CHECK(spec.t_final == 0.5);
  const auto cfg = spec.solver_config();
  CHECK(cfg.tau == 1e-4);
  CHECK(cfg.scheme == StepScheme::redistributing);
  CHECK(make_initial_curve(spec).size() == 200);
}

TEST_CASE("configuration defaults") {
  const auto spec = parse_config("curve = circle\nradius = 1\nmodel = csf\nt_final = 0.1\n");
  CHECK(spec.tau == 1e-4);
  CHECK(spec.snapshot_every == 100);
  CHECK(spec.out_dir == "out");
  CHECK_FALSE(spec.nodes.has_value());
  CHECK(make_initial_curve(spec).size() == kDefaultNodes);
  CHECK(std::get<CircleCurveSpec>(spec.curve).radius == 1.0);
}

TEST_CASE("constant force and scheme keys") {
  const auto spec =
      parse_config("curve = circle\nradius = 2\nmodel = constant\nforce = -0.5\n"
                   "scheme = flux\nt_final = 1\n");
  CHECK(spec.model == Model::constant_force(-0.5));
  CHECK(spec.scheme == StepScheme::curvature_flux);
}

TEST_CASE("configuration validation messages") {
  CHECK(config_error(circle_with("tau = -1\n")).find("tau > 0") != std::string::npos);
  CHECK(config_error("curve = radial\nfolds = 5\namplitude = 0.65\npolyline_path = a.txt\nmodel = csf\n")
            .find("exactly one initial curve") != std::string::npos);
  CHECK(config_error("curve = radial\nfolds = 5\namplitude = 1.2\nmodel = csf\n").find("|amplitude| < 1") !=
        std::string::npos);
  CHECK(config_error(circle_with("snapshot_every = 0\n")).find("snapshot_every >= 1") != std::string::npos);
  CHECK(config_error("curve = circle\nradius = 1\nmodel = csf\nt_final = -1\n").find("t_final >= 0") !=
        std::string::npos);
  CHECK(config_error(circle_with("nodes = 3\n")).find("nodes >= 4") != std::string::npos);
  CHECK(config_error("curve = circle\n") != "no error");
  CHECK(config_error(circle_with("force = 1\n")) != "no error");
  CHECK(config_error("curve = circle\nmodel = constant\n") != "no error");
  CHECK(config_error("curve = circle\nmodel = mystery\n") != "no error");
}

TEST_CASE("configuration parse errors carry line numbers") {
  CHECK(config_error(circle_with("colour = red\n")).rfind("line 5", 0) == 0);
  CHECK(config_error("curve = circle\n\nmodel csf\n").rfind("line 3", 0) == 0);
  CHECK(config_error(circle_with("tau = fast\n")).rfind("line 5", 0) == 0);
  CHECK(config_error(circle_with("model = csf\n")).rfind("line 5", 0) == 0);
  CHECK(config_error("curve = circle\nmodel =\n").rfind("line 2", 0) == 0);
}

TEST_CASE("malformed configurations never crash the cli") {
  TempDir dir;
  const std::vector<std::string> fragments = {
      "curve = radial", "curve = polyline", "folds = x", "folds = -3",  "amplitude = 2",
      "tau = 0",        "tau = nan",        "model =",   "= csf",       "nodes = 2.5",
      "t_final = inf",  "snapshot_every = -1", "force = 1", "scheme = odd", "sampling = rows",
      "radius = -1",     "polyline_path = nope.txt", "out_dir =", "\x01\x02", "model = csf = csf"};
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, fragments.size() - 1);
  for (int trial = 0; trial < 60; ++trial) {
    std::string text = "curve = circle\nradius = 1\nmodel = csf\nt_final = 0.001\nout_dir = o\n";
    const int extra = 1 + trial % 3;
    for (int k = 0; k < extra; ++k) text += fragments[pick(rng)] + "\n";
    const auto path = dir.path / ("fuzz" + std::to_string(trial) + ".conf");
    write_text_file(path, text);
    const auto r = cli({"run", path.string()});
    CAPTURE(text);
    CHECK((r.code == kExitOk || r.code == kExitInvalid));
    if (r.code == kExitInvalid) CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("cli usage errors") {
  CHECK(cli({}).code == kExitInvalid);
  CHECK(cli({"frobnicate"}).code == kExitInvalid);
  CHECK(cli({"run"}).code == kExitInvalid);
  const auto missing = cli({"run", "definitely_missing.conf"});
  CHECK(missing.code == kExitInvalid);
  CHECK(missing.err.find("definitely_missing.conf") != std::string::npos);
  CHECK(cli({"oracle", "--tau", "-1"}).code == kExitInvalid);
  CHECK(cli({"convergence", "--spatial-levels", "2"}).code == kExitInvalid);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("run writes snapshots and a summary") {
  TempDir dir;
  write_text_file(dir.path / "star.conf",
                  "curve = radial\nfolds = 5\namplitude = 0.65\nmodel = area_preserving\n"
                  "nodes = 64\ntau = 1e-3\nt_final = 0.05\nsnapshot_every = 10\nout_dir = result\n");
  const auto r = cli({"run", (dir.path / "star.conf").string()});
  REQUIRE(r.code == kExitOk);
  const auto out = dir.path / "result";
  for (int k = 0; k <= 5; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%05d.txt", k);
    REQUIRE(fs::exists(out / name));
  }
  CHECK_FALSE(fs::exists(out / "snapshot_00006.txt"));
  const auto last = read_snapshot(out / "snapshot_00005.txt");
  CHECK(last.t == Approx(0.05));
  CHECK(last.curve.size() == 64);
  const auto summary = read_text_file(out / "summary.csv");
  CHECK(summary.rfind("t,length,area,F,isoperimetric_ratio,uniformity_ratio\n", 0) == 0);

  SUBCASE("runs are deterministic") {
    write_text_file(dir.path / "again.conf",
                    "curve = radial\nfolds = 5\namplitude = 0.65\nmodel = area_preserving\n"
                    "nodes = 64\ntau = 1e-3\nt_final = 0.05\nsnapshot_every = 10\nout_dir = again\n");
    REQUIRE(cli({"run", (dir.path / "again.conf").string()}).code == kExitOk);
    CHECK(read_text_file(dir.path / "again" / "summary.csv") == summary);
    CHECK(read_text_file(dir.path / "again" / "snapshot_00005.txt") ==
          read_text_file(out / "snapshot_00005.txt"));
  }
}

TEST_CASE("run reports extinction") {
  TempDir dir;
  write_text_file(dir.path / "c.conf",
                  "curve = circle\nradius = 0.1\nmodel = csf\nnodes = 32\ntau = 1e-4\nt_final = 0.01\n");
  const auto r = cli({"run", (dir.path / "c.conf").string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("extinction at t = ") != std::string::npos);
}

TEST_CASE("run with a polyline relative to the config") {
  TempDir dir;
  fs::create_directories(dir.path / "shapes");
  write_text_file(dir.path / "shapes" / "sq.txt", "0 0\n2 0\n2 2\n0 2\n");
  write_text_file(dir.path / "p.conf",
                  "curve = polyline\npolyline_path = shapes/sq.txt\nnodes = 40\n"
                  "model = area_preserving\ntau = 1e-3\nt_final = 0.01\n");
  const auto r = cli({"run", (dir.path / "p.conf").string()});
  REQUIRE(r.code == kExitOk);
  const auto first = read_snapshot(dir.path / "out" / "snapshot_00000.txt");
  CHECK(first.curve.size() == 40);
  CHECK(enclosed_area(first.curve) == Approx(4.0));
}

TEST_CASE("solver failure exits with the solver code") {
  TempDir dir;
  write_text_file(dir.path / "blow.conf",
                  "curve = circle\nradius = 1\nmodel = constant\nforce = 1e300\n"
                  "nodes = 16\ntau = 1\nt_final = 10\n");
  const auto r = cli({"run", (dir.path / "blow.conf").string()});
  CHECK(r.code == kExitSolver);
  CHECK(r.err.find("solver aborted") != std::string::npos);
  CHECK(fs::exists(dir.path / "out" / "summary.csv"));
}

TEST_CASE("oracle subcommand") {
  const auto r = cli({"oracle", "--nodes", "64", "--tau", "1e-4"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("extinction time") != std::string::npos);
  CHECK(r.out.find("error") != std::string::npos);
  CHECK(r.out.find("max node displacement") != std::string::npos);
}

TEST_CASE("examples subcommand") {
  TempDir dir;
  const auto report = dir.path / "report.csv";
  const auto r = cli({"examples", "--tau", "1e-3", "--nodes", "64", "--report", report.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("example2") != std::string::npos);
  CHECK(r.out.find("drift") != std::string::npos);
  const auto text = read_text_file(report);
  CHECK(text.find("\nexample1,") != std::string::npos);
  CHECK(text.find("\npi_shape,") != std::string::npos);
}

TEST_CASE("convergence subcommand") {
  const auto r = cli({"convergence", "--base-nodes", "16", "--spatial-levels", "3", "--base-tau", "1e-3",
                      "--temporal-levels", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("fitted spatial order") != std::string::npos);
  CHECK(r.out.find("fitted temporal order") != std::string::npos);
}

TEST_CASE("bundled configurations are valid") {
  const fs::path data = fs::path(CMCF_SOURCE_DIR) / "data";
  for (const char* name : {"example1.conf", "example2.conf", "example3.conf", "pi_shape.conf"}) {
    CAPTURE(name);
    const auto spec = parse_config(read_text_file(data / name));
    CHECK(make_initial_curve(spec, data).size() == 200);
  }
  const auto spec = parse_config(read_text_file(data / "example2.conf"));
  CHECK(spec.model == Model::area_preserving());
  CHECK(spec.t_final == 0.5);
}
