#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

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
    path = fs::temp_directory_path() / ("cmcf_io_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Curve unit_square() {
  return load_polyline(std::vector<Point<double>>{{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("format_real round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(format_real(v)) == v);
  }
}

TEST_CASE("parse_polyline") {
  const auto pts = parse_polyline("# outline\n0 0\n  1\t0 \n\n1 1 # corner\n+0 1e0\n");
  REQUIRE(pts.size() == 4);
  CHECK(pts[1] == Point<double>(1, 0));
  CHECK(pts[3] == Point<double>(0, 1));
}

TEST_CASE("parse_polyline reports the offending line") {
  auto message = [](std::string_view text) {
    try {
      parse_polyline(text);
    } catch (const IoError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("0 0\n1 0\n1 x\n").find("line 3") != std::string::npos);
  CHECK(message("0 0\n1 0 2\n").find("line 2") != std::string::npos);
  CHECK(message("0 0\n1\n").find("line 2") != std::string::npos);
  CHECK(message("nan 0\n").find("line 1") != std::string::npos);
  CHECK(message("inf 0\n").find("line 1") != std::string::npos);
}

TEST_CASE("polyline file round trip") {
  TempDir dir;
  const auto curve = build_radial_curve(5, 0.65, 37);
  write_polyline(curve, dir.path / "c.txt");
  CHECK(read_polyline(dir.path / "c.txt") == curve);
  CHECK_THROWS_AS(read_polyline(dir.path / "missing.txt"), IoError);
  write_text_file(dir.path / "short.txt", "0 0\n1 0\n1 1\n");
  CHECK_THROWS_AS(read_polyline(dir.path / "short.txt"), IoError);
  write_text_file(dir.path / "dup.txt", "0 0\n1 0\n1 0\n0 1\n");
  CHECK_THROWS_AS(read_polyline(dir.path / "dup.txt"), IoError);
}

TEST_CASE("snapshot of the unit square") {
  const auto sq = unit_square();
  const auto kappa = discrete_curvature(sq, segment_lengths(sq));
  const auto text = format_snapshot(0.25, sq, kappa);
  const auto lines = lines_of(text);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "# t=0.25 M=4");
  CHECK(lines[1].rfind("1 0 0 ", 0) == 0);
  CHECK(lines[4].rfind("4 0 1 ", 0) == 0);
  const auto back = parse_snapshot(text);
  CHECK(back.t == 0.25);
  CHECK(back.curve == sq);
  CHECK(back.kappa == kappa);
}

TEST_CASE("snapshot file round trip is exact") {
  TempDir dir;
  const auto c = build_radial_curve(10, 0.45, 200, RadialSampling::uniform_arclength);
  const auto kappa = discrete_curvature(c, segment_lengths(c));
  write_snapshot(0.123456789, c, kappa, dir.path / "s.txt");
  const auto back = read_snapshot(dir.path / "s.txt");
  CHECK(back.t == 0.123456789);
  CHECK(back.curve == c);
  CHECK(back.kappa == kappa);
}

TEST_CASE("example 2 initial snapshot") {
  const auto c = build_radial_curve(5, 0.65, 200);
  const auto kappa = discrete_curvature(c, segment_lengths(c));
  const auto back = parse_snapshot(format_snapshot(0.0, c, kappa));
  CHECK(back.curve.size() == 200);
  CHECK(enclosed_area(back.curve) == Approx(3.805).epsilon(0.01));
}

TEST_CASE("snapshot parse errors") {
  CHECK_THROWS_AS(parse_snapshot("1 0 0 1\n2 1 0 1\n3 1 1 1\n4 0 1 1\n"), IoError);
  CHECK_THROWS_AS(parse_snapshot("# t=0 M=5\n1 0 0 1\n2 1 0 1\n3 1 1 1\n4 0 1 1\n"), IoError);
  CHECK_THROWS_AS(parse_snapshot("# t=0 M=4\n1 0 0 1\n3 1 0 1\n2 1 1 1\n4 0 1 1\n"), IoError);
  CHECK_THROWS_AS(parse_snapshot("# t=0 M=4\n1 0 0 1\n2 1 0\n3 1 1 1\n4 0 1 1\n"), IoError);
  const auto sq = unit_square();
  CHECK_THROWS_AS(format_snapshot(0, sq, Vector<double>::Zero(3)), std::invalid_argument);
}

TEST_CASE("summary agrees with snapshots") {
  TempDir dir;
  Config cfg;
  cfg.tau = 1e-3;
  cfg.t_final = 0.05;
  cfg.model = Model::area_preserving();
  cfg.snapshot_every = 10;
  const auto traj = evolve(build_radial_curve(5, 0.65, 64), cfg);
  REQUIRE(traj.snapshots.size() == traj.diagnostics.size());
  const auto lines = lines_of(format_summary(traj.diagnostics));
  REQUIRE(lines.size() == traj.diagnostics.size() + 1);
  CHECK(lines[0] == "t,length,area,F,isoperimetric_ratio,uniformity_ratio");
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    const auto& s = traj.snapshots[k];
    const auto file = dir.path / ("s" + std::to_string(k) + ".txt");
    write_snapshot(s.t, s.curve, discrete_curvature(s.curve, segment_lengths(s.curve)), file);
    const auto back = read_snapshot(file);
    std::istringstream row(lines[k + 1]);
    std::vector<double> cols;
    for (std::string f; std::getline(row, f, ',');) cols.push_back(std::stod(f));
    REQUIRE(cols.size() == 6);
    CHECK(cols[0] == back.t);
    CHECK(cols[2] == enclosed_area(back.curve));
    CHECK(cols[1] == curve_length(segment_lengths(back.curve)));
  }
}

TEST_CASE("study report layout") {
  StudyReport report;
  const ExampleSpec spec{"circle", "circle radius=1", build_circle(1.0, 32), Model::area_preserving(),
                         0.002};
  report.records.push_back(run_study(spec, 1e-3));
  report.spatial_order = 2.0;
  const auto lines = lines_of(format_study_report(report));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] ==
        "label,initial,model,M,tau,t_final,status,initial_area,final_area,area_drift,"
        "final_isoperimetric_ratio,max_uniformity_ratio,extinction_time,error");
  CHECK(lines[1].rfind("circle,", 0) == 0);
  CHECK(lines[1].find(",area_preserving,32,") != std::string::npos);
  CHECK(lines[2] == "# spatial_order=2");
  report.temporal_order = 1.0;
  CHECK(lines_of(format_study_report(report)).back() == "# temporal_order=1");
}

TEST_CASE("bundled pi outline matches the built-in fixture") {
  const auto file = read_polyline(fs::path(CMCF_SOURCE_DIR) / "data" / "pi_shape.txt");
  CHECK(file == load_polyline(pi_outline()));
}
