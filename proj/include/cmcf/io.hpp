// Plain-text curve, snapshot and summary formats.
//
// Polyline:  one "x y" pair per line, '#' comments, closure implied.
// Snapshot:  "# t=<t> M=<M>" header, then "i x y kappa" rows, i = 1..M.
// Summary:   CSV "t,length,area,F,isoperimetric_ratio,uniformity_ratio".
// All reals are written with 17 significant digits so they read back exactly.
#pragma once

#include "cmcf/oracles.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cmcf {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest-round-trip-safe decimal text for a double.
std::string format_real(double value);

std::vector<Point<double>> parse_polyline(std::string_view text);
Curve read_polyline(const std::filesystem::path& path);
void write_polyline(const Curve& curve, const std::filesystem::path& path);

struct SnapshotData {
  double t = 0;
  Curve curve;
  Vector<double> kappa;
};

std::string format_snapshot(double t, const Curve& curve, const Vector<double>& kappa);
void write_snapshot(double t, const Curve& curve, const Vector<double>& kappa,
                    const std::filesystem::path& path);
SnapshotData parse_snapshot(std::string_view text);
SnapshotData read_snapshot(const std::filesystem::path& path);

std::string format_summary(const std::vector<StepDiagnostics<double>>& diagnostics);
void write_summary(const std::vector<StepDiagnostics<double>>& diagnostics,
                   const std::filesystem::path& path);

/// One CSV row per study record, in report order, followed by fitted orders.
std::string format_study_report(const StudyReport& report);
void write_study_report(const StudyReport& report, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace cmcf
