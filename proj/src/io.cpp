#include "cmcf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cmcf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto start = line.find_first_not_of(" \t\r", pos);
    if (start == std::string_view::npos) break;
    auto end = line.find_first_of(" \t\r", start);
    if (end == std::string_view::npos) end = line.size();
    fields.push_back(line.substr(start, end - start));
    pos = end;
  }
  return fields;
}

double parse_real(std::string_view field, std::size_t line_no) {
  double value = 0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw IoError("line " + std::to_string(line_no) + ": invalid number '" + std::string(field) +
                  "'");
  }
  return value;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    fn(text.substr(pos, end - pos), line_no);
    pos = end + 1;
  }
}

Curve make_curve(const std::vector<Point<double>>& points) {
  try {
    return load_polyline(points);
  } catch (const std::invalid_argument& e) {
    throw IoError(e.what());
  }
}

}  // namespace

std::string format_real(double value) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(17);
  out << value;
  return out.str();
}

std::vector<Point<double>> parse_polyline(std::string_view text) {
  std::vector<Point<double>> points;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    const auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) return;
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw IoError("line " + std::to_string(line_no) + ": expected \"x y\"");
    }
    points.emplace_back(parse_real(fields[0], line_no), parse_real(fields[1], line_no));
  });
  return points;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing " + path.string());
}

Curve read_polyline(const std::filesystem::path& path) {
  try {
    return make_curve(parse_polyline(read_text_file(path)));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_polyline(const Curve& curve, const std::filesystem::path& path) {
  std::string text;
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    text += format_real(curve.nodes()(i, 0)) + ' ' + format_real(curve.nodes()(i, 1)) + '\n';
  }
  write_text_file(path, text);
}

std::string format_snapshot(double t, const Curve& curve, const Vector<double>& kappa) {
  if (kappa.size() != curve.size()) throw std::invalid_argument("curvature count mismatch");
  std::string text = "# t=" + format_real(t) + " M=" + std::to_string(curve.size()) + '\n';
  for (Eigen::Index i = 0; i < curve.size(); ++i) {
    text += std::to_string(i + 1) + ' ' + format_real(curve.nodes()(i, 0)) + ' ' +
            format_real(curve.nodes()(i, 1)) + ' ' + format_real(kappa(i)) + '\n';
  }
  return text;
}

void write_snapshot(double t, const Curve& curve, const Vector<double>& kappa,
                    const std::filesystem::path& path) {
  write_text_file(path, format_snapshot(t, curve, kappa));
}

SnapshotData parse_snapshot(std::string_view text) {
  std::optional<double> t;
  long declared = -1;
  std::vector<Point<double>> points;
  std::vector<double> kappa;
  for_each_line(text, [&](std::string_view raw, std::size_t line_no) {
    const auto line = trim(raw);
    if (line.empty()) return;
    if (line.front() == '#') {
      if (t) return;
      for (const auto field : split_fields(line.substr(1))) {
        if (field.starts_with("t=")) t = parse_real(field.substr(2), line_no);
        if (field.starts_with("M=")) declared = static_cast<long>(parse_real(field.substr(2), line_no));
      }
      return;
    }
    const auto fields = split_fields(line);
    if (fields.size() != 4) {
      throw IoError("line " + std::to_string(line_no) + ": expected \"i x y kappa\"");
    }
    if (parse_real(fields[0], line_no) != double(points.size() + 1)) {
      throw IoError("line " + std::to_string(line_no) + ": rows out of order");
    }
    points.emplace_back(parse_real(fields[1], line_no), parse_real(fields[2], line_no));
    kappa.push_back(parse_real(fields[3], line_no));
  });
  if (!t) throw IoError("snapshot header '# t=... M=...' missing");
  if (declared != static_cast<long>(points.size())) {
    throw IoError("snapshot declares M=" + std::to_string(declared) + " but has " +
                  std::to_string(points.size()) + " rows");
  }
  SnapshotData snap{*t, make_curve(points), Vector<double>(static_cast<Eigen::Index>(kappa.size()))};
  for (std::size_t i = 0; i < kappa.size(); ++i) snap.kappa(static_cast<Eigen::Index>(i)) = kappa[i];
  return snap;
}

SnapshotData read_snapshot(const std::filesystem::path& path) {
  try {
    return parse_snapshot(read_text_file(path));
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string format_summary(const std::vector<StepDiagnostics<double>>& diagnostics) {
  std::string text = "t,length,area,F,isoperimetric_ratio,uniformity_ratio\n";
  for (const auto& d : diagnostics) {
    text += format_real(d.t) + ',' + format_real(d.length) + ',' + format_real(d.area) + ',' +
            format_real(d.forcing) + ',' + format_real(d.isoperimetric_ratio) + ',' +
            format_real(d.uniformity_ratio) + '\n';
  }
  return text;
}

void write_summary(const std::vector<StepDiagnostics<double>>& diagnostics,
                   const std::filesystem::path& path) {
  write_text_file(path, format_summary(diagnostics));
}

namespace {

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::extinct: return "extinct";
    case RunStatus::aborted: return "aborted";
  }
  return "unknown";
}

}  // namespace

std::string format_study_report(const StudyReport& report) {
  std::string text =
      "label,initial,model,M,tau,t_final,status,initial_area,final_area,area_drift,"
      "final_isoperimetric_ratio,max_uniformity_ratio,extinction_time,error\n";
  for (const auto& r : report.records) {
    text += r.label + ',' + r.initial + ',' + r.model + ',' + std::to_string(r.nodes) + ',' +
            format_real(r.tau) + ',' + format_real(r.t_final) + ',' + status_name(r.status) + ',' +
            format_real(r.initial_area) + ',' + format_real(r.final_area) + ',' +
            format_real(r.area_drift) + ',' + format_real(r.final_isoperimetric_ratio) + ',' +
            format_real(r.max_uniformity_ratio) + ',' +
            (r.extinction_time ? format_real(*r.extinction_time) : std::string()) + ',' +
            format_real(r.error) + '\n';
  }
  if (report.spatial_order) text += "# spatial_order=" + format_real(*report.spatial_order) + '\n';
  if (report.temporal_order) text += "# temporal_order=" + format_real(*report.temporal_order) + '\n';
  return text;
}

void write_study_report(const StudyReport& report, const std::filesystem::path& path) {
  write_text_file(path, format_study_report(report));
}

}  // namespace cmcf
