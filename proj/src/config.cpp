#include "cmcf/config.hpp"

#include "cmcf/io.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace cmcf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line;
};

const std::set<std::string, std::less<>> kKnownKeys = {
    "curve", "folds",  "amplitude", "sampling", "radius",         "polyline_path", "model",
    "force", "nodes",  "tau",       "t_final",  "snapshot_every", "out_dir",       "scheme"};

double to_real(const Entry& e, std::string_view key) {
  double v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ConfigError(e.line, std::string(key) + " must be a finite number, got '" + e.value + "'");
  }
  return v;
}

long to_integer(const Entry& e, std::string_view key) {
  long v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(e.line, std::string(key) + " must be an integer, got '" + e.value + "'");
  }
  return v;
}

}  // namespace

Config RunSpec::solver_config() const {
  Config config;
  config.tau = tau;
  config.t_final = t_final;
  config.model = model;
  config.snapshot_every = snapshot_every;
  config.scheme = scheme;
  return config;
}

RunSpec parse_config(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    if (!kKnownKeys.contains(key)) throw ConfigError(line_no, "unknown key '" + key + "'");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    if (entries.contains(key)) throw ConfigError(line_no, "duplicate key '" + key + "'");
    entries.emplace(key, Entry{value, line_no});
  }

  auto get = [&](std::string_view key) -> const Entry* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  RunSpec spec;

  // Initial curve: exactly one variant, from `curve` and/or its keys.
  const bool has_radial = get("folds") || get("amplitude") || get("sampling");
  const bool has_circle = get("radius") != nullptr;
  const bool has_polyline = get("polyline_path") != nullptr;
  std::string kind;
  if (const Entry* e = get("curve")) {
    kind = e->value;
    if (kind != "radial" && kind != "circle" && kind != "polyline") {
      throw ConfigError(e->line, "curve must be radial, circle or polyline");
    }
  }
  const int groups = int(has_radial) + int(has_circle) + int(has_polyline);
  if (groups > 1 || (groups == 0 && kind.empty()) ||
      (!kind.empty() && groups == 1 &&
       ((kind == "radial") != has_radial || (kind == "circle") != has_circle ||
        (kind == "polyline") != has_polyline))) {
    throw ConfigError(0, "exactly one initial curve");
  }
  if (kind.empty()) kind = has_radial ? "radial" : has_circle ? "circle" : "polyline";

  if (kind == "radial") {
    RadialCurveSpec radial;
    const Entry* folds = get("folds");
    const Entry* amplitude = get("amplitude");
    if (!folds || !amplitude) throw ConfigError(0, "radial curve needs folds and amplitude");
    const long n = to_integer(*folds, "folds");
    if (n < 1 || n > 1'000'000) throw ConfigError(folds->line, "folds >= 1");
    radial.folds = static_cast<int>(n);
    radial.amplitude = to_real(*amplitude, "amplitude");
    if (!(std::abs(radial.amplitude) < 1)) throw ConfigError(amplitude->line, "|amplitude| < 1");
    if (const Entry* s = get("sampling")) {
      if (s->value == "angle") {
        radial.sampling = RadialSampling::uniform_angle;
      } else if (s->value == "arclength") {
        radial.sampling = RadialSampling::uniform_arclength;
      } else {
        throw ConfigError(s->line, "sampling must be angle or arclength");
      }
    }
    spec.curve = radial;
  } else if (kind == "circle") {
    const Entry* r = get("radius");
    if (!r) throw ConfigError(0, "circle curve needs radius");
    CircleCurveSpec circle{to_real(*r, "radius")};
    if (!(circle.radius > 0)) throw ConfigError(r->line, "radius > 0");
    spec.curve = circle;
  } else {
    const Entry* p = get("polyline_path");
    if (!p) throw ConfigError(0, "polyline curve needs polyline_path");
    spec.curve = PolylineCurveSpec{p->value};
  }

  const Entry* model = get("model");
  if (!model) throw ConfigError(0, "model is required");
  const Entry* force = get("force");
  if (model->value == "csf") {
    spec.model = Model::curve_shortening();
  } else if (model->value == "area_preserving") {
    spec.model = Model::area_preserving();
  } else if (model->value == "constant") {
    if (!force) throw ConfigError(model->line, "model = constant needs force");
    spec.model = Model::constant_force(to_real(*force, "force"));
  } else {
    throw ConfigError(model->line, "model must be csf, constant or area_preserving");
  }
  if (force && spec.model.law != Model::Law::constant_force) {
    throw ConfigError(force->line, "force is only valid with model = constant");
  }

  if (const Entry* e = get("nodes")) {
    const long m = to_integer(*e, "nodes");
    if (m < 4 || m > 100'000'000) throw ConfigError(e->line, "nodes >= 4");
    spec.nodes = m;
  }
  if (const Entry* e = get("tau")) spec.tau = to_real(*e, "tau");
  if (!(spec.tau > 0)) throw ConfigError(get("tau") ? get("tau")->line : 0, "tau > 0");
  const Entry* t_final = get("t_final");
  if (!t_final) throw ConfigError(0, "t_final is required");
  spec.t_final = to_real(*t_final, "t_final");
  if (!(spec.t_final >= 0)) throw ConfigError(t_final->line, "t_final >= 0");
  if (spec.t_final / spec.tau > 1e12) throw ConfigError(t_final->line, "t_final / tau too large");
  if (const Entry* e = get("snapshot_every")) {
    spec.snapshot_every = to_integer(*e, "snapshot_every");
    if (spec.snapshot_every < 1) throw ConfigError(e->line, "snapshot_every >= 1");
  }
  if (const Entry* e = get("out_dir")) spec.out_dir = e->value;
  if (const Entry* e = get("scheme")) {
    if (e->value == "redistributing") {
      spec.scheme = StepScheme::redistributing;
    } else if (e->value == "flux") {
      spec.scheme = StepScheme::curvature_flux;
    } else {
      throw ConfigError(e->line, "scheme must be redistributing or flux");
    }
  }
  return spec;
}

Curve make_initial_curve(const RunSpec& spec, const std::filesystem::path& base_dir) {
  const Eigen::Index nodes = spec.nodes.value_or(kDefaultNodes);
  try {
    if (const auto* radial = std::get_if<RadialCurveSpec>(&spec.curve)) {
      return build_radial_curve(radial->folds, radial->amplitude, nodes, radial->sampling);
    }
    if (const auto* circle = std::get_if<CircleCurveSpec>(&spec.curve)) {
      return build_circle(circle->radius, nodes);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  const auto& poly = std::get<PolylineCurveSpec>(spec.curve);
  const auto path = poly.path.is_relative() ? base_dir / poly.path : poly.path;
  Curve curve = read_polyline(path);
  return spec.nodes ? resample_uniform(curve, *spec.nodes) : curve;
}

}  // namespace cmcf
