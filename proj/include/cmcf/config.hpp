// Run configuration: one "key = value" per line, '#' starts a comment.
//
// Keys: curve (radial|circle|polyline), folds, amplitude, sampling
// (angle|arclength), radius, polyline_path, model (csf|constant|
// area_preserving), force, nodes, tau, t_final, snapshot_every, out_dir,
// scheme (redistributing|flux).
#pragma once

#include "cmcf/oracles.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace cmcf {

/// Malformed or invalid configuration. line() is 0 for whole-file
/// validation failures.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : "invalid config: " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct RadialCurveSpec {
  int folds = 0;
  double amplitude = 0;
  RadialSampling sampling = RadialSampling::uniform_angle;
};

struct CircleCurveSpec {
  double radius = 1;
};

struct PolylineCurveSpec {
  std::filesystem::path path;
};

using InitialCurveSpec = std::variant<RadialCurveSpec, CircleCurveSpec, PolylineCurveSpec>;

struct RunSpec {
  InitialCurveSpec curve;
  Model model;
  std::optional<Eigen::Index> nodes;  ///< defaults to 200; polylines keep their own count
  double tau = 1e-4;
  double t_final = 0;
  long snapshot_every = 100;
  std::filesystem::path out_dir = "out";
  StepScheme scheme = StepScheme::redistributing;

  Config solver_config() const;
};

inline constexpr Eigen::Index kDefaultNodes = 200;

RunSpec parse_config(std::string_view text);

/// Builds the initial curve; relative polyline paths resolve against base_dir.
Curve make_initial_curve(const RunSpec& spec, const std::filesystem::path& base_dir = {});

}  // namespace cmcf
