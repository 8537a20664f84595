// Analytic circle solutions and the study harnesses built on them.
#pragma once

#include "cmcf/curve.hpp"
#include "cmcf/flow.hpp"
#include "cmcf/stepper.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cmcf {

using Curve = CurveState<double>;
using Model = FlowModel<double>;
using Config = SolverConfig<double>;

struct CircleOracle {
  double r0 = 1.0;
  Model law = Model::curve_shortening();
};

/// Radius of the exact circle solution at time t, or nullopt once the circle
/// has shrunk to a point. Solves dr/dt = -1/r + F.
std::optional<double> circle_radius(const CircleOracle& oracle, double t);

/// Time at which the exact circle solution reaches radius zero, if it does.
std::optional<double> circle_extinction_time(const CircleOracle& oracle);

/// The closed nonconvex "Pi"-shaped outline used in place of an externally
/// defined test curve: twelve corners, counterclockwise, area 20.16.
std::vector<Point<double>> pi_outline();

struct ExampleSpec {
  std::string label;
  std::string initial;  ///< human-readable description of the initial curve
  Curve curve;
  Model model;
  double t_final;
};

/// The four reference studies at the given node count: 4-, 5- and 10-fold
/// radial curves (arc-length sampled) and the Pi outline resampled uniformly.
std::vector<ExampleSpec> reference_example_specs(Eigen::Index nodes = 200);

struct StudyRecord {
  std::string label;
  std::string initial;
  std::string model;
  Eigen::Index nodes = 0;
  double tau = 0;
  double t_final = 0;
  RunStatus status = RunStatus::completed;
  std::string message;

  double initial_area = 0;
  double final_area = 0;
  double area_drift = 0;  ///< (A_final - A_initial) / A_initial
  double final_isoperimetric_ratio = 0;
  double max_uniformity_ratio = 0;
  std::optional<double> extinction_time;
  bool length_strictly_decreasing = false;
  bool isoperimetric_non_increasing = false;  ///< within 1e-6 per recorded step
  std::vector<StepDiagnostics<double>> history;

  double error = 0;  ///< convergence studies only
};

struct StudyReport {
  std::vector<StudyRecord> records;
  std::optional<double> spatial_order;
  std::optional<double> temporal_order;

  const StudyRecord* find(const std::string& label) const;
};

/// Runs one study and summarises its trajectory.
StudyRecord run_study(const ExampleSpec& spec, double tau, long snapshot_every = 1,
                      StepScheme scheme = StepScheme::redistributing);

/// Runs all reference studies concurrently; records keep the order of
/// reference_example_specs(). A failing run is reported, not rethrown.
StudyReport run_paper_examples(double tau = 1e-4, Eigen::Index nodes = 200,
                               StepScheme scheme = StepScheme::redistributing);

struct ConvergenceSetup {
  Eigen::Index base_nodes = 50;
  int spatial_levels = 4;
  double base_tau = 4e-5;
  int temporal_levels = 3;
  Eigen::Index temporal_nodes = 200;
};

/// Curvature error of the unit-circle polygon under node doubling, and
/// extinction-time error of the shrinking unit circle under step halving,
/// with least-squares log-log slopes.
StudyReport convergence_study(const ConvergenceSetup& setup);
StudyReport convergence_study(Eigen::Index base_nodes, double base_tau, int levels);

/// Least-squares slope of log(error) against log(h).
double fitted_order(const std::vector<double>& h, const std::vector<double>& error);

}  // namespace cmcf
