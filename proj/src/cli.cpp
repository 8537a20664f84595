#include "cmcf/cli.hpp"

#include "cmcf/config.hpp"
#include "cmcf/io.hpp"
#include "cmcf/oracles.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace cmcf {

namespace {

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%05zu.txt", index);
  return buf;
}

StepScheme parse_scheme(const std::string& name) {
  return name == "flux" ? StepScheme::curvature_flux : StepScheme::redistributing;
}

int command_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  RunSpec spec;
  Curve initial = build_circle(1.0, 4);
  std::filesystem::path out_dir;
  try {
    spec = parse_config(read_text_file(config_path));
    const auto base = std::filesystem::path(config_path).parent_path();
    initial = make_initial_curve(spec, base);
    out_dir = spec.out_dir.is_relative() ? base / spec.out_dir : spec.out_dir;
    std::filesystem::create_directories(out_dir);
  } catch (const std::exception& e) {
    err << "error: " << config_path << ": " << e.what() << '\n';
    return kExitInvalid;
  }

  const Trajectory<double> traj = evolve(initial, spec.solver_config());
  try {
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      const auto& snap = traj.snapshots[k];
      const Vector<double> d = segment_lengths(snap.curve, 0.0);
      Vector<double> kappa = Vector<double>::Constant(d.size(), std::nan(""));
      if (d.minCoeff() > 0) kappa = discrete_curvature(snap.curve, d);
      write_snapshot(snap.t, snap.curve, kappa, out_dir / snapshot_name(k));
    }
    write_summary(traj.diagnostics, out_dir / "summary.csv");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  const auto& last = traj.diagnostics.back();
  out << "steps " << traj.steps << ", t = " << format_real(last.t) << ", area "
      << format_real(traj.diagnostics.front().area) << " -> " << format_real(last.area) << '\n';
  out << traj.snapshots.size() << " snapshots written to " << out_dir.string() << '\n';
  switch (traj.status) {
    case RunStatus::completed: return kExitOk;
    case RunStatus::extinct:
      out << "extinction at t = " << format_real(*traj.extinction_time) << '\n';
      return kExitOk;
    case RunStatus::aborted:
      err << "solver aborted at t = " << format_real(last.t) << ": " << traj.message << '\n';
      return kExitSolver;
  }
  return kExitSolver;
}

int command_oracle(Eigen::Index nodes, double tau, StepScheme scheme, std::ostream& out,
                   std::ostream& err) {
  // Shrinking unit circle against r(t) = sqrt(1 - 2t).
  Config csf;
  csf.tau = tau;
  csf.t_final = 0.6;
  csf.model = Model::curve_shortening();
  csf.snapshot_every = 1000;
  csf.scheme = scheme;
  const CircleOracle shrinking{1.0, csf.model};
  const Trajectory<double> traj = evolve(build_circle(1.0, nodes), csf);
  if (traj.status == RunStatus::aborted) {
    err << "solver aborted: " << traj.message << '\n';
    return kExitSolver;
  }
  double max_radius_error = 0;
  for (const auto& snap : traj.snapshots) {
    if (snap.t > 0.45) break;
    const double exact = *circle_radius(shrinking, snap.t);
    const double r = snap.curve.nodes().rowwise().norm().maxCoeff();
    max_radius_error = std::max(max_radius_error, std::abs(r - exact));
  }
  const double t_star = *circle_extinction_time(shrinking);
  out << "csf unit circle: M=" << nodes << " tau=" << format_real(tau) << '\n';
  if (traj.extinction_time) {
    out << "  extinction time " << format_real(*traj.extinction_time) << " (exact "
        << format_real(t_star) << ", error " << format_real(*traj.extinction_time - t_star)
        << ")\n";
  } else {
    out << "  no extinction detected by t = " << format_real(csf.t_final) << '\n';
  }
  out << "  max radius error up to t=0.45: " << format_real(max_radius_error) << '\n';

  // The conserved flow keeps the circle in place.
  Config ap = csf;
  ap.model = Model::area_preserving();
  ap.tau = 1e-4;
  ap.t_final = 1.0;
  const Curve circle = build_circle(1.0, nodes);
  const Trajectory<double> still = evolve(circle, ap);
  if (still.status == RunStatus::aborted) {
    err << "solver aborted: " << still.message << '\n';
    return kExitSolver;
  }
  const double drift = (still.final_curve().nodes() - circle.nodes()).rowwise().norm().maxCoeff();
  out << "area-preserving unit circle over [0,1] at tau=1e-4: max node displacement "
      << format_real(drift) << '\n';
  return kExitOk;
}

void print_report(const StudyReport& report, std::ostream& out) {
  for (const auto& r : report.records) {
    out << r.label << " [" << r.model << ", M=" << r.nodes << ", tau=" << format_real(r.tau)
        << "]";
    if (r.model == "geometry") {
      out << " curvature error " << format_real(r.error) << '\n';
      continue;
    }
    out << " area " << format_real(r.initial_area) << " -> " << format_real(r.final_area)
        << " (drift " << format_real(100 * r.area_drift) << "%)";
    if (r.extinction_time) {
      out << ", extinct at t=" << format_real(*r.extinction_time);
    } else {
      out << ", isoperimetric ratio " << format_real(r.final_isoperimetric_ratio);
    }
    out << ", max uniformity " << format_real(r.max_uniformity_ratio);
    if (r.status == RunStatus::aborted) out << ", ABORTED: " << r.message;
    out << '\n';
  }
  if (report.spatial_order) out << "fitted spatial order " << format_real(*report.spatial_order) << '\n';
  if (report.temporal_order) out << "fitted temporal order " << format_real(*report.temporal_order) << '\n';
}

bool any_aborted(const StudyReport& report) {
  for (const auto& r : report.records) {
    if (r.status == RunStatus::aborted) return true;
  }
  return false;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curve-shortening and area-preserving curvature flow of closed plane curves", "cmcf_cli"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Evolve one configured curve, writing snapshots and summary.csv");
  run->add_option("config", config_path, "key = value configuration file")->required();

  std::string scheme_name = "redistributing";
  const auto scheme_check = CLI::IsMember({"redistributing", "flux"});

  Eigen::Index oracle_nodes = 200;
  double oracle_tau = 1e-5;
  auto* oracle = app.add_subcommand("oracle", "Validate against the exact circle solutions");
  oracle->add_option("--nodes", oracle_nodes, "polygon nodes")->check(CLI::Range(4, 1 << 24));
  oracle->add_option("--tau", oracle_tau, "time step")->check(CLI::PositiveNumber);
  oracle->add_option("--scheme", scheme_name)->check(scheme_check);

  double examples_tau = 1e-4;
  Eigen::Index examples_nodes = 200;
  std::string examples_report;
  auto* examples = app.add_subcommand("examples", "Run the reference curve studies");
  examples->add_option("--tau", examples_tau, "time step")->check(CLI::PositiveNumber);
  examples->add_option("--nodes", examples_nodes, "nodes per curve")->check(CLI::Range(4, 1 << 24));
  examples->add_option("--report", examples_report, "write the study report CSV here");
  examples->add_option("--scheme", scheme_name)->check(scheme_check);

  ConvergenceSetup setup;
  std::string convergence_report;
  auto* convergence = app.add_subcommand("convergence", "Spatial and temporal refinement study");
  convergence->add_option("--base-nodes", setup.base_nodes);
  convergence->add_option("--spatial-levels", setup.spatial_levels);
  convergence->add_option("--base-tau", setup.base_tau);
  convergence->add_option("--temporal-levels", setup.temporal_levels);
  convergence->add_option("--report", convergence_report, "write the study report CSV here");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kExitInvalid;
  }

  try {
    if (*run) return command_run(config_path, out, err);
    if (*oracle) return command_oracle(oracle_nodes, oracle_tau, parse_scheme(scheme_name), out, err);
    if (*examples) {
      const StudyReport report = run_paper_examples(examples_tau, examples_nodes, parse_scheme(scheme_name));
      print_report(report, out);
      if (!examples_report.empty()) write_study_report(report, examples_report);
      return any_aborted(report) ? kExitSolver : kExitOk;
    }
    if (*convergence) {
      StudyReport report;
      try {
        report = convergence_study(setup);
      } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalid;
      }
      print_report(report, out);
      if (!convergence_report.empty()) write_study_report(report, convergence_report);
      return any_aborted(report) ? kExitSolver : kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitInvalid;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace cmcf
