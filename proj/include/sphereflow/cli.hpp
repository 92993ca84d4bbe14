#pragma once

// Command-line front end. run_cli is the whole program minus main() so the
// test suite can drive it in-process with string streams.
//
// Exit codes: 0 success / experiment passed, 1 experiment failed,
// 2 malformed input or bad arguments.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphereflow/analysis.hpp"
#include "sphereflow/curve.hpp"
#include "sphereflow/experiments.hpp"
#include "sphereflow/flow.hpp"
#include "sphereflow/generate.hpp"
#include "sphereflow/io.hpp"
#include "sphereflow/metrics.hpp"

namespace sphereflow {
namespace cli {

inline std::vector<std::pair<int, double>> parse_modes(const std::string& text) {
  std::vector<std::pair<int, double>> modes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    const int m = std::stoi(item.substr(0, colon));
    const double phase = colon == std::string::npos ? 0.0 : std::stod(item.substr(colon + 1));
    modes.emplace_back(m, phase);
  }
  return modes;
}

struct CurveSpecFlags {
  double latitude = -1.0;  // < 0 means "not a latitude circle"
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  std::string modes = "3:0.0";
  int random_modes = 0;
  std::size_t n = 256;

  void attach(CLI::App* cmd, const std::string& prefix) {
    const std::string p = prefix.empty() ? "--" : "--" + prefix + "-";
    cmd->add_option(p + "latitude", latitude, "colatitude of a latitude circle (radians)");
    cmd->add_option(p + "amplitude", amplitude, "perturbation amplitude (radians)");
    cmd->add_option(p + "seed", seed, "perturbation seed");
    cmd->add_option(p + "modes", modes, "modes as m:phase,m:phase");
    cmd->add_option(p + "random-modes", random_modes, "number of random modes");
    cmd->add_option(p + "n", n, "vertex count");
  }

  CurveSpec to_spec() const {
    if (latitude > 0.0) {
      return CurveSpec::latitude(latitude, n);
    }
    PerturbationSpec spec;
    spec.seed = seed;
    spec.amplitude = amplitude;
    spec.random_mode_count = random_modes;
    if (random_modes == 0) {
      spec.modes = parse_modes(modes);
    }
    spec.n = n;
    return CurveSpec::perturbed_bisector(spec);
  }
};

struct Streams {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
};

inline ClosedSphericalCurve load_curve(const std::string& path, Streams& io) {
  if (path.empty() || path == "-") {
    return read_curve(io.in);
  }
  std::ifstream f(path);
  if (!f) {
    throw CurveFormatError("cannot open " + path);
  }
  return read_curve(f);
}

inline void emit(const std::string& path, const std::string& content, Streams& io) {
  if (path.empty() || path == "-") {
    io.out << content;
    return;
  }
  std::ofstream f(path);
  if (!f) {
    throw std::runtime_error("cannot write " + path);
  }
  f << content;
}

inline int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
                   std::ostream& err) {
  Streams io{in, out, err};
  CLI::App app{"curvature flow laboratory for spherical Jordan curves"};
  app.require_subcommand(1);

  // gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "emit a curve as JSON");
  CurveSpecFlags gen_flags;
  gen_flags.attach(gen, "");
  std::string gen_out;
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // evolve --------------------------------------------------------------
  auto* evolve_cmd = app.add_subcommand("evolve", "curve JSON -> trajectory JSONL");
  std::string evolve_in, evolve_out;
  FlowParams evolve_params;
  evolve_cmd->add_option("--in", evolve_in, "input curve file (default stdin)");
  evolve_cmd->add_option("--out", evolve_out, "output file (default stdout)");
  evolve_cmd->add_option("--t-end", evolve_params.t_end, "flow end time");
  evolve_cmd->add_option("--cfl", evolve_params.cfl_factor, "CFL factor in (0, 0.5]");
  evolve_cmd->add_option("--resample-n", evolve_params.resample_n, "vertices after each step");
  evolve_cmd->add_option("--record-every", evolve_params.record_every, "steps between records");
  evolve_cmd->add_option("--singular-area", evolve_params.singular_area, "side-area floor (sr)");
  evolve_cmd->add_option("--max-curvature", evolve_params.max_curvature, "curvature ceiling");

  // distance ------------------------------------------------------------
  auto* dist = app.add_subcommand("distance", "distance between two curves, printed in radians");
  std::string metric = "frechet";
  std::vector<std::string> dist_files;
  std::size_t subsample = 0;
  dist->add_option("--metric", metric, "frechet|hausdorff")
      ->check(CLI::IsMember({"frechet", "hausdorff"}));
  dist->add_option("files", dist_files, "two curve files")->expected(2);
  dist->add_option("--subsample", subsample, "resample curves down to this size first");

  // analyze ---------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "measurements on given curves");
  std::string what = "gage";
  std::vector<std::string> analyze_files;
  std::string normal_text = "0,0,1";
  double band_r = 0.3;
  analyze->add_option("--what", what, "gage|rmult|intersections|area|length")
      ->check(CLI::IsMember({"gage", "rmult", "intersections", "area", "length"}));
  analyze->add_option("files", analyze_files, "curve files")->expected(1, 2);
  analyze->add_option("--normal", normal_text, "great-circle pole x,y,z (rmult)");
  analyze->add_option("--r", band_r, "band radius r in (0, pi/4) (rmult)");

  // experiment ------------------------------------------------------------
  auto* exper = app.add_subcommand("experiment", "run a named experiment");
  exper->require_subcommand(1);
  std::string report_path, csv_path;
  FlowParams exp_params;
  double t_end = 1.0;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--report", report_path, "write report JSON here (default stdout)");
    cmd->add_option("--csv", csv_path, "write companion CSV here");
    cmd->add_option("--t-end", t_end, "flow end time");
    cmd->add_option("--cfl", exp_params.cfl_factor, "CFL factor");
    cmd->add_option("--resample-n", exp_params.resample_n, "vertices after each step");
    cmd->add_option("--record-every", exp_params.record_every, "steps between records");
  };

  auto* excont = exper->add_subcommand("continuity", "perturbation sequence vs base flow");
  CurveSpecFlags cont_flags;
  cont_flags.amplitude = 0.0;
  cont_flags.attach(excont, "");
  std::vector<double> amplitudes{0.2, 0.1, 0.05};
  double tol_continuity = 0.05;
  excont->add_option("--amplitudes", amplitudes, "strictly decreasing amplitude list");
  excont->add_option("--tol-continuity", tol_continuity, "bound on the smallest evolved distance");
  add_common(excont);

  auto* exgage = exper->add_subcommand("gage", "great-circle residual decay");
  CurveSpecFlags gage_flags;
  gage_flags.amplitude = 0.3;
  gage_flags.attach(exgage, "");
  double tol_residual = 1e-2;
  exgage->add_option("--tol-residual", tol_residual, "bound on the final residual");
  add_common(exgage);

  auto* exang = exper->add_subcommand("angenent", "intersection count monotonicity");
  CurveSpecFlags ang_a, ang_b;
  ang_a.amplitude = 0.2;
  ang_b.latitude = kPi / 2;
  ang_a.attach(exang, "");
  ang_b.attach(exang, "b");
  add_common(exang);

  auto* exavoid = exper->add_subcommand("avoidance", "disjoint curves stay disjoint");
  CurveSpecFlags av_a, av_b;
  av_a.latitude = kPi / 3;
  av_b.latitude = 2 * kPi / 3;
  av_a.attach(exavoid, "");
  av_b.attach(exavoid, "b");
  add_common(exavoid);

  auto* exsand = exper->add_subcommand("sandwich", "annulus containment under shared flow");
  CurveSpecFlags sand_flags;
  sand_flags.attach(exsand, "");
  double delta = 0.2;
  exsand->add_option("--delta", delta, "offset of the annulus boundaries");
  add_common(exsand);

  auto* exchord = exper->add_subcommand("chord", "area-halving crossing chord");
  CurveSpecFlags chord_flags;
  chord_flags.amplitude = 0.1;
  chord_flags.attach(exchord, "");
  std::size_t x_index = 0;
  exchord->add_option("--x-index", x_index, "boundary vertex index");
  add_common(exchord);

  // ----------------------------------------------------------------------
  std::vector<const char*> argv;
  argv.push_back("sphereflow");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e, out, err);  // --help goes to stdout and succeeds
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      const ClosedSphericalCurve c = gen_flags.to_spec().generate();
      emit(gen_out, curve_to_json(c), io);
      return 0;
    }

    if (evolve_cmd->parsed()) {
      const ClosedSphericalCurve c = load_curve(evolve_in, io);
      const Trajectory tr = evolve(c, evolve_params);
      std::ostringstream os;
      write_trajectory_jsonl(os, tr);
      emit(evolve_out, os.str(), io);
      return 0;
    }

    if (dist->parsed()) {
      const ClosedSphericalCurve a = load_curve(dist_files[0], io);
      const ClosedSphericalCurve b = load_curve(dist_files[1], io);
      const double d = metric == "frechet" ? frechet_distance(a, b, subsample).distance
                                           : hausdorff_distance(a, b);
      out << detail::fmt17(d) << "\n";
      return 0;
    }

    if (analyze->parsed()) {
      const ClosedSphericalCurve a = load_curve(analyze_files.at(0), io);
      if (what == "gage") {
        out << "{\"gage_residual\":" << detail::fmt17(gage_residual(a)) << "}\n";
      } else if (what == "area") {
        const AreaPair ap = enclosed_areas(a);
        out << "{\"area_left\":" << detail::fmt17(ap.left)
            << ",\"area_right\":" << detail::fmt17(ap.right) << "}\n";
      } else if (what == "length") {
        out << "{\"length\":" << detail::fmt17(total_length(a)) << "}\n";
      } else if (what == "rmult") {
        double nx, ny, nz;
        if (std::sscanf(normal_text.c_str(), "%lf,%lf,%lf", &nx, &ny, &nz) != 3) {
          throw CurveFormatError("--normal must be x,y,z");
        }
        const GreatCircle g{SpherePoint(normalized(Vec3{nx, ny, nz}))};
        const MultiplicityReport rep = r_multiplicity(a, g, band_r);
        out << "{\"r_multiplicity\":" << rep.value
            << ",\"components\":" << rep.components.size() << "}\n";
      } else if (what == "intersections") {
        if (analyze_files.size() < 2) {
          throw CurveFormatError("intersections needs two curve files");
        }
        const ClosedSphericalCurve b = load_curve(analyze_files[1], io);
        const IntersectionCount ic = intersection_count(a, b);
        out << "{\"count\":" << ic.count << ",\"degenerate\":" << (ic.degenerate ? "true" : "false")
            << "}\n";
      }
      return 0;
    }

    if (exper->parsed()) {
      ExperimentReport report;
      if (excont->parsed()) {
        PerturbationSpec base;
        const CurveSpec cs = cont_flags.to_spec();
        if (cs.kind != CurveSpec::Kind::kPerturbed) {
          throw CurveFormatError("continuity base must be a perturbation spec");
        }
        base = cs.perturbed;
        report = exp_continuity(base, amplitudes, t_end, exp_params, tol_continuity);
      } else if (exgage->parsed()) {
        report = exp_gage(gage_flags.to_spec(), t_end, exp_params, tol_residual);
      } else if (exang->parsed()) {
        report = exp_angenent(ang_a.to_spec(), ang_b.to_spec(), t_end, exp_params);
      } else if (exavoid->parsed()) {
        report = exp_avoidance(av_a.to_spec(), av_b.to_spec(), t_end, exp_params);
      } else if (exsand->parsed()) {
        report = exp_sandwich(sand_flags.to_spec(), delta, t_end, exp_params);
      } else if (exchord->parsed()) {
        report = exp_crossing_chord(chord_flags.to_spec(), x_index);
      }
      emit(report_path, report_to_json(report), io);
      if (!csv_path.empty()) {
        emit(csv_path, report_to_csv(report), io);
      }
      if (!report.pass) {
        err << "experiment " << report.name << " failed\n";
        return 1;
      }
      return 0;
    }
  } catch (const CurveFormatError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cli
}  // namespace sphereflow
