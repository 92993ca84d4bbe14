#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sphereflow/cli.hpp"
#include "sphereflow/experiments.hpp"
#include "sphereflow/generate.hpp"
#include "sphereflow/io.hpp"

namespace sphereflow {
namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = cli::run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

TEST(CurveJson, RoundTripsBitExactly) {
  PerturbationSpec spec;
  spec.seed = 77;
  spec.amplitude = 0.23;
  spec.random_mode_count = 3;
  spec.n = 64;
  const ClosedSphericalCurve c = gen_perturbed_bisector(spec);
  const ClosedSphericalCurve back = curve_from_json(curve_to_json(c));
  ASSERT_EQ(back.size(), c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_EQ(back[i].x(), c[i].x());
    EXPECT_EQ(back[i].y(), c[i].y());
    EXPECT_EQ(back[i].z(), c[i].z());
  }
}

TEST(CurveJson, RejectsMalformedInput) {
  EXPECT_THROW(curve_from_json("not json"), CurveFormatError);
  EXPECT_THROW(curve_from_json("{\"points\": 3}"), CurveFormatError);
  EXPECT_THROW(curve_from_json("{\"points\": [[1,0,0],[0,1,0]]}"), CurveFormatError);
  // norm far from one
  EXPECT_THROW(curve_from_json("{\"points\": [[2,0,0],[0,1,0],[0,0,1]]}"), CurveFormatError);
}

TEST(TrajectoryJsonl, ParsesAndTerminates) {
  FlowParams params;
  params.resample_n = 64;
  params.t_end = 0.1;
  params.record_every = 20;
  const Trajectory tr = evolve(gen_latitude_circle(1.2, 64), params);
  std::ostringstream os;
  write_trajectory_jsonl(os, tr);

  std::istringstream lines(os.str());
  std::string line;
  double prev_t = -1.0;
  std::size_t records = 0;
  bool saw_status = false;
  while (std::getline(lines, line)) {
    const nlohmann::json j = nlohmann::json::parse(line);
    if (j.contains("status")) {
      saw_status = true;
      EXPECT_EQ(j["status"], "ReachedEnd");
      continue;
    }
    ++records;
    EXPECT_GT(j["t"].get<double>(), prev_t);
    prev_t = j["t"].get<double>();
    EXPECT_EQ(j["curve"]["points"].size(), 64u);
    EXPECT_TRUE(j["diag"].contains("length"));
    EXPECT_TRUE(j["diag"].contains("area_left"));
  }
  EXPECT_TRUE(saw_status);
  EXPECT_EQ(records, tr.times.size());
}

TEST(ReportJson, RoundTripKeepsVerdict) {
  const ExperimentReport r = exp_avoidance(CurveSpec::latitude(kPi / 3, 96),
                                           CurveSpec::latitude(2 * kPi / 3, 96), 0.2, FlowParams{
                                               .resample_n = 96, .record_every = 60});
  const ExperimentReport back = report_from_json(report_to_json(r));
  EXPECT_EQ(back.pass, r.pass);
  EXPECT_EQ(back.name, r.name);
  EXPECT_EQ(recheck_pass(back), r.pass);
  EXPECT_EQ(back.rows.size(), r.rows.size());
}

TEST(ReportCsv, OneLinePerRow) {
  ExperimentReport r;
  r.name = "demo";
  r.rows.push_back({{"a", 1.0}, {"b", 2.0}});
  r.rows.push_back({{"a", 3.0}, {"c", 4.0}});
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(csv, "a,b,c\n1,2,\n3,,4\n");
}

TEST(Cli, GenDistanceZeroAgainstItself) {
  const CliResult gen = run({"gen", "--latitude", "1.5707963267948966", "--n", "64"});
  ASSERT_EQ(gen.code, 0) << gen.err;

  // write to temp files for the distance command
  const std::string pa = "/tmp/sphereflow_test_a.json";
  const std::string pb = "/tmp/sphereflow_test_b.json";
  {
    std::ofstream(pa) << gen.out;
    std::ofstream(pb) << gen.out;
  }
  const CliResult dist = run({"distance", "--metric", "frechet", pa, pb});
  ASSERT_EQ(dist.code, 0) << dist.err;
  EXPECT_EQ(dist.out, "0\n");

  const CliResult hdist = run({"distance", "--metric", "hausdorff", pa, pb});
  ASSERT_EQ(hdist.code, 0);
  EXPECT_LE(std::stod(hdist.out), 1e-12);
}

TEST(Cli, EvolveFromStdinEmitsJsonl) {
  const CliResult gen = run({"gen", "--latitude", "1.0471975511965976", "--n", "64"});
  ASSERT_EQ(gen.code, 0);
  const CliResult ev = run({"evolve", "--t-end", "0.05", "--resample-n", "64", "--record-every",
                            "50"},
                           gen.out);
  ASSERT_EQ(ev.code, 0) << ev.err;
  EXPECT_NE(ev.out.find("\"status\":\"ReachedEnd\""), std::string::npos);
}

TEST(Cli, MalformedInputExitsTwo) {
  const CliResult ev = run({"evolve", "--t-end", "0.05"}, "this is not a curve");
  EXPECT_EQ(ev.code, 2);
  EXPECT_FALSE(ev.err.empty());

  const CliResult bad = run({"no-such-command"});
  EXPECT_EQ(bad.code, 2);
}

TEST(Cli, AnalyzeGageAndRmult) {
  const CliResult gen = run({"gen", "--latitude", "1.0471975511965976", "--n", "128"});
  const std::string path = "/tmp/sphereflow_test_lat.json";
  std::ofstream(path) << gen.out;

  const CliResult gage = run({"analyze", "--what", "gage", path});
  ASSERT_EQ(gage.code, 0) << gage.err;
  const nlohmann::json gj = nlohmann::json::parse(gage.out);
  EXPECT_NEAR(gj["gage_residual"].get<double>(), kPi / 2 - kPi / 3, 1e-9);

  const CliResult rm = run({"analyze", "--what", "rmult", path, "--normal", "0,0,1", "--r", "0.3"});
  ASSERT_EQ(rm.code, 0) << rm.err;
  const nlohmann::json rj = nlohmann::json::parse(rm.out);
  EXPECT_EQ(rj["r_multiplicity"].get<int>(), 0);  // pi/6 cap sits outside the 0.6 band
}

TEST(Cli, ExperimentReportIsDeterministic) {
  const std::vector<std::string> args = {"experiment", "avoidance", "--latitude",
                                         "1.0471975511965976", "--b-latitude",
                                         "2.0943951023931953", "--n", "96", "--b-n", "96",
                                         "--t-end", "0.2", "--record-every", "60"};
  const CliResult first = run(args);
  const CliResult second = run(args);
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_EQ(first.out, second.out);  // byte-identical report JSON

  const nlohmann::json j = nlohmann::json::parse(first.out);
  EXPECT_TRUE(j["pass"].get<bool>());
}

// The pipeline gen --latitude pi/3 --n 512 | evolve --t-end 0.3 must land
// on the shrinking-circle closed form cos(theta(t)) = 0.5 * e^0.3.
TEST(Cli, PipelineShrinkMatchesClosedForm) {
  const CliResult gen = run({"gen", "--latitude", "1.0471975511965976", "--n", "512"});
  ASSERT_EQ(gen.code, 0);
  const CliResult ev = run({"evolve", "--t-end", "0.3", "--resample-n", "512", "--record-every",
                            "4000"},
                           gen.out);
  ASSERT_EQ(ev.code, 0) << ev.err;

  std::istringstream lines(ev.out);
  std::string line, last_curve_line;
  while (std::getline(lines, line)) {
    if (line.find("\"curve\"") != std::string::npos) last_curve_line = line;
  }
  ASSERT_FALSE(last_curve_line.empty());
  const nlohmann::json j = nlohmann::json::parse(last_curve_line);
  EXPECT_NEAR(j["t"].get<double>(), 0.3, 1e-12);
  double mean_z = 0.0;
  for (const auto& row : j["curve"]["points"]) {
    mean_z += row[2].get<double>();
  }
  mean_z /= static_cast<double>(j["curve"]["points"].size());
  EXPECT_NEAR(mean_z, 0.5 * std::exp(0.3), 1e-3);  // 0.674929...
}

TEST(Cli, FailedExperimentExitsOne) {
  // gage on a fast-shrinking cap dies before t_end: the run cannot pass
  const CliResult r = run({"experiment", "gage", "--latitude", "0.5", "--n", "64", "--t-end",
                           "2.0", "--resample-n", "64"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

}  // namespace
}  // namespace sphereflow
