// Copyright 2026 The infogeo-sensor Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

struct CliResult {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string tmp(const std::string& name) { return ::testing::TempDir() + "infogeo_cli_" + name; }

CliResult run(const std::string& args, const std::string& env = "") {
  const std::string out = tmp("stdout"), err = tmp("stderr");
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + INFOGEO_CLI + "' " + args +
                          " >'" + out + "' 2>'" + err + "'";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string scenario(const std::string& name) {
  return std::string(INFOGEO_SOURCE_DIR) + "/scenarios/" + name;
}

void write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(run("--help").status, 0);
  EXPECT_NE(run("").status, 0);
  EXPECT_NE(run("frobnicate").status, 0);
}

TEST(Cli, SimulateEchoesInitialConfiguration) {
  const CliResult r = run("simulate '" + scenario("fig3.scenario") + "' --output - --svg '" +
                    tmp("fig3.svg") + "'");
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream is(r.out);
  std::string header, first;
  std::getline(is, header);
  std::getline(is, first);
  EXPECT_EQ(header.substr(0, 14), "t,x1,y1,x2,y2,");
  EXPECT_EQ(first.substr(0, 10), "0,0,1,1,0,");
  int rows = 1;
  for (std::string line; std::getline(is, line);) ++rows;
  EXPECT_EQ(rows, 7);
  EXPECT_NE(slurp(tmp("fig3.svg")).find("<svg"), std::string::npos);
  EXPECT_NE(r.err.find("completed"), std::string::npos);
}

TEST(Cli, SimulateWritesOutputFile) {
  const std::string csv = tmp("trace.csv");
  std::remove(csv.c_str());
  const CliResult r = run("--output '" + csv + "' simulate '" + scenario("perturbed.scenario") +
                    "' --svg '" + tmp("p.svg") + "'");
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(slurp(csv).substr(0, 2), "t,");
}

TEST(Cli, ParseAndIoErrorsExitTwo) {
  std::string text = slurp(scenario("fig3.scenario"));
  const std::string bad = tmp("bad.scenario");
  write(bad, text.replace(text.find("kappa = 2"), 9, "kappa = x"));
  CliResult r = run("simulate '" + bad + "'");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("line 12"), std::string::npos) << r.err;
  r = run("simulate /nonexistent/file.scenario");
  EXPECT_EQ(r.status, 2);
  EXPECT_FALSE(r.err.empty());
  text = slurp(scenario("fig3.scenario"));
  write(bad, text.replace(text.find("kappa = 2\n"), 10, ""));
  r = run("geodesic '" + bad + "'");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("kappa"), std::string::npos) << r.err;
}

TEST(Cli, GeometryErrorExitThree) {
  std::string text = slurp(scenario("fig3.scenario"));
  text.replace(text.find("platform = 1, 0"), 15, "platform = 0, 1");
  text.replace(text.find("ridge = true"), 12, "ridge = false");
  const std::string bad = tmp("dup.scenario");
  write(bad, text);
  const CliResult r = run("simulate '" + bad + "' --output -");
  EXPECT_EQ(r.status, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, GeodesicCsv) {
  const CliResult r = run("geodesic --horizon 0.05 --dt 0.01");
  ASSERT_EQ(r.status, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "t,x1,y1,x2,y2,u_x1,u_y1,u_x2,u_y2,q_speed");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 6);
}

TEST(Cli, ChecksPassAtReducedSize) {
  CliResult r = run("fisher-check --kappa 2 --scenario '" + scenario("fig3.scenario") +
              "' --samples 200000 --seed 7");
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  r = run("divergence-check --seed 7 --trials 4");
  EXPECT_EQ(r.status, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, FisherCheckFailsWithTooFewSamples) {
  const CliResult r = run("fisher-check --samples 50 --seed 7");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, OutputsIndependentOfThreadCount) {
  const std::string commands[] = {
      "simulate --output - --svg '" + tmp("det.svg") + "'",
      "geodesic --horizon 0.1",
      "fisher-check --samples 100000 --seed 11",
      "divergence-check --trials 3 --seed 11",
  };
  for (const std::string& c : commands) {
    const CliResult one = run(c, "INFOGEO_THREADS=1");
    const std::string svg_one = slurp(tmp("det.svg"));
    const CliResult four = run(c, "INFOGEO_THREADS=4");
    const std::string svg_four = slurp(tmp("det.svg"));
    ASSERT_EQ(one.status, 0) << c << one.err;
    EXPECT_EQ(one.status, four.status) << c;
    EXPECT_EQ(one.out, four.out) << c;
    EXPECT_FALSE(one.out.empty()) << c;
    EXPECT_EQ(svg_one, svg_four) << c;
  }
}

}  // namespace
