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

// infogeo-sensor: planning and self-check driver.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "infogeo/infogeo.hpp"

namespace {

using namespace infogeo;

enum Exit : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kGeometry = 3,
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string output;
  std::optional<int> quadrature_order;
  bool ridge = false;
};

Scenario load_scenario(const std::string& path, const Globals& g) {
  Scenario sc = parse_scenario(path.empty() ? std::string(kTwoSensorScenarioText)
                                            : read_text_file(path));
  QuadratureRule rule = sc.prior.rule();
  if (g.seed) {
    sc.output.seed = *g.seed;
    if (auto* mc = std::get_if<MonteCarloRule>(&rule)) mc->seed = *g.seed;
  }
  if (g.quadrature_order) {
    if (!std::holds_alternative<GaussHermiteRule>(rule))
      throw ValidationError("--quadrature-order needs a Gauss-Hermite prior");
    rule = GaussHermiteRule{*g.quadrature_order};
  }
  sc.prior = sc.prior.with_rule(rule);
  if (g.ridge) sc.fisher.ridge = true;
  sc.validate();
  return sc;
}

// Writes to `path`, or to stdout when it is empty or "-".
void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_text_file(path, content);
  }
}

int run_simulate(const std::string& path, const std::string& svg_flag, const Globals& g) {
  const Scenario sc = load_scenario(path, g);
  const PlanTrace trace = replan_loop(sc);
  if (trace.records.empty()) {
    std::cerr << "simulate: " << to_string(trace.status) << ": " << trace.message << "\n";
    return kGeometry;
  }
  emit(g.output.empty() ? sc.output.csv : g.output, trace_csv(trace));
  const std::string svg = svg_flag.empty() ? sc.output.svg : svg_flag;
  if (!svg.empty()) {
    SvgOptions opts;
    opts.extrapolation = sc.plan.replan_period;
    write_text_file(svg, render_svg(trace, sc.prior, sc.target, opts));
  }
  std::cerr << "simulate: " << to_string(trace.status) << " after " << trace.iterations
            << " iteration(s)";
  if (!trace.message.empty()) std::cerr << ": " << trace.message;
  std::cerr << "\n";
  return trace.status == PlanStatus::geometry_error ? kGeometry : kOk;
}

int run_geodesic(const std::string& path, std::optional<double> horizon,
                 std::optional<double> dt, const Globals& g) {
  const Scenario sc = load_scenario(path, g);
  const QuadratureGrid grid = build_grid(sc.prior);
  const SensorMetricSource source(sc.model, grid, sc.fisher);
  const InducedMetric q(source.metric(sc.initial.coordinates()));
  const Vector u = choose_direction(sc, sc.initial, q, grid, nullptr);
  GeodesicOptions opts;
  opts.max_speed_drift = sc.plan.max_speed_drift;
  const GeodesicTrajectory traj =
      integrate_geodesic(source, {sc.initial.coordinates(), u},
                         horizon.value_or(sc.plan.replan_period), dt.value_or(sc.plan.ode_step),
                         opts);
  emit(g.output, geodesic_csv(traj, source));
  if (traj.status == TrajectoryStatus::failed) {
    std::cerr << "geodesic: failed at t=" << traj.end_time << ": " << traj.message << "\n";
    return kGeometry;
  }
  return kOk;
}

int run_fisher_check(const std::string& path, std::optional<double> kappa,
                     std::size_t samples, const Globals& g) {
  Scenario sc = load_scenario(path, g);
  if (kappa) sc.model = VonMisesModel(*kappa);
  const auto points = fisher_check(sc.initial, sc.prior, sc.model, samples, sc.output.seed);
  std::string report = "kappa " + format_shortest(sc.model.kappa()) + ", samples " +
                       std::to_string(samples) + ", seed " + std::to_string(sc.output.seed) +
                       "\n";
  double worst = 0.0;
  for (const auto& p : points) {
    report += "theta (" + format_significant(p.theta.x, 6) + ", " +
              format_significant(p.theta.y, 6) +
              ") relative error " + format_significant(p.relative_error, 6) + "\n";
    worst = std::max(worst, p.relative_error);
  }
  const bool ok = worst < 0.01;
  report += "max relative error " + format_significant(worst, 6) + " (limit 0.01): " +
            (ok ? "PASS" : "FAIL") + "\n";
  emit(g.output, report);
  return ok ? kOk : kCheckFailed;
}

int run_divergence_check(const std::string& path, int trials, const Globals& g) {
  const Scenario sc = load_scenario(path, g);
  if (trials < 1) throw ValidationError("--trials must be >= 1");
  const auto results = divergence_check(sc.prior, sc.model, trials, sc.output.seed);
  std::string report = "trials " + std::to_string(trials) + ", seed " +
                       std::to_string(sc.output.seed) + "\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& t = results[i];
    report += "trial " + std::to_string(i) + " half-inner " +
              format_significant(t.inner_half, 8) + " kl " + format_significant(t.hessian_kl, 8) +
              " mi " + format_significant(t.hessian_mi, 8) + " relative error " +
              format_significant(t.relative_error, 4) + "\n";
    worst = std::max(worst, t.relative_error);
  }
  const bool ok = worst < 1e-4;
  report += "max relative error " + format_significant(worst, 6) + " (limit 0.0001): " +
            (ok ? "PASS" : "FAIL") + "\n";
  emit(g.output, report);
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-geometric planning for bearings-only sensors", "infogeo-sensor"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random stream");
  app.add_option("--output", g.output, "Main output file (stdout if omitted)");
  app.add_option("--quadrature-order", g.quadrature_order, "Gauss-Hermite nodes per axis")
      ->check(CLI::Range(1, kMaxHermiteOrder));
  app.add_flag("--ridge", g.ridge, "Ridge-regularize the Fisher metric");

  std::string scenario;

  auto* simulate = app.add_subcommand("simulate", "Run the replanning loop, write a CSV trace");
  std::string svg;
  simulate->fallthrough();
  simulate->add_option("scenario", scenario, "Scenario file (built-in two-sensor case if omitted)");
  simulate->add_option("--svg", svg, "SVG plot path (overrides [output] svg)");

  auto* geodesic = app.add_subcommand("geodesic", "Integrate one geodesic from the start");
  std::optional<double> horizon, dt;
  geodesic->fallthrough();
  geodesic->add_option("scenario", scenario, "Scenario file");
  geodesic->add_option("--horizon", horizon, "Integration horizon (default replan_period)");
  geodesic->add_option("--dt", dt, "RK4 step (default ode_step)");

  auto* fisher = app.add_subcommand("fisher-check", "Analytic Fisher matrix vs Monte-Carlo");
  std::optional<double> kappa;
  std::size_t samples = 1000000;
  fisher->fallthrough();
  fisher->add_option("scenario,--scenario", scenario, "Scenario file");
  fisher->add_option("--kappa", kappa, "Override the von Mises concentration");
  fisher->add_option("--samples", samples, "Monte-Carlo draws per point")
      ->check(CLI::PositiveNumber);

  auto* divergence =
      app.add_subcommand("divergence-check", "KL and MI Hessians vs the ambient metric");
  int trials = 50;
  divergence->fallthrough();
  divergence->add_option("scenario,--scenario", scenario, "Scenario file");
  divergence->add_option("--trials", trials, "Number of random directions");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(scenario, svg, g);
    if (*geodesic) return run_geodesic(scenario, horizon, dt, g);
    if (*fisher) return run_fisher_check(scenario, kappa, samples, g);
    if (*divergence) return run_divergence_check(scenario, trials, g);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << " (line " << e.line() << ")\n";
    return kUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeometry;
  }
  return kUsage;
}
