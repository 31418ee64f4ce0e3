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

// Scenario files, CSV traces and SVG plots.

#ifndef INFOGEO_SCENARIO_IO_HPP
#define INFOGEO_SCENARIO_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/planner.hpp"
#include "infogeo/prior.hpp"
#include "infogeo/sensor_manifold.hpp"
#include "infogeo/sensor_model.hpp"
#include "infogeo/spd.hpp"

namespace infogeo {

// ---------------------------------------------------------------------------
// Number formatting

/// Shortest decimal string that parses back to exactly `v`.
inline std::string format_shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// `digits` significant digits, '.' decimal separator regardless of locale.
inline std::string format_significant(double v, int digits = 12) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
  return std::string(buf, r.ptr);
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  std::string out(buf, r.ptr);
  // No "-0.00".
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Scenario text format

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  int line = 0;
};

struct RawScenario {
  std::map<std::string, std::map<std::string, Entry>> sections;
  std::vector<Entry> platforms;
};

inline const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"target", {"x", "y"}},
      {"prior",
       {"mean", "covariance", "quadrature", "quadrature_order", "mc_samples", "mc_seed"}},
      {"model", {"kappa"}},
      {"sensors", {"platform"}},
      {"plan",
       {"speed", "replan_period", "iterations", "ode_step", "guard_radius", "ridge",
        "ridge_epsilon", "direction", "max_speed_drift"}},
      {"output", {"csv", "svg", "seed"}},
  };
  return keys;
}

inline RawScenario tokenize(std::string_view text) {
  RawScenario raw;
  std::set<std::string> seen_sections;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError("unterminated section header", line_no, "");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(section))
        throw ParseError("unknown section [" + section + "]", line_no, section);
      if (!seen_sections.insert(section).second)
        throw ParseError("duplicate section [" + section + "]", line_no, section);
      raw.sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("expected 'key = value'", line_no, std::string(line));
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) throw ParseError("key outside of a section", line_no, key);
    if (!known_keys().at(section).contains(key))
      throw ParseError("unknown key '" + key + "' in [" + section + "]", line_no, key);
    if (value.empty()) throw ParseError("empty value for '" + key + "'", line_no, key);
    if (section == "sensors") {
      raw.platforms.push_back({value, line_no});
      continue;
    }
    auto& sec = raw.sections[section];
    if (sec.contains(key))
      throw ParseError("duplicate key '" + key + "' in [" + section + "]", line_no, key);
    sec[key] = {value, line_no};
  }
  return raw;
}

inline double parse_double(const Entry& e, const std::string& key) {
  std::string_view s = e.value;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ParseError("'" + key + "' is not a number: " + e.value, e.line, key);
  if (!std::isfinite(v)) throw ValidationError("'" + key + "' must be finite");
  return v;
}

inline std::uint64_t parse_unsigned(const Entry& e, const std::string& key) {
  std::uint64_t v = 0;
  const char* end = e.value.data() + e.value.size();
  const auto r = std::from_chars(e.value.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end)
    throw ParseError("'" + key + "' is not a non-negative integer: " + e.value, e.line, key);
  return v;
}

inline std::vector<double> parse_list(const Entry& e, const std::string& key) {
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    Entry item{std::string(trim(rest.substr(0, comma))), e.line};
    if (item.value.empty()) throw ParseError("empty list item in '" + key + "'", e.line, key);
    out.push_back(parse_double(item, key));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

inline bool parse_bool(const Entry& e, const std::string& key) {
  if (e.value == "true") return true;
  if (e.value == "false") return false;
  throw ParseError("'" + key + "' must be true or false", e.line, key);
}

class SectionReader {
 public:
  SectionReader(const RawScenario& raw, std::string name) : name_(std::move(name)) {
    const auto it = raw.sections.find(name_);
    if (it != raw.sections.end()) entries_ = &it->second;
  }

  const Entry* find(const std::string& key) const {
    if (entries_ == nullptr) return nullptr;
    const auto it = entries_->find(key);
    return it == entries_->end() ? nullptr : &it->second;
  }

  const Entry& require(const std::string& key) const {
    const Entry* e = find(key);
    if (e == nullptr)
      throw ValidationError("missing required key [" + name_ + "] " + key);
    return *e;
  }

  double number(const std::string& key) const { return parse_double(require(key), key); }

  double number_or(const std::string& key, double fallback) const {
    const Entry* e = find(key);
    return e ? parse_double(*e, key) : fallback;
  }

 private:
  std::string name_;
  const std::map<std::string, Entry>* entries_ = nullptr;
};

}  // namespace detail

/// Parses and validates a scenario document.
inline Scenario parse_scenario(std::string_view text) {
  using detail::Entry;
  using detail::SectionReader;
  const detail::RawScenario raw = detail::tokenize(text);

  const SectionReader target(raw, "target");
  const ParameterPoint t{target.number("x"), target.number("y")};

  const SectionReader prior(raw, "prior");
  const std::vector<double> mean = detail::parse_list(prior.require("mean"), "mean");
  if (mean.size() != 2)
    throw ParseError("'mean' needs two values", prior.require("mean").line, "mean");
  const Entry& cov_entry = prior.require("covariance");
  const std::vector<double> cv = detail::parse_list(cov_entry, "covariance");
  std::optional<SymMatrix> cov;
  if (cv.size() == 1) {
    cov = SymMatrix::identity(2) * cv[0];
  } else if (cv.size() == 4) {
    if (cv[1] != cv[2]) throw ValidationError("covariance not symmetric");
    cov = SymMatrix{{cv[0], cv[1]}, {cv[2], cv[3]}};
  } else {
    throw ParseError("'covariance' needs 1 or 4 values", cov_entry.line, "covariance");
  }

  OutputSettings output;
  const SectionReader out(raw, "output");
  if (const Entry* e = out.find("csv")) output.csv = e->value;
  if (const Entry* e = out.find("svg")) output.svg = e->value;
  if (const Entry* e = out.find("seed")) output.seed = detail::parse_unsigned(*e, "seed");

  QuadratureRule rule = GaussHermiteRule{};
  std::string quadrature = "gauss-hermite";
  if (const Entry* e = prior.find("quadrature")) quadrature = e->value;
  if (quadrature == "gauss-hermite") {
    const Entry* e = prior.find("quadrature_order");
    const std::uint64_t order = e ? detail::parse_unsigned(*e, "quadrature_order") : 9;
    if (order < 1 || order > static_cast<std::uint64_t>(kMaxHermiteOrder))
      throw ValidationError("quadrature_order must be in 1.." +
                            std::to_string(kMaxHermiteOrder));
    if (prior.find("mc_samples") || prior.find("mc_seed"))
      throw ValidationError("mc_samples/mc_seed need quadrature = monte-carlo");
    rule = GaussHermiteRule{static_cast<int>(order)};
  } else if (quadrature == "monte-carlo") {
    if (prior.find("quadrature_order"))
      throw ValidationError("quadrature_order needs quadrature = gauss-hermite");
    MonteCarloRule mc;
    if (const Entry* e = prior.find("mc_samples"))
      mc.samples = detail::parse_unsigned(*e, "mc_samples");
    if (mc.samples < 1) throw ValidationError("mc_samples must be >= 1");
    mc.seed = output.seed;
    if (const Entry* e = prior.find("mc_seed")) mc.seed = detail::parse_unsigned(*e, "mc_seed");
    rule = mc;
  } else {
    throw ParseError("quadrature must be gauss-hermite or monte-carlo",
                     prior.find("quadrature")->line, "quadrature");
  }

  const SectionReader model(raw, "model");
  const double kappa = model.number("kappa");
  if (!(kappa > 0.0)) throw ValidationError("kappa must be positive");

  if (raw.platforms.empty())
    throw ValidationError("missing required key [sensors] platform");
  std::vector<Point2> platforms;
  for (const Entry& e : raw.platforms) {
    const std::vector<double> xy = detail::parse_list(e, "platform");
    if (xy.size() != 2) throw ParseError("'platform' needs two values", e.line, "platform");
    platforms.push_back({xy[0], xy[1]});
  }

  const SectionReader plan(raw, "plan");
  PlanSettings ps;
  ps.speed = plan.number("speed");
  ps.replan_period = plan.number("replan_period");
  ps.ode_step = plan.number("ode_step");
  {
    const Entry& e = plan.require("iterations");
    const std::uint64_t it = detail::parse_unsigned(e, "iterations");
    if (it < 1 || it > 1000000) throw ValidationError("iterations must be in 1..1000000");
    ps.iterations = static_cast<int>(it);
  }
  ps.guard_radius = plan.number_or("guard_radius", ps.guard_radius);
  ps.max_speed_drift = plan.number_or("max_speed_drift", ps.max_speed_drift);
  FisherOptions fisher;
  if (const Entry* e = plan.find("ridge")) fisher.ridge = detail::parse_bool(*e, "ridge");
  fisher.ridge_epsilon = plan.number_or("ridge_epsilon", fisher.ridge_epsilon);
  if (const Entry* e = plan.find("direction")) {
    if (e->value == "natural-gradient") ps.rule = DirectionRule::natural_gradient;
    else if (e->value == "dominant-eigenvector") ps.rule = DirectionRule::dominant_eigenvector;
    else
      throw ParseError("direction must be natural-gradient or dominant-eigenvector", e->line,
                       "direction");
  }

  Scenario sc{t,
              Prior({mean[0], mean[1]}, *cov, rule),
              VonMisesModel(kappa),
              SensorConfiguration(platforms),
              ps,
              fisher,
              output};
  sc.validate();
  return sc;
}

/// Text that parse_scenario maps back to an equal Scenario.
inline std::string serialize_scenario(const Scenario& sc) {
  sc.validate();
  auto f = format_shortest;
  for (const std::string* p : {&sc.output.csv, &sc.output.svg})
    if (p->find_first_of("#\n\r") != std::string::npos || detail::trim(*p) != *p)
      throw ValidationError("output path cannot be stored in a scenario file: " + *p);
  std::ostringstream os;
  os << "[target]\nx = " << f(sc.target.x) << "\ny = " << f(sc.target.y) << "\n\n";
  const SymMatrix& c = sc.prior.covariance().sym();
  os << "[prior]\nmean = " << f(sc.prior.mean().x) << ", " << f(sc.prior.mean().y)
     << "\ncovariance = " << f(c(0, 0)) << ", " << f(c(0, 1)) << ", " << f(c(1, 0)) << ", "
     << f(c(1, 1)) << "\n";
  if (const auto* gh = std::get_if<GaussHermiteRule>(&sc.prior.rule())) {
    os << "quadrature = gauss-hermite\nquadrature_order = " << gh->order << "\n\n";
  } else {
    const auto& mc = std::get<MonteCarloRule>(sc.prior.rule());
    os << "quadrature = monte-carlo\nmc_samples = " << mc.samples << "\nmc_seed = " << mc.seed
       << "\n\n";
  }
  os << "[model]\nkappa = " << f(sc.model.kappa()) << "\n\n[sensors]\n";
  for (int j = 0; j < sc.initial.platform_count(); ++j)
    os << "platform = " << f(sc.initial.platform(j).x) << ", " << f(sc.initial.platform(j).y)
       << "\n";
  const PlanSettings& p = sc.plan;
  os << "\n[plan]\nspeed = " << f(p.speed) << "\nreplan_period = " << f(p.replan_period)
     << "\niterations = " << p.iterations << "\node_step = " << f(p.ode_step)
     << "\nguard_radius = " << f(p.guard_radius) << "\nmax_speed_drift = " << f(p.max_speed_drift)
     << "\nridge = " << (sc.fisher.ridge ? "true" : "false")
     << "\nridge_epsilon = " << f(sc.fisher.ridge_epsilon) << "\ndirection = " << to_string(p.rule)
     << "\n\n[output]\n";
  if (!sc.output.csv.empty()) os << "csv = " << sc.output.csv << "\n";
  if (!sc.output.svg.empty()) os << "svg = " << sc.output.svg << "\n";
  os << "seed = " << sc.output.seed << "\n";
  return os.str();
}

/// The two-platform scenario shipped as scenarios/fig3.scenario.
inline constexpr std::string_view kTwoSensorScenarioText = R"(# Two bearings sensors closing on an emitter near (1, 1).
[target]
x = 1
y = 1

[prior]
mean = 1, 1
covariance = 0.01
quadrature_order = 9

[model]
kappa = 2

[sensors]
platform = 0, 1
platform = 1, 0

[plan]
speed = 0.05
replan_period = 1
iterations = 6
ode_step = 0.01
guard_radius = 0.05
ridge = true
ridge_epsilon = 1e-6
direction = natural-gradient

[output]
csv = fig3_trace.csv
svg = fig3.svg
seed = 7
)";

// ---------------------------------------------------------------------------
// Files

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return os.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// CSV

/// t, x1, y1, ..., det_F_mean, bearing_sep, q_eig1, ... one row per record.
inline std::string trace_csv(const PlanTrace& trace) {
  if (trace.records.empty()) throw DomainError("trace_csv: empty trace");
  const PlanRecord& first = trace.records.front();
  const Eigen::Index n = first.sigma.size();
  std::string out = "t";
  for (Eigen::Index j = 0; j < n / 2; ++j)
    out += ",x" + std::to_string(j + 1) + ",y" + std::to_string(j + 1);
  out += ",det_F_mean,bearing_sep";
  for (Eigen::Index k = 0; k < first.q_eigenvalues.size(); ++k)
    out += ",q_eig" + std::to_string(k + 1);
  out += "\n";
  for (const PlanRecord& r : trace.records) {
    out += format_significant(r.time);
    for (Eigen::Index k = 0; k < r.sigma.size(); ++k) out += "," + format_significant(r.sigma(k));
    out += "," + format_significant(r.det_f_mean) + "," + format_significant(r.bearing_sep);
    for (Eigen::Index k = 0; k < r.q_eigenvalues.size(); ++k)
      out += "," + format_significant(r.q_eigenvalues(k));
    out += "\n";
  }
  return out;
}

/// t, sigma, u and Q(u, u) for every sample of a geodesic.
inline std::string geodesic_csv(const GeodesicTrajectory& traj, const MetricSource& source) {
  if (traj.states.empty()) throw DomainError("geodesic_csv: empty trajectory");
  const Eigen::Index n = traj.states.front().sigma.size();
  std::string out = "t";
  for (Eigen::Index j = 0; j < n / 2; ++j)
    out += ",x" + std::to_string(j + 1) + ",y" + std::to_string(j + 1);
  for (Eigen::Index j = 0; j < n / 2; ++j)
    out += ",u_x" + std::to_string(j + 1) + ",u_y" + std::to_string(j + 1);
  out += ",q_speed\n";
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const GeodesicState& s = traj.states[i];
    out += format_significant(traj.times[i]);
    for (Eigen::Index k = 0; k < n; ++k) out += "," + format_significant(s.sigma(k));
    for (Eigen::Index k = 0; k < n; ++k) out += "," + format_significant(s.velocity(k));
    out += "," + format_significant(g_speed(source, s)) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

struct SvgOptions {
  double width = 640.0;
  double margin = 24.0;
  /// Length of the dotted continuation, in plan time units.
  double extrapolation = 1.0;
};

/// Solid path per platform, dotted continuation, target marker and the
/// 1-sigma prior ellipse.  Platforms with a single sample get markers only.
inline std::string render_svg(const PlanTrace& trace, const Prior& prior,
                              ParameterPoint target, const SvgOptions& opts = {}) {
  if (trace.records.empty() && trace.path.empty()) throw DomainError("render_svg: empty trace");
  std::vector<Vector> samples;
  if (!trace.path.empty()) {
    for (const PathSample& p : trace.path) samples.push_back(p.sigma);
  } else {
    for (const PlanRecord& r : trace.records) samples.push_back(r.sigma);
  }
  const bool moving = samples.size() >= 2;
  std::vector<Vector> tail;
  if (moving && !trace.records.empty() && trace.records.back().direction.size() &&
      opts.extrapolation > 0.0) {
    PlanTrace last;
    last.records.push_back(trace.records.back());
    last.records.back().sigma = samples.back();
    tail = extrapolate(last, opts.extrapolation);
  }
  const int platforms = static_cast<int>(samples.front().size() / 2);

  const SymEigen ellipse = sym_eigen(prior.covariance().sym());
  const double ax = std::sqrt(ellipse.values(0));
  const double bx = std::sqrt(ellipse.values(1));
  const double sx = std::sqrt(prior.covariance().sym()(0, 0));
  const double sy = std::sqrt(prior.covariance().sym()(1, 1));
  const ParameterPoint mu = prior.mean();

  double xmin = std::min(target.x, mu.x - sx), xmax = std::max(target.x, mu.x + sx);
  double ymin = std::min(target.y, mu.y - sy), ymax = std::max(target.y, mu.y + sy);
  auto extend = [&](const Vector& s) {
    for (int j = 0; j < platforms; ++j) {
      xmin = std::min(xmin, s(2 * j));
      xmax = std::max(xmax, s(2 * j));
      ymin = std::min(ymin, s(2 * j + 1));
      ymax = std::max(ymax, s(2 * j + 1));
    }
  };
  for (const Vector& s : samples) extend(s);
  for (const Vector& s : tail) extend(s);
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
  xmin -= 0.05 * span;
  xmax += 0.05 * span;
  ymin -= 0.05 * span;
  ymax += 0.05 * span;
  const double scale = (opts.width - 2.0 * opts.margin) / std::max(xmax - xmin, ymax - ymin);
  const double width = (xmax - xmin) * scale + 2.0 * opts.margin;
  const double height = (ymax - ymin) * scale + 2.0 * opts.margin;
  auto px = [&](double x) { return format_fixed((x - xmin) * scale + opts.margin, 2); };
  auto py = [&](double y) { return format_fixed((ymax - y) * scale + opts.margin, 2); };

  static constexpr const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << format_fixed(width, 2) << "\" height=\"" << format_fixed(height, 2)
     << "\" viewBox=\"0 0 " << format_fixed(width, 2) << " " << format_fixed(height, 2)
     << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << format_fixed(width, 2) << "\" height=\""
     << format_fixed(height, 2) << "\" fill=\"white\"/>\n";
  const double angle =
      0.0 - std::atan2(ellipse.vectors(1, 0), ellipse.vectors(0, 0)) * 180.0 / std::numbers::pi;
  os << "<ellipse class=\"prior\" cx=\"" << px(mu.x) << "\" cy=\"" << py(mu.y) << "\" rx=\""
     << format_fixed(ax * scale, 2) << "\" ry=\"" << format_fixed(bx * scale, 2)
     << "\" transform=\"rotate(" << format_fixed(angle, 3) << " " << px(mu.x) << " "
     << py(mu.y) << ")\" fill=\"none\" stroke=\"#777777\" stroke-width=\"1\"/>\n";
  os << "<circle class=\"target\" cx=\"" << px(target.x) << "\" cy=\"" << py(target.y)
     << "\" r=\"4\" fill=\"black\"/>\n";
  for (int j = 0; j < platforms; ++j) {
    const char* colour = colours[j % 8];
    if (moving) {
      os << "<path class=\"trajectory\" d=\"";
      for (std::size_t i = 0; i < samples.size(); ++i)
        os << (i == 0 ? "M" : " L") << px(samples[i](2 * j)) << " " << py(samples[i](2 * j + 1));
      os << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    }
    if (!tail.empty()) {
      os << "<path class=\"extrapolation\" d=\"M" << px(tail.front()(2 * j)) << " "
         << py(tail.front()(2 * j + 1)) << " L" << px(tail.back()(2 * j)) << " "
         << py(tail.back()(2 * j + 1)) << "\" fill=\"none\" stroke=\"" << colour
         << "\" stroke-width=\"2\" stroke-dasharray=\"2 4\"/>\n";
    }
    os << "<circle class=\"platform\" cx=\"" << px(samples.front()(2 * j)) << "\" cy=\""
       << py(samples.front()(2 * j + 1)) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace infogeo

#endif  // INFOGEO_SCENARIO_IO_HPP
