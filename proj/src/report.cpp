// Copyright 2026 The scenkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scenkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scenkit/numfmt.hpp"

namespace scenkit {

namespace {

using json = nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

json num(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json opt(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

double read_num(const json& j, const char* what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ReportFormatError(std::string("expected a number for '") + what + "'");
}

std::optional<double> read_opt(const json& j, const char* what) {
  if (j.is_null()) return std::nullopt;
  return read_num(j, what);
}

const json& at(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ReportFormatError(std::string("missing key '") + key + "'");
  return *it;
}

std::size_t read_count(const json& j, const char* key) {
  const json& v = at(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ReportFormatError(std::string("expected a count for '") + key + "'");
  }
  return v.get<std::size_t>();
}

std::string read_string(const json& j, const char* key) {
  const json& v = at(j, key);
  if (!v.is_string()) throw ReportFormatError(std::string("expected text for '") + key + "'");
  return v.get<std::string>();
}

json stat_json(const Stat& s) {
  return {{"count", s.count}, {"mean", opt(s.mean)}, {"std", opt(s.std)}};
}

Stat stat_from(const json& j) {
  return {read_count(j, "count"), read_opt(at(j, "mean"), "mean"), read_opt(at(j, "std"), "std")};
}

json group_json(const GroupStats& g) {
  return {{"key", g.key},
          {"runs", g.runs},
          {"collisions", g.collisions},
          {"collision_rate", num(g.collision_rate)},
          {"ttc_min", stat_json(g.ttc_min)},
          {"d_min", stat_json(g.d_min)}};
}

GroupStats group_from(const json& j) {
  GroupStats g;
  g.key = read_string(j, "key");
  g.runs = read_count(j, "runs");
  g.collisions = read_count(j, "collisions");
  g.collision_rate = read_num(at(j, "collision_rate"), "collision_rate");
  g.ttc_min = stat_from(at(j, "ttc_min"));
  g.d_min = stat_from(at(j, "d_min"));
  return g;
}

json groups_json(const std::vector<GroupStats>& gs) {
  json a = json::array();
  for (const auto& g : gs) a.push_back(group_json(g));
  return a;
}

std::vector<GroupStats> groups_from(const json& j) {
  if (!j.is_array()) throw ReportFormatError("expected a list of groups");
  std::vector<GroupStats> out;
  for (const auto& g : j) out.push_back(group_from(g));
  return out;
}

json coverage_json(const CoverageReport& c) {
  json axes = json::array();
  for (const auto& a : c.axes) {
    axes.push_back({{"name", a.name},
                    {"tested_bins", a.tested_bins},
                    {"total_bins", a.total_bins},
                    {"coverage", num(a.coverage)},
                    {"weight", num(a.weight)}});
  }
  return {{"axes", axes},
          {"sci_uniform", num(c.sci_uniform)},
          {"sci_weighted", num(c.sci_weighted)},
          {"r_c", num(c.r_c)},
          {"critical_cells_tested", c.critical_cells_tested},
          {"critical_cells_total", c.critical_cells_total},
          {"critical_predicate", c.critical_predicate}};
}

CoverageReport coverage_from(const json& j) {
  CoverageReport c;
  for (const auto& a : at(j, "axes")) {
    AxisCoverage ax;
    ax.name = read_string(a, "name");
    const auto id = parameter_from_name(ax.name);
    if (!id) throw ReportFormatError("unknown coverage axis '" + ax.name + "'");
    ax.id = *id;
    ax.tested_bins = read_count(a, "tested_bins");
    ax.total_bins = read_count(a, "total_bins");
    ax.coverage = read_num(at(a, "coverage"), "coverage");
    ax.weight = read_num(at(a, "weight"), "weight");
    c.axes.push_back(ax);
  }
  c.sci_uniform = read_num(at(j, "sci_uniform"), "sci_uniform");
  c.sci_weighted = read_num(at(j, "sci_weighted"), "sci_weighted");
  c.r_c = read_num(at(j, "r_c"), "r_c");
  c.critical_cells_tested = read_count(j, "critical_cells_tested");
  c.critical_cells_total = read_count(j, "critical_cells_total");
  c.critical_predicate = read_string(j, "critical_predicate");
  return c;
}

json metrics_json(const ScenarioMetrics& m) {
  return {{"ttc_min", num(m.ttc_min)},
          {"d_min", num(m.d_min)},
          {"pet", opt(m.pet)},
          {"brake_onset", opt(m.brake_onset)},
          {"max_decel", num(m.max_decel)},
          {"threshold_violations", m.threshold_violations},
          {"collision", m.collision},
          {"impact_dv", num(m.impact_dv)},
          {"risk", risk_name(m.risk)}};
}

ScenarioMetrics metrics_from(const json& j) {
  ScenarioMetrics m;
  m.ttc_min = read_num(at(j, "ttc_min"), "ttc_min");
  m.d_min = read_num(at(j, "d_min"), "d_min");
  m.pet = read_opt(at(j, "pet"), "pet");
  m.brake_onset = read_opt(at(j, "brake_onset"), "brake_onset");
  m.max_decel = read_num(at(j, "max_decel"), "max_decel");
  m.threshold_violations = read_count(j, "threshold_violations");
  const json& c = at(j, "collision");
  if (!c.is_boolean()) throw ReportFormatError("expected true/false for 'collision'");
  m.collision = c.get<bool>();
  m.impact_dv = read_num(at(j, "impact_dv"), "impact_dv");
  const auto risk = risk_from_name(read_string(j, "risk"));
  if (!risk) throw ReportFormatError("unknown risk level");
  m.risk = *risk;
  return m;
}

json run_json(const RunRecord& r) {
  json params = json::object();
  for (ParameterId id : kAllParameters) {
    params[std::string(parameter_name(id))] = num(r.parameters.get(id));
  }
  return {{"ordinal", r.ordinal},
          {"scenario_id", r.scenario_id},
          {"seed", r.seed},
          {"archetype", archetype_code(r.archetype)},
          {"parameters", params},
          {"validity", r.validity.to_string()},
          {"termination", termination_name(r.termination)},
          {"metrics", r.metrics ? metrics_json(*r.metrics) : json(nullptr)}};
}

RunRecord run_from(const json& j) {
  RunRecord r;
  r.ordinal = read_count(j, "ordinal");
  r.scenario_id = read_string(j, "scenario_id");
  r.seed = at(j, "seed").get<std::uint64_t>();
  const auto arch = archetype_from_code(read_string(j, "archetype"));
  if (!arch) throw ReportFormatError("unknown archetype");
  r.archetype = *arch;
  const json& params = at(j, "parameters");
  for (ParameterId id : kAllParameters) {
    const std::string name(parameter_name(id));
    r.parameters.set(id, read_num(at(params, name.c_str()), name.c_str()));
  }
  const auto validity = Validity::parse(read_string(j, "validity"));
  if (!validity) throw ReportFormatError("unknown validity");
  r.validity = *validity;
  const auto term = termination_from_name(read_string(j, "termination"));
  if (!term) throw ReportFormatError("unknown termination");
  r.termination = *term;
  if (const json& m = at(j, "metrics"); !m.is_null()) r.metrics = metrics_from(m);
  return r;
}

std::map<std::string, std::size_t> counts_from(const json& j) {
  if (!j.is_object()) throw ReportFormatError("expected an object of counts");
  std::map<std::string, std::size_t> out;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number_unsigned()) throw ReportFormatError("expected a count for '" + k + "'");
    out[k] = v.get<std::size_t>();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text and SVG
// ---------------------------------------------------------------------------

std::string fixed(double v, int digits = 2) {
  if (!std::isfinite(v)) return format_double(v);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string stat_text(const Stat& s, const char* unit) {
  if (!s.mean) return "n/a";
  std::string out = fixed(*s.mean) + " " + unit;
  if (s.std) out += " (sd " + fixed(*s.std) + ")";
  out += ", n=" + std::to_string(s.count);
  return out;
}

std::string xml_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

class Svg {
 public:
  explicit Svg(std::string_view title) {
    os_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    text(kWidth / 2, 24, title, "middle", 15);
    line(kLeft, kTop + kPlotH, kLeft + kPlotW, kTop + kPlotH);
    line(kLeft, kTop, kLeft, kTop + kPlotH);
  }

  void line(double x1, double y1, double x2, double y2, std::string_view stroke = "black") {
    os_ << "<line x1=\"" << fixed(x1) << "\" y1=\"" << fixed(y1) << "\" x2=\"" << fixed(x2)
        << "\" y2=\"" << fixed(y2) << "\" stroke=\"" << stroke << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, std::string_view fill) {
    os_ << "<rect x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" width=\"" << fixed(w)
        << "\" height=\"" << fixed(h) << "\" fill=\"" << fill << "\"/>\n";
  }
  void circle(double x, double y, double r, std::string_view fill) {
    os_ << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(y) << "\" r=\"" << fixed(r)
        << "\" fill=\"" << fill << "\"/>\n";
  }
  void text(double x, double y, std::string_view s, std::string_view anchor = "middle",
            int size = 11) {
    os_ << "<text x=\"" << fixed(x) << "\" y=\"" << fixed(y) << "\" font-family=\"sans-serif\""
        << " font-size=\"" << size << "\" text-anchor=\"" << anchor << "\">" << xml_escape(s)
        << "</text>\n";
  }
  void axis_labels(std::string_view x_label, std::string_view y_label) {
    text(kLeft + kPlotW / 2, kHeight - 12, x_label);
    os_ << "<text x=\"16\" y=\"" << fixed(kTop + kPlotH / 2)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 16 " << fixed(kTop + kPlotH / 2) << ")\">"
        << xml_escape(y_label) << "</text>\n";
  }
  // Count axis ticks from 0 to `top`.
  void count_ticks(std::size_t top) {
    const std::size_t step = std::max<std::size_t>(1, (top + 4) / 5);
    for (std::size_t v = 0; v <= top; v += step) {
      const double y = kTop + kPlotH - kPlotH * static_cast<double>(v) / static_cast<double>(top);
      line(kLeft - 4, y, kLeft, y);
      text(kLeft - 6, y + 4, std::to_string(v), "end");
    }
  }
  std::string finish() {
    os_ << "</svg>\n";
    return os_.str();
  }

 private:
  std::ostringstream os_;
};

std::string bar_chart(std::string_view title, std::string_view x_label,
                      const std::vector<std::string>& labels,
                      const std::vector<std::size_t>& counts, std::string_view fill) {
  Svg svg(title);
  svg.axis_labels(x_label, "runs");
  const std::size_t peak = std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end()));
  svg.count_ticks(peak);
  const double slot = kPlotW / static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double h = kPlotH * static_cast<double>(counts[i]) / static_cast<double>(peak);
    const double x = kLeft + slot * static_cast<double>(i);
    svg.rect(x + slot * 0.1, kTop + kPlotH - h, slot * 0.8, h, fill);
    svg.text(x + slot / 2, kTop + kPlotH + 14, labels[i]);
  }
  return svg.finish();
}

std::string ttc_histogram(const CampaignReport& report) {
  constexpr double kBinWidth = 0.5;
  constexpr std::size_t kBins = 12;
  std::vector<std::size_t> counts(kBins + 1, 0);
  for (const auto& r : report.runs) {
    if (!r.metrics) continue;
    const double v = r.metrics->ttc_min;
    const auto b = std::isfinite(v) && v < kBinWidth * kBins
                       ? static_cast<std::size_t>(v / kBinWidth)
                       : kBins;
    ++counts[b];
  }
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < kBins; ++i) labels.push_back(fixed(kBinWidth * i, 1));
  labels.emplace_back(">=6");
  return bar_chart("Minimum TTC per run", "ttc_min lower bin edge (s)", labels, counts,
                   "#4c72b0");
}

std::string dmin_scatter(const CampaignReport& report) {
  constexpr double kSpeedLo = 20.0, kSpeedHi = 50.0;
  constexpr double kDistHi = 60.0;
  Svg svg("Minimum distance against ego speed");
  svg.axis_labels("ego speed (km/h)", "d_min (m)");
  for (double s = kSpeedLo; s <= kSpeedHi; s += 5.0) {
    const double x = kLeft + kPlotW * (s - kSpeedLo) / (kSpeedHi - kSpeedLo);
    svg.line(x, kTop + kPlotH, x, kTop + kPlotH + 4);
    svg.text(x, kTop + kPlotH + 16, fixed(s, 0));
  }
  for (double d = 0.0; d <= kDistHi; d += 10.0) {
    const double y = kTop + kPlotH - kPlotH * d / kDistHi;
    svg.line(kLeft - 4, y, kLeft, y);
    svg.text(kLeft - 6, y + 4, fixed(d, 0), "end");
  }
  for (const auto& r : report.runs) {
    if (!r.metrics) continue;
    const double s = std::clamp(r.parameters.ego_speed, kSpeedLo, kSpeedHi);
    const double d = std::isfinite(r.metrics->d_min) ? std::min(r.metrics->d_min, kDistHi)
                                                      : kDistHi;
    const double x = kLeft + kPlotW * (s - kSpeedLo) / (kSpeedHi - kSpeedLo);
    const double y = kTop + kPlotH - kPlotH * d / kDistHi;
    if (r.metrics->collision) {
      svg.line(x - 3, y - 3, x + 3, y + 3, "#c44e52");
      svg.line(x - 3, y + 3, x + 3, y - 3, "#c44e52");
    } else {
      svg.circle(x, y, 2.5, "#55a868");
    }
  }
  return svg.finish();
}

std::string risk_bars(const CampaignReport& report) {
  std::vector<std::string> labels;
  std::vector<std::size_t> counts;
  for (RiskLevel level : {RiskLevel::kLow, RiskLevel::kMedium, RiskLevel::kHigh}) {
    const std::string name(risk_name(level));
    labels.push_back(name);
    const auto it = report.risk_histogram.find(name);
    counts.push_back(it == report.risk_histogram.end() ? 0 : it->second);
  }
  return bar_chart("Risk level", "risk", labels, counts, "#8172b2");
}

}  // namespace

std::string report_to_json(const CampaignReport& r, bool include_timing) {
  json runs = json::array();
  for (const auto& run : r.runs) runs.push_back(run_json(run));
  json j = {{"scenario_count", r.scenario_count},
            {"valid_count", r.valid_count},
            {"invalid_count", r.invalid_count},
            {"invalid_reasons", json(r.invalid_reasons)},
            {"collision_count", r.collision_count},
            {"collision_rate", num(r.collision_rate)},
            {"ttc_min", stat_json(r.ttc_min)},
            {"d_min", stat_json(r.d_min)},
            {"pet", stat_json(r.pet)},
            {"max_decel", stat_json(r.max_decel)},
            {"threshold_violations_total", r.threshold_violations_total},
            {"violation_fraction", num(r.violation_fraction)},
            {"risk_histogram", json(r.risk_histogram)},
            {"by_archetype", groups_json(r.by_archetype)},
            {"by_ego_speed_bin", groups_json(r.by_ego_speed_bin)},
            {"by_approach_angle_bin", groups_json(r.by_approach_angle_bin)},
            {"coverage", r.coverage ? coverage_json(*r.coverage) : json(nullptr)},
            {"runs", runs}};
  if (include_timing) {
    j["timing"] = {{"jobs", r.timing.jobs},
                   {"wall_seconds", num(r.timing.wall_seconds)},
                   {"mean_run_seconds", num(r.timing.mean_run_seconds)},
                   {"max_run_seconds", num(r.timing.max_run_seconds)}};
  }
  return j.dump(2) + "\n";
}

CampaignReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ReportFormatError(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ReportFormatError("report must be a JSON object");
  CampaignReport r;
  try {
    r.scenario_count = read_count(j, "scenario_count");
    r.valid_count = read_count(j, "valid_count");
    r.invalid_count = read_count(j, "invalid_count");
    r.invalid_reasons = counts_from(at(j, "invalid_reasons"));
    r.collision_count = read_count(j, "collision_count");
    r.collision_rate = read_num(at(j, "collision_rate"), "collision_rate");
    r.ttc_min = stat_from(at(j, "ttc_min"));
    r.d_min = stat_from(at(j, "d_min"));
    r.pet = stat_from(at(j, "pet"));
    r.max_decel = stat_from(at(j, "max_decel"));
    r.threshold_violations_total = read_count(j, "threshold_violations_total");
    r.violation_fraction = read_num(at(j, "violation_fraction"), "violation_fraction");
    r.risk_histogram = counts_from(at(j, "risk_histogram"));
    r.by_archetype = groups_from(at(j, "by_archetype"));
    r.by_ego_speed_bin = groups_from(at(j, "by_ego_speed_bin"));
    r.by_approach_angle_bin = groups_from(at(j, "by_approach_angle_bin"));
    if (const json& c = at(j, "coverage"); !c.is_null()) r.coverage = coverage_from(c);
    for (const auto& run : at(j, "runs")) r.runs.push_back(run_from(run));
    if (const auto it = j.find("timing"); it != j.end()) {
      r.timing.jobs = read_count(*it, "jobs");
      r.timing.wall_seconds = read_num(at(*it, "wall_seconds"), "wall_seconds");
      r.timing.mean_run_seconds = read_num(at(*it, "mean_run_seconds"), "mean_run_seconds");
      r.timing.max_run_seconds = read_num(at(*it, "max_run_seconds"), "max_run_seconds");
    }
  } catch (const json::exception& e) {
    throw ReportFormatError(e.what());
  }
  return r;
}

std::string coverage_to_json(const CoverageReport& coverage) {
  return coverage_json(coverage).dump(2) + "\n";
}

std::string report_text(const CampaignReport& r) {
  std::ostringstream os;
  os << "scenarios        " << r.scenario_count << " (" << r.valid_count << " valid, "
     << r.invalid_count << " invalid)\n";
  for (const auto& [reason, n] : r.invalid_reasons) os << "  invalid " << reason << ": " << n << "\n";
  os << "collisions       " << r.collision_count << " (" << fixed(100.0 * r.collision_rate, 1)
     << "% of valid runs)\n";
  os << "ttc_min          " << stat_text(r.ttc_min, "s") << "\n";
  os << "d_min            " << stat_text(r.d_min, "m") << "\n";
  os << "pet              " << stat_text(r.pet, "s") << "\n";
  os << "max decel        " << stat_text(r.max_decel, "m/s^2") << "\n";
  os << "ttc < 1.2 s      " << r.threshold_violations_total << " events, "
     << fixed(100.0 * r.violation_fraction, 1) << "% of runs affected\n";
  os << "risk             ";
  for (RiskLevel level : {RiskLevel::kLow, RiskLevel::kMedium, RiskLevel::kHigh}) {
    const std::string name(risk_name(level));
    const auto it = r.risk_histogram.find(name);
    os << name << ' ' << (it == r.risk_histogram.end() ? 0 : it->second) << "  ";
  }
  os << "\n";
  auto table = [&os](const char* title, const std::vector<GroupStats>& groups) {
    os << "\n" << title << "\n";
    os << "  key      runs  coll.rate  mean ttc_min  mean d_min\n";
    for (const auto& g : groups) {
      char line[160];
      std::snprintf(line, sizeof(line), "  %-7s %5zu  %8s%%  %12s  %10s\n", g.key.c_str(), g.runs,
                    fixed(100.0 * g.collision_rate, 1).c_str(),
                    g.ttc_min.mean ? fixed(*g.ttc_min.mean).c_str() : "n/a",
                    g.d_min.mean ? fixed(*g.d_min.mean).c_str() : "n/a");
      os << line;
    }
  };
  table("by archetype", r.by_archetype);
  table("by ego speed (km/h)", r.by_ego_speed_bin);
  table("by approach angle (deg)", r.by_approach_angle_bin);
  if (r.coverage) {
    const CoverageReport& c = *r.coverage;
    os << "\ncoverage\n";
    for (const auto& a : c.axes) {
      os << "  " << a.name << ": " << a.tested_bins << "/" << a.total_bins << "\n";
    }
    os << "  SCI uniform " << fixed(c.sci_uniform, 4) << ", weighted " << fixed(c.sci_weighted, 4)
       << "\n";
    os << "  R_c " << fixed(c.r_c, 4) << " (" << c.critical_cells_tested << "/"
       << c.critical_cells_total << " cells: " << c.critical_predicate << ")\n";
  }
  os << "\ntiming: " << fixed(r.timing.wall_seconds, 3) << " s wall, " << r.timing.jobs
     << " jobs, " << fixed(1000.0 * r.timing.mean_run_seconds, 2) << " ms/run mean\n";
  return os.str();
}

std::vector<SvgPlot> report_svgs(const CampaignReport& report) {
  return {{"ttc_min_histogram.svg", ttc_histogram(report)},
          {"d_min_vs_speed.svg", dmin_scatter(report)},
          {"risk_histogram.svg", risk_bars(report)}};
}

}  // namespace scenkit
