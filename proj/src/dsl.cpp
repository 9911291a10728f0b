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

#include "scenkit/dsl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "scenkit/compiler.hpp"
#include "scenkit/numfmt.hpp"
#include "scenkit/sampler.hpp"

namespace scenkit {

std::string ParseDiagnostic::to_string() const {
  return std::string(severity == Severity::kError ? "error" : "warning") + ": line " +
         std::to_string(line) + ": " + code + ": " + message;
}

bool ScenarioDocument::has_ranges() const {
  return std::any_of(parameters.begin(), parameters.end(),
                     [](const ParameterEntry& p) { return p.is_range; });
}

ScenarioParameters ScenarioDocument::base_parameters() const {
  ScenarioParameters p;
  for (std::size_t k = 0; k < kAllParameters.size(); ++k) {
    if (!parameters[k].values.empty()) p.set(kAllParameters[k], parameters[k].values.front());
  }
  return p;
}

bool ParseResult::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ParseDiagnostic& d) { return d.severity == Severity::kError; });
}

namespace {

constexpr std::size_t kMaxExpansion = 1'000'000;

enum class SectionKind { kScenario, kActor, kEnvironment, kTrigger, kParameters, kUnknown };

std::optional<SectionKind> section_from_name(std::string_view name) {
  if (name == "scenario") return SectionKind::kScenario;
  if (name == "actor") return SectionKind::kActor;
  if (name == "environment") return SectionKind::kEnvironment;
  if (name == "trigger" || name == "triggers") return SectionKind::kTrigger;
  if (name == "parameters") return SectionKind::kParameters;
  return std::nullopt;
}

struct Entry {
  std::string value;
  std::size_t line;
};

struct Block {
  SectionKind kind;
  std::size_t line;
  std::map<std::string, Entry, std::less<>> entries;
};

std::vector<std::string_view> tokens(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

bool unit_matches(std::string_view got, std::string_view expected) {
  if (got == expected) return true;
  if (expected == "m/s2") return got == "m/s^2";
  return false;
}

// Diagnostic sink plus typed value readers used by every block.
class Reader {
 public:
  explicit Reader(std::vector<ParseDiagnostic>& diags) : diags_(diags) {}

  void error(std::size_t line, std::string code, std::string message) {
    diags_.push_back({Severity::kError, line, std::move(code), std::move(message)});
  }
  void warning(std::size_t line, std::string code, std::string message) {
    diags_.push_back({Severity::kWarning, line, std::move(code), std::move(message)});
  }

  std::optional<double> number(std::string_view text, std::size_t line, std::string_view key) {
    const auto v = parse_double(text);
    if (!v || !std::isfinite(*v)) {
      error(line, "malformed_number",
            std::string(key) + ": '" + std::string(text) + "' is not a number");
      return std::nullopt;
    }
    return v;
  }

  // "<number> <unit>"
  std::optional<double> quantity(const Entry& e, std::string_view unit, std::string_view key) {
    const auto toks = tokens(e.value);
    if (toks.size() == 1) {
      if (parse_double(toks[0])) {
        error(e.line, "missing_unit",
              std::string(key) + ": unit required (" + std::string(unit) + ")");
      } else {
        number(toks[0], e.line, key);
      }
      return std::nullopt;
    }
    if (toks.size() != 2) {
      error(e.line, "malformed_value",
            std::string(key) + ": expected '<number> " + std::string(unit) + "'");
      return std::nullopt;
    }
    const auto v = number(toks[0], e.line, key);
    if (!v) return std::nullopt;
    if (!unit_matches(toks[1], unit)) {
      error(e.line, "unit_mismatch",
            std::string(key) + ": expected unit " + std::string(unit) + ", got " +
                std::string(toks[1]));
      return std::nullopt;
    }
    return v;
  }

 private:
  std::vector<ParseDiagnostic>& diags_;
};

void check_keys(Reader& r, const Block& b, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, entry] : b.entries) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      r.error(entry.line, "unknown_key", "unknown key '" + key + "'");
    }
  }
}

const Entry* require(Reader& r, const Block& b, std::string_view key, std::string_view section) {
  const auto it = b.entries.find(key);
  if (it == b.entries.end()) {
    r.error(b.line, "missing_key",
            "[" + std::string(section) + "] requires '" + std::string(key) + "'");
    return nullptr;
  }
  return &it->second;
}

const Entry* optional_entry(const Block& b, std::string_view key) {
  const auto it = b.entries.find(key);
  return it == b.entries.end() ? nullptr : &it->second;
}

void read_scenario(Reader& r, const Block& b, ScenarioDocument& doc) {
  check_keys(r, b, {"id", "type", "archetype", "duration", "seed"});
  doc.scenario_line = b.line;
  if (const Entry* e = optional_entry(b, "type")) {
    doc.scenario_type = e->value;
  } else {
    r.warning(b.line, "missing_type", "[scenario] has no 'type'");
  }
  if (const Entry* e = require(r, b, "archetype", "scenario")) {
    if (const auto a = archetype_from_code(e->value)) {
      doc.archetype = *a;
    } else {
      r.error(e->line, "unknown_archetype", "unknown archetype '" + e->value + "' (S1..S6)");
    }
  }
  if (const Entry* e = optional_entry(b, "id")) doc.id = e->value;
  if (const Entry* e = optional_entry(b, "duration")) {
    if (const auto v = r.quantity(*e, "s", "duration")) doc.duration = *v;
  }
  if (const Entry* e = optional_entry(b, "seed")) {
    if (const auto s = parse_u64(e->value)) {
      doc.seed = *s;
    } else {
      r.error(e->line, "malformed_number", "seed: '" + e->value + "' is not an unsigned integer");
    }
  }
}

void read_environment(Reader& r, const Block& b, ScenarioDocument& doc) {
  check_keys(r, b, {"weather", "lighting", "friction", "detection_delay"});
  doc.environment_line = b.line;
  Environment env;
  if (const Entry* e = require(r, b, "weather", "environment")) {
    if (const auto w = weather_from_name(e->value)) {
      env.weather = *w;
    } else {
      r.error(e->line, "unknown_value", "weather: '" + e->value + "'");
    }
  }
  if (const Entry* e = require(r, b, "lighting", "environment")) {
    if (const auto l = lighting_from_name(e->value)) {
      env.lighting = *l;
    } else {
      r.error(e->line, "unknown_value", "lighting: '" + e->value + "'");
    }
  }
  env = Environment::make(env.weather, env.lighting);
  if (const Entry* e = optional_entry(b, "friction")) {
    const auto toks = tokens(e->value);
    if (toks.size() != 1) {
      r.error(e->line, "unit_mismatch", "friction is dimensionless");
    } else if (const auto v = r.number(toks[0], e->line, "friction")) {
      env.friction = *v;
    }
  }
  if (const Entry* e = optional_entry(b, "detection_delay")) {
    if (const auto v = r.quantity(*e, "s", "detection_delay")) env.extra_detection_delay = *v;
  }
  doc.environment = env;
}

std::optional<BehaviorScript> read_behavior(Reader& r, const Entry& e) {
  const auto toks = tokens(e.value);
  if (toks.empty()) {
    r.error(e.line, "malformed_value", "behavior: empty");
    return std::nullopt;
  }
  const auto type = behavior_from_name(toks[0]);
  if (!type) {
    r.error(e.line, "unknown_value", "behavior: '" + std::string(toks[0]) + "'");
    return std::nullopt;
  }
  BehaviorScript s{*type, 0.0, 0.0};
  const Entry rest{e.value.substr(std::min(e.value.size(), toks[0].size() + 1)), e.line};
  switch (*type) {
    case Behavior::kCrossOnTrigger: {
      const auto v = r.quantity(Entry{std::string(trim(rest.value)), e.line}, "m/s", "behavior");
      if (!v) return std::nullopt;
      s.crossing_speed = *v;
      break;
    }
    case Behavior::kCutIn:
    case Behavior::kOncomingDrift: {
      const auto v = r.quantity(Entry{std::string(trim(rest.value)), e.line}, "m", "behavior");
      if (!v) return std::nullopt;
      s.lateral_target = *v;
      break;
    }
    default:
      if (toks.size() != 1) {
        r.error(e.line, "malformed_value",
                "behavior '" + std::string(toks[0]) + "' takes no argument");
        return std::nullopt;
      }
  }
  return s;
}

std::optional<ActorSpec> read_actor(Reader& r, const Block& b) {
  check_keys(r, b, {"kind", "position", "heading", "speed", "radius", "behavior"});
  ActorSpec a;
  bool ok = true;
  if (const Entry* e = require(r, b, "kind", "actor")) {
    if (const auto k = actor_kind_from_name(e->value)) {
      a.kind = *k;
    } else {
      r.error(e->line, "unknown_value", "kind: '" + e->value + "'");
      ok = false;
    }
  } else {
    ok = false;
  }
  if (const Entry* e = require(r, b, "position", "actor")) {
    const auto sp = e->value.rfind(' ');
    const auto comma = e->value.find(',');
    if (comma == std::string::npos) {
      r.error(e->line, "malformed_value", "position: expected '<x>, <y> m'");
      ok = false;
    } else if (sp == std::string::npos || sp < comma) {
      r.error(e->line, "missing_unit", "position: unit required (m)");
      ok = false;
    } else {
      const std::string_view v = e->value;
      const auto unit = trim(v.substr(sp + 1));
      const auto x = r.number(trim(v.substr(0, comma)), e->line, "position");
      const auto y = r.number(trim(v.substr(comma + 1, sp - comma - 1)), e->line, "position");
      if (unit != "m") {
        r.error(e->line, "unit_mismatch", "position: expected unit m, got " + std::string(unit));
        ok = false;
      } else if (x && y) {
        a.position = {*x, *y};
      } else {
        ok = false;
      }
    }
  } else {
    ok = false;
  }
  if (const Entry* e = require(r, b, "heading", "actor")) {
    if (const auto v = r.quantity(*e, "deg", "heading")) a.heading = *v; else ok = false;
  } else {
    ok = false;
  }
  if (const Entry* e = require(r, b, "speed", "actor")) {
    if (const auto v = r.quantity(*e, "m/s", "speed")) a.speed = *v; else ok = false;
  } else {
    ok = false;
  }
  a.body_radius = default_body_radius(a.kind);
  if (const Entry* e = optional_entry(b, "radius")) {
    if (const auto v = r.quantity(*e, "m", "radius")) a.body_radius = *v; else ok = false;
  }
  if (const Entry* e = optional_entry(b, "behavior")) {
    if (const auto s = read_behavior(r, *e)) a.behavior = *s; else ok = false;
  } else {
    switch (a.kind) {
      case ActorKind::kEgo: a.behavior = {Behavior::kEgoControlled, 0, 0}; break;
      case ActorKind::kParkedOccluder: a.behavior = {Behavior::kParked, 0, 0}; break;
      case ActorKind::kLeadVehicle: a.behavior = {Behavior::kLaneFollow, 0, 0}; break;
      case ActorKind::kCutinVehicle: a.behavior = {Behavior::kCutIn, 0, 0}; break;
      case ActorKind::kOncomingVehicle: a.behavior = {Behavior::kOncomingDrift, 0, 0}; break;
      default:
        r.error(b.line, "missing_key", "[actor] of kind " +
                                           std::string(actor_kind_name(a.kind)) +
                                           " requires 'behavior'");
        ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return a;
}

std::optional<TriggerEvent> read_trigger(Reader& r, const Block& b) {
  check_keys(r, b, {"actor", "when", "do"});
  TriggerEvent t;
  bool ok = true;
  if (const Entry* e = require(r, b, "actor", "trigger")) {
    if (const auto v = parse_u64(e->value)) {
      t.actor = static_cast<std::size_t>(*v);
    } else {
      r.error(e->line, "malformed_number", "actor: '" + e->value + "' is not an actor ordinal");
      ok = false;
    }
  } else {
    ok = false;
  }
  if (const Entry* e = require(r, b, "when", "trigger")) {
    const auto toks = tokens(e->value);
    const std::string_view head = toks.empty() ? std::string_view{} : toks[0];
    const Entry rest{toks.size() > 1 ? std::string(trim(std::string_view(e->value).substr(
                                           head.size())))
                                     : std::string{},
                     e->line};
    if (head == "at_time") {
      t.condition = TriggerCondition::kAtTime;
      if (const auto v = r.quantity(rest, "s", "when")) t.condition_value = *v; else ok = false;
    } else if (head == "ego_within") {
      t.condition = TriggerCondition::kEgoWithinDistance;
      if (const auto v = r.quantity(rest, "m", "when")) t.condition_value = *v; else ok = false;
    } else {
      r.error(e->line, "unknown_value", "when: '" + e->value + "'");
      ok = false;
    }
  } else {
    ok = false;
  }
  if (const Entry* e = require(r, b, "do", "trigger")) {
    const auto toks = tokens(e->value);
    const std::string_view head = toks.empty() ? std::string_view{} : toks[0];
    const Entry rest{toks.size() > 1 ? std::string(trim(std::string_view(e->value).substr(
                                           head.size())))
                                     : std::string{},
                     e->line};
    if (head == "start_crossing" && toks.size() == 1) {
      t.action = TriggerAction::kStartCrossing;
    } else if (head == "hard_brake") {
      t.action = TriggerAction::kHardBrake;
      if (const auto v = r.quantity(rest, "m/s2", "do")) t.action_value = *v; else ok = false;
    } else if (head == "lane_intrusion") {
      t.action = TriggerAction::kBeginLaneIntrusion;
      if (const auto v = r.quantity(rest, "m/s", "do")) t.action_value = *v; else ok = false;
    } else if (head == "drift") {
      t.action = TriggerAction::kBeginDrift;
      if (const auto v = r.quantity(rest, "m/s", "do")) t.action_value = *v; else ok = false;
    } else {
      r.error(e->line, "unknown_value", "do: '" + e->value + "'");
      ok = false;
    }
  } else {
    ok = false;
  }
  if (!ok) return std::nullopt;
  return t;
}

std::optional<ParameterEntry> read_parameter(Reader& r, const Entry& e, ParameterId id) {
  const std::string key(parameter_name(id));
  const std::string_view unit = parameter_unit(id);
  // Normalise "20..50" to "20 .. 50".
  std::string text;
  for (std::size_t i = 0; i < e.value.size(); ++i) {
    if (e.value.compare(i, 2, "..") == 0) {
      text += " .. ";
      ++i;
    } else {
      text += e.value[i];
    }
  }
  const auto toks = tokens(text);
  ParameterEntry p;
  p.line = e.line;
  if (toks.size() <= 2) {
    const auto v = r.quantity(e, unit, key);
    if (!v) return std::nullopt;
    p.values = {*v};
    return p;
  }
  if (toks.size() != 6 || toks[1] != ".." || (toks[3] != "step" && toks[3] != "count")) {
    r.error(e.line, "malformed_value",
            key + ": expected '<v> " + std::string(unit) + "' or '<lo>..<hi> step|count <n> " +
                std::string(unit) + "'");
    return std::nullopt;
  }
  const auto lo = r.number(toks[0], e.line, key);
  const auto hi = r.number(toks[2], e.line, key);
  const auto n = r.number(toks[4], e.line, key);
  if (!lo || !hi || !n) return std::nullopt;
  if (!unit_matches(toks[5], unit)) {
    r.error(e.line, "unit_mismatch",
            key + ": expected unit " + std::string(unit) + ", got " + std::string(toks[5]));
    return std::nullopt;
  }
  if (*hi < *lo) {
    r.error(e.line, "invalid_range", key + ": upper bound below lower bound");
    return std::nullopt;
  }
  if (toks[3] == "step") {
    if (!(*n > 0.0)) {
      r.error(e.line, "invalid_range", key + ": step must be positive");
      return std::nullopt;
    }
    if ((*hi - *lo) / *n > static_cast<double>(kMaxExpansion)) {
      r.error(e.line, "range_too_large", key + ": range expands to too many values");
      return std::nullopt;
    }
    p.values = expand_step(*lo, *hi, *n);
  } else {
    if (!(*n >= 1.0) || *n != std::floor(*n) || *n > static_cast<double>(kMaxExpansion)) {
      r.error(e.line, "invalid_range", key + ": count must be a positive integer");
      return std::nullopt;
    }
    p.values = expand_count(*lo, *hi, static_cast<std::size_t>(*n));
  }
  p.is_range = true;
  return p;
}

void read_parameters(Reader& r, const Block& b, ScenarioDocument& doc, bool& ok) {
  std::vector<std::string_view> allowed;
  for (ParameterId id : kAllParameters) allowed.push_back(parameter_name(id));
  for (const auto& [key, entry] : b.entries) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      r.error(entry.line, "unknown_key", "unknown parameter '" + key + "'");
    }
  }
  for (std::size_t k = 0; k < kAllParameters.size(); ++k) {
    const Entry* e = require(r, b, parameter_name(kAllParameters[k]), "parameters");
    if (!e) {
      ok = false;
      continue;
    }
    if (auto p = read_parameter(r, *e, kAllParameters[k])) {
      doc.parameters[k] = std::move(*p);
    } else {
      ok = false;
    }
  }
}

}  // namespace

DocumentResult parse_document(std::string_view text) {
  DocumentResult result;
  Reader r(result.diagnostics);

  std::vector<Block> blocks;
  bool skipping = false;  // inside an unknown section
  std::size_t lineno = 0;
  std::size_t last_line = 1;
  for (auto raw : split(text, '\n')) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string_view::npos) {
      raw = raw.substr(0, hash);
    }
    const auto line = trim(raw);
    if (line.empty()) continue;
    last_line = lineno;
    if (line.front() == '[') {
      if (line.back() != ']') {
        r.error(lineno, "malformed_section", "section header missing ']'");
        skipping = true;
        continue;
      }
      const auto name = trim(line.substr(1, line.size() - 2));
      if (const auto kind = section_from_name(name)) {
        blocks.push_back({*kind, lineno, {}});
        skipping = false;
      } else {
        r.error(lineno, "unknown_section", "unknown section [" + std::string(name) + "]");
        skipping = true;
      }
      continue;
    }
    if (skipping) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      r.error(lineno, "malformed_entry", "expected 'key: value'");
      continue;
    }
    if (blocks.empty()) {
      r.error(lineno, "entry_outside_section", "entry before any [section]");
      continue;
    }
    std::string key(trim(line.substr(0, colon)));
    std::string value(trim(line.substr(colon + 1)));
    auto& entries = blocks.back().entries;
    if (entries.contains(key)) {
      r.error(lineno, "duplicate_key", "duplicate key '" + key + "'");
      continue;
    }
    entries.emplace(std::move(key), Entry{std::move(value), lineno});
  }

  ScenarioDocument doc;
  bool ok = true;
  auto single = [&](SectionKind kind, std::string_view name, bool mandatory,
                    std::string_view missing_code) -> const Block* {
    const Block* first = nullptr;
    for (const auto& b : blocks) {
      if (b.kind != kind) continue;
      if (first) {
        r.error(b.line, "duplicate_block", "duplicate [" + std::string(name) + "] block");
        ok = false;
      } else {
        first = &b;
      }
    }
    if (!first && mandatory) {
      r.error(last_line, std::string(missing_code),
              "missing [" + std::string(name) + "] block");
      ok = false;
    }
    return first;
  };

  const Block* scenario = single(SectionKind::kScenario, "scenario", true, "missing_header");
  const Block* params = single(SectionKind::kParameters, "parameters", true, "missing_parameters");
  const Block* env = single(SectionKind::kEnvironment, "environment", false, "");

  if (scenario) read_scenario(r, *scenario, doc);
  if (env) {
    read_environment(r, *env, doc);
  } else {
    doc.environment = Environment::make(Weather::kClear, Lighting::kDay);
  }
  if (params) read_parameters(r, *params, doc, ok);
  for (const auto& b : blocks) {
    if (b.kind == SectionKind::kActor) {
      doc.actor_lines.push_back(b.line);
      if (auto a = read_actor(r, b)) doc.actors.push_back(*a); else ok = false;
    } else if (b.kind == SectionKind::kTrigger) {
      doc.trigger_lines.push_back(b.line);
      if (auto t = read_trigger(r, b)) doc.triggers.push_back(*t); else ok = false;
    }
  }
  for (const auto& d : result.diagnostics) {
    if (d.severity == Severity::kError) ok = false;
  }
  if (ok) result.document = std::move(doc);
  return result;
}

namespace {

std::size_t line_for(const ScenarioDocument& doc, const Violation& v) {
  auto index = [&](const std::vector<std::size_t>& lines) -> std::size_t {
    const auto i = parse_u64(v.subject);
    return i && *i < lines.size() ? lines[*i] : doc.scenario_line;
  };
  if (v.code == "parameter_out_of_range") {
    if (const auto id = parameter_from_name(v.subject)) {
      const auto k = static_cast<std::size_t>(*id);
      if (doc.parameters[k].line) return doc.parameters[k].line;
    }
    return doc.scenario_line;
  }
  if (v.code.starts_with("trigger") || v.code == "invalid_trigger_value") {
    return index(doc.trigger_lines);
  }
  if (v.code == "invalid_friction" || v.code == "invalid_detection_delay") {
    return doc.environment_line ? doc.environment_line : doc.scenario_line;
  }
  if (v.code == "ego_speed_mismatch") {
    return doc.parameters[0].line ? doc.parameters[0].line : doc.scenario_line;
  }
  if (!v.subject.empty() && !doc.actor_lines.empty()) return index(doc.actor_lines);
  return doc.scenario_line;
}

}  // namespace

ParseResult expand_document(const ScenarioDocument& doc) {
  ParseResult result;
  std::vector<ParseDiagnostic>& diags = result.diagnostics;
  std::vector<ScenarioSpec> specs;

  if (!doc.actors.empty()) {
    if (doc.has_ranges()) {
      for (const auto& p : doc.parameters) {
        if (p.is_range) {
          diags.push_back({Severity::kError, p.line, "ranges_with_explicit_actors",
                           "parameter ranges need archetype-generated actors; remove the "
                           "[actor] blocks or fix the parameters"});
          break;
        }
      }
      return result;
    }
    ScenarioSpec s;
    s.id = doc.id;
    s.archetype = doc.archetype;
    s.parameters = doc.base_parameters();
    s.actors = doc.actors;
    s.environment = doc.environment;
    s.triggers = doc.triggers;
    s.duration = doc.duration;
    s.seed = doc.seed;
    specs.push_back(std::move(s));
  } else {
    if (!doc.triggers.empty()) {
      diags.push_back({Severity::kError, doc.trigger_lines.front(), "triggers_without_actors",
                       "[trigger] blocks require explicit [actor] blocks"});
      return result;
    }
    if (!doc.has_ranges()) {
      specs.push_back(compile_scenario(doc.archetype, doc.base_parameters(), doc.environment,
                                       doc.seed, doc.id, doc.duration));
    } else {
      std::vector<AxisValues> axes;
      double total = 1.0;
      for (std::size_t k = 0; k < kAllParameters.size(); ++k) {
        axes.push_back({kAllParameters[k], doc.parameters[k].values});
        total *= static_cast<double>(doc.parameters[k].values.size());
      }
      if (total > static_cast<double>(kMaxExpansion)) {
        diags.push_back({Severity::kError, doc.scenario_line, "range_too_large",
                         "parameter ranges expand to more than 1000000 scenarios"});
        return result;
      }
      const Campaign c = range_campaign(axes, doc.base_parameters(), doc.seed);
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        std::string num = std::to_string(i);
        if (num.size() < 4) num.insert(0, 4 - num.size(), '0');
        specs.push_back(compile_scenario(doc.archetype, c.points[i], doc.environment,
                                         c.seeds[i], doc.id + "-" + num, doc.duration));
      }
    }
  }

  std::set<std::pair<std::size_t, std::string>> seen;
  for (const auto& s : specs) {
    for (const auto& v : validate_spec(s)) {
      const std::size_t line = line_for(doc, v);
      if (!seen.insert({line, v.to_string()}).second) continue;
      diags.push_back({Severity::kError, line, v.code, v.to_string()});
    }
  }
  if (!result.has_errors()) result.specs = std::move(specs);
  return result;
}

ParseResult parse_scenarios(std::string_view text) {
  DocumentResult doc = parse_document(text);
  if (!doc.document) return ParseResult{{}, std::move(doc.diagnostics)};
  ParseResult out = expand_document(*doc.document);
  out.diagnostics.insert(out.diagnostics.begin(), doc.diagnostics.begin(), doc.diagnostics.end());
  return out;
}

std::string serialize(const ScenarioSpec& spec) {
  if (auto violations = validate_spec(spec); !violations.empty()) {
    throw SpecError(std::move(violations));
  }
  const auto num = [](double v) { return format_double(v); };
  std::ostringstream os;
  const Archetype& arch = archetype(spec.archetype);
  os << "[scenario]\n";
  os << "id: " << spec.id << "\n";
  os << "type: " << arch.name << "\n";
  os << "archetype: " << arch.code << "\n";
  os << "duration: " << num(spec.duration) << " s\n";
  os << "seed: " << spec.seed << "\n";

  os << "\n[parameters]\n";
  for (ParameterId id : kAllParameters) {
    os << parameter_name(id) << ": " << num(spec.parameters.get(id)) << " "
       << parameter_unit(id) << "\n";
  }

  const Environment& env = spec.environment;
  os << "\n[environment]\n";
  os << "weather: " << weather_name(env.weather) << "\n";
  os << "lighting: " << lighting_name(env.lighting) << "\n";
  os << "friction: " << num(env.friction) << "\n";
  os << "detection_delay: " << num(env.extra_detection_delay) << " s\n";

  for (const auto& a : spec.actors) {
    os << "\n[actor]\n";
    os << "kind: " << actor_kind_name(a.kind) << "\n";
    os << "position: " << num(a.position.x) << ", " << num(a.position.y) << " m\n";
    os << "heading: " << num(a.heading) << " deg\n";
    os << "speed: " << num(a.speed) << " m/s\n";
    os << "radius: " << num(a.body_radius) << " m\n";
    os << "behavior: " << behavior_name(a.behavior.type);
    switch (a.behavior.type) {
      case Behavior::kCrossOnTrigger: os << " " << num(a.behavior.crossing_speed) << " m/s"; break;
      case Behavior::kCutIn:
      case Behavior::kOncomingDrift: os << " " << num(a.behavior.lateral_target) << " m"; break;
      default: break;
    }
    os << "\n";
  }

  for (const auto& t : spec.triggers) {
    os << "\n[trigger]\n";
    os << "actor: " << t.actor << "\n";
    if (t.condition == TriggerCondition::kAtTime) {
      os << "when: at_time " << num(t.condition_value) << " s\n";
    } else {
      os << "when: ego_within " << num(t.condition_value) << " m\n";
    }
    switch (t.action) {
      case TriggerAction::kStartCrossing: os << "do: start_crossing\n"; break;
      case TriggerAction::kHardBrake: os << "do: hard_brake " << num(t.action_value) << " m/s2\n"; break;
      case TriggerAction::kBeginLaneIntrusion:
        os << "do: lane_intrusion " << num(t.action_value) << " m/s\n";
        break;
      case TriggerAction::kBeginDrift: os << "do: drift " << num(t.action_value) << " m/s\n"; break;
    }
  }
  return os.str();
}

}  // namespace scenkit
