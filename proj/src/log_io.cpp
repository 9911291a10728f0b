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

#include "scenkit/log_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "scenkit/numfmt.hpp"

namespace scenkit {

namespace {

constexpr std::string_view kMagic = "# scenkit-log v1";
constexpr double kStepTolerance = 1e-6;

constexpr std::size_t kEgoColumns = 8;
constexpr std::size_t kActorColumns = 5;

std::string parameters_field(const ScenarioParameters& p) {
  std::string out;
  for (ParameterId id : kAllParameters) {
    if (!out.empty()) out += ';';
    out += std::string(parameter_name(id)) + '=' + format_double(p.get(id));
  }
  return out;
}

std::optional<ScenarioParameters> parse_parameters_field(std::string_view text) {
  ScenarioParameters p;
  std::size_t seen = 0;
  for (auto item : split(text, ';')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    const auto id = parameter_from_name(trim(item.substr(0, eq)));
    const auto v = parse_double(item.substr(eq + 1));
    if (!id || !v) return std::nullopt;
    p.set(*id, *v);
    ++seen;
  }
  if (seen != kAllParameters.size()) return std::nullopt;
  return p;
}

std::optional<std::vector<LogActor>> parse_actors_field(std::string_view text) {
  std::vector<LogActor> out;
  std::istringstream in{std::string(text)};
  std::string item;
  while (in >> item) {
    const auto parts = split(item, ':');
    if (parts.size() != 3) return std::nullopt;
    const auto id = parse_u64(parts[0]);
    const auto kind = actor_kind_from_name(parts[1]);
    const auto radius = parse_double(parts[2]);
    if (!id || !kind || !radius) return std::nullopt;
    out.push_back({static_cast<std::size_t>(*id), *kind, *radius});
  }
  return out;
}

std::vector<std::string> expected_columns(const std::vector<LogActor>& actors) {
  std::vector<std::string> cols = {"t",     "ego_x", "ego_y",     "ego_heading",
                                   "ego_v", "ego_a", "brake_cmd", "steer_cmd"};
  for (std::size_t k = 0; k < actors.size(); ++k) {
    const std::string p = "actor" + std::to_string(k) + "_";
    for (const char* f : {"id", "x", "y", "v", "detected"}) cols.push_back(p + f);
  }
  for (const char* f : {"ttc", "gap", "collision_flag"}) cols.emplace_back(f);
  return cols;
}

// Headings of non-ego actors from their displacements; an actor that has not
// moved yet takes the direction of its first move.
void rebuild_headings(SimulationLog& log) {
  for (std::size_t i = 0; i < log.actors.size(); ++i) {
    double heading = 0.0;
    for (std::size_t k = 1; k < log.frames.size(); ++k) {
      const Vec2 d = log.frames[k].actors[i].position - log.frames[k - 1].actors[i].position;
      if (d.x != 0.0 || d.y != 0.0) {
        heading = rad_to_deg(std::atan2(d.y, d.x));
        break;
      }
    }
    for (std::size_t k = 0; k < log.frames.size(); ++k) {
      if (k > 0) {
        const Vec2 d = log.frames[k].actors[i].position - log.frames[k - 1].actors[i].position;
        if (d.x != 0.0 || d.y != 0.0) heading = rad_to_deg(std::atan2(d.y, d.x));
      }
      log.frames[k].actors[i].heading = heading;
    }
  }
}

class RowError {
 public:
  explicit RowError(std::string_view reason) : reason(reason) {}
  std::string_view reason;
};

double cell_number(std::string_view cell, bool allow_inf) {
  const auto v = parse_double(cell);
  if (!v) throw RowError(log_reason::kBadNumber);
  if (std::isnan(*v) || (std::isinf(*v) && !(allow_inf && *v > 0))) {
    throw RowError(log_reason::kNonFinite);
  }
  return *v;
}

bool cell_flag(std::string_view cell) {
  cell = trim(cell);
  if (cell == "0") return false;
  if (cell == "1") return true;
  if (const auto v = parse_double(cell); v && !std::isfinite(*v)) {
    throw RowError(log_reason::kNonFinite);
  }
  throw RowError(log_reason::kBadNumber);
}

}  // namespace

std::string log_csv_header(const SimulationLog& log) {
  std::string out;
  for (const auto& c : expected_columns(log.actors)) {
    if (!out.empty()) out += ',';
    out += c;
  }
  return out;
}

std::string log_file_name(const SimulationLog& log) { return log.spec_id + ".csv"; }

std::string write_log_csv(const SimulationLog& log) {
  std::string out;
  out.reserve(128 * (log.frames.size() + 12));
  out += kMagic;
  out += "\n# spec_id: " + log.spec_id;
  out += "\n# seed: " + std::to_string(log.seed);
  out += "\n# archetype: " + std::string(archetype_code(log.archetype));
  out += "\n# parameters: " + parameters_field(log.parameters);
  out += "\n# duration: " + format_double(log.duration);
  out += "\n# ego_radius: " + format_double(log.ego_radius);
  out += "\n# actors:";
  for (const auto& a : log.actors) {
    out += ' ' + std::to_string(a.id) + ':' + std::string(actor_kind_name(a.kind)) + ':' +
           format_double(a.radius);
  }
  out += "\n# trigger_time: " + (log.trigger_time ? format_double(*log.trigger_time) : "none");
  out += "\n# termination: " + std::string(termination_name(log.termination));
  out += "\n# validity: " + log.validity.to_string();
  out += '\n';
  out += log_csv_header(log);
  out += '\n';

  auto put = [&out](double v) {
    out += format_double(v);
    out += ',';
  };
  for (const Frame& f : log.frames) {
    put(f.t);
    put(f.ego.position.x);
    put(f.ego.position.y);
    put(f.ego.heading);
    put(f.ego.speed);
    put(f.ego.acceleration);
    put(f.brake_cmd);
    put(f.steer_cmd);
    for (std::size_t i = 0; i < log.actors.size(); ++i) {
      out += std::to_string(log.actors[i].id);
      out += ',';
      put(f.actors[i].position.x);
      put(f.actors[i].position.y);
      put(f.actors[i].speed);
      out += f.detected[i] ? "1," : "0,";
    }
    put(f.ttc);
    put(f.gap);
    out += f.collision ? "1\n" : "0\n";
  }
  return out;
}

SimulationLog read_log_csv(std::string_view text) {
  SimulationLog log;
  auto mark = [&log](std::string_view reason) {
    if (reason == log_reason::kTruncated) {
      log.validity = Validity::truncated(std::string(reason));
    } else {
      log.validity = Validity::invalid(std::string(reason));
    }
    return log;
  };
  if (trim(text).empty()) return mark(log_reason::kEmpty);

  const bool ends_cleanly = text.back() == '\n';
  std::vector<std::string_view> lines = split(text, '\n');
  if (ends_cleanly) lines.pop_back();
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }

  // Preamble.
  if (lines.empty() || trim(lines[0]) != kMagic) return mark(log_reason::kMissingMetadata);
  std::map<std::string, std::string, std::less<>> meta;
  std::size_t n = 1;
  for (; n < lines.size() && lines[n].starts_with('#'); ++n) {
    const auto body = lines[n].substr(1);
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) return mark(log_reason::kMissingMetadata);
    meta.emplace(std::string(trim(body.substr(0, colon))), std::string(trim(body.substr(colon + 1))));
  }
  auto field = [&meta](std::string_view key) -> const std::string* {
    const auto it = meta.find(key);
    return it == meta.end() ? nullptr : &it->second;
  };
  {
    const std::string* id = field("spec_id");
    const std::string* seed = field("seed");
    const std::string* arch = field("archetype");
    const std::string* params = field("parameters");
    const std::string* duration = field("duration");
    const std::string* radius = field("ego_radius");
    const std::string* actors = field("actors");
    const std::string* trigger = field("trigger_time");
    const std::string* term = field("termination");
    if (!id || !seed || !arch || !params || !duration || !radius || !actors || !trigger ||
        !term) {
      return mark(log_reason::kMissingMetadata);
    }
    const auto seed_v = parse_u64(*seed);
    const auto arch_v = archetype_from_code(*arch);
    const auto params_v = parse_parameters_field(*params);
    const auto duration_v = parse_double(*duration);
    const auto radius_v = parse_double(*radius);
    const auto actors_v = parse_actors_field(*actors);
    const auto term_v = termination_from_name(*term);
    std::optional<double> trigger_v;
    if (*trigger != "none") {
      trigger_v = parse_double(*trigger);
      if (!trigger_v) return mark(log_reason::kMissingMetadata);
    }
    if (!seed_v || !arch_v || !params_v || !duration_v || !radius_v || !actors_v || !term_v) {
      return mark(log_reason::kMissingMetadata);
    }
    log.spec_id = *id;
    log.seed = *seed_v;
    log.archetype = *arch_v;
    log.parameters = *params_v;
    log.duration = *duration_v;
    log.ego_radius = *radius_v;
    log.actors = std::move(*actors_v);
    log.trigger_time = trigger_v;
    log.termination = *term_v;
  }
  std::optional<Validity> recorded;
  if (const std::string* v = field("validity")) {
    recorded = Validity::parse(*v);
    if (!recorded) return mark(log_reason::kMissingMetadata);
  }

  // Column header.
  if (n >= lines.size() || !lines[n].starts_with("t,")) {
    return mark(n >= lines.size() && !ends_cleanly ? log_reason::kTruncated
                                                    : log_reason::kMissingHeader);
  }
  const auto expected = expected_columns(log.actors);
  {
    const auto cols = split(lines[n], ',');
    bool same = cols.size() == expected.size();
    for (std::size_t i = 0; same && i < cols.size(); ++i) same = trim(cols[i]) == expected[i];
    if (!same) return mark(n + 1 == lines.size() && !ends_cleanly ? log_reason::kTruncated
                                                                  : log_reason::kMissingColumn);
  }
  ++n;

  // Rows.
  const std::size_t actor_count = log.actors.size();
  bool irregular = false;
  for (std::size_t r = n; r < lines.size(); ++r) {
    const bool last = r + 1 == lines.size();
    if (last && !ends_cleanly) return mark(log_reason::kTruncated);
    const auto cells = split(lines[r], ',');
    if (cells.size() != expected.size()) {
      return mark(last ? log_reason::kTruncated : log_reason::kMissingColumn);
    }
    Frame f;
    try {
      f.t = cell_number(cells[0], false);
      f.ego.position = {cell_number(cells[1], false), cell_number(cells[2], false)};
      f.ego.heading = cell_number(cells[3], false);
      f.ego.speed = cell_number(cells[4], false);
      f.ego.acceleration = cell_number(cells[5], false);
      f.brake_cmd = cell_number(cells[6], false);
      f.steer_cmd = cell_number(cells[7], false);
      f.actors.resize(actor_count);
      f.detected.resize(actor_count);
      for (std::size_t i = 0; i < actor_count; ++i) {
        const std::size_t c = kEgoColumns + i * kActorColumns;
        const auto id = parse_u64(cells[c]);
        if (!id || *id != log.actors[i].id) throw RowError(log_reason::kBadNumber);
        f.actors[i].position = {cell_number(cells[c + 1], false), cell_number(cells[c + 2], false)};
        f.actors[i].speed = cell_number(cells[c + 3], false);
        f.detected[i] = cell_flag(cells[c + 4]) ? 1 : 0;
      }
      const std::size_t c = kEgoColumns + actor_count * kActorColumns;
      f.ttc = cell_number(cells[c], true);
      f.gap = cell_number(cells[c + 1], true);
      f.collision = cell_flag(cells[c + 2]);
    } catch (const RowError& e) {
      return mark(e.reason);
    }
    if (log.frames.empty()) {
      irregular = irregular || std::abs(f.t) > kStepTolerance;
    } else {
      const double step = f.t - log.frames.back().t;
      if (!(step > 0.0)) return mark(log_reason::kNonMonotoneTime);
      irregular = irregular || std::abs(step - kControlPeriod) > kStepTolerance;
    }
    log.frames.push_back(std::move(f));
  }
  // Reported only once time is known never to run backwards; two swapped
  // rows also look like an odd step.
  if (irregular) return mark(log_reason::kIrregularTimestep);

  if (log.frames.empty()) return mark(log_reason::kTruncated);
  if (log.termination == Termination::kDurationElapsed) {
    const double end = std::floor(log.duration / kControlPeriod + 1e-9) * kControlPeriod;
    if (log.frames.back().t < end - kStepTolerance) return mark(log_reason::kTruncated);
  }
  if (log.termination == Termination::kCollision && !log.frames.back().collision) {
    return mark(log_reason::kTruncated);
  }
  rebuild_headings(log);
  if (recorded) log.validity = *recorded;
  return log;
}

std::vector<IngestedLog> ingest_logs(const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.path().extension() == ".csv" && !entry.is_directory()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<IngestedLog> out;
  out.reserve(files.size());
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    if (in) buf << in.rdbuf();
    if (!in) {
      SimulationLog log;
      log.spec_id = path.stem().string();
      log.validity = Validity::invalid(std::string(log_reason::kUnreadable));
      out.push_back({path, std::move(log)});
      continue;
    }
    SimulationLog log = read_log_csv(buf.str());
    if (log.spec_id.empty()) log.spec_id = path.stem().string();
    out.push_back({path, std::move(log)});
  }
  return out;
}

}  // namespace scenkit
