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

#ifndef SCENKIT_DSL_HPP_
#define SCENKIT_DSL_HPP_

// Reader and writer for `.scen` scenario files: a line-oriented format of
// `[section]` headers followed by `key: value` entries, `#` comments to end
// of line. The grammar is in docs/scenario-format.md.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/model.hpp"

namespace scenkit {

enum class Severity { kError, kWarning };

struct ParseDiagnostic {
  Severity severity = Severity::kError;
  std::size_t line = 1;  // 1-based
  std::string code;
  std::string message;

  std::string to_string() const;
  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

// One `[parameters]` entry: a fixed value or an expanded range.
struct ParameterEntry {
  std::vector<double> values;  // one value when fixed
  bool is_range = false;
  std::size_t line = 0;
};

struct ScenarioDocument {
  std::string scenario_type;
  ArchetypeId archetype = ArchetypeId::kS4;
  std::string id = "scenario";
  double duration = 30.0;
  std::uint64_t seed = 0;
  Environment environment;
  std::vector<ActorSpec> actors;
  std::vector<TriggerEvent> triggers;
  std::array<ParameterEntry, 5> parameters;  // indexed like kAllParameters

  // Source lines for mapping spec violations back to the text.
  std::size_t scenario_line = 1;
  std::size_t environment_line = 0;
  std::vector<std::size_t> actor_lines;
  std::vector<std::size_t> trigger_lines;

  bool has_ranges() const;
  // First value of every parameter (the value itself when fixed).
  ScenarioParameters base_parameters() const;
};

struct DocumentResult {
  std::optional<ScenarioDocument> document;
  std::vector<ParseDiagnostic> diagnostics;
};

struct ParseResult {
  std::vector<ScenarioSpec> specs;
  std::vector<ParseDiagnostic> diagnostics;

  bool has_errors() const;
};

// Syntax and structure only; no specs are built.
DocumentResult parse_document(std::string_view text);

// Build the specs a document describes: one for fixed parameters, the
// cartesian product (first parameter most significant) for ranges. Each spec
// is validated; any error leaves `specs` empty.
ParseResult expand_document(const ScenarioDocument& doc);

// parse_document followed by expand_document.
ParseResult parse_scenarios(std::string_view text);

// Canonical text for a valid spec: fixed block and key order, shortest
// round-trip numbers. Throws SpecError for an invalid spec.
std::string serialize(const ScenarioSpec& spec);

}  // namespace scenkit

#endif  // SCENKIT_DSL_HPP_
