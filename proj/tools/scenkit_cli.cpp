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

// scenkit command line. Exit status: 0 success, 1 findings (diagnostics,
// invalid runs or logs), 2 I/O or internal error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "scenkit/coverage.hpp"
#include "scenkit/dsl.hpp"
#include "scenkit/harness.hpp"
#include "scenkit/log_io.hpp"
#include "scenkit/metrics.hpp"
#include "scenkit/numfmt.hpp"
#include "scenkit/report.hpp"
#include "scenkit/sampler.hpp"

namespace fs = std::filesystem;
using namespace scenkit;

namespace {

constexpr int kOk = 0;
constexpr int kFindings = 1;
constexpr int kFailure = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing " + path.string());
}

// "-" means stdout.
void emit(const std::string& destination, const std::string& content) {
  if (destination.empty() || destination == "-") {
    std::cout << content;
  } else {
    write_file(destination, content);
  }
}

void print_diagnostics(const std::string& file, const std::vector<ParseDiagnostic>& diags) {
  for (const auto& d : diags) std::cerr << file << ": " << d.to_string() << "\n";
}

std::vector<ArchetypeId> parse_archetypes(const std::string& list) {
  std::vector<ArchetypeId> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto id = archetype_from_code(trim(item));
    if (!id) throw CLI::ValidationError("--archetypes", "unknown archetype '" + item + "'");
    out.push_back(*id);
  }
  if (out.empty()) throw CLI::ValidationError("--archetypes", "empty list");
  return out;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& file) {
  const ParseResult r = parse_scenarios(read_file(file));
  print_diagnostics(file, r.diagnostics);
  if (r.has_errors()) return kFindings;
  std::cout << file << ": ok, " << r.specs.size() << " scenario"
            << (r.specs.size() == 1 ? "" : "s") << "\n";
  return kOk;
}

struct SampleArgs {
  std::string file;
  std::string output;
  bool grid = false;
  std::optional<std::size_t> random;
  std::optional<std::size_t> stratified;
  std::optional<std::uint64_t> seed;
  std::string archetypes;
};

int cmd_sample(const SampleArgs& a) {
  const DocumentResult parsed = parse_document(read_file(a.file));
  print_diagnostics(a.file, parsed.diagnostics);
  if (!parsed.document) return kFindings;
  const ScenarioDocument& doc = *parsed.document;
  if (!doc.actors.empty()) {
    std::cerr << a.file << ": sampling regenerates actors from the archetype; "
              << "explicit [actor] blocks are not supported here\n";
    return kFindings;
  }

  const std::uint64_t seed = a.seed.value_or(doc.seed);
  const ParameterDomain domain = default_domain();
  Campaign campaign;
  if (a.grid) {
    campaign = grid_campaign(domain, seed);
  } else if (a.random) {
    campaign = random_campaign(domain, *a.random, seed);
  } else if (a.stratified) {
    // The axes the report groups by; 56 strata, so small campaigns fill every one.
    const std::vector<ParameterId> strata = {ParameterId::kEgoSpeed, ParameterId::kApproachAngle};
    campaign = stratified_campaign(domain, *a.stratified, seed, strata);
  } else {
    std::vector<AxisValues> axes;
    for (std::size_t k = 0; k < kAllParameters.size(); ++k) {
      axes.push_back({kAllParameters[k], doc.parameters[k].values});
    }
    campaign = range_campaign(axes, doc.base_parameters(), seed);
  }

  const std::vector<ArchetypeId> archetypes =
      a.archetypes.empty() ? std::vector<ArchetypeId>{doc.archetype}
                           : parse_archetypes(a.archetypes);
  const Manifest m = make_manifest(campaign, archetypes, doc.environment, doc.duration, doc.id);

  // Every entry must compile to a valid spec before the manifest is written.
  std::size_t bad = 0;
  for (const auto& spec : m.specs()) {
    for (const auto& v : validate_spec(spec)) {
      if (bad++ < 10) std::cerr << spec.id << ": " << v.to_string() << "\n";
    }
  }
  if (bad > 0) return kFindings;

  emit(a.output, write_manifest(m));
  std::cerr << "sampled " << m.entries.size() << " scenarios (" << m.strategy << ")\n";
  return kOk;
}

int cmd_run(const std::string& manifest_path, std::size_t jobs, const std::string& out_dir,
            const std::string& report_path) {
  const Manifest m = read_manifest(read_file(manifest_path));
  const std::vector<ScenarioSpec> specs = m.specs();
  fs::create_directories(out_dir);

  std::mutex err_mu;
  CampaignOptions options;
  options.jobs = jobs;
  options.retain_logs = false;
  options.on_log = [&](std::size_t, const SimulationLog& log) {
    const fs::path path = fs::path(out_dir) / log_file_name(log);
    try {
      write_file(path, write_log_csv(log));
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(err_mu);
      std::cerr << e.what() << "\n";
      throw;
    }
  };
  const CampaignResult result = run_campaign(specs, options);
  const CampaignReport& r = result.report;

  if (!report_path.empty()) write_file(report_path, report_to_json(r));
  std::cerr << "ran " << r.scenario_count << " scenarios with " << jobs << " job"
            << (jobs == 1 ? "" : "s") << " in " << r.timing.wall_seconds << " s; "
            << r.collision_count << " collisions, " << r.invalid_count << " invalid\n";
  if (r.invalid_reasons.count("sink_failed")) return kFailure;
  return r.invalid_count > 0 ? kFindings : kOk;
}

int cmd_analyze(const std::string& log_dir, const std::string& output,
                const std::string& metrics_path) {
  const std::vector<IngestedLog> logs = ingest_logs(log_dir);
  std::vector<RunRecord> records;
  records.reserve(logs.size());
  std::string metrics_csv = metrics_csv_header();
  for (std::size_t i = 0; i < logs.size(); ++i) {
    RunRecord rec = evaluate_log(i, logs[i].log);
    if (!rec.metrics) {
      std::cerr << logs[i].path.string() << ": " << rec.validity.to_string() << "\n";
    } else {
      metrics_csv += metrics_csv_row(logs[i].log, *rec.metrics);
    }
    records.push_back(std::move(rec));
  }
  const CampaignReport report = aggregate(std::move(records));
  emit(output, report_to_json(report));
  if (!metrics_path.empty()) write_file(metrics_path, metrics_csv);
  std::cerr << "analyzed " << report.scenario_count << " logs; " << report.invalid_count
            << " invalid\n";
  return report.invalid_count > 0 ? kFindings : kOk;
}

int cmd_coverage(const std::string& manifest_path, const std::string& output) {
  const Manifest m = read_manifest(read_file(manifest_path));
  const ParameterDomain domain = default_domain();
  const Campaign c = m.campaign();
  CoverageReport cov;
  try {
    cov = compute_coverage(c, domain, critical_cells(domain));
  } catch (const CoverageError& e) {
    std::cerr << manifest_path << ": " << e.what() << "\n";
    return kFindings;
  }
  emit(output, coverage_to_json(cov));
  return kOk;
}

int cmd_report(const std::string& report_path, const std::string& format,
               const std::string& output) {
  const CampaignReport r = report_from_json(read_file(report_path));
  if (format == "text") {
    emit(output, report_text(r));
    return kOk;
  }
  const fs::path dir = output.empty() || output == "-" ? fs::path(".") : fs::path(output);
  for (const auto& plot : report_svgs(r)) {
    write_file(dir / plot.file_name, plot.content);
    std::cerr << "wrote " << (dir / plot.file_name).string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenkit: scenario-based safety testing toolkit"};
  app.require_subcommand(1);

  std::string file;
  auto* validate = app.add_subcommand("validate", "Check a .scen file");
  validate->add_option("file", file, "Scenario file")->required();

  SampleArgs sample_args;
  auto* sample = app.add_subcommand("sample", "Expand a .scen file into a campaign manifest");
  auto* grid_flag = sample->add_flag("--grid", sample_args.grid, "One point per grid cell");
  auto* random_opt =
      sample->add_option("--random", sample_args.random, "N uniform random points");
  auto* strat_opt = sample->add_option("--stratified", sample_args.stratified,
                                       "N points, stratified over ego_speed x approach_angle bins");
  grid_flag->excludes(random_opt)->excludes(strat_opt);
  random_opt->excludes(strat_opt);
  sample->add_option("--seed", sample_args.seed, "Master seed (default: the file's seed)");
  sample->add_option("--archetypes", sample_args.archetypes,
                     "Comma-separated archetype codes, assigned round-robin");
  sample->add_option("file", sample_args.file, "Scenario file")->required();
  sample->add_option("-o,--output", sample_args.output, "Manifest path (default stdout)");

  std::string manifest;
  std::size_t jobs = default_jobs(1);
  std::string out_dir;
  std::string run_report;
  auto* run = app.add_subcommand("run", "Simulate every manifest entry, one log CSV each");
  run->add_option("--manifest", manifest, "Campaign manifest")->required();
  run->add_option("--jobs", jobs, "Parallel workers (default $SCENKIT_JOBS or 1)")
      ->check(CLI::PositiveNumber);
  run->add_option("-o,--output", out_dir, "Log directory")->required();
  run->add_option("--report", run_report, "Also write the campaign report JSON here");

  std::string log_dir;
  std::string analyze_out;
  std::string metrics_out;
  auto* analyze = app.add_subcommand("analyze", "Validate logs and aggregate their metrics");
  analyze->add_option("logs", log_dir, "Log directory")->required();
  analyze->add_option("-o,--output", analyze_out, "Report JSON path (default stdout)");
  analyze->add_option("--metrics", metrics_out, "Per-run metrics CSV path");

  std::string coverage_out;
  auto* coverage = app.add_subcommand("coverage", "Coverage indices of a manifest");
  coverage->add_option("--manifest", manifest, "Campaign manifest")->required();
  coverage->add_option("-o,--output", coverage_out, "Coverage JSON path (default stdout)");

  std::string report_in;
  std::string format = "text";
  std::string report_out;
  auto* report = app.add_subcommand("report", "Render a report JSON as text or SVG plots");
  report->add_option("report", report_in, "Report JSON")->required();
  report->add_option("--format", format, "text or svg")
      ->check(CLI::IsMember({"text", "svg"}));
  report->add_option("-o,--output", report_out,
                     "Text file (default stdout) or SVG directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*sample) return cmd_sample(sample_args);
    if (*run) return cmd_run(manifest, jobs, out_dir, run_report);
    if (*analyze) return cmd_analyze(log_dir, analyze_out, metrics_out);
    if (*coverage) return cmd_coverage(manifest, coverage_out);
    if (*report) return cmd_report(report_in, format, report_out);
  } catch (const ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFindings;
  } catch (const ReportFormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFindings;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
