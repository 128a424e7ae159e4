// oasgrade command-line front end.
//
//   grade <file> [--json]        score one OAS attempt on the nine parameters
//   clean [<file>]               clean a raw model response (stdin by default)
//   ingest <dir> --out <index>   chunk + embed a reference corpus into an index
//   experiment --config <file>   run the two-pipeline experiment
//   report <archive> --format f  re-render an experiment archive
//
// Exit codes: 0 success, 1 usage error, 2 runtime error. A poor score is
// data, not a failure: grade always exits 0 when it could grade.

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "oasgrade/experiment.hpp"
#include "oasgrade/llm_http.hpp"
#include "oasgrade/rag.hpp"
#include "oasgrade/rubric.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_stdin() {
  std::ostringstream content;
  content << std::cin.rdbuf();
  return content.str();
}

void print_human_score(const oasgrade::GradeResult& result) {
  using namespace oasgrade;
  std::cout << "parameter            score\n";
  for (const auto& p : result.score.parameter_scores) {
    const auto& meta = kRubric[static_cast<size_t>(p.parameter_id - 1)];
    std::string label = std::to_string(p.parameter_id) + " " + meta.name;
    label.resize(20, ' ');
    std::cout << label << " " << format_cents(p.cents) << "\n";
  }
  std::cout << "total                " << format_cents(result.score.total_cents) << "\n";

  std::string row;
  for (const auto& p : result.score.parameter_scores) {
    row += format_cents(p.cents) + " ";
  }
  row += "| Σ " + format_cents(result.score.total_cents);
  std::cout << row << "\n";

  for (const auto& p : result.score.parameter_scores) {
    for (const auto& e : p.evidence) {
      std::cerr << "P" << p.parameter_id << ": " << e << "\n";
    }
  }
}

// Relative paths inside a config file resolve against the config's directory.
std::string resolve_against(const fs::path& base, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (base / p).lexically_normal().string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grading harness for generated OpenAPI Specifications"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // grade
  auto* grade_cmd = app.add_subcommand("grade", "Score an OAS attempt");
  std::string grade_file;
  bool grade_json = false;
  grade_cmd->add_option("file", grade_file, "attempt file (raw response or JSON)")
      ->required();
  grade_cmd->add_flag("--json", grade_json, "emit the JSON score object only");

  // clean
  auto* clean_cmd = app.add_subcommand("clean", "Clean a raw model response");
  std::string clean_file;
  clean_cmd->add_option("file", clean_file, "response file (stdin when omitted)");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Chunk and embed a reference corpus");
  std::string ingest_dir, ingest_out;
  size_t ingest_chunk_size = 1500, ingest_overlap = 200, ingest_dimension = 32;
  bool ingest_live = false;
  ingest_cmd->add_option("dir", ingest_dir, "directory of reference documents")->required();
  ingest_cmd->add_option("--out", ingest_out, "index file to write")->required();
  ingest_cmd->add_option("--chunk-size", ingest_chunk_size, "chunk size in characters");
  ingest_cmd->add_option("--overlap", ingest_overlap, "chunk overlap in characters");
  ingest_cmd->add_option("--dimension", ingest_dimension, "stub embedding dimension");
  ingest_cmd->add_flag("--live", ingest_live, "embed via the configured HTTP provider");

  // experiment
  auto* experiment_cmd = app.add_subcommand("experiment", "Run the two-pipeline experiment");
  std::string experiment_config;
  std::string experiment_archive;
  bool experiment_stub = false;
  experiment_cmd->add_option("--config", experiment_config, "experiment config JSON")
      ->required();
  experiment_cmd->add_flag("--stub", experiment_stub, "force stub mode");
  experiment_cmd->add_option("--archive", experiment_archive, "override the archive directory");

  // report
  auto* report_cmd = app.add_subcommand("report", "Re-render an experiment archive");
  std::string report_archive, report_format = "markdown";
  report_cmd->add_option("archive", report_archive, "archive directory")->required();
  report_cmd->add_option("--format", report_format, "markdown, csv or json")
      ->check(CLI::IsMember({"markdown", "csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  using namespace oasgrade;
  try {
    if (*grade_cmd) {
      GradeResult result = grade_detailed(detail::read_text_file(grade_file));
      if (grade_json) {
        std::cout << score_to_json(result.score);
      } else {
        print_human_score(result);
      }
      return 0;
    }

    if (*clean_cmd) {
      std::string raw = clean_file.empty() ? read_stdin()
                                           : detail::read_text_file(clean_file);
      try {
        std::cout << clean_response(raw).text << "\n";
      } catch (const NoJsonPayload& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      return 0;
    }

    if (*ingest_cmd) {
      auto corpus = detail::load_reference_corpus(ingest_dir);
      auto chunks = ingest(corpus, {ingest_chunk_size, ingest_overlap});
      VectorIndex index;
      if (ingest_live) {
        HttpProvider provider(HttpProviderConfig::from_env());
        index = build_index(std::move(chunks), provider);
      } else {
        StubProvider provider = StubProvider::embedder_only(ingest_dimension);
        index = build_index(std::move(chunks), provider);
      }
      detail::write_text_file(ingest_out, serialize_json(index_to_json(index), 2) + "\n");
      std::cerr << "indexed " << index.size() << " chunks (dimension "
                << index.dimension << ") from " << corpus.size() << " documents\n";
      return 0;
    }

    if (*experiment_cmd) {
      fs::path config_path(experiment_config);
      ExperimentConfig config = load_experiment_config(config_path);
      fs::path base = config_path.has_parent_path() ? config_path.parent_path()
                                                    : fs::path(".");
      config.reference_dir = resolve_against(base, config.reference_dir);
      config.stub.fixtures_dir = resolve_against(base, config.stub.fixtures_dir);
      config.archive_dir = resolve_against(base, config.archive_dir);
      if (experiment_stub) config.stub_mode = true;
      if (!experiment_archive.empty()) config.archive_dir = experiment_archive;
      if (config.archive_dir.empty()) {
        throw ConfigError("no archive directory (config archive_dir or --archive)");
      }

      ExperimentReport report;
      if (config.stub_mode) {
        report = run_experiment(config);
      } else {
        HttpProvider provider(HttpProviderConfig::from_env());
        report = run_experiment(config, provider);
      }
      write_archive(report, config.archive_dir);
      std::cout << "archive: " << config.archive_dir << "\n";
      std::cout << "direct mean " << detail::format_mean_cents([&] {
        int64_t sum = 0;
        for (const auto& a : report.attempts) {
          if (a.score.pipeline_id == PipelineId::direct) sum += a.score.total_cents;
        }
        return sum;
      }(), report.trials_per_pipeline)
                << ", rag mean " << detail::format_mean_cents([&] {
                     int64_t sum = 0;
                     for (const auto& a : report.attempts) {
                       if (a.score.pipeline_id == PipelineId::rag) sum += a.score.total_cents;
                     }
                     return sum;
                   }(), report.trials_per_pipeline)
                << "\n";
      return 0;
    }

    if (*report_cmd) {
      ExperimentReport report = load_archive_report(report_archive);
      ReportFormat format = report_format == "csv"
                                ? ReportFormat::csv
                                : report_format == "json" ? ReportFormat::json
                                                          : ReportFormat::markdown;
      std::cout << render_report(report, format);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
