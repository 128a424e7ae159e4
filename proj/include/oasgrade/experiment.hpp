// Two-pipeline experiment: alternate direct and retrieval-augmented
// generation for N trials each, grade every attempt, compute per-pipeline
// statistics, and render the score table.
//
// Statistics use the population form (divide by N) computed from integer
// cents, so a replayed score table reproduces its mean and variance
// bit-exactly. Provider failures do not abort a run: the attempt is
// recorded as fatal (all parameters 0.00, render -0.10) and the schedule
// keeps its length.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "oasgrade/llm_client.hpp"
#include "oasgrade/rag.hpp"
#include "oasgrade/rubric.hpp"

namespace oasgrade {

// ---------------- configuration ----------------

struct PipelineConfig {
  PipelineId pipeline_id = PipelineId::direct;
  std::string base_prompt;
  std::vector<std::string> reinforcement;  // empty for the direct pipeline
  std::string model_name;
  double temperature = 1.0;
  int max_output_tokens = 4096;
  size_t retrieval_k = 4;  // rag only
};

struct StubConfig {
  std::string fixtures_dir;
  size_t embedding_dimension = 32;
  std::vector<std::string> schedule_direct;  // fixture key per trial
  std::vector<std::string> schedule_rag;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  int trials_per_pipeline = 10;
  bool stub_mode = false;
  PipelineConfig direct;
  PipelineConfig rag;
  StubConfig stub;
  std::string reference_dir;  // corpus for the rag index
  ChunkingConfig chunking;
  std::string archive_dir;
  JsonValue snapshot;  // the config file contents, echoed into reports
};

// ---------------- statistics ----------------

struct StatsSummary {
  double mean = 0.0;
  double variance = 0.0;  // population variance (divide by N)
};

// Exact fixed-point statistics: both results are single correctly-rounded
// divisions of integers, so they are identical on every platform.
inline StatsSummary compute_stats(const std::vector<int>& total_cents) {
  if (total_cents.empty()) {
    throw std::invalid_argument("compute_stats requires at least one value");
  }
  const int64_t n = static_cast<int64_t>(total_cents.size());
  int64_t sum = 0;
  for (int c : total_cents) sum += c;
  int64_t numerator = 0;
  for (int c : total_cents) {
    const int64_t d = n * c - sum;
    numerator += d * d;
  }
  StatsSummary out;
  out.mean = static_cast<double>(sum) / (100.0 * static_cast<double>(n));
  out.variance = static_cast<double>(numerator) /
                 (static_cast<double>(n) * static_cast<double>(n) *
                  static_cast<double>(n) * 10000.0);
  return out;
}

struct ExperimentStats {
  double mean_total = 0.0;
  double variance_total = 0.0;
  std::vector<double> per_parameter_means;  // nine entries
};

// ---------------- report ----------------

struct AttemptRecord {
  AttemptScore score;
  bool completion_failed = false;
  bool no_payload = false;
  std::vector<CleanStep> applied_steps;
  std::string raw_text;      // archived per attempt, not part of report.json
  std::string cleaned_text;
};

struct ExperimentReport {
  int trials_per_pipeline = 0;
  JsonValue config_snapshot;
  std::vector<AttemptRecord> attempts;  // execution order: direct 1, rag 1, direct 2, ...
  ExperimentStats direct_stats;
  ExperimentStats rag_stats;
};

namespace detail {

inline void check_conserved(const AttemptScore& score) {
  if (score.parameter_scores.size() != 9) {
    throw std::logic_error("attempt does not carry exactly nine parameter scores");
  }
  int sum = 0;
  for (size_t i = 0; i < 9; ++i) {
    if (score.parameter_scores[i].parameter_id != static_cast<int>(i) + 1) {
      throw std::logic_error("parameter scores out of order");
    }
    sum += score.parameter_scores[i].cents;
  }
  if (sum != score.total_cents) {
    throw std::logic_error("attempt total does not equal the sum of its scores");
  }
}

inline std::vector<const AttemptRecord*> attempts_of(const ExperimentReport& report,
                                                     PipelineId id) {
  std::vector<const AttemptRecord*> out;
  for (const auto& a : report.attempts) {
    if (a.score.pipeline_id == id) out.push_back(&a);
  }
  return out;
}

inline ExperimentStats stats_for(const std::vector<const AttemptRecord*>& attempts) {
  ExperimentStats stats;
  std::vector<int> totals;
  for (const auto* a : attempts) totals.push_back(a->score.total_cents);
  StatsSummary s = compute_stats(totals);
  stats.mean_total = s.mean;
  stats.variance_total = s.variance;
  for (size_t p = 0; p < 9; ++p) {
    std::vector<int> cents;
    for (const auto* a : attempts) cents.push_back(a->score.parameter_scores[p].cents);
    stats.per_parameter_means.push_back(compute_stats(cents).mean);
  }
  return stats;
}

// Mean of cents rendered the way the score table prints it: milli precision
// with trailing zeros trimmed, never fewer than two decimals ("0.578",
// "0.71", "1.00").
inline std::string format_mean_cents(int64_t sum_cents, int64_t n) {
  const int64_t numerator = 10 * sum_cents;  // mean in millis = numerator / n
  int64_t scaled = numerator >= 0 ? (numerator + n / 2) / n : -((-numerator + n / 2) / n);
  std::string sign = scaled < 0 ? "-" : "";
  int64_t a = scaled < 0 ? -scaled : scaled;
  std::string frac = std::to_string(a % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  while (frac.size() > 2 && frac.back() == '0') frac.pop_back();
  return sign + std::to_string(a / 1000) + "." + frac;
}

inline std::string format_mean(const std::vector<const AttemptRecord*>& attempts) {
  int64_t sum = 0;
  for (const auto* a : attempts) sum += a->score.total_cents;
  return format_mean_cents(sum, static_cast<int64_t>(attempts.size()));
}

inline std::string format_variance(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace detail

// ---------------- rendering ----------------

enum class ReportFormat { markdown, csv, json };

inline JsonValue report_to_json(const ExperimentReport& report) {
  JsonObject root;
  root.push_back({"trials_per_pipeline",
                  JsonValue(static_cast<double>(report.trials_per_pipeline))});
  root.push_back({"config", report.config_snapshot});
  JsonArray attempts;
  for (const auto& a : report.attempts) {
    detail::check_conserved(a.score);
    JsonObject attempt;
    attempt.push_back({"pipeline", JsonValue(std::string(to_string(a.score.pipeline_id)))});
    attempt.push_back({"attempt", JsonValue(static_cast<double>(a.score.attempt_index))});
    attempt.push_back({"completion_failed", JsonValue(a.completion_failed)});
    attempt.push_back({"no_payload", JsonValue(a.no_payload)});
    JsonArray steps;
    for (CleanStep s : a.applied_steps) steps.push_back(JsonValue(std::string(to_string(s))));
    attempt.push_back({"applied_steps", JsonValue(std::move(steps))});
    JsonArray parameters;
    for (const auto& p : a.score.parameter_scores) {
      JsonObject param;
      param.push_back({"id", JsonValue(static_cast<double>(p.parameter_id))});
      param.push_back(
          {"name", JsonValue(std::string(kRubric[static_cast<size_t>(p.parameter_id - 1)].name))});
      param.push_back({"cents", JsonValue(static_cast<double>(p.cents))});
      JsonArray evidence;
      for (const auto& e : p.evidence) evidence.push_back(JsonValue(e));
      param.push_back({"evidence", JsonValue(std::move(evidence))});
      parameters.push_back(JsonValue(std::move(param)));
    }
    attempt.push_back({"parameters", JsonValue(std::move(parameters))});
    attempt.push_back({"total_cents", JsonValue(static_cast<double>(a.score.total_cents))});
    attempts.push_back(JsonValue(std::move(attempt)));
  }
  root.push_back({"attempts", JsonValue(std::move(attempts))});

  auto stats_json = [](const ExperimentStats& stats) {
    JsonObject out;
    out.push_back({"mean", JsonValue(stats.mean_total)});
    out.push_back({"variance", JsonValue(stats.variance_total)});
    JsonArray means;
    for (double m : stats.per_parameter_means) means.push_back(JsonValue(m));
    out.push_back({"per_parameter_means", JsonValue(std::move(means))});
    return JsonValue(std::move(out));
  };
  JsonObject stats;
  stats.push_back({"direct", stats_json(report.direct_stats)});
  stats.push_back({"rag", stats_json(report.rag_stats)});
  root.push_back({"stats", JsonValue(std::move(stats))});
  return JsonValue(std::move(root));
}

inline ExperimentReport report_from_json(const JsonValue& root) {
  if (!root.is_object()) throw ConfigError("report file: not a JSON object");
  ExperimentReport report;
  if (const JsonValue* v = root.get("trials_per_pipeline"); v && v->is_number()) {
    report.trials_per_pipeline = static_cast<int>(v->as_number());
  }
  if (const JsonValue* v = root.get("config")) report.config_snapshot = *v;
  const JsonValue* attempts = root.get("attempts");
  if (!attempts || !attempts->is_array()) {
    throw ConfigError("report file: missing attempts array");
  }
  for (const auto& a : attempts->as_array()) {
    AttemptRecord record;
    if (const JsonValue* v = a.get("pipeline"); v && v->is_string()) {
      record.score.pipeline_id =
          v->as_string() == "rag" ? PipelineId::rag : PipelineId::direct;
    }
    if (const JsonValue* v = a.get("attempt"); v && v->is_number()) {
      record.score.attempt_index = static_cast<int>(v->as_number());
    }
    if (const JsonValue* v = a.get("completion_failed"); v && v->is_bool()) {
      record.completion_failed = v->as_bool();
    }
    if (const JsonValue* v = a.get("no_payload"); v && v->is_bool()) {
      record.no_payload = v->as_bool();
    }
    if (const JsonValue* params = a.get("parameters"); params && params->is_array()) {
      for (const auto& p : params->as_array()) {
        ParameterScore score;
        if (const JsonValue* v = p.get("id"); v && v->is_number()) {
          score.parameter_id = static_cast<int>(v->as_number());
        }
        if (const JsonValue* v = p.get("cents"); v && v->is_number()) {
          score.cents = static_cast<int>(v->as_number());
        }
        if (const JsonValue* v = p.get("evidence"); v && v->is_array()) {
          for (const auto& e : v->as_array()) {
            if (e.is_string()) score.evidence.push_back(e.as_string());
          }
        }
        record.score.parameter_scores.push_back(std::move(score));
      }
    }
    if (const JsonValue* v = a.get("total_cents"); v && v->is_number()) {
      record.score.total_cents = static_cast<int>(v->as_number());
    }
    detail::check_conserved(record.score);
    report.attempts.push_back(std::move(record));
  }
  auto direct = detail::attempts_of(report, PipelineId::direct);
  auto rag = detail::attempts_of(report, PipelineId::rag);
  if (!direct.empty()) report.direct_stats = detail::stats_for(direct);
  if (!rag.empty()) report.rag_stats = detail::stats_for(rag);
  return report;
}

inline std::string render_report(const ExperimentReport& report, ReportFormat format) {
  if (report.attempts.empty()) {
    throw std::invalid_argument("cannot render an empty report");
  }
  for (const auto& a : report.attempts) detail::check_conserved(a.score);
  auto direct = detail::attempts_of(report, PipelineId::direct);
  auto rag = detail::attempts_of(report, PipelineId::rag);

  if (format == ReportFormat::json) {
    return serialize_json(report_to_json(report), 2) + "\n";
  }

  const auto cell = [](const AttemptRecord* a, size_t param_index) {
    return format_cents(a->score.parameter_scores[param_index].cents);
  };

  if (format == ReportFormat::csv) {
    std::string out = "parameter";
    for (size_t i = 0; i < direct.size(); ++i) out += ",direct_" + std::to_string(i + 1);
    for (size_t i = 0; i < rag.size(); ++i) out += ",rag_" + std::to_string(i + 1);
    out += "\n";
    for (size_t p = 0; p < 9; ++p) {
      out += std::to_string(p + 1);
      for (const auto* a : direct) out += "," + cell(a, p);
      for (const auto* a : rag) out += "," + cell(a, p);
      out += "\n";
    }
    out += "sum";
    for (const auto* a : direct) out += "," + format_cents(a->score.total_cents);
    for (const auto* a : rag) out += "," + format_cents(a->score.total_cents);
    out += "\nmean";
    out += "," + detail::format_mean(direct);
    for (size_t i = 1; i < direct.size(); ++i) out += ",";
    out += "," + detail::format_mean(rag);
    for (size_t i = 1; i < rag.size(); ++i) out += ",";
    out += "\nvariance";
    out += "," + detail::format_variance(report.direct_stats.variance_total);
    for (size_t i = 1; i < direct.size(); ++i) out += ",";
    out += "," + detail::format_variance(report.rag_stats.variance_total);
    for (size_t i = 1; i < rag.size(); ++i) out += ",";
    out += "\n";
    return out;
  }

  // markdown: the score table -- parameter rows 1..9, one column per
  // attempt (direct group first), a sum row and a mean row.
  std::string out;
  out += "Direct pipeline: attempts 1-" + std::to_string(direct.size());
  out += " (left group). RAG pipeline: attempts 1-" + std::to_string(rag.size());
  out += " (right group).\n\n";
  auto row = [&](const std::string& head, auto cell_for) {
    out += "| " + head + " |";
    for (size_t i = 0; i < direct.size(); ++i) out += " " + cell_for(direct[i], i) + " |";
    for (size_t i = 0; i < rag.size(); ++i) out += " " + cell_for(rag[i], i) + " |";
    out += "\n";
  };
  row("#", [&](const AttemptRecord* a, size_t) {
    return std::to_string(a->score.attempt_index);
  });
  out += "|---|";
  for (size_t i = 0; i < direct.size() + rag.size(); ++i) out += "---|";
  out += "\n";
  for (size_t p = 0; p < 9; ++p) {
    row(std::to_string(p + 1),
        [&](const AttemptRecord* a, size_t) { return cell(a, p); });
  }
  row("Σ", [&](const AttemptRecord* a, size_t) {
    return format_cents(a->score.total_cents);
  });
  {
    out += "| Σ̄ |";
    std::string direct_mean = detail::format_mean(direct);
    std::string rag_mean = detail::format_mean(rag);
    for (size_t i = 0; i < direct.size(); ++i) {
      out += i == 0 ? " " + direct_mean + " |" : "  |";
    }
    for (size_t i = 0; i < rag.size(); ++i) {
      out += i == 0 ? " " + rag_mean + " |" : "  |";
    }
    out += "\n";
  }
  out += "\nVariance: direct " + detail::format_variance(report.direct_stats.variance_total);
  out += ", rag " + detail::format_variance(report.rag_stats.variance_total) + "\n";
  return out;
}

// ---------------- config loading ----------------

namespace detail {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline std::vector<std::string> string_list(const JsonValue* v) {
  std::vector<std::string> out;
  if (v && v->is_array()) {
    for (const auto& e : v->as_array()) {
      if (e.is_string()) out.push_back(e.as_string());
    }
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::string text = detail::read_text_file(path);
  auto parsed = parse_json_tolerant(text);
  if (!parsed.root || !parsed.findings.empty() || !parsed.root->is_object()) {
    throw ConfigError("config file is not well-formed JSON: " + path.string());
  }
  const JsonValue& root = *parsed.root;
  ExperimentConfig config;
  config.snapshot = root;

  if (const JsonValue* v = root.get("trials_per_pipeline"); v && v->is_number()) {
    config.trials_per_pipeline = static_cast<int>(v->as_number());
  }
  if (config.trials_per_pipeline < 1) {
    throw ConfigError("trials_per_pipeline must be at least 1");
  }
  if (const JsonValue* v = root.get("stub_mode"); v && v->is_bool()) {
    config.stub_mode = v->as_bool();
  }
  if (const JsonValue* v = root.get("archive_dir"); v && v->is_string()) {
    config.archive_dir = v->as_string();
  }

  const JsonValue* prompt = root.get("prompt");
  if (!prompt || !prompt->is_object() || !prompt->get("base") ||
      !prompt->get("base")->is_string()) {
    throw ConfigError("config requires prompt.base");
  }
  std::string base_prompt = prompt->get("base")->as_string();
  std::vector<std::string> reinforcement = detail::string_list(prompt->get("reinforcement"));

  config.direct.pipeline_id = PipelineId::direct;
  config.direct.base_prompt = base_prompt;
  config.rag.pipeline_id = PipelineId::rag;
  config.rag.base_prompt = base_prompt;
  config.rag.reinforcement = std::move(reinforcement);

  if (const JsonValue* model = root.get("model"); model && model->is_object()) {
    if (const JsonValue* v = model->get("completion"); v && v->is_string()) {
      config.direct.model_name = v->as_string();
      config.rag.model_name = v->as_string();
    }
    if (const JsonValue* v = model->get("temperature"); v && v->is_number()) {
      config.direct.temperature = v->as_number();
      config.rag.temperature = v->as_number();
    }
    if (const JsonValue* v = model->get("max_output_tokens"); v && v->is_number()) {
      config.direct.max_output_tokens = static_cast<int>(v->as_number());
      config.rag.max_output_tokens = static_cast<int>(v->as_number());
    }
  }

  if (const JsonValue* retrieval = root.get("retrieval"); retrieval && retrieval->is_object()) {
    if (const JsonValue* v = retrieval->get("reference_dir"); v && v->is_string()) {
      config.reference_dir = v->as_string();
    }
    if (const JsonValue* v = retrieval->get("chunk_size"); v && v->is_number()) {
      config.chunking.chunk_size = static_cast<size_t>(v->as_number());
    }
    if (const JsonValue* v = retrieval->get("overlap"); v && v->is_number()) {
      config.chunking.overlap = static_cast<size_t>(v->as_number());
    }
    if (const JsonValue* v = retrieval->get("k"); v && v->is_number()) {
      config.rag.retrieval_k = static_cast<size_t>(v->as_number());
    }
  }
  if (config.reference_dir.empty()) {
    throw ConfigError("config requires retrieval.reference_dir");
  }

  if (const JsonValue* stub = root.get("stub"); stub && stub->is_object()) {
    if (const JsonValue* v = stub->get("fixtures_dir"); v && v->is_string()) {
      config.stub.fixtures_dir = v->as_string();
    }
    if (const JsonValue* v = stub->get("embedding_dimension"); v && v->is_number()) {
      config.stub.embedding_dimension = static_cast<size_t>(v->as_number());
    }
    if (const JsonValue* schedule = stub->get("schedule"); schedule && schedule->is_object()) {
      config.stub.schedule_direct = detail::string_list(schedule->get("direct"));
      config.stub.schedule_rag = detail::string_list(schedule->get("rag"));
    }
  }
  if (config.stub_mode) {
    if (config.stub.fixtures_dir.empty()) {
      throw ConfigError("stub mode requires stub.fixtures_dir");
    }
    const size_t n = static_cast<size_t>(config.trials_per_pipeline);
    if (config.stub.schedule_direct.size() != n || config.stub.schedule_rag.size() != n) {
      throw ConfigError("stub schedules must list one fixture key per trial");
    }
  }
  return config;
}

// ---------------- runner ----------------

namespace detail {

inline AttemptScore fatal_attempt(const std::string& reason) {
  AttemptScore score;
  score.parameter_scores.push_back({1, 0, {reason}});
  score.parameter_scores.push_back({2, -10, {reason}});
  for (int id = 3; id <= 9; ++id) {
    score.parameter_scores.push_back({id, 0, {"document unavailable"}});
  }
  score.total_cents = -10;
  return score;
}

inline std::vector<SourceDocument> load_reference_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw ConfigError("reference directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<SourceDocument> docs;
  for (const auto& f : files) {
    docs.push_back({f.filename().string(), read_text_file(f)});
  }
  if (docs.empty()) {
    throw ConfigError("reference directory has no files: " + dir.string());
  }
  return docs;
}

}  // namespace detail

// Runs the experiment against the given provider. In stub mode the caller
// is expected to pass a StubProvider loaded with the interleaved script.
inline ExperimentReport run_experiment(const ExperimentConfig& config,
                                       LlmProvider& provider) {
  ExperimentReport report;
  report.trials_per_pipeline = config.trials_per_pipeline;
  report.config_snapshot = config.snapshot;

  auto corpus = detail::load_reference_corpus(config.reference_dir);
  VectorIndex index = build_index(ingest(corpus, config.chunking), provider);

  auto run_one = [&](const PipelineConfig& pipeline, int trial) {
    AttemptRecord record;
    record.score.pipeline_id = pipeline.pipeline_id;
    record.score.attempt_index = trial;

    std::string prompt = pipeline.base_prompt;
    if (pipeline.pipeline_id == PipelineId::rag) {
      auto ranked = retrieve(index, pipeline.base_prompt, pipeline.retrieval_k, provider);
      prompt = augment_prompt(pipeline.base_prompt, ranked, pipeline.reinforcement);
    }
    CompletionRequest request;
    request.model_name = pipeline.model_name;
    request.prompt = prompt;
    request.temperature = pipeline.temperature;
    request.max_output_tokens = pipeline.max_output_tokens;
    try {
      record.raw_text = provider.complete(request);
    } catch (const std::runtime_error& e) {
      record.completion_failed = true;
      AttemptScore fatal = detail::fatal_attempt(std::string("completion failed: ") + e.what());
      fatal.pipeline_id = pipeline.pipeline_id;
      fatal.attempt_index = trial;
      record.score = fatal;
      report.attempts.push_back(std::move(record));
      return;
    }
    GradeResult graded = grade_detailed(record.raw_text);
    graded.score.pipeline_id = pipeline.pipeline_id;
    graded.score.attempt_index = trial;
    record.no_payload = graded.no_payload;
    record.applied_steps = graded.cleaned.applied_steps;
    record.cleaned_text = graded.cleaned.text;
    record.score = std::move(graded.score);
    report.attempts.push_back(std::move(record));
  };

  for (int trial = 1; trial <= config.trials_per_pipeline; ++trial) {
    run_one(config.direct, trial);
    run_one(config.rag, trial);
  }

  report.direct_stats = detail::stats_for(detail::attempts_of(report, PipelineId::direct));
  report.rag_stats = detail::stats_for(detail::attempts_of(report, PipelineId::rag));
  return report;
}

// Convenience entry point that builds the provider from the config.
inline ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (config.stub_mode) {
    StubProvider provider(config.stub.fixtures_dir, config.stub.embedding_dimension);
    std::vector<std::string> script;
    for (int i = 0; i < config.trials_per_pipeline; ++i) {
      script.push_back(config.stub.schedule_direct[static_cast<size_t>(i)]);
      script.push_back(config.stub.schedule_rag[static_cast<size_t>(i)]);
    }
    provider.set_script(std::move(script));
    return run_experiment(config, provider);
  }
  throw ConfigError(
      "live mode requires an explicit provider; construct an HttpProvider and use "
      "run_experiment(config, provider)");
}

// ---------------- archive ----------------

// Layout:
//   <dir>/report.json, report.md, report.csv
//   <dir>/attempt-<pipeline>-<index>/{raw.txt, cleaned.json, score.json}
inline void write_archive(const ExperimentReport& report,
                          const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  detail::write_text_file(dir / "report.json",
                          render_report(report, ReportFormat::json));
  detail::write_text_file(dir / "report.md", render_report(report, ReportFormat::markdown));
  detail::write_text_file(dir / "report.csv", render_report(report, ReportFormat::csv));
  for (const auto& a : report.attempts) {
    fs::path attempt_dir =
        dir / ("attempt-" + std::string(to_string(a.score.pipeline_id)) + "-" +
               std::to_string(a.score.attempt_index));
    fs::create_directories(attempt_dir);
    detail::write_text_file(attempt_dir / "raw.txt", a.raw_text);
    detail::write_text_file(attempt_dir / "cleaned.json", a.cleaned_text);
    detail::write_text_file(attempt_dir / "score.json", score_to_json(a.score));
  }
}

inline ExperimentReport load_archive_report(const std::filesystem::path& dir) {
  std::string text = detail::read_text_file(dir / "report.json");
  auto parsed = parse_json_tolerant(text);
  if (!parsed.root || !parsed.findings.empty()) {
    throw ConfigError("archive report.json is not well-formed");
  }
  return report_from_json(*parsed.root);
}

}  // namespace oasgrade
