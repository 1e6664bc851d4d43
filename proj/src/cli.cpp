#include "vpoem/cli.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "vpoem/classifier.hpp"
#include "vpoem/corpus.hpp"
#include "vpoem/harness.hpp"
#include "vpoem/parallel.hpp"
#include "vpoem/promptforge.hpp"
#include "vpoem/report.hpp"

namespace vpoem::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_stdio(const std::string& path) { return path.empty() || path == "-"; }

class Input {
 public:
  Input(const std::string& path, std::istream& fallback) : stream_(&fallback) {
    if (is_stdio(path)) return;
    file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file_) throw FileNotFound(path);
    stream_ = file_.get();
  }
  std::istream& stream() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (is_stdio(path)) return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*file_) throw Error("cannot write " + path);
    stream_ = file_.get();
  }
  std::ostream& stream() { return *stream_; }
  bool is_file() const noexcept { return file_ != nullptr; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::string read_all(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string check_genre_choice(const std::string& text) {
  try {
    GenreChoice::parse(text);
    return {};
  } catch (const UnknownGenre& e) {
    return e.what();
  }
}

const std::vector<std::string> kFormats = {"table", "json"};

struct ScoringFlags {
  std::string genre = "auto";
  std::string rules;
  std::string near_rhyme;
  unsigned jobs = default_jobs();
};

void add_scoring_flags(CLI::App* cmd, ScoringFlags& f) {
  cmd->add_option("--genre", f.genre, "Genre label, \"auto\" (classify) or \"declared\"")
      ->check(check_genre_choice)
      ->capture_default_str();
  cmd->add_option("--rules", f.rules, "JSON file overriding genre rule tables");
  cmd->add_option("--near-rhyme", f.near_rhyme, "File of rhyme keys treated as rhyming");
  cmd->add_option("--jobs", f.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

// Owns everything a Scorer points to, so it must stay where it was built.
struct ScoringContext {
  RuleBook rules;
  std::optional<NearRhymeTable> near;
  std::optional<Scorer> scorer;
  ScoreOptions options;

  explicit ScoringContext(const ScoringFlags& f) {
    if (!f.rules.empty()) rules = RuleBook::load(f.rules);
    if (!f.near_rhyme.empty()) near = NearRhymeTable::load(f.near_rhyme);
    scorer.emplace(rules, near ? &*near : nullptr);
    options.genre = GenreChoice::parse(f.genre);
    options.jobs = f.jobs;
    options.scorer = &*scorer;
  }
  ScoringContext(const ScoringContext&) = delete;
  ScoringContext& operator=(const ScoringContext&) = delete;
};

// Reads records, scoring those without a score (or all of them when
// `rescore`), and passes each item on in input order.
std::size_t for_each_scored(std::istream& in, const ScoringContext& ctx, bool rescore,
                            std::ostream& err, const std::function<void(PoemRecord&&)>& sink) {
  CorpusReader reader(in);
  std::size_t malformed = 0;
  const std::function<std::optional<CorpusItem>()> source = [&reader] { return reader.next(); };
  ordered_parallel_map<CorpusItem>(
      source,
      [&](CorpusItem&& item) -> CorpusItem {
        if (auto* r = std::get_if<PoemRecord>(&item); r && (rescore || !r->score)) {
          return score_record(std::move(*r), ctx.options);
        }
        return std::move(item);
      },
      [&](CorpusItem&& item) {
        if (auto* bad = std::get_if<MalformedRecord>(&item)) {
          err << "malformed record: " << bad->what() << '\n';
          ++malformed;
        } else {
          sink(std::get<PoemRecord>(std::move(item)));
        }
      },
      ctx.options.jobs);
  return malformed;
}

std::string score_table(const ScoreBreakdown& s) {
  return fmt::format(
      "genre    {}\nlines    {} (effective {})\nL        {:.3f}\nT        {:.3f}\nR        {:.3f}\n"
      "score    {:.3f}\n",
      to_string(s.genre), s.n, s.n_effective, s.L, s.T, s.R, s.score);
}

std::string dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

// --- score -----------------------------------------------------------------

struct ScoreArgs {
  ScoringFlags scoring;
  std::string file;
  std::string out;
  std::string format = "table";
  bool records = false;
};

int cmd_score(const ScoreArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  ScoringContext ctx(a.scoring);
  Input input(a.file, in);
  Output output(a.out, out);
  if (a.records) {
    const auto bad = for_each_scored(input.stream(), ctx, true, err, [&](PoemRecord&& r) {
      if (r.flagged) err << r.id << ": " << r.diagnostic << '\n';
      output.stream() << to_jsonl(r) << '\n';
    });
    return bad > 0 ? kDataError : kSuccess;
  }
  PoemRecord record;
  record.id = is_stdio(a.file) ? "stdin" : a.file;
  record.text = read_all(input.stream());
  record = score_record(std::move(record), ctx.options);
  const ScoreBreakdown& s = *record.score;
  if (a.format == "json") {
    output.stream() << dump(to_json(s)) << '\n';
  } else {
    output.stream() << score_table(s);
  }
  if (record.flagged) {
    err << "not scored: " << record.diagnostic << '\n';
    return kDataError;
  }
  return kSuccess;
}

// --- classify --------------------------------------------------------------

struct ClassifyArgs {
  ScoringFlags scoring;
  std::string file;
  std::string format = "table";
  bool records = false;
};

Json classification_json(const std::string* id, const Classification& c, const LengthSignature& sig) {
  Json j = Json::object();
  if (id) j["id"] = *id;
  j["genre"] = std::string(to_string(c.genre));
  j["fit"] = c.fit;
  j["signature"] = sig.rendered();
  return j;
}

int cmd_classify(const ClassifyArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  ScoringContext ctx(a.scoring);
  Input input(a.file, in);
  if (a.records) {
    CorpusReader reader(input.stream());
    std::size_t bad = 0;
    while (auto item = reader.next()) {
      if (auto* m = std::get_if<MalformedRecord>(&*item)) {
        err << "malformed record: " << m->what() << '\n';
        ++bad;
        continue;
      }
      const auto& r = std::get<PoemRecord>(*item);
      try {
        const auto sig = signature(Poem::parse(r.text, GenreLabel::unknown, ctx.options.onsets));
        const auto c = classify(sig, ctx.rules);
        if (a.format == "json") {
          out << dump(classification_json(&r.id, c, sig)) << '\n';
        } else {
          out << fmt::format("{}\t{}\t{:.3f}\n", r.id, to_string(c.genre), c.fit);
        }
      } catch (const EmptyPoem& e) {
        err << r.id << ": " << e.what() << '\n';
        ++bad;
      }
    }
    return bad > 0 ? kDataError : kSuccess;
  }
  const auto sig = signature(Poem::parse(read_all(input.stream()), GenreLabel::unknown, ctx.options.onsets));
  const auto c = classify(sig, ctx.rules);
  if (a.format == "json") {
    out << dump(classification_json(nullptr, c, sig)) << '\n';
  } else {
    out << fmt::format("{} {:.3f}\n", to_string(c.genre), c.fit);
  }
  return kSuccess;
}

// --- filter ----------------------------------------------------------------

struct FilterArgs {
  ScoringFlags scoring;
  double threshold = 0.9;
  std::string in;
  std::string out;
  std::string stats;
  std::string format = "table";
  bool rescore = false;
};

int cmd_filter(const FilterArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  ScoringContext ctx(a.scoring);
  CorpusFilter filter(a.threshold);
  Input input(a.in, in);
  Output output(a.out, out);
  const auto bad = for_each_scored(input.stream(), ctx, a.rescore, err, [&](PoemRecord&& r) {
    if (filter.offer(r)) output.stream() << to_jsonl(r) << '\n';
  });
  output.stream().flush();

  std::optional<Output> stats_file;
  if (!a.stats.empty()) stats_file.emplace(a.stats, out);
  std::ostream& report = stats_file ? stats_file->stream() : output.is_file() ? out : err;
  if (a.format == "json") {
    report << dump(to_json(filter.stats())) << '\n';
  } else {
    report << render_table(filter.stats());
  }
  return bad > 0 ? kDataError : kSuccess;
}

// --- stats -----------------------------------------------------------------

struct StatsArgs {
  ScoringFlags scoring;
  std::string in;
  std::string format = "table";
};

int cmd_stats(const StatsArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  ScoringContext ctx(a.scoring);
  Input input(a.in, in);
  StatsAccumulator acc;
  const auto bad = for_each_scored(input.stream(), ctx, false, err, [&](PoemRecord&& r) { acc.add(r); });
  const auto summary = acc.summary();
  if (a.format == "json") {
    out << dump(to_json(summary)) << '\n';
  } else {
    out << render_table(summary);
  }
  return bad > 0 ? kDataError : kSuccess;
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  std::string in;
  std::string out;
  std::string mode = "text2poem";
  std::size_t keywords = 3;
  std::string template_file;
  std::string stop_words;
  std::string paraphraser;
  unsigned jobs = default_jobs();
};

GeneratorSpec load_generator_spec(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw FileNotFound(path);
  try {
    return GeneratorSpec::from_json(Json::parse(read_all(file)));
  } catch (const Json::parse_error& e) {
    throw InvalidConfig(path + ": " + e.what());
  }
}

int cmd_synth(const SynthArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  std::optional<PromptTemplate> tmpl;
  if (!a.template_file.empty()) tmpl = PromptTemplate::load(a.template_file);
  std::optional<StopWords> stop;
  if (!a.stop_words.empty()) stop = StopWords::load(a.stop_words);
  std::unique_ptr<Generator> paraphraser;
  if (!a.paraphraser.empty()) paraphraser = make_generator(load_generator_spec(a.paraphraser));

  DatasetOptions options;
  options.mode = parse_prompt_mode(a.mode);
  options.keywords = a.keywords;
  options.prompt_template = tmpl ? &*tmpl : nullptr;
  options.stop_words = stop ? &*stop : nullptr;
  options.paraphraser = paraphraser.get();
  options.jobs = a.jobs;

  Input input(a.in, in);
  Output output(a.out, out);
  CorpusReader reader(input.stream());
  std::size_t bad = 0;
  std::size_t written = 0;
  std::size_t skipped = 0;
  const std::function<std::optional<PoemRecord>()> source = [&]() -> std::optional<PoemRecord> {
    while (auto item = reader.next()) {
      if (auto* r = std::get_if<PoemRecord>(&*item)) return std::move(*r);
      err << "malformed record: " << std::get<MalformedRecord>(*item).what() << '\n';
      ++bad;
    }
    return std::nullopt;
  };
  build_dataset(source, options, [&](DatasetItem&& item) {
    if (auto* skip = std::get_if<DatasetSkip>(&item)) {
      err << "skipped " << skip->id << ": " << skip->reason << '\n';
      ++skipped;
      return;
    }
    output.stream() << dump(std::get<PromptRecord>(item).to_json()) << '\n';
    ++written;
  });
  err << fmt::format("{} prompt records written, {} skipped\n", written, skipped);
  return bad > 0 ? kDataError : kSuccess;
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  ScoringFlags scoring;
  std::string generator = "stub";
  std::string testset;
  std::string out;
  std::string config;
  std::string endpoint;
  std::string model;
  std::string auth_env;
  std::string canned;
  std::string template_file;
  std::string format = "table";
  int max_tokens = 0;
  double temperature = -1.0;
  long long timeout_ms = 0;
  int max_attempts = 0;
  unsigned concurrency = 4;
  bool blind = false;
};

std::string summary_table(const EvalResult& result) {
  std::string text = fmt::format("{} evaluation, {} records, {} failed\n",
                                 result.blind ? "blind" : "declared-genre", result.records.size(),
                                 result.failures());
  for (const auto& [mode, agg] : result.modes) {
    text += fmt::format("{:<10} mean {:.3f} over {}\n", to_string(mode), agg.overall.mean,
                        agg.overall.count);
    for (const auto& [genre, g] : agg.per_genre) {
      text += fmt::format("  {:<8} mean {:.3f} over {}\n", to_string(genre), g.mean, g.count);
    }
  }
  return text;
}

int cmd_evaluate(const EvaluateArgs& a, std::istream& in, std::ostream& out, std::ostream& err) {
  GeneratorSpec spec = a.config.empty() ? GeneratorSpec{} : load_generator_spec(a.config);
  spec.kind = parse_generator_kind(a.generator);
  if (!a.endpoint.empty()) spec.endpoint = a.endpoint;
  if (!a.model.empty()) spec.model = a.model;
  if (!a.auth_env.empty()) spec.auth_env = a.auth_env;
  if (a.max_tokens > 0) spec.max_tokens = a.max_tokens;
  if (a.temperature >= 0.0) spec.temperature = a.temperature;
  if (a.timeout_ms > 0) spec.timeout = std::chrono::milliseconds(a.timeout_ms);
  if (a.max_attempts > 0) spec.retry.max_attempts = a.max_attempts;
  if (!a.canned.empty()) {
    std::ifstream file(a.canned, std::ios::binary);
    if (!file) throw FileNotFound(a.canned);
    spec.canned = read_all(file);
  }
  try {
    spec.validate();
  } catch (const InvalidConfig& e) {
    throw UsageError(e.what());
  }

  ScoringContext ctx(a.scoring);
  std::optional<PromptTemplate> tmpl;
  if (!a.template_file.empty()) tmpl = PromptTemplate::load(a.template_file);

  Input input(a.testset, in);
  const auto testset = read_testset(input.stream());
  auto generator = make_generator(spec, testset);
  if (auto* http = dynamic_cast<HttpGenerator*>(generator.get())) {
    http->on_retry([&err](int attempt, const std::string& reason, std::chrono::milliseconds wait) {
      err << fmt::format("attempt {} failed ({}), retrying in {} ms\n", attempt, reason, wait.count());
    });
  }

  EvalOptions options;
  options.concurrency = a.concurrency;
  options.scorer = ctx.options.scorer;
  options.prompt_template = tmpl ? &*tmpl : nullptr;
  const EvalResult result =
      a.blind ? blind_evaluate(testset, *generator, options) : evaluate(testset, *generator, options);

  Output output(a.out, out);
  for (const auto& r : result.records) {
    output.stream() << to_jsonl(r) << '\n';
    if (r.failed) err << r.id << ": generation failed: " << r.diagnostic << '\n';
  }
  output.stream().flush();
  std::ostream& report = output.is_file() ? out : err;
  if (a.format == "json") {
    report << dump(summary_json(result)) << '\n';
  } else {
    report << summary_table(result);
  }
  return kSuccess;
}

// --- report ----------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> labels;
  std::string format = "table";
  std::string csv;
};

Json report_json(const ReportTable& table) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::object();
    r["label"] = row.label;
    for (const auto& [mode, cells] : row.cells) {
      Json c = Json::object();
      for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
        c[std::string(column_title(kReportColumns[i]))] = cells[i] ? Json(*cells[i]) : Json();
      }
      r[std::string(to_string(mode))] = std::move(c);
    }
    rows.push_back(std::move(r));
  }
  return Json{{"rows", std::move(rows)}};
}

int cmd_report(const ReportArgs& a, std::istream& in, std::ostream& out, std::ostream&) {
  if (a.inputs.size() != a.labels.size()) {
    throw UsageError(LengthMismatch(a.inputs.size(), a.labels.size()).what());
  }
  std::vector<EvalResult> results;
  for (const auto& path : a.inputs) {
    Input input(path, in);
    results.push_back(read_eval_result(input.stream()));
  }
  const ReportTable table = build_report(results, a.labels);
  if (!a.csv.empty()) {
    Output csv(a.csv, out);
    csv.stream() << render_csv(table);
  }
  if (a.format == "csv") {
    out << render_csv(table);
  } else if (a.format == "json") {
    out << dump(report_json(table)) << '\n';
  } else {
    out << render_text(table);
  }
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vietnamese poem prosody toolkit", "vpoem"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score a poem (or records) for form");
  score_cmd->add_option("file", score.file, "Poem text or records; stdin when omitted or -");
  score_cmd->add_option("-o,--out", score.out, "Output file; stdout when omitted or -");
  score_cmd->add_option("--format", score.format)->check(CLI::IsMember(kFormats))->capture_default_str();
  score_cmd->add_flag("--records", score.records, "Input is line-delimited JSON records");
  add_scoring_flags(score_cmd, score.scoring);

  ClassifyArgs classify_args;
  auto* classify_cmd = app.add_subcommand("classify", "Guess the genre from line lengths");
  classify_cmd->add_option("file", classify_args.file, "Poem text or records; stdin when omitted or -");
  classify_cmd->add_option("--format", classify_args.format)
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  classify_cmd->add_flag("--records", classify_args.records, "Input is line-delimited JSON records");
  classify_cmd->add_option("--rules", classify_args.scoring.rules, "JSON file overriding genre rule tables");

  FilterArgs filter;
  auto* filter_cmd = app.add_subcommand("filter", "Keep records scoring at least the threshold");
  filter_cmd->add_option("--threshold", filter.threshold)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  filter_cmd->add_option("--in", filter.in, "Records; stdin when omitted or -");
  filter_cmd->add_option("--out", filter.out, "Kept records; stdout when omitted or -");
  filter_cmd->add_option("--stats", filter.stats, "Write stats here instead of stdout/stderr");
  filter_cmd->add_option("--format", filter.format, "Stats format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  filter_cmd->add_flag("--rescore", filter.rescore, "Rescore records that already carry a score");
  add_scoring_flags(filter_cmd, filter.scoring);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Per-genre counts and scores of a corpus");
  stats_cmd->add_option("--in", stats.in, "Records; stdin when omitted or -");
  stats_cmd->add_option("--format", stats.format)->check(CLI::IsMember(kFormats))->capture_default_str();
  add_scoring_flags(stats_cmd, stats.scoring);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Build prompt/poem pairs from filtered records");
  synth_cmd->add_option("--in", synth.in, "Records; stdin when omitted or -");
  synth_cmd->add_option("--out", synth.out, "Dataset; stdout when omitted or -");
  synth_cmd->add_option("--mode", synth.mode)
      ->check(CLI::IsMember({"text2poem", "poem2poem"}))
      ->capture_default_str();
  synth_cmd->add_option("--keywords", synth.keywords, "Keywords per prompt")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--template", synth.template_file, "Prompt template file");
  synth_cmd->add_option("--stop-words", synth.stop_words, "Stop-word list file");
  synth_cmd->add_option("--paraphraser", synth.paraphraser, "Generator config (JSON) for poem2poem prompts");
  synth_cmd->add_option("--jobs", synth.jobs)->check(CLI::PositiveNumber)->capture_default_str();

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Generate from a testset and score the outputs");
  eval_cmd->add_option("--generator", eval.generator)
      ->check(CLI::IsMember({"stub", "replay", "http"}))
      ->capture_default_str();
  eval_cmd->add_option("--testset", eval.testset, "Dataset from synth; stdin when omitted or -");
  eval_cmd->add_option("--out", eval.out, "Per-record results; stdout when omitted or -");
  eval_cmd->add_flag("--blind", eval.blind, "Mask genres in prompts and classify outputs");
  eval_cmd->add_option("--config", eval.config, "Generator config (JSON)");
  eval_cmd->add_option("--endpoint", eval.endpoint, "Completion endpoint URL");
  eval_cmd->add_option("--model", eval.model);
  eval_cmd->add_option("--auth-env", eval.auth_env, "Environment variable holding the API key");
  eval_cmd->add_option("--max-tokens", eval.max_tokens)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--temperature", eval.temperature)->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--timeout-ms", eval.timeout_ms)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--max-attempts", eval.max_attempts)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--canned", eval.canned, "File with the stub generator's poem");
  eval_cmd->add_option("--template", eval.template_file, "Template the prompts were rendered with");
  eval_cmd->add_option("--concurrency", eval.concurrency, "Requests in flight")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  eval_cmd->add_option("--format", eval.format, "Summary format")
      ->check(CLI::IsMember(kFormats))
      ->capture_default_str();
  add_scoring_flags(eval_cmd, eval.scoring);
  eval.scoring.genre = "auto";

  ReportArgs report;
  auto* report_cmd = app.add_subcommand("report", "Tabulate evaluation results");
  report_cmd->add_option("--in", report.inputs, "Per-record result files")->required();
  report_cmd->add_option("--labels", report.labels, "One row label per input")->required();
  report_cmd->add_option("--format", report.format)
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  report_cmd->add_option("--csv", report.csv, "Also write the CSV form here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    if (*score_cmd) return cmd_score(score, in, out, err);
    if (*classify_cmd) return cmd_classify(classify_args, in, out, err);
    if (*filter_cmd) return cmd_filter(filter, in, out, err);
    if (*stats_cmd) return cmd_stats(stats, in, out, err);
    if (*synth_cmd) return cmd_synth(synth, in, out, err);
    if (*eval_cmd) return cmd_evaluate(eval, in, out, err);
    if (*report_cmd) return cmd_report(report, in, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace vpoem::cli
