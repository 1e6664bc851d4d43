#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vpoem/generator.hpp"
#include "vpoem/promptforge.hpp"
#include "vpoem/scorer.hpp"

namespace vpoem {

/// Reads a dataset written by build_dataset. Malformed lines throw.
std::vector<PromptRecord> read_testset(const std::filesystem::path& path);
std::vector<PromptRecord> read_testset(std::istream& in);

/// Builds the backend named by spec.kind; replay draws its gold completions
/// from `testset`.
std::unique_ptr<Generator> make_generator(const GeneratorSpec& spec,
                                          const std::vector<PromptRecord>& testset = {});

/// Fraction of keywords whose normalized token sequence occurs in the text.
/// Empty when there are no keywords.
std::optional<double> keyword_coverage(const std::vector<std::string>& keywords,
                                       std::string_view text, const OnsetPolicy& policy = {});

struct EvalRecord {
  std::string id;
  PromptMode mode = PromptMode::text2poem;
  bool blind = false;
  std::string prompt;  // as sent to the generator
  std::string generated;
  GenreLabel declared = GenreLabel::unknown;
  GenreLabel genre = GenreLabel::unknown;  // genre the output was scored under
  std::optional<ScoreBreakdown> score;
  std::optional<double> keyword_coverage;
  bool failed = false;   // no usable generation; excluded from means
  bool flagged = false;  // scored 0 because no genre applied
  std::string diagnostic;

  Json to_json() const;
  static EvalRecord from_json(const Json& j);
};

struct MeanScore {
  std::size_t count = 0;
  double mean = 0.0;
};

struct ModeAggregate {
  std::map<GenreLabel, MeanScore> per_genre;
  MeanScore overall;
  std::size_t failures = 0;
};

struct EvalResult {
  bool blind = false;
  std::vector<EvalRecord> records;
  std::map<PromptMode, ModeAggregate> modes;

  std::size_t failures() const;
};

/// Recomputes per-mode aggregates from the per-record results. Means are
/// summed in record order.
EvalResult aggregate(std::vector<EvalRecord> records, bool blind);

struct EvalOptions {
  unsigned concurrency = 4;                         // generator requests in flight
  const Scorer* scorer = nullptr;                   // default rules when null
  const PromptTemplate* prompt_template = nullptr;  // masking template; Vietnamese when null
  OnsetPolicy onsets;
};

/// Scores each generation under the record's declared genre.
EvalResult evaluate(const std::vector<PromptRecord>& testset, Generator& generator,
                    const EvalOptions& options = {});
/// Masks the genre out of each prompt and scores each generation under the
/// genre the classifier assigns; unclassifiable outputs score 0 and are flagged.
EvalResult blind_evaluate(const std::vector<PromptRecord>& testset, Generator& generator,
                          const EvalOptions& options = {});

std::string to_jsonl(const EvalRecord& record);
/// Reads a per-record dump and recomputes its aggregates.
EvalResult read_eval_result(const std::filesystem::path& path);
EvalResult read_eval_result(std::istream& in);

Json summary_json(const EvalResult& result);

}  // namespace vpoem
