#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "vpoem/error.hpp"
#include "vpoem/genre_rules.hpp"
#include "vpoem/scorer.hpp"

namespace vpoem {

/// JSON value type used for every record the toolkit reads or writes;
/// keys keep insertion order so output is stable.
using Json = nlohmann::ordered_json;

/// One poem of a line-delimited JSON corpus.
struct PoemRecord {
  std::string id;
  GenreLabel genre = GenreLabel::unknown;  // declared genre
  std::string text;                        // newline-separated lines
  std::optional<std::string> title;
  std::optional<ScoreBreakdown> score;
  bool flagged = false;
  std::string diagnostic;
  Json extra = Json::object();  // unrecognized fields, passed through
};

Json to_json(const ScoreBreakdown& score);
ScoreBreakdown score_from_json(const Json& j);

Json to_json(const PoemRecord& record);
/// Throws MalformedRecord(line) when required fields are missing or mistyped.
PoemRecord record_from_json(const Json& j, std::size_t line);
/// One JSON object on a single line, UTF-8, no trailing newline.
std::string to_jsonl(const PoemRecord& record);

using CorpusItem = std::variant<PoemRecord, MalformedRecord>;

/// Streams records from line-delimited JSON. Blank lines are skipped;
/// malformed lines are yielded as MalformedRecord so the caller can report
/// them and keep going.
class CorpusReader {
 public:
  explicit CorpusReader(std::istream& in) : in_(&in) {}
  /// Throws FileNotFound.
  static CorpusReader open(const std::filesystem::path& path);

  std::optional<CorpusItem> next();
  std::size_t line_number() const noexcept { return line_; }

 private:
  CorpusReader(std::unique_ptr<std::ifstream> file);

  std::unique_ptr<std::ifstream> owned_;
  std::istream* in_;
  std::size_t line_ = 0;
  std::map<std::string, std::size_t> seen_ids_;
};

std::vector<CorpusItem> read_corpus(const std::filesystem::path& path);

/// Which genre a record is scored under.
struct GenreChoice {
  enum class Source {
    classify,  // "auto": always derive from the length signature
    declared,  // the record's own genre, classifying when it is unknown
    fixed,     // one genre for every record
  };
  Source source = Source::classify;
  GenreLabel fixed = GenreLabel::unknown;

  /// "auto", "declared" or a genre label. Throws UnknownGenre.
  static GenreChoice parse(std::string_view text);
};

struct ScoreOptions {
  GenreChoice genre;
  unsigned jobs = 1;
  const Scorer* scorer = nullptr;  // default rules when null
  OnsetPolicy onsets;
};

/// Scores one record in place of any previous score. Records whose genre
/// cannot be determined get an all-zero score and are flagged.
PoemRecord score_record(PoemRecord record, const ScoreOptions& options);

/// Scores a stream; malformed items pass through untouched and output order
/// equals input order.
void score_corpus(const std::function<std::optional<CorpusItem>()>& source,
                  const ScoreOptions& options, const std::function<void(CorpusItem&&)>& sink);
std::vector<PoemRecord> score_corpus(std::vector<PoemRecord> records, const ScoreOptions& options);

inline constexpr std::size_t kHistogramBuckets = 20;  // 0.05 wide

struct FilterStats {
  double threshold = 0.0;
  std::size_t input = 0;
  std::size_t kept = 0;
  std::map<GenreLabel, std::array<std::size_t, kHistogramBuckets>> histogram;

  std::size_t rejected() const noexcept { return input - kept; }
};

std::size_t histogram_bucket(double score);

/// Streaming threshold filter. Unscored records count as rejected.
class CorpusFilter {
 public:
  /// Throws InvalidConfig unless 0 <= threshold <= 1.
  explicit CorpusFilter(double threshold);

  bool offer(const PoemRecord& record);
  const FilterStats& stats() const noexcept { return stats_; }

 private:
  FilterStats stats_;
};

struct FilterResult {
  std::vector<PoemRecord> kept;
  FilterStats stats;
};

FilterResult filter_corpus(const std::vector<PoemRecord>& records, double threshold);

struct GenreSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
};

struct CorpusSummary {
  std::size_t total = 0;
  std::size_t flagged = 0;
  std::map<GenreLabel, GenreSummary> genres;
};

/// Accumulates per-genre counts and scores. Keeps one double per record for
/// the median, never the records themselves.
class StatsAccumulator {
 public:
  void add(const PoemRecord& record);
  CorpusSummary summary() const;

 private:
  std::size_t total_ = 0;
  std::size_t flagged_ = 0;
  std::map<GenreLabel, std::size_t> counts_;
  std::map<GenreLabel, std::vector<double>> scores_;
};

CorpusSummary corpus_stats(const std::vector<PoemRecord>& records);

Json to_json(const FilterStats& stats);
Json to_json(const CorpusSummary& summary);
std::string render_table(const FilterStats& stats);
std::string render_table(const CorpusSummary& summary);

}  // namespace vpoem
