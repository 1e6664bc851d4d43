#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "vpoem/corpus.hpp"
#include "vpoem/generator.hpp"
#include "vpoem/poem.hpp"

namespace vpoem {

enum class PromptMode { text2poem, poem2poem };

std::string_view to_string(PromptMode mode) noexcept;
/// Throws InvalidConfig.
PromptMode parse_prompt_mode(std::string_view text);

struct PromptSpec {
  GenreLabel genre = GenreLabel::unknown;  // X
  std::string topic;                       // Y
  std::vector<std::string> keywords;       // Z
};

/// Words never picked as keywords, stored in normalized form.
class StopWords {
 public:
  StopWords() = default;

  /// The list shipped in data/stopwords_vi.txt.
  static const StopWords& builtin();
  /// One word per line; '#' starts a comment line.
  static StopWords parse(std::istream& in);
  static StopWords load(const std::filesystem::path& path);

  bool contains(std::string_view normalized) const;
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// The k most frequent content words, ties broken by first occurrence.
/// Each keyword is returned as spelled in the poem (edge punctuation removed).
/// Throws PoemTooShort when the poem has fewer than k distinct content words.
std::vector<std::string> extract_keywords(const Poem& poem, std::size_t k,
                                          const StopWords& stop = StopWords::builtin());

/// Prompt template with {X} (genre), {Y} (topic) and {Z} (keywords).
/// Text inside [[ ... ]] is dropped when a placeholder in it renders empty.
/// An optional first line "#names: vi" or "#names: ascii" picks how genre
/// names are spelled.
class PromptTemplate {
 public:
  /// Throws MissingPlaceholder, InvalidConfig on unbalanced brackets.
  static PromptTemplate parse(std::string_view text);
  static PromptTemplate load(const std::filesystem::path& path);
  /// Vietnamese template shipped in data/templates/vi_default.txt.
  static const PromptTemplate& vietnamese();
  /// English template shipped in data/templates/en_debug.txt.
  static const PromptTemplate& english_debug();

  std::string render(const PromptSpec& spec) const;
  /// Deletes the text the X slot produced for `genre`, then any remaining
  /// genre name in either spelling.
  std::string mask_genre(std::string_view prompt, GenreLabel genre) const;

  GenreNaming naming() const noexcept { return naming_; }

 private:
  struct Piece {
    std::string text;
    bool optional = false;
  };

  std::vector<Piece> pieces_;
  GenreNaming naming_ = GenreNaming::vietnamese;
};

std::string render_prompt(const PromptSpec& spec, std::string_view template_text);

/// Joins the lines into one sentence: trailing punctuation of each line is
/// dropped, lines are separated by ", " and the result ends in ".".
std::string deversify(const Poem& poem);

/// One prompt/completion pair; serialized as the source record plus
/// prompt, completion, mode, keywords and topic.
struct PromptRecord {
  PoemRecord source;
  PromptMode mode = PromptMode::text2poem;
  std::string prompt;
  std::string completion;
  std::vector<std::string> keywords;
  std::string topic;

  GenreLabel genre() const noexcept { return source.genre; }

  Json to_json() const;
  /// Inverse of to_json() applied to a record already read from a corpus.
  /// Throws MalformedRecord(line) when prompt is missing.
  static PromptRecord from_record(const PoemRecord& record, std::size_t line = 0);
};

struct DatasetSkip {
  std::string id;
  std::string reason;
};

using DatasetItem = std::variant<PromptRecord, DatasetSkip>;

struct DatasetOptions {
  PromptMode mode = PromptMode::text2poem;
  std::size_t keywords = 3;
  const PromptTemplate* prompt_template = nullptr;  // Vietnamese default when null
  const StopWords* stop_words = nullptr;            // built-in list when null
  Generator* paraphraser = nullptr;                 // rewrites poem2poem prompts when set
  OnsetPolicy onsets;
  unsigned jobs = 1;
};

/// Builds one prompt record, or a skip with the reason.
DatasetItem make_prompt_record(const PoemRecord& record, const DatasetOptions& options);

/// Streams records through make_prompt_record in input order.
void build_dataset(const std::function<std::optional<PoemRecord>()>& source,
                   const DatasetOptions& options, const std::function<void(DatasetItem&&)>& sink);
std::vector<DatasetItem> build_dataset(std::vector<PoemRecord> records, const DatasetOptions& options);

}  // namespace vpoem
