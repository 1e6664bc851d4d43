#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vpoem/syllable.hpp"

namespace vpoem {

enum class GenreLabel { luc_bat, chu_4, chu_5, chu_7, chu_8, unknown };

/// The five known genres in tie-break priority (corpus frequency) order.
inline constexpr std::array<GenreLabel, 5> kGenrePriority = {
    GenreLabel::luc_bat, GenreLabel::chu_8, GenreLabel::chu_7, GenreLabel::chu_5, GenreLabel::chu_4};

/// Machine label: "luc_bat", "chu_7", ..., "unknown".
std::string_view to_string(GenreLabel genre) noexcept;

/// How a genre is written inside prompts.
enum class GenreNaming { ascii, vietnamese };

/// "luc bat" / "7 chu" (ascii) or "lục bát" / "7 chữ" (vietnamese).
std::string_view display_name(GenreLabel genre, GenreNaming naming = GenreNaming::ascii) noexcept;

/// Accepts machine labels and both display names, case-insensitively.
std::optional<GenreLabel> parse_genre(std::string_view text);

struct TonePosition {
  int word;  // 1-based
  ToneClass required;

  bool operator==(const TonePosition&) const = default;
};

enum class Relation { same, differ };

/// Orientation-free check between the tone classes of two words.
struct ToneRelation {
  int first;
  int second;
  Relation relation;

  bool operator==(const ToneRelation&) const = default;
};

/// Tone checks for one line. Every entry is one check in the denominator.
struct LinePattern {
  std::vector<TonePosition> positions;
  std::vector<ToneRelation> relations;
  std::optional<std::pair<int, int>> accent_pair;  // registers must differ

  int denominator() const noexcept {
    return static_cast<int>(positions.size() + relations.size()) + (accent_pair ? 1 : 0);
  }

  bool operator==(const LinePattern&) const = default;
};

/// A word that takes part in a rhyme group, relative to the first line of a
/// line pair: offset -1 is the previous pair's second line.
struct RhymeSlot {
  int line_offset;
  int word;  // 1-based

  bool operator==(const RhymeSlot&) const = default;
};

struct RhymeScheme {
  std::vector<RhymeSlot> first_pair;
  std::vector<RhymeSlot> later_pairs;

  bool operator==(const RhymeScheme&) const = default;
};

struct GenreSpec {
  GenreLabel label = GenreLabel::unknown;
  std::array<int, 2> lengths{};          // expected word count of pair lines 0 and 1
  std::array<LinePattern, 2> patterns;   // tone checks of pair lines 0 and 1
  RhymeScheme rhyme;
  bool invertible = false;               // positional classes may flip per line pair

  int expected_length(std::size_t line_index) const noexcept { return lengths[line_index % 2]; }

  bool operator==(const GenreSpec&) const = default;
};

struct WordPos {
  std::size_t line;  // 0-based
  int word;          // 1-based

  bool operator==(const WordPos&) const = default;
};

struct RhymeGroup {
  std::vector<WordPos> positions;
  int t = 0;  // words available to rhyme
};

/// Rule tables for the five genres. The built-in tables can be overridden
/// genre by genre from a JSON file.
class RuleBook {
 public:
  RuleBook();

  static const RuleBook& builtin();
  /// Built-in tables with the genres present in the JSON document replaced.
  static RuleBook parse(std::string_view json_text);
  static RuleBook load(const std::filesystem::path& path);

  /// Throws UnknownGenre for GenreLabel::unknown.
  const GenreSpec& spec_for(GenreLabel genre) const;
  int expected_length(GenreLabel genre, std::size_t line_index) const;
  /// One group per line pair; groups on a trailing odd line keep only the
  /// positions on existing lines, with t reduced to match.
  std::vector<RhymeGroup> rhyme_groups(GenreLabel genre, std::size_t line_count) const;

  /// Replaces one genre's table after validating it.
  void set(GenreSpec spec);

 private:
  std::array<GenreSpec, 5> specs_;
};

const GenreSpec& spec_for(GenreLabel genre);
int expected_length(GenreLabel genre, std::size_t line_index);
std::vector<RhymeGroup> rhyme_groups(GenreLabel genre, std::size_t line_count);

}  // namespace vpoem
