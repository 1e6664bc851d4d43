#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vpoem/genre_rules.hpp"
#include "vpoem/poem.hpp"

namespace vpoem {

/// Per-line word counts: the only input the genre classifier looks at.
struct LengthSignature {
  std::vector<int> counts;

  /// Counts joined by single spaces, e.g. "6 8 6 8".
  std::string rendered() const;
  /// Inverse of rendered(); throws InvalidConfig on non-numeric fields.
  static LengthSignature parse(std::string_view text);

  bool operator==(const LengthSignature&) const = default;
};

struct Classification {
  GenreLabel genre = GenreLabel::unknown;
  double fit = 0.0;  // fraction of lines matching the winning genre's lengths
};

/// Minimum fraction of matching lines for a genre to be accepted.
inline constexpr double kMinimumFit = 0.8;

LengthSignature signature(const Poem& poem);

/// Picks the genre whose expected lengths match the most lines. Ties go to
/// the more frequent genre (luc_bat > chu_8 > chu_7 > chu_5 > chu_4); a best
/// fit under 0.8 yields unknown.
Classification classify(const LengthSignature& sig, const RuleBook& rules = RuleBook::builtin());

}  // namespace vpoem
