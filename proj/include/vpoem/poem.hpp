#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vpoem/genre_rules.hpp"
#include "vpoem/syllable.hpp"

namespace vpoem {

using Line = std::vector<Syllable>;

/// An ordered sequence of non-empty analyzed lines plus the genre it is
/// scored under (which may be unknown until classified).
class Poem {
 public:
  /// Blank lines are dropped; throws EmptyPoem when none remain.
  Poem(std::vector<Line> lines, GenreLabel genre);

  /// Splits on newlines and tokenizes each line.
  static Poem parse(std::string_view text, GenreLabel genre = GenreLabel::unknown,
                    const OnsetPolicy& policy = {});

  const std::vector<Line>& lines() const noexcept { return lines_; }
  const Line& line(std::size_t i) const { return lines_.at(i); }
  GenreLabel genre() const noexcept { return genre_; }
  std::size_t size() const noexcept { return lines_.size(); }
  /// Line count rounded up to even: odd poems are penalized by one missing line.
  std::size_t effective_size() const noexcept { return lines_.size() + lines_.size() % 2; }
  std::vector<int> word_counts() const;

  Poem with_genre(GenreLabel genre) const;

 private:
  std::vector<Line> lines_;
  GenreLabel genre_;
};

}  // namespace vpoem
