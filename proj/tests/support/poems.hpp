#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lexicon.hpp"
#include "oracle.hpp"
#include "vpoem/genre_rules.hpp"

namespace testsupport {

inline constexpr vpoem::GenreLabel kGenres[] = {
    vpoem::GenreLabel::luc_bat, vpoem::GenreLabel::chu_4, vpoem::GenreLabel::chu_5,
    vpoem::GenreLabel::chu_7, vpoem::GenreLabel::chu_8};

int expected_words(vpoem::GenreLabel genre, std::size_t line);

/// Seeded generator of synthetic poems over the test lexicon.
class PoemGen {
 public:
  explicit PoemGen(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t lo, std::size_t hi);  // inclusive
  bool coin(double p = 0.5);
  vpoem::GenreLabel any_genre();

  /// Scores 1.0 under `genre` when `lines` is even.
  Words perfect(vpoem::GenreLabel genre, std::size_t lines);
  /// Swaps every rhyme-slot word for one of the same tone class so that no
  /// two words of any rhyme group share a key.
  void break_rhymes(Words& poem, vpoem::GenreLabel genre);
  /// Random word edits: substitutions (including non-Vietnamese tokens),
  /// deletions and insertions.
  void corrupt(Words& poem, std::size_t edits);
  /// Changes one line's word count to something other than expected.
  void perturb_length(Words& poem, vpoem::GenreLabel genre);

  const LexEntry* any_word();
  const LexEntry* word_with(bool even, int pitch = 0);

  /// Newline-joined text; with `decorate`, adds line-final punctuation and
  /// capitalizes ASCII line starts at random.
  std::string render(const Words& poem, bool decorate = false);

 private:
  const LexEntry* pick(const std::vector<const LexEntry*>& pool);

  std::mt19937_64 rng_;
};

std::string render_plain(const Words& poem);

}  // namespace testsupport
