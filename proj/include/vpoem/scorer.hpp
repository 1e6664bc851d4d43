#pragma once

#include <cstddef>

#include "vpoem/genre_rules.hpp"
#include "vpoem/poem.hpp"
#include "vpoem/ratio.hpp"

namespace vpoem {

/// Form score of one poem: length (L), tone (T) and rhyme (R) components
/// combined as score = L/10 + 3T/10 + 6R/10.
struct ScoreBreakdown {
  double L = 0.0;
  double T = 0.0;
  double R = 0.0;
  double score = 0.0;
  GenreLabel genre = GenreLabel::unknown;
  std::size_t n = 0;
  std::size_t n_effective = 0;
};

struct ExactScore {
  Ratio L;
  Ratio T;
  Ratio R;
  Ratio score;
};

/// Scores poems against a rule book. Components are computed as exact
/// fractions and only converted to double at the end.
class Scorer {
 public:
  explicit Scorer(const RuleBook& rules = RuleBook::builtin(),
                  const NearRhymeTable* near_rhymes = nullptr)
      : rules_(&rules), near_(near_rhymes) {}

  /// Fraction of lines whose word count matches the genre, over n_effective.
  Ratio length_ratio(const Poem& poem) const;
  /// Per-line tone matches over each line's check count, averaged over n_effective.
  Ratio tone_ratio(const Poem& poem) const;
  /// (2 / n_effective) * sum over rhyme groups of max(rhyming words, 1) / t.
  Ratio rhyme_ratio(const Poem& poem) const;

  ExactScore exact(const Poem& poem) const;
  ScoreBreakdown score(const Poem& poem) const;

  static Ratio combine(const Ratio& L, const Ratio& T, const Ratio& R) {
    return (L + Ratio(3) * T + Ratio(6) * R) / Ratio(10);
  }

  const RuleBook& rules() const noexcept { return *rules_; }
  const NearRhymeTable* near_rhymes() const noexcept { return near_; }

 private:
  const RuleBook* rules_;
  const NearRhymeTable* near_;
};

double length_score(const Poem& poem);
double tone_score(const Poem& poem);
double rhyme_score(const Poem& poem);
ScoreBreakdown score(const Poem& poem);

}  // namespace vpoem
