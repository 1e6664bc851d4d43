#include "vpoem/scorer.hpp"

#include <bit>
#include <cstdint>

#include "vpoem/error.hpp"

namespace vpoem {

namespace {

ToneClass flip(ToneClass c) {
  switch (c) {
    case ToneClass::even: return ToneClass::uneven;
    case ToneClass::uneven: return ToneClass::even;
    case ToneClass::undefined: break;
  }
  return ToneClass::undefined;
}

// Word at a 1-based position, or nullptr past the end of the line.
const Syllable* word_at(const Line& line, int word) {
  if (word < 1 || static_cast<std::size_t>(word) > line.size()) return nullptr;
  return &line[static_cast<std::size_t>(word) - 1];
}

int count_matches(const Line& line, const LinePattern& pattern, bool inverted) {
  int matches = 0;
  for (const auto& pos : pattern.positions) {
    const Syllable* s = word_at(line, pos.word);
    const ToneClass required = inverted ? flip(pos.required) : pos.required;
    if (s != nullptr && s->tone_class == required) ++matches;
  }
  for (const auto& rel : pattern.relations) {
    const Syllable* a = word_at(line, rel.first);
    const Syllable* b = word_at(line, rel.second);
    if (a == nullptr || b == nullptr) continue;
    if (a->tone_class == ToneClass::undefined || b->tone_class == ToneClass::undefined) continue;
    const bool same = a->tone_class == b->tone_class;
    if (same == (rel.relation == Relation::same)) ++matches;
  }
  if (pattern.accent_pair) {
    const Syllable* a = word_at(line, pattern.accent_pair->first);
    const Syllable* b = word_at(line, pattern.accent_pair->second);
    if (a != nullptr && b != nullptr && a->pitch_register != Register::not_applicable &&
        b->pitch_register != Register::not_applicable && a->pitch_register != b->pitch_register) {
      ++matches;
    }
  }
  return matches;
}

Ratio line_credit(const Line& line, const LinePattern& pattern, bool inverted) {
  const int den = pattern.denominator();
  if (den == 0) return Ratio(1);
  return Ratio(count_matches(line, pattern, inverted), den);
}

// Size of the largest subset of words that pairwise rhyme (at least 1).
int largest_rhyming_subset(const std::vector<const Syllable*>& words, const NearRhymeTable* near) {
  const std::size_t k = words.size();
  int best = 1;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const int size = std::popcount(mask);
    if (size <= best) continue;
    bool clique = true;
    for (std::size_t i = 0; i < k && clique; ++i) {
      if (!(mask & (1u << i))) continue;
      for (std::size_t j = i + 1; j < k; ++j) {
        if ((mask & (1u << j)) && !rhymes(*words[i], *words[j], near)) {
          clique = false;
          break;
        }
      }
    }
    if (clique) best = size;
  }
  return best;
}

}  // namespace

Ratio Scorer::length_ratio(const Poem& poem) const {
  const GenreSpec& spec = rules_->spec_for(poem.genre());
  std::int64_t matches = 0;
  for (std::size_t i = 0; i < poem.size(); ++i) {
    if (static_cast<int>(poem.line(i).size()) == spec.expected_length(i)) ++matches;
  }
  return Ratio(matches, static_cast<std::int64_t>(poem.effective_size()));
}

Ratio Scorer::tone_ratio(const Poem& poem) const {
  const GenreSpec& spec = rules_->spec_for(poem.genre());
  Ratio total;
  for (std::size_t first = 0; first < poem.size(); first += 2) {
    const Line& opening = poem.line(first);
    bool inverted = false;
    if (spec.invertible) {
      // Orientation is fixed by the pair's first line; ties keep the canonical one.
      inverted = count_matches(opening, spec.patterns[0], true) >
                 count_matches(opening, spec.patterns[0], false);
    }
    total += line_credit(opening, spec.patterns[0], inverted);
    if (first + 1 < poem.size()) total += line_credit(poem.line(first + 1), spec.patterns[1], inverted);
  }
  return total / Ratio(static_cast<std::int64_t>(poem.effective_size()));
}

Ratio Scorer::rhyme_ratio(const Poem& poem) const {
  Ratio total;
  std::vector<const Syllable*> words;
  for (const auto& group : rules_->rhyme_groups(poem.genre(), poem.size())) {
    words.clear();
    for (const auto& pos : group.positions) {
      if (const Syllable* s = word_at(poem.line(pos.line), pos.word)) words.push_back(s);
    }
    if (words.empty()) continue;
    total += Ratio(largest_rhyming_subset(words, near_), static_cast<std::int64_t>(words.size()));
  }
  return Ratio(2, static_cast<std::int64_t>(poem.effective_size())) * total;
}

ExactScore Scorer::exact(const Poem& poem) const {
  ExactScore e;
  e.L = length_ratio(poem);
  e.T = tone_ratio(poem);
  e.R = rhyme_ratio(poem);
  e.score = combine(e.L, e.T, e.R);
  return e;
}

ScoreBreakdown Scorer::score(const Poem& poem) const {
  const ExactScore e = exact(poem);
  ScoreBreakdown b;
  b.L = e.L.to_double();
  b.T = e.T.to_double();
  b.R = e.R.to_double();
  b.score = e.score.to_double();
  b.genre = poem.genre();
  b.n = poem.size();
  b.n_effective = poem.effective_size();
  return b;
}

double length_score(const Poem& poem) { return Scorer().length_ratio(poem).to_double(); }
double tone_score(const Poem& poem) { return Scorer().tone_ratio(poem).to_double(); }
double rhyme_score(const Poem& poem) { return Scorer().rhyme_ratio(poem).to_double(); }
ScoreBreakdown score(const Poem& poem) { return Scorer().score(poem); }

}  // namespace vpoem
