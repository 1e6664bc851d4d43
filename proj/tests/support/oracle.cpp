#include "oracle.hpp"

#include <algorithm>
#include <utility>

namespace testsupport {

namespace {

using vpoem::GenreLabel;

int words_per_line(GenreLabel g) {
  switch (g) {
    case GenreLabel::chu_4: return 4;
    case GenreLabel::chu_5: return 5;
    case GenreLabel::chu_7: return 7;
    case GenreLabel::chu_8: return 8;
    default: return 0;
  }
}

const LexEntry* word(const std::vector<const LexEntry*>& line, int pos) {
  if (pos < 1 || pos > static_cast<int>(line.size())) return nullptr;
  return line[pos - 1];
}

// (position, wants even)
int positional(const std::vector<const LexEntry*>& line,
               const std::vector<std::pair<int, bool>>& checks, bool flipped) {
  int hits = 0;
  for (auto [pos, wants_even] : checks) {
    const LexEntry* w = word(line, pos);
    if (w == nullptr) continue;
    const bool want_even = flipped ? !wants_even : wants_even;
    if (want_even ? w->even() : w->uneven()) ++hits;
  }
  return hits;
}

bool relation_holds(const std::vector<const LexEntry*>& line, int a, int b, bool same) {
  const LexEntry* x = word(line, a);
  const LexEntry* y = word(line, b);
  if (x == nullptr || y == nullptr || x->malformed() || y->malformed()) return false;
  return (x->even() == y->even()) == same;
}

double group_value(const Words& poem, const std::vector<std::pair<long, int>>& slots) {
  std::vector<const LexEntry*> present;
  for (auto [line, pos] : slots) {
    if (line < 0 || line >= static_cast<long>(poem.size())) continue;
    if (const LexEntry* w = word(poem[static_cast<std::size_t>(line)], pos)) present.push_back(w);
  }
  if (present.empty()) return 0.0;
  int best = 1;
  for (const LexEntry* a : present) {
    if (a->malformed()) continue;
    int same = 0;
    for (const LexEntry* b : present) {
      if (!b->malformed() && b->rhyme_key == a->rhyme_key) ++same;
    }
    best = std::max(best, same);
  }
  return static_cast<double>(best) / static_cast<double>(present.size());
}

}  // namespace

OracleScore oracle_score(const Words& poem, GenreLabel genre) {
  const long n = static_cast<long>(poem.size());
  const double n_eff = static_cast<double>(n % 2 == 0 ? n : n + 1);
  const bool luc_bat = genre == GenreLabel::luc_bat;
  const int N = words_per_line(genre);

  OracleScore s;

  double length_hits = 0;
  for (long i = 0; i < n; ++i) {
    const int want = luc_bat ? (i % 2 == 0 ? 6 : 8) : N;
    if (static_cast<int>(poem[static_cast<std::size_t>(i)].size()) == want) length_hits += 1;
  }
  s.L = length_hits / n_eff;

  double tone_sum = 0;
  if (luc_bat) {
    const std::vector<std::pair<int, bool>> six = {{2, true}, {4, false}, {6, true}};
    const std::vector<std::pair<int, bool>> eight = {{2, true}, {4, false}, {6, true}, {8, true}};
    for (long i = 0; i < n; i += 2) {
      const auto& a = poem[static_cast<std::size_t>(i)];
      const int plain = positional(a, six, false);
      const int flipped = positional(a, six, true);
      const bool flip = flipped > plain;
      tone_sum += (flip ? flipped : plain) / 3.0;
      if (i + 1 < n) {
        const auto& b = poem[static_cast<std::size_t>(i + 1)];
        int hits = positional(b, eight, flip);
        const LexEntry* w6 = word(b, 6);
        const LexEntry* w8 = word(b, 8);
        if (w6 && w8 && w6->pitch() * w8->pitch() == -1) ++hits;
        tone_sum += hits / 5.0;
      }
    }
  } else {
    for (const auto& line : poem) {
      if (N >= 6) {
        const int hits = relation_holds(line, 2, 4, false) + relation_holds(line, 4, 6, false) +
                         relation_holds(line, 2, 6, true);
        tone_sum += hits / 3.0;
      } else {
        tone_sum += relation_holds(line, 2, 4, false) ? 1.0 : 0.0;
      }
    }
  }
  s.T = tone_sum / n_eff;

  double rhyme_sum = 0;
  for (long first = 0; first < n; first += 2) {
    std::vector<std::pair<long, int>> slots;
    if (luc_bat) {
      if (first > 0) slots.push_back({first - 1, 8});
      slots.push_back({first, 6});
      slots.push_back({first + 1, 6});
    } else {
      slots.push_back({first, N});
      slots.push_back({first + 1, N});
    }
    rhyme_sum += group_value(poem, slots);
  }
  s.R = 2.0 * rhyme_sum / n_eff;

  s.score = s.L / 10 + 3 * s.T / 10 + 6 * s.R / 10;
  return s;
}

}  // namespace testsupport
