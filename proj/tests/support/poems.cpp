#include "poems.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace testsupport {

namespace {

using vpoem::GenreLabel;

struct Pools {
  std::vector<const LexEntry*> all;
  std::vector<const LexEntry*> wellformed;
  std::vector<const LexEntry*> even;
  std::vector<const LexEntry*> uneven;
  std::map<std::string, std::vector<const LexEntry*>> by_key;
  std::vector<std::string> keys;          // every key
  std::vector<std::string> two_register;  // keys with both a ngang and a huyền word
};

const Pools& pools() {
  static const Pools p = [] {
    Pools p;
    for (const auto& e : lexicon()) {
      p.all.push_back(&e);
      if (e.malformed()) continue;
      p.wellformed.push_back(&e);
      (e.even() ? p.even : p.uneven).push_back(&e);
      p.by_key[e.rhyme_key].push_back(&e);
    }
    for (const auto& [key, words] : p.by_key) {
      p.keys.push_back(key);
      const bool high = std::any_of(words.begin(), words.end(), [](auto* w) { return w->pitch() > 0; });
      const bool low = std::any_of(words.begin(), words.end(), [](auto* w) { return w->pitch() < 0; });
      if (high && low) p.two_register.push_back(key);
    }
    return p;
  }();
  return p;
}

bool same_class(const LexEntry* a, const LexEntry* b) {
  return a->even() == b->even() && a->pitch() == b->pitch();
}

}  // namespace

int expected_words(GenreLabel genre, std::size_t line) {
  switch (genre) {
    case GenreLabel::luc_bat: return line % 2 == 0 ? 6 : 8;
    case GenreLabel::chu_4: return 4;
    case GenreLabel::chu_5: return 5;
    case GenreLabel::chu_7: return 7;
    case GenreLabel::chu_8: return 8;
    case GenreLabel::unknown: break;
  }
  throw std::invalid_argument("no expected length for unknown");
}

std::size_t PoemGen::uniform(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
}

bool PoemGen::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

GenreLabel PoemGen::any_genre() { return kGenres[uniform(0, 4)]; }

const LexEntry* PoemGen::pick(const std::vector<const LexEntry*>& pool) {
  return pool[uniform(0, pool.size() - 1)];
}

const LexEntry* PoemGen::any_word() { return pick(pools().all); }

const LexEntry* PoemGen::word_with(bool even, int pitch) {
  const auto& pool = even ? pools().even : pools().uneven;
  if (pitch == 0) return pick(pool);
  std::vector<const LexEntry*> matching;
  for (auto* w : pool) {
    if (w->pitch() == pitch) matching.push_back(w);
  }
  return pick(matching);
}

Words PoemGen::perfect(GenreLabel genre, std::size_t lines) {
  const Pools& p = pools();
  Words poem(lines);
  const auto key_word = [&](const std::string& key, auto&& ok) {
    std::vector<const LexEntry*> matching;
    for (auto* w : p.by_key.at(key)) {
      if (ok(w)) matching.push_back(w);
    }
    return pick(matching);
  };

  if (genre == GenreLabel::luc_bat) {
    std::string key = p.two_register[uniform(0, p.two_register.size() - 1)];
    for (std::size_t i = 0; i < lines; i += 2) {
      auto& six = poem[i];
      for (int w = 1; w <= 6; ++w) six.push_back(pick(p.wellformed));
      six[1] = word_with(true);
      six[3] = word_with(false);
      six[5] = key_word(key, [](auto* w) { return w->even(); });
      if (i + 1 == lines) break;
      auto& eight = poem[i + 1];
      for (int w = 1; w <= 8; ++w) eight.push_back(pick(p.wellformed));
      eight[1] = word_with(true);
      eight[3] = word_with(false);
      const int pitch = coin() ? 1 : -1;
      eight[5] = key_word(key, [pitch](auto* w) { return w->pitch() == pitch; });
      key = p.two_register[uniform(0, p.two_register.size() - 1)];
      eight[7] = key_word(key, [pitch](auto* w) { return w->pitch() == -pitch; });
    }
    return poem;
  }

  const int n = expected_words(genre, 0);
  std::string key;
  for (std::size_t i = 0; i < lines; ++i) {
    if (i % 2 == 0) key = p.keys[uniform(0, p.keys.size() - 1)];
    auto& line = poem[i];
    for (int w = 1; w <= n; ++w) line.push_back(pick(p.wellformed));
    const LexEntry* rhyme = key_word(key, [](auto*) { return true; });
    line[static_cast<std::size_t>(n - 1)] = rhyme;
    const bool c = n == 4 ? !rhyme->even() : coin();
    line[1] = word_with(c);
    if (n != 4) line[3] = word_with(!c);
    if (n >= 6) line[5] = word_with(c);
  }
  return poem;
}

void PoemGen::break_rhymes(Words& poem, GenreLabel genre) {
  const Pools& p = pools();
  const std::size_t n = poem.size();
  for (std::size_t first = 0; first < n; first += 2) {
    std::vector<std::pair<std::size_t, int>> slots;
    if (genre == GenreLabel::luc_bat) {
      if (first > 0) slots.push_back({first - 1, 8});
      slots.push_back({first, 6});
      slots.push_back({first + 1, 6});
    } else {
      const int w = expected_words(genre, 0);
      slots.push_back({first, w});
      slots.push_back({first + 1, w});
    }
    std::vector<std::string> used;
    for (auto [line, pos] : slots) {
      if (line >= n || pos > static_cast<int>(poem[line].size())) continue;
      const LexEntry*& word = poem[line][static_cast<std::size_t>(pos - 1)];
      std::vector<const LexEntry*> candidates;
      for (auto* w : p.wellformed) {
        if (same_class(w, word) && std::find(used.begin(), used.end(), w->rhyme_key) == used.end()) {
          candidates.push_back(w);
        }
      }
      word = pick(candidates);
      used.push_back(word->rhyme_key);
    }
  }
}

void PoemGen::corrupt(Words& poem, std::size_t edits) {
  for (std::size_t e = 0; e < edits; ++e) {
    auto& line = poem[uniform(0, poem.size() - 1)];
    switch (uniform(0, 2)) {
      case 0: line[uniform(0, line.size() - 1)] = any_word(); break;
      case 1:
        if (line.size() > 1) line.erase(line.begin() + static_cast<long>(uniform(0, line.size() - 1)));
        break;
      default: line.insert(line.begin() + static_cast<long>(uniform(0, line.size())), any_word());
    }
  }
}

void PoemGen::perturb_length(Words& poem, GenreLabel) {
  auto& line = poem[uniform(0, poem.size() - 1)];
  if (line.size() > 1 && coin()) {
    line.erase(line.begin() + static_cast<long>(uniform(0, line.size() - 1)));
  } else {
    line.insert(line.begin() + static_cast<long>(uniform(0, line.size())), pick(pools().wellformed));
  }
}

std::string PoemGen::render(const Words& poem, bool decorate) {
  std::string out;
  for (std::size_t i = 0; i < poem.size(); ++i) {
    if (i > 0) out += '\n';
    for (std::size_t j = 0; j < poem[i].size(); ++j) {
      if (j > 0) out += ' ';
      std::string w = poem[i][j]->word;
      if (decorate && j == 0 && w[0] >= 'a' && w[0] <= 'z' && coin(0.3)) w[0] = static_cast<char>(w[0] - 32);
      out += w;
    }
    if (decorate && coin(0.4)) out += coin() ? "," : ".";
  }
  return out;
}

std::string render_plain(const Words& poem) {
  std::string out;
  for (std::size_t i = 0; i < poem.size(); ++i) {
    if (i > 0) out += '\n';
    for (std::size_t j = 0; j < poem[i].size(); ++j) {
      if (j > 0) out += ' ';
      out += poem[i][j]->word;
    }
  }
  return out;
}

}  // namespace testsupport
