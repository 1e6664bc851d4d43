#include "vpoem/classifier.hpp"

#include <charconv>

#include "vpoem/error.hpp"

namespace vpoem {

std::string LengthSignature::rendered() const {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += std::to_string(counts[i]);
  }
  return out;
}

LengthSignature LengthSignature::parse(std::string_view text) {
  LengthSignature sig;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i == text.size()) break;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc() || value < 0 ||
        (ptr != text.data() + text.size() && *ptr != ' ' && *ptr != '\t')) {
      throw InvalidConfig("bad length signature: \"" + std::string(text) + "\"");
    }
    sig.counts.push_back(value);
    i = static_cast<std::size_t>(ptr - text.data());
  }
  return sig;
}

LengthSignature signature(const Poem& poem) { return {poem.word_counts()}; }

Classification classify(const LengthSignature& sig, const RuleBook& rules) {
  Classification best;
  if (sig.counts.empty()) return best;
  std::size_t best_matches = 0;
  for (GenreLabel genre : kGenrePriority) {
    std::size_t matches = 0;
    for (std::size_t i = 0; i < sig.counts.size(); ++i) {
      if (sig.counts[i] == rules.expected_length(genre, i)) ++matches;
    }
    // Strict comparison keeps the earlier (more frequent) genre on ties.
    if (matches > best_matches) {
      best_matches = matches;
      best.genre = genre;
    }
  }
  const std::size_t lines = sig.counts.size();
  best.fit = static_cast<double>(best_matches) / static_cast<double>(lines);
  // matches / lines >= 4/5, compared in integers
  if (best_matches == 0 || best_matches * 5 < lines * 4) best.genre = GenreLabel::unknown;
  return best;
}

}  // namespace vpoem
