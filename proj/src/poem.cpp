#include "vpoem/poem.hpp"

#include <algorithm>

#include "vpoem/error.hpp"

namespace vpoem {

Poem::Poem(std::vector<Line> lines, GenreLabel genre) : genre_(genre) {
  lines.erase(std::remove_if(lines.begin(), lines.end(), [](const Line& l) { return l.empty(); }),
              lines.end());
  if (lines.empty()) throw EmptyPoem();
  lines_ = std::move(lines);
}

Poem Poem::parse(std::string_view text, GenreLabel genre, const OnsetPolicy& policy) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = tokenize_line(text.substr(start, end - start), policy);
    if (!line.empty()) lines.push_back(std::move(line));
    start = end + 1;
  }
  return Poem(std::move(lines), genre);
}

std::vector<int> Poem::word_counts() const {
  std::vector<int> counts;
  counts.reserve(lines_.size());
  for (const auto& l : lines_) counts.push_back(static_cast<int>(l.size()));
  return counts;
}

Poem Poem::with_genre(GenreLabel genre) const {
  Poem copy = *this;
  copy.genre_ = genre;
  return copy;
}

}  // namespace vpoem
