#include "vpoem/genre_rules.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vpoem/error.hpp"

namespace vpoem {

namespace {

using json = nlohmann::json;

std::size_t slot_index(GenreLabel genre) {
  switch (genre) {
    case GenreLabel::luc_bat: return 0;
    case GenreLabel::chu_4: return 1;
    case GenreLabel::chu_5: return 2;
    case GenreLabel::chu_7: return 3;
    case GenreLabel::chu_8: return 4;
    case GenreLabel::unknown: break;
  }
  throw UnknownGenre(std::string(to_string(genre)));
}

GenreSpec luc_bat_spec() {
  GenreSpec s;
  s.label = GenreLabel::luc_bat;
  s.lengths = {6, 8};
  s.patterns[0].positions = {{2, ToneClass::even}, {4, ToneClass::uneven}, {6, ToneClass::even}};
  s.patterns[1].positions = {{2, ToneClass::even}, {4, ToneClass::uneven}, {6, ToneClass::even},
                             {8, ToneClass::even}};
  s.patterns[1].accent_pair = std::make_pair(6, 8);
  // 6-line word 6 rhymes with the next 8-line word 6 and the previous 8-line word 8.
  s.rhyme.first_pair = {{0, 6}, {1, 6}};
  s.rhyme.later_pairs = {{-1, 8}, {0, 6}, {1, 6}};
  s.invertible = true;
  return s;
}

// "nhị tứ lục": words 2 and 6 share a class that differs from word 4;
// short lines only require words 2 and 4 to differ. Line-final words of
// each line pair rhyme.
GenreSpec chu_spec(GenreLabel label, int words) {
  GenreSpec s;
  s.label = label;
  s.lengths = {words, words};
  LinePattern p;
  if (words >= 6) {
    p.relations = {{2, 4, Relation::differ}, {4, 6, Relation::differ}, {2, 6, Relation::same}};
  } else {
    p.relations = {{2, 4, Relation::differ}};
  }
  s.patterns = {p, p};
  s.rhyme.first_pair = {{0, words}, {1, words}};
  s.rhyme.later_pairs = s.rhyme.first_pair;
  s.invertible = false;
  return s;
}

// Case- and spelling-insensitive key for genre names.
std::string fold(std::string_view text) {
  std::string spaced(text);
  std::replace_if(spaced.begin(), spaced.end(), [](char c) { return c == '_' || c == '-'; }, ' ');
  std::string out;
  for (const auto& s : tokenize_line(spaced)) {
    if (!out.empty()) out.push_back(' ');
    out += s.normalized;
  }
  return out;
}

void check(bool ok, GenreLabel genre, const std::string& what) {
  if (!ok) throw InvalidConfig(std::string(to_string(genre)) + ": " + what);
}

void validate(const GenreSpec& s) {
  check(s.label != GenreLabel::unknown, s.label, "rules need a concrete genre");
  for (int len : s.lengths) check(len >= 1, s.label, "line lengths must be positive");
  for (std::size_t line = 0; line < 2; ++line) {
    const int len = s.lengths[line];
    const auto in_line = [len](int w) { return w >= 1 && w <= len; };
    const auto& p = s.patterns[line];
    for (const auto& pos : p.positions) {
      check(in_line(pos.word), s.label, "tone position outside the expected line length");
      check(pos.required != ToneClass::undefined, s.label, "tone position needs even or uneven");
    }
    for (const auto& rel : p.relations) {
      check(in_line(rel.first) && in_line(rel.second), s.label,
            "tone relation outside the expected line length");
    }
    if (p.accent_pair) {
      check(in_line(p.accent_pair->first) && in_line(p.accent_pair->second), s.label,
            "accent pair outside the expected line length");
    }
  }
  const auto check_slots = [&](const std::vector<RhymeSlot>& slots, int min_offset) {
    check(!slots.empty() && slots.size() <= 16, s.label, "rhyme groups need 1 to 16 slots");
    for (const auto& slot : slots) {
      check(slot.line_offset >= min_offset && slot.line_offset <= 1, s.label,
            "rhyme slot line offset out of range");
      const int parity = ((slot.line_offset % 2) + 2) % 2;
      check(slot.word >= 1 && slot.word <= s.lengths[parity], s.label,
            "rhyme slot outside the expected line length");
    }
  };
  check_slots(s.rhyme.first_pair, 0);
  check_slots(s.rhyme.later_pairs, -2);
}

ToneClass parse_class(const json& j) {
  const auto text = j.get<std::string>();
  if (text == "even") return ToneClass::even;
  if (text == "uneven") return ToneClass::uneven;
  throw InvalidConfig("tone class must be \"even\" or \"uneven\", got \"" + text + "\"");
}

LinePattern parse_pattern(const json& j) {
  LinePattern p;
  for (const auto& pos : j.value("positions", json::array())) {
    p.positions.push_back({pos.at(0).get<int>(), parse_class(pos.at(1))});
  }
  for (const auto& rel : j.value("relations", json::array())) {
    const auto kind = rel.at(2).get<std::string>();
    if (kind != "same" && kind != "differ") {
      throw InvalidConfig("relation must be \"same\" or \"differ\", got \"" + kind + "\"");
    }
    p.relations.push_back({rel.at(0).get<int>(), rel.at(1).get<int>(),
                           kind == "same" ? Relation::same : Relation::differ});
  }
  if (j.contains("accent") && !j["accent"].is_null()) {
    p.accent_pair = std::make_pair(j["accent"].at(0).get<int>(), j["accent"].at(1).get<int>());
  }
  return p;
}

std::vector<RhymeSlot> parse_slots(const json& j) {
  std::vector<RhymeSlot> slots;
  for (const auto& slot : j) slots.push_back({slot.at(0).get<int>(), slot.at(1).get<int>()});
  return slots;
}

void apply_override(GenreSpec& s, const json& j) {
  if (j.contains("lengths")) {
    s.lengths = {j["lengths"].at(0).get<int>(), j["lengths"].at(1).get<int>()};
  }
  if (j.contains("invertible")) s.invertible = j["invertible"].get<bool>();
  if (j.contains("patterns")) {
    s.patterns = {parse_pattern(j["patterns"].at(0)), parse_pattern(j["patterns"].at(1))};
  }
  if (j.contains("rhyme")) {
    const auto& r = j["rhyme"];
    if (r.contains("first_pair")) s.rhyme.first_pair = parse_slots(r["first_pair"]);
    if (r.contains("later_pairs")) s.rhyme.later_pairs = parse_slots(r["later_pairs"]);
  }
}

}  // namespace

std::string_view to_string(GenreLabel genre) noexcept {
  switch (genre) {
    case GenreLabel::luc_bat: return "luc_bat";
    case GenreLabel::chu_4: return "chu_4";
    case GenreLabel::chu_5: return "chu_5";
    case GenreLabel::chu_7: return "chu_7";
    case GenreLabel::chu_8: return "chu_8";
    case GenreLabel::unknown: break;
  }
  return "unknown";
}

std::string_view display_name(GenreLabel genre, GenreNaming naming) noexcept {
  const bool vi = naming == GenreNaming::vietnamese;
  switch (genre) {
    case GenreLabel::luc_bat: return vi ? "lục bát" : "luc bat";
    case GenreLabel::chu_4: return vi ? "4 chữ" : "4 chu";
    case GenreLabel::chu_5: return vi ? "5 chữ" : "5 chu";
    case GenreLabel::chu_7: return vi ? "7 chữ" : "7 chu";
    case GenreLabel::chu_8: return vi ? "8 chữ" : "8 chu";
    case GenreLabel::unknown: break;
  }
  return "unknown";
}

std::optional<GenreLabel> parse_genre(std::string_view text) {
  const std::string folded = fold(text);
  if (folded == "unknown") return GenreLabel::unknown;
  for (GenreLabel g : kGenrePriority) {
    if (folded == fold(to_string(g)) || folded == fold(display_name(g, GenreNaming::ascii)) ||
        folded == fold(display_name(g, GenreNaming::vietnamese))) {
      return g;
    }
  }
  if (folded == "lucbat") return GenreLabel::luc_bat;
  return std::nullopt;
}

RuleBook::RuleBook()
    : specs_{luc_bat_spec(), chu_spec(GenreLabel::chu_4, 4), chu_spec(GenreLabel::chu_5, 5),
             chu_spec(GenreLabel::chu_7, 7), chu_spec(GenreLabel::chu_8, 8)} {}

const RuleBook& RuleBook::builtin() {
  static const RuleBook book;
  return book;
}

RuleBook RuleBook::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig(std::string("genre rules: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidConfig("genre rules: top level must be an object");
  RuleBook book;
  for (const auto& [key, value] : doc.items()) {
    const auto genre = parse_genre(key);
    if (!genre || *genre == GenreLabel::unknown) throw UnknownGenre(key);
    GenreSpec spec = book.spec_for(*genre);
    try {
      apply_override(spec, value);
    } catch (const json::exception& e) {
      throw InvalidConfig(key + ": " + e.what());
    }
    book.set(std::move(spec));
  }
  return book;
}

RuleBook RuleBook::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const GenreSpec& RuleBook::spec_for(GenreLabel genre) const { return specs_[slot_index(genre)]; }

int RuleBook::expected_length(GenreLabel genre, std::size_t line_index) const {
  return spec_for(genre).expected_length(line_index);
}

std::vector<RhymeGroup> RuleBook::rhyme_groups(GenreLabel genre, std::size_t line_count) const {
  const GenreSpec& spec = spec_for(genre);
  std::vector<RhymeGroup> groups;
  const std::size_t pairs = (line_count + 1) / 2;
  groups.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    const auto& slots = i == 0 ? spec.rhyme.first_pair : spec.rhyme.later_pairs;
    RhymeGroup group;
    for (const auto& slot : slots) {
      const auto line = static_cast<long long>(2 * i) + slot.line_offset;
      if (line < 0 || line >= static_cast<long long>(line_count)) continue;
      group.positions.push_back({static_cast<std::size_t>(line), slot.word});
    }
    group.t = static_cast<int>(group.positions.size());
    groups.push_back(std::move(group));
  }
  return groups;
}

void RuleBook::set(GenreSpec spec) {
  validate(spec);
  specs_[slot_index(spec.label)] = std::move(spec);
}

const GenreSpec& spec_for(GenreLabel genre) { return RuleBook::builtin().spec_for(genre); }

int expected_length(GenreLabel genre, std::size_t line_index) {
  return RuleBook::builtin().expected_length(genre, line_index);
}

std::vector<RhymeGroup> rhyme_groups(GenreLabel genre, std::size_t line_count) {
  return RuleBook::builtin().rhyme_groups(genre, line_count);
}

}  // namespace vpoem
