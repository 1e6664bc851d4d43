#include "vpoem/promptforge.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "default_data.hpp"
#include "vpoem/parallel.hpp"
#include "vpoem/utf8.hpp"

namespace vpoem {

namespace {

constexpr std::string_view kPlaceholders[] = {"{X}", "{Y}", "{Z}"};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void replace_all(std::string& text, std::string_view from, std::string_view to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos;
       pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
}

void erase_first(std::string& text, std::string_view what) {
  if (what.empty()) return;
  if (const auto pos = text.find(what); pos != std::string::npos) text.erase(pos, what.size());
}

void erase_all(std::string& text, std::string_view what) {
  if (what.empty()) return;
  for (auto pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos)) {
    text.erase(pos, what.size());
  }
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string trim_trailing_punctuation(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  while (!cps.empty() && (utf8::is_punctuation(cps.back()) || utf8::is_space(cps.back()))) {
    cps.pop_back();
  }
  return utf8::encode(cps);
}

bool contains_placeholder(std::string_view text, std::string_view ph) {
  return text.find(ph) != std::string_view::npos;
}

}  // namespace

std::string_view to_string(PromptMode mode) noexcept {
  return mode == PromptMode::text2poem ? "text2poem" : "poem2poem";
}

PromptMode parse_prompt_mode(std::string_view text) {
  if (text == "text2poem") return PromptMode::text2poem;
  if (text == "poem2poem") return PromptMode::poem2poem;
  throw InvalidConfig("mode must be text2poem or poem2poem, got \"" + std::string(text) + "\"");
}

const StopWords& StopWords::builtin() {
  static const StopWords words = [] {
    std::istringstream in{std::string(detail::kDefaultStopWords)};
    return parse(in);
  }();
  return words;
}

StopWords StopWords::parse(std::istream& in) {
  StopWords out;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = utf8::trim(line);
    if (word.empty() || word.front() == '#') continue;
    for (const auto& s : tokenize_line(word)) out.words_.insert(s.normalized);
  }
  return out;
}

StopWords StopWords::load(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse(in);
}

bool StopWords::contains(std::string_view normalized) const {
  return words_.count(std::string(normalized)) > 0;
}

std::vector<std::string> extract_keywords(const Poem& poem, std::size_t k, const StopWords& stop) {
  struct Entry {
    std::size_t count = 0;
    std::size_t first = 0;
    std::string surface;
  };
  std::map<std::string, Entry> entries;
  std::size_t order = 0;
  for (const auto& line : poem.lines()) {
    for (const auto& syl : line) {
      ++order;
      if (!syl.well_formed() || stop.contains(syl.normalized)) continue;
      const std::string surface = strip_punctuation(syl.raw);
      auto [it, inserted] = entries.try_emplace(syl.normalized);
      Entry& e = it->second;
      if (inserted) {
        e.first = order;
        e.surface = surface;
      } else if (e.surface != syl.normalized && surface == syl.normalized) {
        e.surface = surface;  // prefer the plain lowercase spelling
      }
      ++e.count;
    }
  }
  if (entries.size() < k) throw PoemTooShort(k, entries.size());
  std::vector<const Entry*> ranked;
  ranked.reserve(entries.size());
  for (const auto& [_, e] : entries) ranked.push_back(&e);
  std::sort(ranked.begin(), ranked.end(), [](const Entry* a, const Entry* b) {
    return a->count != b->count ? a->count > b->count : a->first < b->first;
  });
  std::vector<std::string> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i]->surface);
  return out;
}

PromptTemplate PromptTemplate::parse(std::string_view text) {
  PromptTemplate t;
  std::string_view body = text;
  if (body.substr(0, 7) == "#names:") {
    const auto eol = body.find('\n');
    const auto value = utf8::trim(body.substr(7, eol == std::string_view::npos ? body.npos : eol - 7));
    if (value == "vi" || value == "vietnamese") {
      t.naming_ = GenreNaming::vietnamese;
    } else if (value == "ascii" || value == "en") {
      t.naming_ = GenreNaming::ascii;
    } else {
      throw InvalidConfig("template #names must be vi or ascii, got \"" + std::string(value) + "\"");
    }
    body = eol == std::string_view::npos ? std::string_view{} : body.substr(eol + 1);
  }
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.remove_suffix(1);

  for (const auto ph : kPlaceholders) {
    if (!contains_placeholder(body, ph)) throw MissingPlaceholder(std::string(ph.substr(1, 1)));
  }

  std::size_t pos = 0;
  while (pos < body.size()) {
    const auto open = body.find("[[", pos);
    const auto close = body.find("]]", pos);
    if (close < open) throw InvalidConfig("template has \"]]\" without \"[[\"");
    if (open == std::string_view::npos) {
      t.pieces_.push_back({std::string(body.substr(pos)), false});
      break;
    }
    if (open > pos) t.pieces_.push_back({std::string(body.substr(pos, open - pos)), false});
    const auto end = body.find("]]", open + 2);
    if (end == std::string_view::npos) throw InvalidConfig("template has \"[[\" without \"]]\"");
    const auto inner = body.substr(open + 2, end - open - 2);
    if (inner.find("[[") != std::string_view::npos) {
      throw InvalidConfig("template sections cannot nest");
    }
    t.pieces_.push_back({std::string(inner), true});
    pos = end + 2;
  }
  return t;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  return parse(read_file(path));
}

const PromptTemplate& PromptTemplate::vietnamese() {
  static const PromptTemplate t = parse(detail::kVietnameseTemplate);
  return t;
}

const PromptTemplate& PromptTemplate::english_debug() {
  static const PromptTemplate t = parse(detail::kEnglishDebugTemplate);
  return t;
}

std::string PromptTemplate::render(const PromptSpec& spec) const {
  const std::string x =
      spec.genre == GenreLabel::unknown ? std::string() : std::string(display_name(spec.genre, naming_));
  const std::string z = join(spec.keywords, ", ");
  const std::string_view values[] = {x, spec.topic, z};

  std::string out;
  for (const auto& piece : pieces_) {
    std::string text = piece.text;
    bool blank = false;
    for (std::size_t i = 0; i < 3; ++i) {
      if (!contains_placeholder(text, kPlaceholders[i])) continue;
      blank = blank || values[i].empty();
      replace_all(text, kPlaceholders[i], values[i]);
    }
    if (piece.optional && blank) continue;
    out += text;
  }
  return out;
}

std::string PromptTemplate::mask_genre(std::string_view prompt, GenreLabel genre) const {
  std::string out(prompt);
  if (genre != GenreLabel::unknown) {
    const std::string name(display_name(genre, naming_));
    for (const auto& piece : pieces_) {
      if (!contains_placeholder(piece.text, "{X}")) continue;
      const bool x_only = !contains_placeholder(piece.text, "{Y}") &&
                          !contains_placeholder(piece.text, "{Z}");
      if (piece.optional && x_only) {
        std::string slot = piece.text;
        replace_all(slot, "{X}", name);
        erase_first(out, slot);
      } else {
        erase_first(out, name);
      }
    }
  }
  for (GenreLabel g : kGenrePriority) {
    erase_all(out, display_name(g, GenreNaming::vietnamese));
    erase_all(out, display_name(g, GenreNaming::ascii));
    erase_all(out, to_string(g));
  }
  erase_all(out, "lucbat");
  replace_all(out, "  ", " ");
  return out;
}

std::string render_prompt(const PromptSpec& spec, std::string_view template_text) {
  return PromptTemplate::parse(template_text).render(spec);
}

std::string deversify(const Poem& poem) {
  std::vector<std::string> lines;
  lines.reserve(poem.size());
  for (const auto& line : poem.lines()) {
    std::string text;
    for (const auto& syl : line) {
      if (!text.empty()) text += ' ';
      text += syl.raw;
    }
    lines.push_back(trim_trailing_punctuation(text));
  }
  return join(lines, ", ") + ".";
}

Json PromptRecord::to_json() const {
  Json j = vpoem::to_json(source);
  j["mode"] = std::string(vpoem::to_string(mode));
  j["prompt"] = prompt;
  j["completion"] = completion;
  j["keywords"] = keywords;
  j["topic"] = topic;
  return j;
}

PromptRecord PromptRecord::from_record(const PoemRecord& record, std::size_t line) {
  PromptRecord out;
  out.source = record;
  Json& extra = out.source.extra;
  try {
    if (!extra.contains("prompt") || !extra["prompt"].is_string()) {
      throw MalformedRecord(line, "missing prompt field");
    }
    out.prompt = extra["prompt"].get<std::string>();
    out.completion = extra.value("completion", record.text);
    if (extra.contains("mode")) out.mode = parse_prompt_mode(extra["mode"].get<std::string>());
    if (extra.contains("keywords")) out.keywords = extra["keywords"].get<std::vector<std::string>>();
    out.topic = extra.value("topic", std::string());
  } catch (const Json::exception& e) {
    throw MalformedRecord(line, e.what());
  } catch (const InvalidConfig& e) {
    throw MalformedRecord(line, e.what());
  }
  for (const char* key : {"prompt", "completion", "mode", "keywords", "topic"}) extra.erase(key);
  return out;
}

DatasetItem make_prompt_record(const PoemRecord& record, const DatasetOptions& options) {
  const PromptTemplate& tmpl =
      options.prompt_template ? *options.prompt_template : PromptTemplate::vietnamese();
  const StopWords& stop = options.stop_words ? *options.stop_words : StopWords::builtin();
  try {
    const Poem poem = Poem::parse(record.text, GenreLabel::unknown, options.onsets);
    GenreLabel genre = record.genre;
    if (genre == GenreLabel::unknown && record.score) genre = record.score->genre;

    PromptRecord out;
    out.source = record;
    out.source.genre = genre;
    out.mode = options.mode;
    out.completion = record.text;
    const bool has_title = record.title && !utf8::trim(*record.title).empty();

    if (options.mode == PromptMode::text2poem) {
      if (genre == GenreLabel::unknown) return DatasetSkip{record.id, "no genre to put in the prompt"};
      out.keywords = extract_keywords(poem, options.keywords, stop);
      out.topic = has_title ? std::string(utf8::trim(*record.title)) : out.keywords.front();
      out.prompt = tmpl.render({genre, out.topic, out.keywords});
    } else {
      if (genre != GenreLabel::luc_bat) {
        return DatasetSkip{record.id, "poem2poem takes luc_bat records only, got " +
                                          std::string(to_string(genre))};
      }
      try {
        out.keywords = extract_keywords(poem, options.keywords, stop);
      } catch (const PoemTooShort&) {
        out.keywords.clear();
      }
      if (has_title) out.topic = std::string(utf8::trim(*record.title));
      out.prompt = deversify(poem);
      if (options.paraphraser) {
        out.prompt = options.paraphraser->generate({out.prompt, record.id});
        if (utf8::trim(out.prompt).empty()) return DatasetSkip{record.id, "paraphraser returned no text"};
      }
    }
    return out;
  } catch (const Error& e) {
    return DatasetSkip{record.id, e.what()};
  }
}

void build_dataset(const std::function<std::optional<PoemRecord>()>& source,
                   const DatasetOptions& options, const std::function<void(DatasetItem&&)>& sink) {
  ordered_parallel_map<PoemRecord>(
      source, [&options](PoemRecord&& r) { return make_prompt_record(r, options); },
      [&sink](DatasetItem&& item) { sink(std::move(item)); }, options.jobs);
}

std::vector<DatasetItem> build_dataset(std::vector<PoemRecord> records,
                                       const DatasetOptions& options) {
  return parallel_map(
      std::move(records), [&options](PoemRecord&& r) { return make_prompt_record(r, options); },
      options.jobs);
}

}  // namespace vpoem
